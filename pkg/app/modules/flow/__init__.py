from app.modules.flow.geodesic_integrator import GeodesicIntegrator
from app.modules.flow.trajectory_export import export_trajectory_csv, format_float

__all__ = ["GeodesicIntegrator", "export_trajectory_csv", "format_float"]
