from app.modules.clairaut.clairaut_service import ClairautService
from app.modules.clairaut.spectrum_export import export_spectrum_csv

__all__ = ["ClairautService", "export_spectrum_csv"]
