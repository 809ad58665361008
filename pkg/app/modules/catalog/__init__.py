from app.modules.catalog.aff_reproduction import run_aff_reproduction
from app.modules.catalog.catalog_service import CatalogService

__all__ = ["CatalogService", "run_aff_reproduction"]
