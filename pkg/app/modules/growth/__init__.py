from app.modules.growth.growth_service import GrowthService
from app.modules.growth.verdict_service import VerdictService

__all__ = ["GrowthService", "VerdictService"]
