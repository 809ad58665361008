from app.modules.algebra.algebra_service import AlgebraService

__all__ = ["AlgebraService"]
