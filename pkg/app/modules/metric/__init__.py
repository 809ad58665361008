from app.modules.metric.metric_service import MetricService

__all__ = ["MetricService"]
