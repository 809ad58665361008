import logging

from app.core.setting import config


def configure_logging(level: str | None = None) -> None:
    """Configure the root logger once; services only create named loggers."""
    logging.basicConfig(
        level=(level or config.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    # route warnings.warn through logging
    logging.captureWarnings(True)
