"""
Timestamps for report documents.
Reports are stamped in UTC so runs on different machines compare directly.
"""

from datetime import datetime, timezone as dt_timezone


def get_utc_now() -> datetime:
    """
    Get current datetime in UTC (timezone-aware).

    Example:
        >>> get_utc_now().tzinfo
        datetime.timezone.utc
    """
    return datetime.now(tz=dt_timezone.utc)

