import csv
import logging
from pathlib import Path
from typing import Iterable

from app.modules.flow.trajectory_export import format_float

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = ["param", "lamMinSq", "lamMaxSq", "det"]


def export_spectrum_csv(rows: Iterable[tuple[float, float, float, float]], path: str | Path) -> int:
    """Write (param, lamMinSq, lamMaxSq, det) rows; returns the row count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_HEADER)
        for row in rows:
            writer.writerow([format_float(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} spectrum rows to {path}")
    return count
