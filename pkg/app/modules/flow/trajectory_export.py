import csv
import logging
from pathlib import Path

from app.core.models.flow import GeodesicTrajectory
from app.core.setting import config

logger = logging.getLogger(__name__)


def format_float(value: float, digits: int | None = None) -> str:
    return format(float(value), f".{digits or config.FLOAT_DIGITS}g")


def trajectory_header(n: int) -> list[str]:
    return (
        ["t"] + [f"x_{i + 1}" for i in range(n)] + ["energy"]
        + [f"c_{i + 1}" for i in range(n)] + ["step"]
    )


def export_trajectory_csv(traj: GeodesicTrajectory, path: str | Path) -> int:
    """
    Write one row per sample: t, x_1..x_n, energy, c_1..c_n, step.
    Returns the number of data rows.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(trajectory_header(traj.dim))
        for sample in traj.samples:
            writer.writerow(
                [format_float(sample.t)]
                + [format_float(v) for v in sample.x]
                + [format_float(sample.energy)]
                + [format_float(v) for v in sample.charges]
                + [format_float(sample.step)]
            )
    logger.info(f"Wrote {len(traj)} trajectory rows to {path}")
    return len(traj)
