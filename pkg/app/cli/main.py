import argparse
import logging
import sys

from app.cli.commands import COMMANDS
from app.core.exceptions import LabException
from app.core.logging import configure_logging
from app.core.monitoring.metrics import export_metrics, track_command
from app.core.schemas.reports import ErrorResponse
from app.core.setting import config

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=config.PROJECT_NAME,
        description="Left-invariant semi-Riemannian geometry on Lie groups: geodesics, Clairaut metrics, growth, verdicts.",
    )
    parser.add_argument("--metrics-file", default=None, help="Write Prometheus metrics here after the command")
    parser.add_argument("--log-level", default=None, help="Override CLAIRAUT_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        report, exit_code = args.handler(args)
        sys.stdout.write(report.model_dump_json(by_alias=True, indent=2) + "\n")
    except LabException as e:
        logger.error(f"{args.command} failed: {e.detail}")
        sys.stderr.write(ErrorResponse(detail=e.detail).model_dump_json() + "\n")
        exit_code = e.exit_code

    track_command(args.command, exit_code)
    if args.metrics_file:
        export_metrics(args.metrics_file)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
