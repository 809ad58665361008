from prometheus_client import Counter, Histogram, REGISTRY, write_to_textfile
import logging

logger = logging.getLogger(__name__)

# ============================================================================
# Geodesic Flow Metrics
# ============================================================================

geodesic_integrations_total = Counter(
    'geodesic_integrations_total',
    'Total Euler-Arnold integrations',
    ['status']  # completed, blowup, tolerance_failure
)

geodesic_integration_duration_seconds = Histogram(
    'geodesic_integration_duration_seconds',
    'Wall time of one Euler-Arnold integration in seconds',
    buckets=(0.001, 0.005, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0)
)

# ============================================================================
# Search / Classification Metrics
# ============================================================================

newton_restarts_total = Counter(
    'newton_restarts_total',
    'Newton restarts of the idempotent search',
    ['outcome']  # converged, diverged, singular, exhausted
)

growth_scans_total = Counter(
    'growth_scans_total',
    'One-parameter growth scans by fitted class',
    ['fit']
)

verdicts_total = Counter(
    'verdicts_total',
    'Completeness verdicts issued',
    ['verdict']
)

# ============================================================================
# CLI Metrics
# ============================================================================

cli_commands_total = Counter(
    'cli_commands_total',
    'CLI commands run',
    ['command', 'exit_code']
)


# ============================================================================
# Helper Functions
# ============================================================================

def track_geodesic(status: str, duration: float):
    """Track one finished integration"""
    geodesic_integrations_total.labels(status=status).inc()
    geodesic_integration_duration_seconds.observe(duration)


def track_newton_restart(outcome: str):
    newton_restarts_total.labels(outcome=outcome).inc()


def track_growth_scan(fit: str):
    growth_scans_total.labels(fit=fit).inc()


def track_verdict(verdict: str):
    verdicts_total.labels(verdict=verdict).inc()


def track_command(command: str, exit_code: int):
    cli_commands_total.labels(command=command, exit_code=str(exit_code)).inc()


def export_metrics(path: str):
    """Write the registry in Prometheus text format (textfile collector)."""
    write_to_textfile(path, REGISTRY)
    logger.info(f"Metrics written to {path}")
