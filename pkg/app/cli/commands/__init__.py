from app.cli.commands import (
    clairaut, geodesic, growth, idempotent, repro_aff, validate, verdict,
)

COMMANDS = (validate, verdict, geodesic, growth, clairaut, idempotent, repro_aff)
