"""
Exceptions raised by the services.

Every exception carries the process exit code the CLI should use and a
human-readable detail, mirroring the status_code/detail pair of an HTTP error.
"""


class LabException(Exception):
    exit_code: int = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class SpecValidationError(LabException):
    """Malformed input document, unknown names, dimension mismatch."""
    exit_code = 2


class AlgebraStructureError(LabException):
    exit_code = 2


class DegenerateMetricError(LabException):
    exit_code = 2


class RepresentationError(LabException):
    """A declared representation is not a Lie algebra homomorphism."""
    exit_code = 2

    def __init__(self, detail: str, residual: float):
        super().__init__(detail)
        self.residual = residual


class DomainError(LabException):
    exit_code = 2


class NumericalFailure(LabException):
    exit_code = 3
