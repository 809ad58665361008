import numpy as np
import pytest

from app.modules.catalog import CatalogService
from app.modules.metric import MetricService


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def aff():
    return CatalogService.load_builtin("aff")


@pytest.fixture
def heis3():
    return CatalogService.load_builtin("heis3")


@pytest.fixture
def so3():
    return CatalogService.load_builtin("so3")


def random_metric(rng: np.random.Generator, n: int, negatives: int | None = None):
    """Random nondegenerate form with the requested number of negative directions."""
    if negatives is None:
        negatives = int(rng.integers(0, n + 1))
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = rng.uniform(0.5, 2.0, n)
    w[:negatives] *= -1.0
    return MetricService.make_metric((Q * w) @ Q.T)


def random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        M = rng.standard_normal((n, n))
        if abs(np.linalg.det(M)) > 0.1:
            return M


@pytest.fixture
def metric_factory(rng):
    def factory(n: int, negatives: int | None = None):
        return random_metric(rng, n, negatives)
    return factory
