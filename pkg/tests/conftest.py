import numpy as np
import pytest

from georegret import DiagSpd, Euclidean, GeodesicBall, PoincareBall, SpdAffine


def make_ball(manifold, radius=1.0):
    """A geodesic ball around a canonical interior point."""
    if manifold.kind == "euclidean":
        center = manifold.point(np.zeros(manifold.dim))
    elif manifold.kind == "poincare_ball":
        center = manifold.point(np.zeros(manifold.dim))
    else:
        center = manifold.point(np.eye(manifold.n))
    return GeodesicBall(center, radius)


ALL_MANIFOLDS = [
    Euclidean(2),
    Euclidean(5),
    PoincareBall(2),
    PoincareBall(4),
    SpdAffine(3),
    DiagSpd(3),
]


@pytest.fixture(params=ALL_MANIFOLDS, ids=lambda m: f"{m.kind}-{getattr(m, 'dim', getattr(m, 'n', '?'))}")
def manifold(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
