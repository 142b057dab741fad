"""Online geodesically-convex optimization on Hadamard manifolds."""

from .backend import COMPILED, backend_name
from .manifolds import (
    DiagSpd,
    Euclidean,
    GeometryError,
    Manifold,
    PoincareBall,
    Point,
    SpdAffine,
    Tangent,
    manifold_from_config,
    zeta,
)
from .sets import EnlargedSet, GeodesicBall
from .means import MeanConvergenceError, frechet_mean, geodesic_mean
from .losses import (
    LossFunction,
    LossSequence,
    busemann_loss,
    finite_difference_check,
    squared_distance_loss,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "backend_name",
    "DiagSpd",
    "Euclidean",
    "GeometryError",
    "Manifold",
    "PoincareBall",
    "Point",
    "SpdAffine",
    "Tangent",
    "manifold_from_config",
    "zeta",
    "EnlargedSet",
    "GeodesicBall",
    "MeanConvergenceError",
    "frechet_mean",
    "geodesic_mean",
    "LossFunction",
    "LossSequence",
    "busemann_loss",
    "finite_difference_check",
    "squared_distance_loss",
    "__version__",
]
