"""Geodesically convex loss families with declared constants.

Every loss carries a gradient-norm bound ``G`` valid on its evaluation
domain, an optional gsc-smoothness constant ``L`` and a nonnegativity flag;
the constants are computed from the enlarged decision set when improper
learning is in play, since that is where gradients get queried.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .manifolds import DiagSpd, GeometryError, Point, Tangent, zeta
from .sets import EnlargedSet, GeodesicBall

__all__ = [
    "LossFunction",
    "LossSequence",
    "squared_distance_loss",
    "busemann_loss",
    "finite_difference_check",
]


@dataclass
class LossFunction:
    """A loss with value, Riemannian gradient and declared constants."""

    value: Callable[[Point], float]
    grad: Callable[[Point], Tangent]
    G: float
    L: Optional[float]
    nonnegative: bool
    name: str = "loss"
    params: dict = field(default_factory=dict)

    def __call__(self, x: Point) -> float:
        return self.value(x)


@dataclass
class LossSequence:
    """An ordered loss sequence with uniform declared constants."""

    losses: list[LossFunction]
    G: float
    L: Optional[float]
    nonnegative: bool

    def __len__(self) -> int:
        return len(self.losses)

    def __getitem__(self, t: int) -> LossFunction:
        return self.losses[t]

    def __iter__(self):
        return iter(self.losses)

    @staticmethod
    def from_losses(losses: Sequence[LossFunction]) -> "LossSequence":
        if not losses:
            raise GeometryError("empty loss sequence")
        Ls = [f.L for f in losses]
        L = None if any(v is None for v in Ls) else max(Ls)
        return LossSequence(
            losses=list(losses),
            G=max(f.G for f in losses),
            L=L,
            nonnegative=all(f.nonnegative for f in losses),
        )


def squared_distance_loss(
    anchors: Sequence[Point],
    weights,
    eval_set: GeodesicBall | EnlargedSet,
) -> LossFunction:
    """f(x) = sum_i w_i d(x, a_i)^2 with grad f(x) = -2 sum_i w_i log_x(a_i).

    ``eval_set`` is the region where the loss will be queried; the declared
    constants are G = 2 * reach and L = 2 * zeta(kappa, reach), where reach
    is the largest possible distance from an evaluation point to an anchor.
    """
    if len(anchors) == 0:
        raise GeometryError("empty anchor list")
    m = anchors[0].manifold
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(anchors),):
        raise GeometryError("one weight per anchor required")
    if np.any(w < 0):
        raise GeometryError("anchor weights must be nonnegative")

    reach = max(m.dist(eval_set.center, a) for a in anchors) + eval_set.radius
    wsum = float(w.sum())

    def value(x: Point) -> float:
        return float(sum(wi * m.dist(x, a) ** 2 for wi, a in zip(w, anchors)))

    def grad(x: Point) -> Tangent:
        g = m.zero(x)
        for wi, a in zip(w, anchors):
            if wi != 0.0:
                g = g + (-2.0 * wi) * m.log(x, a)
        return g

    return LossFunction(
        value=value,
        grad=grad,
        G=2.0 * wsum * reach,
        L=2.0 * wsum * zeta(m.curvature_lower_bound, reach),
        nonnegative=True,
        name="squared_distance",
        params={
            "anchors": [a.coords.tolist() for a in anchors],
            "weights": w.tolist(),
        },
    )


def busemann_loss(direction: Tangent, scale: float) -> LossFunction:
    """Horofunction loss on the diagonal-SPD manifold, scaled by ``scale``.

    For the ray c(t) = Exp_I(tX) with |X| = 1 the horofunction at
    p = Exp_I(Y) is -tr(XY); the loss is scale * that.  Its Riemannian
    gradient at p is the diagonal matrix -scale * X p, whose norm is exactly
    ``scale`` everywhere, and along the ray it equals -scale * c'(t).
    """
    base = direction.base
    m = base.manifold
    if not isinstance(m, DiagSpd):
        raise GeometryError("horofunction losses are defined on DiagSpd")
    if not np.allclose(base.coords, np.eye(m.n), rtol=0.0, atol=1e-12):
        raise GeometryError("direction must be anchored at the identity")
    xdiag = np.diag(direction.coords).copy()
    nrm = float(np.linalg.norm(xdiag))
    if abs(nrm - 1.0) > 1e-9:
        raise GeometryError(f"direction must have unit norm (got {nrm})")
    if scale < 0:
        raise GeometryError("scale must be nonnegative")

    def value(p: Point) -> float:
        y = np.log(np.diag(p.coords))
        return -scale * float(np.dot(xdiag, y))

    def grad(p: Point) -> Tangent:
        return Tangent(p, np.diag(-scale * xdiag * np.diag(p.coords)))

    return LossFunction(
        value=value,
        grad=grad,
        G=scale,
        L=None,
        nonnegative=False,
        name="busemann",
        params={"direction": xdiag.tolist(), "scale": scale},
    )


def finite_difference_check(
    f: LossFunction, x: Point, v: Tangent, h: float = 1e-5
) -> float:
    """|central difference of f along the unit tangent v - <grad f(x), v>|.

    The contract for well-formed gradients is a discrepancy of at most
    1e-5 * (1 + G).
    """
    m = x.manifold
    fd = (f.value(m.exp(x, h * v)) - f.value(m.exp(x, (-h) * v))) / (2.0 * h)
    return abs(fd - m.inner(x, f.grad(x), v))
