"""Weighted averaging on Hadamard manifolds.

Two schemes:

* :func:`frechet_mean` -- the weighted barycenter argmin_x sum w_i d(x, x_i)^2,
  computed by the fixed-point iteration x <- exp_x(sum w_i log_x x_i)
  initialized at the highest-weight point.  Euclidean and diagonal-SPD
  inputs use the flat closed form; the Poincare ball goes through the
  kernel backend.

* :func:`geodesic_mean` -- the order-dependent iterative average
  x_k = exp_{x_{k-1}}((w_k / sum_{i<=k} w_i) log_{x_{k-1}} x_k);
  both satisfy Jensen's inequality for gsc-convex functions.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .backend import poincare as _pk
from .manifolds import GeometryError, Point

__all__ = ["frechet_mean", "geodesic_mean", "MeanConvergenceError"]

WEIGHT_TOL = 1e-12


class MeanConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"barycenter iteration did not reach tolerance after "
            f"{iterations} iterations (residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations


def _check_weights(points: Sequence[Point], weights) -> np.ndarray:
    if len(points) == 0:
        raise GeometryError("empty point list")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(points),):
        raise GeometryError("one weight per point required")
    if np.any(w < -WEIGHT_TOL):
        raise GeometryError("weights must be nonnegative")
    if abs(float(w.sum()) - 1.0) > WEIGHT_TOL:
        raise GeometryError(f"weights must sum to 1 (got {w.sum()!r})")
    m = points[0].manifold
    for p in points[1:]:
        if p.manifold != m:
            raise GeometryError("points live on different manifolds")
    return np.maximum(w, 0.0)


def frechet_mean(
    points: Sequence[Point],
    weights,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> Point:
    """Weighted Frechet (Karcher) mean.

    Guarantees first-order stationarity | sum w_i log(m, x_i) |_m <= tol and
    raises :class:`MeanConvergenceError` if the iteration stalls.
    """
    w = _check_weights(points, weights)
    if tol <= 0:
        raise GeometryError("tol must be positive")
    m = points[0].manifold
    k = int(np.argmax(w))
    if w[k] >= 1.0 - WEIGHT_TOL:
        return points[k]

    if m.kind == "euclidean":
        coords = np.einsum("i,ij->j", w, np.stack([p.coords for p in points]))
        return Point(m, coords)
    if m.kind == "diag_spd":
        logs = np.stack([np.log(np.diag(p.coords)) for p in points])
        return Point(m, np.diag(np.exp(w @ logs)))
    if m.kind == "poincare_ball":
        pts = np.stack([p.coords for p in points])
        mean, residual, iters = _pk.frechet(pts, w, points[k].coords, tol, max_iter)
        if residual > tol:
            raise MeanConvergenceError(residual, iters)
        return Point(m, mean)

    # generic fixed-point loop (SPD and any future geometry)
    x = points[k]
    residual = np.inf
    for _ in range(max_iter):
        g = m.zero(x)
        for p, wi in zip(points, w):
            if wi != 0.0:
                g = g + wi * m.log(x, p)
        residual = m.norm(x, g)
        if residual <= tol:
            return x
        x = m.exp(x, g)
    raise MeanConvergenceError(residual, max_iter)


def geodesic_mean(points: Sequence[Point], weights) -> Point:
    """Order-dependent geodesic average; the input order is significant."""
    w = _check_weights(points, weights)
    m = points[0].manifold
    x = points[0]
    s = float(w[0])
    for p, wk in zip(points[1:], w[1:]):
        s += float(wk)
        if s <= 0.0 or wk == 0.0:
            continue
        x = m.exp(x, (float(wk) / s) * m.log(x, p))
    return x
