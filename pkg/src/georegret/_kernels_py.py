"""Pure-numpy kernels for the Poincare ball (curvature -1).

Tangent vectors use plain Euclidean coordinates; the Riemannian metric at x
is the conformal one,

    <u, v>_x = lam(x)^2 <u, v>_2,   lam(x) = 2 / (1 - |x|^2),

so that the log map at the origin is  arctanh(|y|) y/|y|  and distances are
d(x, y) = 2 arctanh(|mobius(-x, y)|).

The compiled twin in ``_speedups.pyx`` implements the same functions with
identical semantics; ``backend.py`` picks one at import time.
"""

from __future__ import annotations

import math

import numpy as np

# Points are kept strictly inside the unit ball; operations that could land
# on the boundary through rounding are pulled back by this margin.
_BOUNDARY = 1.0 - 1e-15


def _clip_to_ball(x: np.ndarray) -> np.ndarray:
    n = math.sqrt(float(np.dot(x, x)))
    if n >= _BOUNDARY:
        return x * (_BOUNDARY / n)
    return x


def lam(x: np.ndarray) -> float:
    """Conformal factor 2 / (1 - |x|^2)."""
    return 2.0 / (1.0 - float(np.dot(x, x)))


def mobius_add(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x2 = float(np.dot(x, x))
    y2 = float(np.dot(y, y))
    xy = float(np.dot(x, y))
    denom = 1.0 + 2.0 * xy + x2 * y2
    return ((1.0 + 2.0 * xy + y2) * x + (1.0 - x2) * y) / denom


def exp(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    nv = math.sqrt(float(np.dot(v, v)))
    if nv == 0.0:
        return x.copy()
    t = math.tanh(0.5 * lam(x) * nv)
    return _clip_to_ball(mobius_add(x, (t / nv) * v))


def log(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    w = mobius_add(-x, y)
    nw = math.sqrt(float(np.dot(w, w)))
    if nw == 0.0:
        return np.zeros_like(x)
    return (2.0 / lam(x)) * (math.atanh(min(nw, _BOUNDARY)) / nw) * w


def dist(x: np.ndarray, y: np.ndarray) -> float:
    w = mobius_add(-x, y)
    nw = math.sqrt(float(np.dot(w, w)))
    return 2.0 * math.atanh(min(nw, _BOUNDARY))


def inner(x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    s = lam(x)
    return s * s * float(np.dot(u, v))


def gyration(a: np.ndarray, b: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Gyr[a, b] v = -(a + b) + (a + (b + v)) in Mobius arithmetic."""
    return mobius_add(-mobius_add(a, b), mobius_add(a, mobius_add(b, v)))


def transport(x: np.ndarray, y: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Parallel transport of v along the geodesic from x to y."""
    return (lam(x) / lam(y)) * gyration(y, -x, v)


def frechet(
    points: np.ndarray,
    weights: np.ndarray,
    init: np.ndarray,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, int]:
    """Weighted barycenter by the fixed-point iteration x <- exp_x(sum w_i log_x p_i).

    Returns (mean, residual, iterations) where residual is the Riemannian
    norm of the weighted log sum at the returned point.
    """
    x = init.copy()
    residual = math.inf
    for it in range(max_iter):
        g = np.zeros_like(x)
        for p, w in zip(points, weights):
            if w != 0.0:
                g += w * log(x, p)
        residual = lam(x) * math.sqrt(float(np.dot(g, g)))
        if residual <= tol:
            return x, residual, it
        x = exp(x, g)
    return x, residual, max_iter
