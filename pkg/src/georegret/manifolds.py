"""Hadamard-manifold primitives.

Four concrete geometries are provided:

* ``Euclidean(dim)``     -- flat R^d,
* ``PoincareBall(dim)``  -- the open unit ball with constant curvature -1,
* ``SpdAffine(n)``       -- symmetric positive-definite matrices under the
  affine-invariant metric ``<U, V>_p = tr(p^-1 U p^-1 V)``,
* ``DiagSpd(n)``         -- the diagonal SPD submanifold, which is flat
  (elementwise log of the diagonal is an isometry onto R^n).

Tangent coordinate conventions are fixed per manifold so serialization is
unambiguous: Euclidean coordinates for the ball, symmetric matrices for the
SPD variants.  All operations are pure functions of their inputs and safe
for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .backend import poincare as _pk

__all__ = [
    "Manifold",
    "Euclidean",
    "PoincareBall",
    "SpdAffine",
    "DiagSpd",
    "Point",
    "Tangent",
    "zeta",
    "manifold_from_config",
]

_EIG_FLOOR = 1e-300


class GeometryError(ValueError):
    """Raised on dimension/base/manifold mismatches and invalid coordinates."""


class Point:
    """A point on a concrete manifold."""

    __slots__ = ("manifold", "coords")

    def __init__(self, manifold: "Manifold", coords: np.ndarray):
        self.manifold = manifold
        self.coords = coords

    def __repr__(self) -> str:
        return f"Point({self.manifold.kind}, {self.coords!r})"


class Tangent:
    """A tangent vector anchored at a base point."""

    __slots__ = ("base", "coords")

    def __init__(self, base: Point, coords: np.ndarray):
        self.base = base
        self.coords = coords

    def __add__(self, other: "Tangent") -> "Tangent":
        if other.base is not self.base and not np.array_equal(
            other.base.coords, self.base.coords
        ):
            raise GeometryError("tangent vectors anchored at different points")
        return Tangent(self.base, self.coords + other.coords)

    def __mul__(self, a: float) -> "Tangent":
        return Tangent(self.base, a * self.coords)

    __rmul__ = __mul__

    def __neg__(self) -> "Tangent":
        return Tangent(self.base, -self.coords)

    def __repr__(self) -> str:
        return f"Tangent(at {self.base!r}, {self.coords!r})"


def zeta(kappa: float, diameter: float) -> float:
    """Curvature distortion constant sqrt(-k) D coth(sqrt(-k) D).

    Continuous at the flat limit: returns 1 for kappa = 0 and uses the
    series expansion z coth z = 1 + z^2/3 - z^4/45 + ... for tiny arguments
    to avoid 0/0.
    """
    if kappa > 0:
        raise GeometryError("curvature lower bound must be nonpositive")
    if diameter < 0:
        raise GeometryError("diameter must be nonnegative")
    z = math.sqrt(-kappa) * diameter
    if z < 1e-6:
        return 1.0 + z * z / 3.0
    return z / math.tanh(z)


class Manifold:
    """Abstract Hadamard manifold.

    Subclasses implement the raw coordinate operations ``exp_c``, ``log_c``,
    ``dist_c``, ``transport_c`` and ``inner_c``; the public wrappers validate
    anchoring and wrap results in :class:`Point` / :class:`Tangent`.
    """

    kind: str = "abstract"
    curvature_lower_bound: float = 0.0

    # -- subclass surface ------------------------------------------------
    def check_point(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def check_tangent(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def exp_c(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def log_c(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def dist_c(self, x: np.ndarray, y: np.ndarray) -> float:
        raise NotImplementedError

    def transport_c(self, x: np.ndarray, y: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inner_c(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
        raise NotImplementedError

    def zero_tangent_c(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)

    # -- public API ------------------------------------------------------
    def point(self, coords: Any) -> Point:
        arr = np.asarray(coords, dtype=np.float64)
        return Point(self, self.check_point(arr))

    def tangent(self, base: Point, coords: Any) -> Tangent:
        self._own(base)
        arr = self.check_tangent(np.asarray(coords, dtype=np.float64))
        if arr.shape != base.coords.shape:
            raise GeometryError("tangent/point dimension mismatch")
        return Tangent(base, arr)

    def zero(self, base: Point) -> Tangent:
        self._own(base)
        return Tangent(base, self.zero_tangent_c(base.coords))

    def exp(self, x: Point, v: Tangent) -> Point:
        self._own(x)
        if v.base is not x:
            self._anchored(v, x)
        return Point(self, self.exp_c(x.coords, v.coords))

    def log(self, x: Point, y: Point) -> Tangent:
        self._own(x)
        self._own(y)
        return Tangent(x, self.log_c(x.coords, y.coords))

    def dist(self, x: Point, y: Point) -> float:
        self._own(x)
        self._own(y)
        return self.dist_c(x.coords, y.coords)

    def transport(self, x: Point, y: Point, v: Tangent) -> Tangent:
        self._own(x)
        self._own(y)
        if v.base is not x:
            self._anchored(v, x)
        return Tangent(y, self.transport_c(x.coords, y.coords, v.coords))

    def inner(self, x: Point, u: Tangent, v: Tangent) -> float:
        self._own(x)
        for w in (u, v):
            if w.base is not x:
                self._anchored(w, x)
        return self.inner_c(x.coords, u.coords, v.coords)

    def norm(self, x: Point, v: Tangent) -> float:
        return math.sqrt(max(self.inner(x, v, v), 0.0))

    def to_config(self) -> dict:
        raise NotImplementedError

    # -- helpers -----------------------------------------------------------
    def _own(self, p: Point) -> None:
        if p.manifold is not self and p.manifold.to_config() != self.to_config():
            raise GeometryError(
                f"point on {p.manifold.kind} passed to {self.kind} operation"
            )

    def _anchored(self, v: Tangent, x: Point) -> None:
        if v.base.manifold.to_config() != self.to_config() or not np.allclose(
            v.base.coords, x.coords, rtol=0.0, atol=1e-12
        ):
            raise GeometryError("tangent vector not anchored at the given point")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Manifold) and self.to_config() == other.to_config()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.to_config().items())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_config()})"


class Euclidean(Manifold):
    kind = "euclidean"
    curvature_lower_bound = 0.0

    def __init__(self, dim: int):
        if dim < 1:
            raise GeometryError("dimension must be positive")
        self.dim = dim

    def check_point(self, coords: np.ndarray) -> np.ndarray:
        if coords.shape != (self.dim,):
            raise GeometryError(f"expected shape ({self.dim},), got {coords.shape}")
        return coords

    check_tangent = check_point

    def exp_c(self, x, v):
        return x + v

    def log_c(self, x, y):
        return y - x

    def dist_c(self, x, y):
        return float(np.linalg.norm(y - x))

    def transport_c(self, x, y, v):
        return v.copy()

    def inner_c(self, x, u, v):
        return float(np.dot(u, v))

    def to_config(self) -> dict:
        return {"kind": self.kind, "dim": self.dim}


class PoincareBall(Manifold):
    """Open unit ball with the conformal metric 4 <u,v>_2 / (1 - |x|^2)^2."""

    kind = "poincare_ball"
    curvature_lower_bound = -1.0

    def __init__(self, dim: int):
        if dim < 1:
            raise GeometryError("dimension must be positive")
        self.dim = dim

    def check_point(self, coords: np.ndarray) -> np.ndarray:
        if coords.shape != (self.dim,):
            raise GeometryError(f"expected shape ({self.dim},), got {coords.shape}")
        if float(np.dot(coords, coords)) >= 1.0:
            raise GeometryError("point outside the open unit ball")
        return np.ascontiguousarray(coords)

    def check_tangent(self, coords: np.ndarray) -> np.ndarray:
        if coords.shape != (self.dim,):
            raise GeometryError(f"expected shape ({self.dim},), got {coords.shape}")
        return np.ascontiguousarray(coords)

    def exp_c(self, x, v):
        return _pk.exp(x, v)

    def log_c(self, x, y):
        return _pk.log(x, y)

    def dist_c(self, x, y):
        return _pk.dist(x, y)

    def transport_c(self, x, y, v):
        return _pk.transport(x, y, v)

    def inner_c(self, x, u, v):
        return _pk.inner(x, u, v)

    def to_config(self) -> dict:
        return {"kind": self.kind, "dim": self.dim}


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _eigh_fn(a: np.ndarray, fn) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_sym(a))
    return _sym((vecs * fn(vals)) @ vecs.T)


def _logm_spd(a: np.ndarray) -> np.ndarray:
    return _eigh_fn(a, lambda v: np.log(np.maximum(v, _EIG_FLOOR)))


def _expm_sym(a: np.ndarray) -> np.ndarray:
    return _eigh_fn(a, np.exp)


def _powm_spd(a: np.ndarray, p: float) -> np.ndarray:
    return _eigh_fn(a, lambda v: np.power(np.maximum(v, _EIG_FLOOR), p))


class SpdAffine(Manifold):
    """SPD matrices with the affine-invariant metric.

    Closed forms:
        Exp_p(U)    = p^1/2 expm(p^-1/2 U p^-1/2) p^1/2
        Exp_p^-1(q) = p^1/2 logm(p^-1/2 q p^-1/2) p^1/2
        d(p, q)     = | log eigvals(p^-1/2 q p^-1/2) |_2
        transport   = congruence by (q p^-1)^1/2

    Matrix functions go through symmetric eigendecomposition with inputs
    symmetrized and eigenvalues floored before logs.
    """

    kind = "spd_affine"
    curvature_lower_bound = -0.5

    def __init__(self, n: int):
        if n < 1:
            raise GeometryError("matrix size must be positive")
        self.n = n

    def check_point(self, coords: np.ndarray) -> np.ndarray:
        if coords.shape != (self.n, self.n):
            raise GeometryError(f"expected shape ({self.n},{self.n})")
        if not np.allclose(coords, coords.T, rtol=0.0, atol=1e-10):
            raise GeometryError("SPD point must be symmetric")
        coords = _sym(coords)
        if np.linalg.eigvalsh(coords).min() <= 0.0:
            raise GeometryError("SPD point must be positive definite")
        return coords

    def check_tangent(self, coords: np.ndarray) -> np.ndarray:
        if coords.shape != (self.n, self.n):
            raise GeometryError(f"expected shape ({self.n},{self.n})")
        if not np.allclose(coords, coords.T, rtol=0.0, atol=1e-10):
            raise GeometryError("SPD tangent must be symmetric")
        return _sym(coords)

    def exp_c(self, x, v):
        rt = _powm_spd(x, 0.5)
        irt = _powm_spd(x, -0.5)
        return _sym(rt @ _expm_sym(irt @ v @ irt) @ rt)

    def log_c(self, x, y):
        rt = _powm_spd(x, 0.5)
        irt = _powm_spd(x, -0.5)
        return _sym(rt @ _logm_spd(irt @ y @ irt) @ rt)

    def dist_c(self, x, y):
        irt = _powm_spd(x, -0.5)
        vals = np.linalg.eigvalsh(_sym(irt @ y @ irt))
        return float(np.linalg.norm(np.log(np.maximum(vals, _EIG_FLOOR))))

    def transport_c(self, x, y, v):
        rt = _powm_spd(x, 0.5)
        irt = _powm_spd(x, -0.5)
        e = rt @ _powm_spd(irt @ y @ irt, 0.5) @ irt
        return _sym(e @ v @ e.T)

    def inner_c(self, x, u, v):
        xi = np.linalg.inv(x)
        return float(np.trace(xi @ u @ xi @ v))

    def to_config(self) -> dict:
        return {"kind": self.kind, "n": self.n}


class DiagSpd(Manifold):
    """Diagonal SPD matrices under the affine-invariant metric.

    Elementwise log of the diagonal is an isometry onto flat R^n, so the
    curvature lower bound used for algorithmic constants is 0.
    """

    kind = "diag_spd"
    curvature_lower_bound = 0.0

    def __init__(self, n: int):
        if n < 1:
            raise GeometryError("matrix size must be positive")
        self.n = n

    def _diag(self, coords: np.ndarray, what: str) -> np.ndarray:
        if coords.shape != (self.n, self.n):
            raise GeometryError(f"expected shape ({self.n},{self.n})")
        if np.any(coords != np.diag(np.diag(coords))):
            raise GeometryError(f"{what} must be diagonal")
        return np.diag(coords).copy()

    def check_point(self, coords: np.ndarray) -> np.ndarray:
        d = self._diag(coords, "DiagSpd point")
        if np.any(d <= 0.0):
            raise GeometryError("diagonal entries must be positive")
        return np.diag(d)

    def check_tangent(self, coords: np.ndarray) -> np.ndarray:
        return np.diag(self._diag(coords, "DiagSpd tangent"))

    def exp_c(self, x, v):
        p = np.diag(x)
        return np.diag(p * np.exp(np.diag(v) / p))

    def log_c(self, x, y):
        p = np.diag(x)
        return np.diag(p * np.log(np.diag(y) / p))

    def dist_c(self, x, y):
        return float(np.linalg.norm(np.log(np.diag(y) / np.diag(x))))

    def transport_c(self, x, y, v):
        return np.diag(np.diag(v) * np.diag(y) / np.diag(x))

    def inner_c(self, x, u, v):
        p = np.diag(x)
        return float(np.sum(np.diag(u) * np.diag(v) / (p * p)))

    def identity(self) -> Point:
        return self.point(np.eye(self.n))

    def to_config(self) -> dict:
        return {"kind": self.kind, "n": self.n}


_KINDS = {
    "euclidean": lambda cfg: Euclidean(int(cfg["dim"])),
    "poincare_ball": lambda cfg: PoincareBall(int(cfg["dim"])),
    "spd_affine": lambda cfg: SpdAffine(int(cfg["n"])),
    "diag_spd": lambda cfg: DiagSpd(int(cfg["n"])),
}


def manifold_from_config(cfg: dict) -> Manifold:
    """Build a manifold from its JSON description {"kind": ..., "dim"/"n": ...}."""
    try:
        builder = _KINDS[cfg["kind"]]
    except KeyError as exc:
        raise GeometryError(f"unknown manifold kind {cfg.get('kind')!r}") from exc
    return builder(cfg)
