"""Geodesic-ball decision sets and their improper-learning enlargements.

Decision sets are restricted to geodesic balls: they admit exact closed-form
metric projection on every supported geometry and their enlargement is again
a ball, which keeps membership/projection exact for bound auditing.
"""

from __future__ import annotations

import numpy as np

from .manifolds import GeometryError, Manifold, Point

__all__ = ["GeodesicBall", "EnlargedSet"]

_MEMBERSHIP_TOL = 1e-10


class GeodesicBall:
    """Closed geodesic ball {x : d(center, x) <= radius}; gsc-convex on Hadamard manifolds."""

    def __init__(self, center: Point, radius: float):
        if radius <= 0:
            raise GeometryError("radius must be positive")
        self.center = center
        self.radius = float(radius)

    @property
    def manifold(self) -> Manifold:
        return self.center.manifold

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def contains(self, x: Point) -> bool:
        return self.manifold.dist(self.center, x) <= self.radius + _MEMBERSHIP_TOL

    def project(self, x: Point) -> Point:
        """Metric projection: x itself if contained, else the boundary point
        on the geodesic ray from the center through x."""
        m = self.manifold
        d = m.dist(self.center, x)
        if d <= self.radius + _MEMBERSHIP_TOL:
            return x
        return m.exp(self.center, (self.radius / d) * m.log(self.center, x))

    def enlarge(self, margin: float) -> "EnlargedSet":
        return EnlargedSet(self, margin)

    def sample(self, rng: np.random.Generator) -> Point:
        """Draw a point: uniform direction, radius r * u^(1/dim) in geodesic
        polar coordinates (uniform-in-tangent, not volume-uniform)."""
        m = self.manifold
        flat = self.center.coords.reshape(-1)
        raw = rng.standard_normal(flat.shape[0])
        v = m.check_tangent(_shaped(raw, self.center.coords, m))
        t = m.tangent(self.center, v)
        n = m.norm(self.center, t)
        if n == 0.0:
            return self.center
        dim = flat.shape[0]
        r = self.radius * float(rng.uniform()) ** (1.0 / dim)
        return m.exp(self.center, (r / n) * t)

    def to_config(self) -> dict:
        return {"center": self.center.coords.tolist(), "radius": self.radius}

    def __repr__(self) -> str:
        return f"GeodesicBall(center={self.center!r}, radius={self.radius})"


def _shaped(raw: np.ndarray, like: np.ndarray, manifold: Manifold) -> np.ndarray:
    """Reshape a flat gaussian draw into valid tangent coordinates."""
    if like.ndim == 1:
        return raw
    a = raw.reshape(like.shape)
    if manifold.kind == "diag_spd":
        return np.diag(np.diag(a))
    return 0.5 * (a + a.T)


class EnlargedSet:
    """N_c = {x : d(x, N) <= c} for a ball base: the ball with radius + c.

    The reported diameter is D + 2c, matching how the enlargement enters the
    algorithmic constants.
    """

    def __init__(self, base: GeodesicBall, margin: float):
        if margin < 0:
            raise GeometryError("margin must be nonnegative")
        self.base = base
        self.margin = float(margin)
        self._ball = GeodesicBall(base.center, base.radius + margin) if margin > 0 else base

    @property
    def manifold(self) -> Manifold:
        return self.base.manifold

    @property
    def center(self) -> Point:
        return self.base.center

    @property
    def radius(self) -> float:
        return self.base.radius + self.margin

    @property
    def diameter(self) -> float:
        return self.base.diameter + 2.0 * self.margin

    def contains(self, x: Point) -> bool:
        return self._ball.contains(x)

    def project(self, x: Point) -> Point:
        return self._ball.project(x)

    def sample(self, rng: np.random.Generator) -> Point:
        return self._ball.sample(rng)

    def __repr__(self) -> str:
        return f"EnlargedSet(base={self.base!r}, margin={self.margin})"
