"""Compiled kernels and the pure twin must agree to rounding error."""

import numpy as np
import pytest

from georegret import backend
from georegret import _kernels_py as pure

compiled = pytest.importorskip(
    "georegret._speedups", reason="compiled kernels not built"
)


def random_ball_points(rng, n, dim):
    pts = rng.standard_normal((n, dim))
    norms = np.linalg.norm(pts, axis=1, keepdims=True)
    return pts / norms * rng.uniform(0.0, 0.85, size=(n, 1))


@pytest.fixture
def data():
    rng = np.random.default_rng(99)
    pts = random_ball_points(rng, 64, 3)
    vecs = rng.standard_normal((64, 3)) * 0.3
    return pts, vecs


def test_exp_agree(data):
    pts, vecs = data
    for x, v in zip(pts, vecs):
        np.testing.assert_allclose(compiled.exp(x, v), pure.exp(x, v), atol=1e-14)


def test_log_agree(data):
    pts, _ = data
    for x, y in zip(pts, pts[::-1]):
        np.testing.assert_allclose(compiled.log(x, y), pure.log(x, y), atol=1e-14)


def test_dist_agree(data):
    pts, _ = data
    for x, y in zip(pts, pts[::-1]):
        assert compiled.dist(x, y) == pytest.approx(pure.dist(x, y), abs=1e-14)


def test_transport_agree(data):
    pts, vecs = data
    for x, y, v in zip(pts, pts[::-1], vecs):
        np.testing.assert_allclose(
            compiled.transport(x, y, v), pure.transport(x, y, v), atol=1e-13
        )


def test_inner_agree(data):
    pts, vecs = data
    for x, u, v in zip(pts, vecs, vecs[::-1]):
        assert compiled.inner(x, u, v) == pytest.approx(pure.inner(x, u, v), rel=1e-13)


def test_frechet_agree():
    rng = np.random.default_rng(7)
    pts = random_ball_points(rng, 6, 3)
    w = rng.uniform(0.1, 1.0, size=6)
    w /= w.sum()
    mc, rc, ic = compiled.frechet(pts, w, pts[0].copy(), 1e-12, 200)
    mp, rp, ip = pure.frechet(pts, w, pts[0].copy(), 1e-12, 200)
    np.testing.assert_allclose(mc, mp, atol=1e-10)
    assert rc <= 1e-12 and rp <= 1e-12


def test_backend_name_consistent():
    assert backend.backend_name() in ("compiled", "pure-python")
    assert backend.COMPILED == (backend.backend_name() == "compiled")
