import math

import numpy as np
import pytest

from georegret import Euclidean, GeodesicBall, GeometryError, PoincareBall

from conftest import make_ball


class TestContains:
    def test_interior_point(self):
        ball = make_ball(Euclidean(2), radius=1.0)
        assert ball.contains(Euclidean(2).point([0.5, 0.0]))

    def test_boundary_inclusive(self):
        m = Euclidean(2)
        ball = make_ball(m, radius=1.0)
        assert ball.contains(m.point([1.0, 0.0]))

    def test_poincare_metric_not_euclidean(self):
        # Euclidean norm 0.9 is geodesic distance 2 arctanh(0.9) ~ 2.944 > 1
        m = PoincareBall(2)
        ball = make_ball(m, radius=1.0)
        assert not ball.contains(m.point([0.9, 0.0]))
        assert m.dist(ball.center, m.point([0.9, 0.0])) == pytest.approx(
            2.0 * math.atanh(0.9), abs=1e-12
        )

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(GeometryError):
            GeodesicBall(Euclidean(2).point([0.0, 0.0]), 0.0)


class TestProject:
    def test_contained_point_unchanged(self, manifold, rng):
        ball = make_ball(manifold)
        x = ball.sample(rng)
        assert ball.project(x) is x

    def test_euclidean_radial_scaling(self):
        m = Euclidean(2)
        ball = make_ball(m, radius=1.0)
        p = ball.project(m.point([2.0, 0.0]))
        np.testing.assert_allclose(p.coords, [1.0, 0.0], atol=1e-12)

    def test_poincare_projection_to_boundary(self):
        # point at geodesic distance 2 along e1 (Euclidean norm tanh(1));
        # its projection onto the unit geodesic ball sits at distance 1,
        # Euclidean norm tanh(1/2)
        m = PoincareBall(2)
        ball = make_ball(m, radius=1.0)
        x = m.point([math.tanh(1.0), 0.0])
        p = ball.project(x)
        np.testing.assert_allclose(p.coords, [math.tanh(0.5), 0.0], atol=1e-12)
        assert m.dist(ball.center, p) == pytest.approx(1.0, abs=1e-12)

    def test_result_on_boundary_and_idempotent(self, manifold, rng):
        ball = make_ball(manifold, radius=0.8)
        outer = make_ball(manifold, radius=2.0)
        for _ in range(50):
            x = outer.sample(rng)
            p = ball.project(x)
            assert ball.contains(p)
            again = ball.project(p)
            assert manifold.dist(again, p) <= 1e-12
            if not ball.contains(x):
                assert manifold.dist(ball.center, p) == pytest.approx(
                    ball.radius, abs=1e-9
                )

    def test_projection_closer_than_any_member(self, manifold, rng):
        ball = make_ball(manifold, radius=0.8)
        outer = make_ball(manifold, radius=2.0)
        for _ in range(30):
            x = outer.sample(rng)
            p = ball.project(x)
            for _ in range(10):
                z = ball.sample(rng)
                assert manifold.dist(p, z) <= manifold.dist(x, z) + 1e-9

    def test_obtuse_angle_at_projection_foot(self, manifold, rng):
        ball = make_ball(manifold, radius=0.8)
        outer = make_ball(manifold, radius=2.5)
        for _ in range(30):
            x = outer.sample(rng)
            if ball.contains(x):
                continue
            p = ball.project(x)
            to_x = manifold.log(p, x)
            for _ in range(10):
                z = ball.sample(rng)
                assert manifold.inner(p, to_x, manifold.log(p, z)) <= 1e-8

    def test_nonexpansive(self, manifold, rng):
        ball = make_ball(manifold, radius=0.8)
        outer = make_ball(manifold, radius=2.5)
        for _ in range(50):
            x, y = outer.sample(rng), outer.sample(rng)
            assert manifold.dist(ball.project(x), ball.project(y)) <= manifold.dist(
                x, y
            ) + 1e-10

    def test_manifold_mismatch(self):
        ball = make_ball(Euclidean(2))
        with pytest.raises(GeometryError):
            ball.project(Euclidean(3).point([0.0, 0.0, 0.0]))


class TestEnlarge:
    def test_zero_margin_same_membership(self, manifold, rng):
        ball = make_ball(manifold)
        enlarged = ball.enlarge(0.0)
        outer = make_ball(manifold, radius=1.5)
        for _ in range(50):
            x = outer.sample(rng)
            assert enlarged.contains(x) == ball.contains(x)

    def test_margin_extends_radius(self):
        m = Euclidean(2)
        ball = make_ball(m, radius=1.0)
        bigger = ball.enlarge(0.5)
        x = m.point([1.4, 0.0])
        assert not ball.contains(x)
        assert bigger.contains(x)

    def test_diameter_reporting(self):
        ball = make_ball(Euclidean(2), radius=1.0)
        assert ball.diameter == 2.0
        assert ball.enlarge(0.5).diameter == 3.0

    def test_negative_margin_rejected(self):
        with pytest.raises(GeometryError):
            make_ball(Euclidean(2)).enlarge(-0.1)

    def test_projection_lands_in_enlarged(self, manifold, rng):
        ball = make_ball(manifold, radius=0.5)
        enlarged = ball.enlarge(0.7)
        outer = make_ball(manifold, radius=3.0)
        for _ in range(30):
            x = outer.sample(rng)
            assert enlarged.contains(enlarged.project(x))


class TestSampling:
    def test_samples_inside(self, manifold, rng):
        ball = make_ball(manifold, radius=0.9)
        for _ in range(100):
            assert ball.contains(ball.sample(rng))
