import math

import numpy as np
import pytest

from georegret import GeometryError
from georegret.algorithms import GradientVariationProxy, path_length, probe_points
from georegret.scenarios import (
    audit_scenario,
    gen_alternating,
    gen_drifting_mean,
    gen_custom,
    scenario_from_config,
)


class TestDriftingMean:
    def test_comparator_is_origin_zero_path(self):
        scen = gen_drifting_mean(50)
        assert path_length(scen.comparators) == 0.0
        for u in scen.comparators:
            assert np.all(u.coords == 0.0)

    def test_loss_at_origin_closed_form(self):
        # all 2d anchors sit at distance 2 arctanh(t/2T) from the origin, so
        # f_t(0) = arcosh((1 + r^2)/(1 - r^2))^2 with r = t/2T
        T = 40
        scen = gen_drifting_mean(T)
        for t in (1, T // 2, T):
            r = t / (2.0 * T)
            expected = math.acosh((1 + r * r) / (1 - r * r)) ** 2
            assert scen.losses[t - 1].value(scen.comparators[0]) == pytest.approx(
                expected, abs=1e-10
            )

    def test_final_round_value_is_log3_squared(self):
        scen = gen_drifting_mean(64)
        assert scen.losses[-1].value(scen.comparators[0]) == pytest.approx(
            math.log(3.0) ** 2, abs=1e-10
        )

    def test_anchors_inside_decision_set(self):
        scen = gen_drifting_mean(20, dim=3)
        m = scen.manifold
        for f in scen.losses:
            for a in f.params["anchors"]:
                assert scen.decision_set.contains(m.point(np.asarray(a)))

    def test_variation_decays_like_one_over_t_squared(self):
        # per-step gradient variation shrinks quadratically with the horizon
        v200 = _total_variation(gen_drifting_mean(200))
        v400 = _total_variation(gen_drifting_mean(400))
        per_step_ratio = (v200 / 200.0) / (v400 / 400.0)
        assert per_step_ratio >= 3.5  # O(1/T^2) predicts 4

    def test_audit_passes(self):
        audit_scenario(gen_drifting_mean(30))

    def test_rejects_bad_arguments(self):
        with pytest.raises(GeometryError):
            gen_drifting_mean(1)
        with pytest.raises(GeometryError):
            gen_drifting_mean(10, dim=1)


def _total_variation(scen):
    probes = probe_points(scen.decision_set, 32)
    return GradientVariationProxy(probes).total(list(scen.losses))


class TestAlternating:
    def test_anchor_clouds_alternate(self):
        scen = gen_alternating(20, n=3, alpha=0.5, seed=4)
        m = scen.manifold
        a_odd = np.asarray(scen.losses[0].params["anchors"])
        a_even = np.asarray(scen.losses[1].params["anchors"])
        np.testing.assert_allclose(a_odd, -a_even, atol=1e-15)
        a_next = np.asarray(scen.losses[2].params["anchors"])
        np.testing.assert_allclose(a_odd, a_next, atol=1e-15)

    def test_comparators_inside_anchor_cloud(self):
        T = 100
        scen = gen_alternating(T, n=4, alpha=0.5, seed=7)
        m = scen.manifold
        pole = m.point(np.array([0.5, 0.0]))
        r = T ** (-0.5)
        for t, u in enumerate(scen.comparators, start=1):
            center = pole if t % 2 == 1 else m.point(-pole.coords)
            assert m.dist(center, u) <= r + 1e-9

    def test_comparator_losses_stay_small(self):
        # F_T <= T (2 r_cloud)^2: the comparator sits in the same ball as the
        # anchors, so each distance is at most the cloud diameter
        T, alpha = 400, 0.5
        scen = gen_alternating(T, n=4, alpha=alpha, seed=3)
        F_T = sum(f.value(u) for f, u in zip(scen.losses, scen.comparators))
        assert F_T <= T * (2.0 * T ** (-alpha)) ** 2 + 1e-9

    def test_gradient_variation_stays_constant_scale(self):
        # consecutive-round gradient difference at the origin is bounded away
        # from zero: the anchor flip moves gradients by a constant
        scen = gen_alternating(100, n=4, alpha=0.5, seed=3)
        m = scen.manifold
        origin = m.point(np.zeros(2))
        g1 = scen.losses[0].grad(origin)
        g2 = scen.losses[1].grad(origin)
        diff = m.norm(origin, g1 + (-1.0) * g2)
        assert diff**2 >= 16.0 * (0.5 - 100 ** (-0.5)) ** 2 / (1.5) ** 2

    def test_small_loss_versus_variation_scale_separation(self):
        T = 400
        scen = gen_alternating(T, n=4, alpha=0.5, seed=0)
        F_T = sum(f.value(u) for f, u in zip(scen.losses, scen.comparators))
        V_T = _total_variation(scen)
        assert V_T > 10.0 * F_T  # variation is the dominant quantity here
        drift = gen_drifting_mean(T)
        F_d = sum(f.value(u) for f, u in zip(drift.losses, drift.comparators))
        V_d = _total_variation(drift)
        assert F_d > 10.0 * V_d  # and the ordering flips on the drift scenario

    def test_audit_passes(self):
        audit_scenario(gen_alternating(30, seed=2))


class TestCustomScenario:
    def test_build_and_run_squared_distance(self):
        cfg = {
            "scenario": "custom",
            "manifold": {"kind": "euclidean", "dim": 2},
            "decision_set": {"center": [0.0, 0.0], "radius": 1.0},
            "losses": [
                {"name": "squared_distance", "anchors": [[0.5, 0.0]], "weights": [1.0]},
                {"name": "squared_distance", "anchors": [[0.0, 0.5]], "weights": [1.0]},
            ],
            "comparator": {"rule": "fixed_point", "point": [0.0, 0.0]},
        }
        scen = scenario_from_config(cfg)
        assert scen.T == 2
        assert scen.losses[0].value(scen.comparators[0]) == pytest.approx(0.25)

    def test_comparator_rules(self):
        losses = [
            {"name": "squared_distance", "anchors": [[0.3, 0.0]]},
            {"name": "squared_distance", "anchors": [[-0.3, 0.0]]},
            {"name": "squared_distance", "anchors": [[0.3, 0.0]]},
            {"name": "squared_distance", "anchors": [[-0.3, 0.0]]},
        ]
        base = {
            "scenario": "custom",
            "manifold": {"kind": "euclidean", "dim": 2},
            "decision_set": {"center": [0.0, 0.0], "radius": 1.0},
            "losses": losses,
        }
        per_round = scenario_from_config({**base, "comparator": {"rule": "offline_minimizer_per_round"}})
        assert per_round.comparators[0].coords[0] == pytest.approx(0.3)
        assert path_length(per_round.comparators) == pytest.approx(3 * 0.6)
        piecewise = scenario_from_config(
            {**base, "comparator": {"rule": "piecewise_constant", "segments": 2}}
        )
        assert path_length(piecewise.comparators) == pytest.approx(0.0, abs=1e-12)

    def test_unknown_loss_rejected(self):
        with pytest.raises(GeometryError):
            gen_custom(
                {"kind": "euclidean", "dim": 2},
                {"center": [0.0, 0.0], "radius": 1.0},
                [{"name": "mystery"}],
                {"rule": "fixed_point", "point": [0.0, 0.0]},
            )

    def test_unknown_kind_rejected(self):
        with pytest.raises(GeometryError):
            scenario_from_config({"scenario": "nope", "T": 5})
