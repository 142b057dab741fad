import math

import numpy as np
import pytest

from georegret import GeometryError
from georegret.game import (
    GameConfig,
    GameState,
    adversary_move,
    baseline_players,
    dynamic_comparator_reduction,
    game_value,
    lift_point,
    lift_to_losses,
    optimal_adversary,
    optimal_player,
    play_game,
    player_move,
    random_adversary,
)


class TestAdversaryMove:
    def test_first_move_unit_budget(self):
        cfg = GameConfig(n=3, T=5, budgets=1.0)
        state = GameState(cfg)
        x = adversary_move(state, np.zeros(3), 1.5)
        assert np.linalg.norm(x) == pytest.approx(1.5, abs=1e-12)
        np.testing.assert_allclose(x, [1.5, 0.0, 0.0])  # lowest-index start

    def test_gram_schmidt_by_hand(self):
        cfg = GameConfig(n=3, T=5, budgets=1.0)
        state = GameState(cfg)
        state.X_sum = np.array([0.0, 1.0, 0.0])
        x = adversary_move(state, np.array([1.0, 0.0, 0.0]), 2.0)
        np.testing.assert_allclose(x, [0.0, 0.0, 2.0], atol=1e-12)

    def test_pythagorean_growth(self):
        cfg = GameConfig(n=5, T=20, budgets=[0.5 + 0.1 * t for t in range(20)])
        state = GameState(cfg)
        rng = np.random.default_rng(3)
        total = 0.0
        for t in range(1, 21):
            y = rng.standard_normal(5)
            y /= np.linalg.norm(y)
            g = cfg.budgets[t - 1]
            x = adversary_move(state, y, g)
            assert abs(float(np.dot(x, y))) <= 1e-10
            assert abs(float(np.dot(x, state.X_sum))) <= 1e-10
            state.X_sum = state.X_sum + x
            total += g * g
            assert np.linalg.norm(state.X_sum) == pytest.approx(
                math.sqrt(total), abs=1e-10
            )

    def test_small_dimension_rejected(self):
        with pytest.raises(GeometryError):
            GameConfig(n=2, T=3, budgets=1.0)


class TestPlayerMove:
    def test_first_round_origin(self):
        cfg = GameConfig(n=3, T=4, budgets=1.0)
        y = player_move(GameState(cfg), 1, cfg.budgets)
        np.testing.assert_allclose(y, np.zeros(3))

    def test_second_round_formula(self):
        T = 9
        cfg = GameConfig(n=3, T=T, budgets=1.0)
        state = GameState(cfg)
        state.X_sum = np.array([1.0, 0.0, 0.0])
        y = player_move(state, 2, cfg.budgets)
        np.testing.assert_allclose(y, [1.0 / math.sqrt(T), 0.0, 0.0], atol=1e-12)

    def test_strictly_inside_radius(self):
        cfg = GameConfig(n=4, T=50, budgets=2.0, D=3.0)
        state = GameState(cfg)
        rng = np.random.default_rng(0)
        for t in range(1, 51):
            y = player_move(state, t, cfg.budgets)
            assert np.linalg.norm(y) < cfg.D / 2.0
            x = rng.standard_normal(4)
            x *= cfg.budgets[t - 1] / np.linalg.norm(x)
            state.X_sum = state.X_sum + x


class TestPlayGame:
    def test_optimal_vs_optimal_reference(self):
        cfg = GameConfig(n=3, T=100, budgets=1.0, D=2.0)
        result = play_game(cfg, optimal_player, optimal_adversary)
        assert result.regret == pytest.approx(10.0, abs=1e-9)
        assert result.play_term == pytest.approx(0.0, abs=1e-10)

    def test_value_formula(self):
        cfg = GameConfig(n=5, T=7, budgets=[1, 2, 3, 4, 5, 6, 7], D=4.0)
        v = game_value(cfg)
        assert v == pytest.approx(2.0 * math.sqrt(sum(g * g for g in range(1, 8))))

    def test_adversary_guarantees_value_against_baselines(self):
        cfg = GameConfig(n=4, T=60, budgets=1.5, D=2.0)
        value = game_value(cfg)
        for name, player in baseline_players(cfg, seed=11).items():
            result = play_game(cfg, player, optimal_adversary)
            assert result.regret >= value - 1e-9, name

    def test_player_never_exceeds_value(self):
        cfg = GameConfig(n=3, T=40, budgets=1.0, D=2.0)
        value = game_value(cfg)
        for seed in range(40):
            result = play_game(cfg, optimal_player, random_adversary(cfg, seed))
            assert result.regret <= value + 1e-9

    def test_out_of_budget_moves_rejected(self):
        cfg = GameConfig(n=3, T=3, budgets=1.0)

        def greedy_adversary(state, y, t):
            return np.array([5.0, 0.0, 0.0])

        with pytest.raises(GeometryError):
            play_game(cfg, optimal_player, greedy_adversary)

        def oversized_player(state, t):
            return np.array([2.0, 0.0, 0.0])

        with pytest.raises(GeometryError):
            play_game(cfg, oversized_player, optimal_adversary)

    def test_sandwich_between_optimal_strategies(self):
        cfg = GameConfig(n=5, T=30, budgets=1.0, D=2.0)
        value = game_value(cfg)
        lower = play_game(cfg, baseline_players(cfg)["zero"], optimal_adversary).regret
        upper = play_game(cfg, optimal_player, random_adversary(cfg, 5)).regret
        assert lower >= value - 1e-9
        assert upper <= value + 1e-9
        meet = play_game(cfg, optimal_player, optimal_adversary).regret
        assert meet == pytest.approx(value, abs=1e-9)


class TestManifoldLift:
    def test_losses_reproduce_tangent_payoffs(self):
        cfg = GameConfig(n=3, T=25, budgets=1.3, D=2.0)
        result = play_game(cfg, optimal_player, optimal_adversary)
        state = GameState(cfg)
        # replay to recover the move sequences
        xs, ys = [], []
        for t in range(1, cfg.T + 1):
            y = optimal_player(state, t)
            x = optimal_adversary(state, y, t)
            xs.append(x)
            ys.append(y)
            state.X.append(x)
            state.Y.append(y)
            state.X_sum = state.X_sum + x
        losses = lift_to_losses(cfg, xs)
        play_term = sum(f.value(lift_point(cfg, y)) for f, y in zip(losses, ys))
        x_total = np.add.reduce(xs)
        best = (cfg.D / 2.0) * x_total / np.linalg.norm(x_total)
        offline = sum(f.value(lift_point(cfg, best)) for f in losses)
        lifted_regret = play_term - offline
        assert lifted_regret == pytest.approx(result.regret, abs=1e-8)


class TestComparatorReduction:
    def test_small_budget_single_segment(self):
        plan = dynamic_comparator_reduction(tau=0.5, T=100, D=2.0, G=1.0)
        assert len(plan.segments) == 1
        assert plan.total_value == pytest.approx(math.sqrt(100.0))

    def test_full_budget_linear_value(self):
        T = 64
        plan = dynamic_comparator_reduction(tau=2.0 * T, T=T, D=2.0, G=1.0)
        assert len(plan.segments) == T
        assert plan.total_value == pytest.approx(float(T))

    def test_segment_path_budget_respected(self):
        for tau in (0.0, 1.0, 3.7, 10.0, 50.0):
            plan = dynamic_comparator_reduction(tau=tau, T=100, D=2.0, G=1.0)
            m = len(plan.segments)
            assert (m - 1) * 2.0 <= max(tau, 2.0)

    def test_padding_when_not_divisible(self):
        plan = dynamic_comparator_reduction(tau=6.0, T=100, D=2.0, G=1.0)
        # three segments, padded horizon 102
        assert len(plan.segments) == 3
        assert plan.padded_T == 102
        assert plan.segments[-1][1] == 102
        assert plan.total_value == pytest.approx(math.sqrt(102 * 3))

    def test_invalid_budget_rejected(self):
        with pytest.raises(GeometryError):
            dynamic_comparator_reduction(tau=-1.0, T=10, D=2.0)
        with pytest.raises(GeometryError):
            dynamic_comparator_reduction(tau=21.0, T=10, D=2.0)

    def test_segment_values_match_static_games(self):
        plan = dynamic_comparator_reduction(tau=8.0, T=80, D=2.0, G=1.0)
        L = plan.segment_length
        cfg = GameConfig(n=3, T=L, budgets=1.0, D=2.0)
        static = play_game(cfg, optimal_player, optimal_adversary).regret
        for v in plan.segment_values:
            assert v == pytest.approx(static, abs=1e-9)
