"""The exactly solvable minimax dynamic-regret game on the diagonal-SPD flat.

All quantities live in tangent coordinates at the identity: diagonal
matrices with the trace inner product, i.e. vectors in R^n under the dot
product.  The player picks Y_t with |Y_t| <= D/2, the adversary picks
X_t with |X_t| <= G_t, the realized regret of a play is

    sum_t -tr(X_t Y_t) + (D/2) |sum_t X_t|,

where the offline comparator term is resolved in closed form.  Optimal play
on both sides meets at the value (D/2) sqrt(sum_t G_t^2).

The manifold lift (horofunction losses on DiagSpd) exists as a cross-check;
see :func:`lift_to_losses`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .losses import LossFunction, busemann_loss
from .manifolds import DiagSpd, GeometryError, Point

__all__ = [
    "GameConfig",
    "GameState",
    "GameResult",
    "adversary_move",
    "player_move",
    "optimal_player",
    "optimal_adversary",
    "play_game",
    "game_value",
    "baseline_players",
    "random_adversary",
    "dynamic_comparator_reduction",
    "lift_to_losses",
]

_BUDGET_TOL = 1e-9


@dataclass
class GameConfig:
    n: int
    T: int
    budgets: Sequence[float]
    D: float = 2.0

    def __post_init__(self):
        if self.n <= 2:
            raise GeometryError("the orthogonal adversary needs n > 2")
        if self.T < 1:
            raise GeometryError("horizon must be at least 1")
        if np.isscalar(self.budgets):
            self.budgets = [float(self.budgets)] * self.T
        self.budgets = [float(g) for g in self.budgets]
        if len(self.budgets) != self.T:
            raise GeometryError("need one gradient budget per round")
        if any(g <= 0 for g in self.budgets):
            raise GeometryError("gradient budgets must be positive")
        if self.D <= 0:
            raise GeometryError("diameter must be positive")


@dataclass
class GameState:
    """Move history; X_sum tracks the running adversary total."""

    config: GameConfig
    X: list = field(default_factory=list)
    Y: list = field(default_factory=list)
    X_sum: np.ndarray = None

    def __post_init__(self):
        if self.X_sum is None:
            self.X_sum = np.zeros(self.config.n)


def adversary_move(state: GameState, y_t: np.ndarray, G_t: float) -> np.ndarray:
    """The orthogonal adversary: |X_t| = G_t with X_t orthogonal to both the
    player's move and the running sum.

    Deterministic tie-breaking: Gram-Schmidt against {y_t, X_sum} starting
    from the lowest-index basis vector outside their span.
    """
    n = state.config.n
    if n <= 2:
        raise GeometryError("the orthogonal adversary needs n > 2")
    basis = []
    for u in (y_t, state.X_sum):
        v = u.astype(np.float64).copy()
        for b in basis:
            v -= np.dot(v, b) * b
        nv = float(np.linalg.norm(v))
        if nv > 1e-12:
            basis.append(v / nv)
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for b in basis:
            v -= np.dot(v, b) * b
        nv = float(np.linalg.norm(v))
        if nv > 1e-9:
            return (G_t / nv) * v
    raise GeometryError("no direction orthogonal to the constraints")


def player_move(state: GameState, t: int, budgets: Sequence[float]) -> np.ndarray:
    """The balanced player: X_sum / sqrt(|X_sum|^2 + sum_{s>=t} G_s^2),
    scaled by D/2.  At t = 1 this is the origin."""
    remaining = float(sum(g * g for g in budgets[t - 1 :]))
    denom = math.sqrt(float(np.dot(state.X_sum, state.X_sum)) + remaining)
    scale = state.config.D / 2.0
    if denom == 0.0:
        return np.zeros(state.config.n)
    return scale * state.X_sum / denom


def optimal_player(state: GameState, t: int) -> np.ndarray:
    return player_move(state, t, state.config.budgets)


def optimal_adversary(state: GameState, y_t: np.ndarray, t: int) -> np.ndarray:
    return adversary_move(state, y_t, state.config.budgets[t - 1])


@dataclass
class GameResult:
    regret: float
    play_term: float  # sum_t -tr(X_t Y_t)
    offline_term: float  # (D/2) |sum X_t|
    trace: list


def play_game(
    config: GameConfig,
    player: Callable[[GameState, int], np.ndarray],
    adversary: Callable[[GameState, np.ndarray, int], np.ndarray],
) -> GameResult:
    """Run one game; moves breaching their budgets are rejected."""
    state = GameState(config)
    play_term = 0.0
    trace = []
    radius = config.D / 2.0
    for t in range(1, config.T + 1):
        y_t = np.asarray(player(state, t), dtype=np.float64)
        if float(np.linalg.norm(y_t)) > radius + _BUDGET_TOL:
            raise GeometryError(f"player move exceeds radius {radius} at round {t}")
        g_t = config.budgets[t - 1]
        x_t = np.asarray(adversary(state, y_t, t), dtype=np.float64)
        if float(np.linalg.norm(x_t)) > g_t + _BUDGET_TOL:
            raise GeometryError(f"adversary move exceeds budget {g_t} at round {t}")
        loss = -float(np.dot(x_t, y_t))
        play_term += loss
        state.X.append(x_t)
        state.Y.append(y_t)
        state.X_sum = state.X_sum + x_t
        trace.append((t, loss, float(np.linalg.norm(state.X_sum))))
    offline_term = radius * float(np.linalg.norm(state.X_sum))
    return GameResult(play_term + offline_term, play_term, offline_term, trace)


def game_value(config: GameConfig) -> float:
    """(D/2) sqrt(sum_t G_t^2), the exact minimax value."""
    return config.D / 2.0 * math.sqrt(sum(g * g for g in config.budgets))


def baseline_players(config: GameConfig, seed: int = 0) -> dict:
    """Suboptimal players the orthogonal adversary should beat."""
    radius = config.D / 2.0
    rng = np.random.default_rng(seed)
    fixed_dir = rng.standard_normal(config.n)
    fixed_dir *= radius / np.linalg.norm(fixed_dir)
    random_dirs = rng.standard_normal((config.T + 1, config.n))

    def zero(state, t):
        return np.zeros(config.n)

    def lazy(state, t):
        return fixed_dir

    def follow_the_leader(state, t):
        n = float(np.linalg.norm(state.X_sum))
        return np.zeros(config.n) if n == 0 else radius * state.X_sum / n

    def random_unit(state, t):
        v = random_dirs[t]
        return radius * v / float(np.linalg.norm(v))

    def timid(state, t):
        return 0.5 * optimal_player(state, t)

    return {
        "zero": zero,
        "lazy": lazy,
        "follow_the_leader": follow_the_leader,
        "random_unit": random_unit,
        "timid": timid,
    }


def random_adversary(config: GameConfig, seed: int) -> Callable:
    """Budget-saturating adversary with seeded random directions."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((config.T + 1, config.n))

    def move(state, y_t, t):
        v = dirs[t]
        return config.budgets[t - 1] * v / float(np.linalg.norm(v))

    return move


@dataclass
class SegmentPlan:
    """Piecewise-constant comparator reduction for the dynamic lower bound."""

    segments: list  # (start, end) inclusive, 1-based
    segment_length: int
    padded_T: int
    segment_values: list
    total_value: float
    path_budget: float


def dynamic_comparator_reduction(tau: float, T: int, D: float, G: float = 1.0) -> SegmentPlan:
    """Partition [1..T] into ceil(tau/D) segments of equal length; each hosts
    one static game, and the combined value is (G D / 2) sqrt(T ceil(tau/D)).

    The horizon is padded up to the next multiple of the segment count when
    it does not divide T.
    """
    if tau < 0 or tau > T * D:
        raise GeometryError("path budget must lie in [0, T*D]")
    m = max(1, math.ceil(tau / D))
    padded_T = T if T % m == 0 else T + (m - T % m)
    L = padded_T // m
    segments = [((i * L) + 1, (i + 1) * L) for i in range(m)]
    seg_value = (G * D / 2.0) * math.sqrt(L)
    return SegmentPlan(
        segments=segments,
        segment_length=L,
        padded_T=padded_T,
        segment_values=[seg_value] * m,
        total_value=(G * D / 2.0) * math.sqrt(padded_T * m),
        path_budget=tau,
    )


def lift_to_losses(config: GameConfig, xs: Sequence[np.ndarray]) -> list[LossFunction]:
    """Lift adversary moves to horofunction losses on DiagSpd: the move X_t
    becomes the loss p -> -tr(X_t log p), so that evaluating at
    Exp_I(Y) reproduces -tr(X_t Y) exactly."""
    man = DiagSpd(config.n)
    identity = man.identity()
    out = []
    for x in xs:
        g = float(np.linalg.norm(x))
        direction = man.tangent(identity, np.diag(x / g))
        out.append(busemann_loss(direction, scale=g))
    return out


def lift_point(config: GameConfig, y: np.ndarray) -> Point:
    """Exp_I(Y) for a tangent move Y."""
    man = DiagSpd(config.n)
    identity = man.identity()
    return man.exp(identity, man.tangent(identity, np.diag(y)))
