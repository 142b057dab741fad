"""Online algorithms for dynamic-regret minimization on Hadamard manifolds.

The family consists of

* :class:`OnlineGradientDescent` -- projected Riemannian gradient steps,
* :class:`OptimisticMirrorDescent` -- extra-gradient style iterates with an
  optimism hint, playing in an enlarged set (improper learning),
* four meta/expert ensembles that hedge over a doubling grid of step sizes:
  :class:`HedgeEnsemble` (path-length adaptive), :class:`VariationEnsemble`
  (gradient-variation adaptive), :class:`SmallLossEnsemble` (comparator-loss
  adaptive) and :class:`BestOfBothEnsemble` (the smaller of the two).

All machines follow a two-phase round protocol: ``play()`` returns the point
for round t, ``update(f_t)`` consumes the revealed loss.  One machine
instance is a single-owner state machine; distinct instances share nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .losses import LossFunction
from .manifolds import GeometryError, Point, Tangent, zeta
from .means import frechet_mean, geodesic_mean
from .sets import EnlargedSet, GeodesicBall

__all__ = [
    "StepSizeGrid",
    "grid_path_length",
    "grid_variation",
    "grid_small_loss",
    "grid_best_of_both",
    "hedge_update",
    "optimistic_hedge_weights",
    "ogd_step",
    "omd_iterates",
    "omd_max_step",
    "OnlineGradientDescent",
    "OptimisticMirrorDescent",
    "HedgeEnsemble",
    "VariationEnsemble",
    "SmallLossEnsemble",
    "BestOfBothEnsemble",
    "path_length",
    "GradientVariationProxy",
    "probe_points",
]


# ---------------------------------------------------------------------------
# step-size grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepSizeGrid:
    """Doubling grid eta_i = 2^(i-1) * base, i = 1..count."""

    base: float
    count: int

    def __post_init__(self):
        if self.base <= 0 or self.count < 1:
            raise GeometryError("grid needs a positive base and at least one entry")

    @property
    def etas(self) -> tuple[float, ...]:
        return tuple(self.base * 2.0**i for i in range(self.count))


def _count(arg: float, T: int) -> int:
    # horizon one degenerates to a single expert and a pass-through meta
    if T == 1 or arg <= 1.0:
        return 1
    return int(math.ceil(0.5 * math.log2(arg))) + 1


def grid_path_length(D: float, G: float, zeta_: float, T: int) -> StepSizeGrid:
    """Grid for the path-length adaptive ensemble: base sqrt(D^2/(G^2 zeta T)),
    count ceil(log2(1 + 2T)/2) + 1."""
    _check_positive(D=D, G=G, zeta_=zeta_, T=T)
    return StepSizeGrid(math.sqrt(D * D / (G * G * zeta_ * T)), _count(1.0 + 2.0 * T, T))


def grid_variation(
    D: float, G: float, L: float, zeta_: float, delta: float, T: int
) -> StepSizeGrid:
    """Grid for the gradient-variation ensemble: base sqrt(D^2/(8 zeta G^2 T))."""
    _check_positive(D=D, G=G, L=L, zeta_=zeta_, delta=delta, T=T)
    top = 1.0 + math.sqrt(1.0 + 2.0 * zeta_ * delta * delta * L * L)
    return StepSizeGrid(
        math.sqrt(D * D / (8.0 * zeta_ * G * G * T)),
        _count(8.0 * zeta_ * delta * delta * G * G * T / (top * top), T),
    )


def grid_small_loss(D: float, G: float, L: float, zeta_: float, T: int) -> StepSizeGrid:
    """Grid for the comparator-loss ensemble: base sqrt(D/(2 zeta L G T))."""
    _check_positive(D=D, G=G, L=L, zeta_=zeta_, T=T)
    return StepSizeGrid(
        math.sqrt(D / (2.0 * zeta_ * L * G * T)),
        _count(G * T / (2.0 * L * D * zeta_), T),
    )


def grid_best_of_both(
    D: float, G: float, L: float, zeta_plain: float, zeta_eff: float, delta: float, T: int
) -> tuple[StepSizeGrid, StepSizeGrid]:
    """Union grid: the variation grid (improper-learning distortion constant)
    for the mirror-descent experts and the small-loss grid (base-set
    constant) for the gradient-descent experts."""
    return (
        grid_variation(D, G, L, zeta_eff, delta, T),
        grid_small_loss(D, G, L, zeta_plain, T),
    )


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if not value > 0:
            raise GeometryError(f"{name} must be positive (got {value!r})")


# ---------------------------------------------------------------------------
# weight updates
# ---------------------------------------------------------------------------


def hedge_update(weights: np.ndarray, losses, beta: float) -> np.ndarray:
    """Multiplicative-weights update w_i <- w_i exp(-beta l_i) / Z.

    Computed in log space so large losses cannot underflow the normalizer.
    """
    if beta < 0:
        raise GeometryError("beta must be nonnegative")
    w = np.asarray(weights, dtype=np.float64)
    l = np.asarray(losses, dtype=np.float64)
    if not np.all(np.isfinite(l)):
        raise GeometryError("losses must be finite")
    if beta == 0.0:
        return w.copy()
    logw = np.log(np.maximum(w, 1e-300)) - beta * l
    logw -= logw.max()
    out = np.exp(logw)
    return out / out.sum()


def optimistic_hedge_weights(cumulative, optimism, beta: float) -> np.ndarray:
    """w_i proportional to exp(-beta (sum_s l_{s,i} + m_i)), max-subtracted."""
    if beta <= 0:
        raise GeometryError("beta must be positive")
    z = -beta * (np.asarray(cumulative, dtype=np.float64) + np.asarray(optimism, dtype=np.float64))
    if not np.all(np.isfinite(z)):
        raise GeometryError("losses and optimism must be finite")
    z -= z.max()
    w = np.exp(z)
    return w / w.sum()


def initial_sorted_weights(n: int) -> np.ndarray:
    """w_{1,i} = (N+1) / (i (i+1) N), the prior favoring small step sizes."""
    i = np.arange(1, n + 1, dtype=np.float64)
    return (n + 1.0) / (i * (i + 1.0) * n)


# ---------------------------------------------------------------------------
# expert updates
# ---------------------------------------------------------------------------


def ogd_step(x: Point, g: Tangent, eta: float, dset) -> Point:
    """One projected gradient step: project(exp_x(-eta g))."""
    if g.base is not x:
        raise GeometryError("gradient not anchored at the current iterate")
    m = x.manifold
    return dset.project(m.exp(x, (-eta) * g))


def omd_max_step(G: float, L: float, zeta_eff: float, delta: float, M: float) -> float:
    """Largest admissible step size for the improper mirror-descent iterates:
    delta M / (G + sqrt(G^2 + 2 zeta delta^2 M^2 L^2))."""
    return delta * M / (G + math.sqrt(G * G + 2.0 * zeta_eff * delta * delta * M * M * L * L))


def omd_iterates(
    y: Point,
    m_t: Tangent,
    grad_fn: Callable[[Point], Tangent],
    eta: float,
    dset,
    enlarged: EnlargedSet,
) -> tuple[Point, Point, Point]:
    """One optimistic mirror-descent round.

    Returns (x_prime, x_played, y_next):
        x_prime  = exp_y(-eta m_t)
        x_played = proj_{enlarged}(x_prime)
        y_next   = proj_{dset}(exp_{x_prime}(-eta grad(x_prime) + log_{x_prime}(y)))
    """
    if m_t.base is not y:
        raise GeometryError("optimism not anchored at the anchor point")
    man = y.manifold
    x_prime = man.exp(y, (-eta) * m_t)
    x_played = enlarged.project(x_prime)
    g = grad_fn(x_prime)
    y_next = dset.project(man.exp(x_prime, (-eta) * g + man.log(x_prime, y)))
    return x_prime, x_played, y_next


# ---------------------------------------------------------------------------
# single-expert machines
# ---------------------------------------------------------------------------


class _RoundProtocol:
    _expects_update = False

    def _enter_play(self):
        if self._expects_update:
            raise RuntimeError("update() must be called before the next play()")
        self._expects_update = True

    def _enter_update(self):
        if not self._expects_update:
            raise RuntimeError("play() must be called before update()")
        self._expects_update = False


class OnlineGradientDescent(_RoundProtocol):
    """Projected online gradient descent with a fixed step size."""

    def __init__(self, dset: GeodesicBall, eta: float, x0: Point, G: float, zeta_: float):
        if eta <= 0:
            raise GeometryError("step size must be positive")
        if not dset.contains(x0):
            raise GeometryError("initial point outside the decision set")
        self.dset = dset
        self.eta = eta
        self.x = x0
        self.G = G
        self.zeta = zeta_
        self.rounds = 0

    def play(self) -> Point:
        self._enter_play()
        return self.x

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        self.x = ogd_step(self.x, f.grad(self.x), self.eta, self.dset)
        self.rounds += 1

    def regret_bound(self, P_t: float, t: int) -> float:
        """Pathwise guarantee (D^2 + 2 D P_t)/(2 eta) + eta zeta G^2 t / 2."""
        D = self.dset.diameter
        return (D * D + 2.0 * D * P_t) / (2.0 * self.eta) + self.eta * self.zeta * self.G**2 * t / 2.0


class OptimisticMirrorDescent(_RoundProtocol):
    """Improper-learning mirror descent with an optimism hint.

    With ``optimism="previous_gradient"`` the hint is the previous loss's
    gradient at the current anchor, the extra-gradient choice whose regret
    is governed by the per-round drift |grad f_t(y_t) - M_t|^2.
    """

    def __init__(
        self,
        dset: GeodesicBall,
        eta: float,
        delta: float,
        G: float,
        L: float,
        y0: Point,
        optimism: str = "previous_gradient",
        step_rule: str = "enforce",
    ):
        if delta <= 0:
            raise GeometryError("improper margin delta must be positive")
        if L is None:
            raise GeometryError("mirror-descent experts need a smoothness constant")
        if optimism not in ("previous_gradient", "zero"):
            raise GeometryError(f"unknown optimism rule {optimism!r}")
        if step_rule not in ("enforce", "clamp", "allow"):
            raise GeometryError(f"unknown step rule {step_rule!r}")
        if not dset.contains(y0):
            raise GeometryError("initial anchor outside the decision set")
        self.M = G  # hint norm bound; equals G for the previous-gradient rule
        zeta_eff = zeta(dset.manifold.curvature_lower_bound, dset.diameter + 2.0 * delta * self.M)
        cap = omd_max_step(G, L, zeta_eff, delta, self.M)
        # ensemble grids deliberately overshoot the admissible maximum so a
        # covering expert exists; only that expert's own guarantee needs the
        # condition, hence "allow" for experts inside an ensemble
        self.step_admissible = eta <= cap
        if eta > cap:
            if step_rule == "clamp":
                eta = cap
            elif step_rule == "enforce":
                raise GeometryError(
                    f"step size {eta:.6g} violates the admissible maximum {cap:.6g}"
                )
        self.dset = dset
        self.enlarged = dset.enlarge(delta * self.M)
        self.eta = eta
        self.delta = delta
        self.G = G
        self.L = L
        self.zeta_eff = zeta_eff
        self.optimism = optimism
        self.y = y0
        self.f_prev: Optional[LossFunction] = None
        self.drift_sq_sum = 0.0  # sum_t |grad f_t(y_t) - M_t|^2
        self.rounds = 0
        self._pending: Optional[tuple[Point, Tangent]] = None

    def _hint(self) -> Tangent:
        if self.optimism == "zero" or self.f_prev is None:
            return self.y.manifold.zero(self.y)
        return self.f_prev.grad(self.y)

    def play(self) -> Point:
        self._enter_play()
        m_t = self._hint()
        man = self.y.manifold
        x_prime = man.exp(self.y, (-self.eta) * m_t)
        self._pending = (x_prime, m_t)
        return self.enlarged.project(x_prime)

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        x_prime, m_t = self._pending
        man = self.y.manifold
        drift = f.grad(self.y) + (-1.0) * m_t
        self.drift_sq_sum += man.norm(self.y, drift) ** 2
        g = f.grad(x_prime)
        self.y = self.dset.project(
            man.exp(x_prime, (-self.eta) * g + man.log(x_prime, self.y))
        )
        self.f_prev = f
        self._pending = None
        self.rounds += 1

    def regret_bound(self, P_t: float) -> float:
        """Pathwise guarantee eta zeta drift + (D^2 + 2 D P_t)/(2 eta)."""
        D = self.dset.diameter
        return self.eta * self.zeta_eff * self.drift_sq_sum + (D * D + 2.0 * D * P_t) / (
            2.0 * self.eta
        )


# ---------------------------------------------------------------------------
# ensembles
# ---------------------------------------------------------------------------


def _mean(points: Sequence[Point], w: np.ndarray, rule: str) -> Point:
    if rule == "frechet":
        return frechet_mean(points, w)
    if rule == "geodesic":
        return geodesic_mean(points, w)
    raise GeometryError(f"unknown mean rule {rule!r}")


class _EnsembleBase(_RoundProtocol):
    """Shared bookkeeping: per-expert true losses and composite bounds."""

    experts: list
    expert_plays: list
    play_set: "GeodesicBall | EnlargedSet"

    def _init_books(self, n: int) -> None:
        self.expert_true_cum = np.zeros(n)
        self.meta_true_cum = 0.0
        self.rounds = 0

    def _book_true_losses(self, f: LossFunction, x_t: Point) -> None:
        self.expert_true_cum += np.array([f.value(p) for p in self.expert_plays])
        self.meta_true_cum += f.value(x_t)
        self.rounds += 1

    def meta_bound_per_expert(self, t: int) -> np.ndarray:
        raise NotImplementedError

    def composite_bound(self, comparator_cum: float, t: int) -> float:
        """min_i (realized expert regret_i + meta bound_i): a pathwise upper
        bound on the ensemble's regret."""
        mb = self.meta_bound_per_expert(t)
        if mb is None:
            return math.nan
        return float(np.min(self.expert_true_cum - comparator_cum + mb))

    def confinement_ok(self, x_t: Point) -> bool:
        """Played point inside the play set; mirror-descent anchors inside the base set."""
        if not self.play_set.contains(x_t):
            return False
        for e in self.experts:
            if isinstance(e, OptimisticMirrorDescent) and not e.dset.contains(e.y):
                return False
        return True


class HedgeEnsemble(_EnsembleBase):
    """Hedge over gradient-descent experts with doubled step sizes.

    The meta plays the weighted barycenter of the expert points (geodesic
    averaging available as an alternative), reweights by the true losses and
    broadcasts per-expert gradients.
    """

    def __init__(
        self,
        dset: GeodesicBall,
        grid: StepSizeGrid,
        T: int,
        G: float,
        x0: Point,
        beta: Optional[float] = None,
        mean_rule: str = "frechet",
    ):
        zeta_ = zeta(dset.manifold.curvature_lower_bound, dset.diameter)
        self.dset = dset
        self.play_set = dset
        self.grid = grid
        self.G = G
        self.zeta = zeta_
        self.T = T
        D = dset.diameter
        self.beta = beta if beta is not None else math.sqrt(8.0 / (G * G * D * D * T))
        self.mean_rule = mean_rule
        self.experts = [
            OnlineGradientDescent(dset, eta, x0, G, zeta_) for eta in grid.etas
        ]
        n = len(self.experts)
        self.w1 = initial_sorted_weights(n)
        self.w = self.w1.copy()
        self.expert_plays: list[Point] = []
        self._init_books(n)

    def play(self) -> Point:
        self._enter_play()
        self.expert_plays = [e.play() for e in self.experts]
        if len(self.experts) == 1:
            self._x_t = self.expert_plays[0]
        else:
            self._x_t = _mean(self.expert_plays, self.w, self.mean_rule)
        if not self.dset.contains(self._x_t):
            raise GeometryError("barycenter escaped the decision set")
        return self._x_t

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        losses = np.array([f.value(p) for p in self.expert_plays])
        self._book_true_losses(f, self._x_t)
        self.w = hedge_update(self.w, losses, self.beta)
        for e in self.experts:
            e.update(f)

    def meta_bound_per_expert(self, t: int) -> np.ndarray:
        """Hedge guarantee beta G^2 D^2 t / 8 + ln(1/w_{1,i}) / beta."""
        D = self.dset.diameter
        return self.beta * self.G**2 * D * D * t / 8.0 + np.log(1.0 / self.w1) / self.beta

    def expert_bound(self, i: int, P_t: float, t: int) -> float:
        return self.experts[i].regret_bound(P_t, t)


class _OptimisticMetaBase(_EnsembleBase):
    """Surrogate-loss meta machinery shared by the three adaptive ensembles.

    Weights follow w_{t,i} ~ exp(-beta (sum_{s<t} l_{s,i} + m_{t,i})) with the
    linearized surrogate l_{t,i} = <grad f_t(x_t), log_{x_t} x_{t,i}>.
    """

    def __init__(self, n: int, D: float, beta: Optional[float], beta_cap: Optional[float]):
        self.n = n
        self.D = D
        self.beta_fixed = beta
        self.beta_cap = beta_cap
        self.cum_sur = np.zeros(n)
        self.w_prev = np.full(n, 1.0 / n)
        self.w = np.full(n, 1.0 / n)
        self.sq_inf_sum = 0.0  # sum_t |l_t - m_t|_inf^2
        self.w_l1_sq_sum = 0.0  # sum_{t>=2} |w_t - w_{t-1}|_1^2
        self._adaptive_q = 0.0
        self._init_books(n)

    # shared plumbing -----------------------------------------------------
    def _beta_t(self) -> float:
        if self.beta_fixed is not None:
            return self.beta_fixed
        b = math.sqrt((2.0 + math.log(self.n)) / (1.0 + self._adaptive_q))
        if self.beta_cap is not None:
            b = min(b, self.beta_cap)
        return b

    @property
    def adaptive(self) -> bool:
        return self.beta_fixed is None

    def _weights_for_round(self, optimism: np.ndarray) -> np.ndarray:
        self.beta_last = self._beta_t()
        return optimistic_hedge_weights(self.cum_sur, optimism, self.beta_last)

    def _book_surrogates(self, sur: np.ndarray, optimism: np.ndarray) -> None:
        self.cum_sur = self.cum_sur + sur
        self.sq_inf_sum += float(np.max(np.abs(sur - optimism)) ** 2)
        if self.rounds >= 2:  # the weight-motion term starts at t = 2
            self.w_l1_sq_sum += float(np.abs(self.w - self.w_prev).sum() ** 2)
        self.w_prev = self.w

    def meta_bound_per_expert(self, t: int):
        """Optimistic-hedge guarantee (2 + ln N)/beta + beta sum |l-m|_inf^2
        - (1/4 beta) sum |w_t - w_{t-1}|_1^2; valid for a fixed beta."""
        if self.adaptive:
            return None
        b = self.beta_fixed
        val = (
            (2.0 + math.log(self.n)) / b
            + b * self.sq_inf_sum
            - self.w_l1_sq_sum / (4.0 * b)
        )
        return np.full(self.n, val)

    def _surrogate(self, g: Tangent, x_t: Point, plays: Sequence[Point]) -> np.ndarray:
        man = x_t.manifold
        return np.array([man.inner(x_t, g, man.log(x_t, p)) for p in plays])


def beta_cap_value(D: float, G: float, L: float, zeta_: float) -> float:
    """Learning-rate cap 1/sqrt(12 (D^4 L^2 + D^2 G^2 zeta^2)) under which the
    negative weight-motion term dominates the optimism distortion."""
    return 1.0 / math.sqrt(12.0 * (D**4 * L * L + D * D * G * G * zeta_ * zeta_))


class VariationEnsemble(_OptimisticMetaBase):
    """Optimistic hedge over mirror-descent experts (gradient-variation adaptive).

    The optimism m_{t,i} = <grad f_{t-1}(xbar_t), log_{xbar_t} x_{t,i}> is
    anchored at the barycenter under the previous weights; plays live in the
    enlarged set N_{delta G}.
    """

    def __init__(
        self,
        dset: GeodesicBall,
        grid: StepSizeGrid,
        T: int,
        G: float,
        L: float,
        delta: float,
        y0: Point,
        beta: Optional[float] = None,
    ):
        self.dset = dset
        self.delta = delta
        self.G = G
        self.L = L
        self.grid = grid
        self.T = T
        zeta_eff = zeta(dset.manifold.curvature_lower_bound, dset.diameter + 2.0 * delta * G)
        self.zeta_eff = zeta_eff
        self.experts = [
            OptimisticMirrorDescent(dset, eta, delta, G, L, y0, step_rule="allow")
            for eta in grid.etas
        ]
        self.play_set = self.experts[0].enlarged
        super().__init__(
            len(self.experts),
            self.play_set.diameter,
            beta,
            beta_cap_value(dset.diameter, G, L, zeta_eff),
        )
        self.f_prev: Optional[LossFunction] = None
        self.expert_plays = []

    def play(self) -> Point:
        self._enter_play()
        self.expert_plays = [e.play() for e in self.experts]
        man = self.dset.manifold
        if self.n == 1:
            self.xbar = self._x_t = self.expert_plays[0]
            self.w = np.array([1.0])
            self._m = np.zeros(1)
            return self._x_t
        self.xbar = _mean(self.expert_plays, self.w_prev, "frechet")
        if self.f_prev is None:
            m = np.zeros(self.n)
        else:
            gbar = self.f_prev.grad(self.xbar)
            m = self._surrogate(gbar, self.xbar, self.expert_plays)
        self._m = m
        self.w = self._weights_for_round(m)
        self._x_t = _mean(self.expert_plays, self.w, "frechet")
        if not self.play_set.contains(self._x_t):
            raise GeometryError("barycenter escaped the enlarged set")
        return self._x_t

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        sur = self._surrogate(f.grad(self._x_t), self._x_t, self.expert_plays)
        self._book_true_losses(f, self._x_t)
        self._book_surrogates(sur, self._m)
        if self.adaptive:
            self._adaptive_q += 3.0 * float(np.max(np.abs(sur - self._m)) ** 2)
        for e in self.experts:
            e.update(f)
        self.f_prev = f


class SmallLossEnsemble(_OptimisticMetaBase):
    """Surrogate-loss hedge over gradient-descent experts (small-loss adaptive).

    Zero optimism; expert step sizes are clamped at 1/(2 zeta L), the range
    where the self-bounding property controls the per-step cost.
    """

    def __init__(
        self,
        dset: GeodesicBall,
        grid: StepSizeGrid,
        T: int,
        G: float,
        L: float,
        x0: Point,
        beta: Optional[float] = None,
    ):
        self.dset = dset
        self.G = G
        self.L = L
        self.grid = grid
        self.T = T
        zeta_ = zeta(dset.manifold.curvature_lower_bound, dset.diameter)
        self.zeta = zeta_
        cap = 1.0 / (2.0 * zeta_ * L)
        self.etas = [min(eta, cap) for eta in grid.etas]
        self.experts = [
            OnlineGradientDescent(dset, eta, x0, G, zeta_) for eta in self.etas
        ]
        self.play_set = dset
        super().__init__(len(self.experts), dset.diameter, beta, None)
        self.expert_plays = []

    def play(self) -> Point:
        self._enter_play()
        self.expert_plays = [e.play() for e in self.experts]
        if self.n == 1:
            self._x_t = self.expert_plays[0]
            self.w = np.array([1.0])
        else:
            self.w = self._weights_for_round(np.zeros(self.n))
            self._x_t = _mean(self.expert_plays, self.w, "frechet")
        if not self.dset.contains(self._x_t):
            raise GeometryError("barycenter escaped the decision set")
        return self._x_t

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        sur = self._surrogate(f.grad(self._x_t), self._x_t, self.expert_plays)
        self._book_true_losses(f, self._x_t)
        self._book_surrogates(sur, np.zeros(self.n))
        if self.adaptive:
            # accumulated own loss drives beta_t downward over time
            self._adaptive_q = 2.0 * self.L * self.D**2 * self.meta_true_cum
        for e in self.experts:
            e.update(f)


class BestOfBothEnsemble(_OptimisticMetaBase):
    """Hedged optimism between the variation and small-loss ensembles.

    Experts are the union of both grids; the optimism is gamma_t * m_t^v where
    gamma_t exponentially weights the two optimism candidates by their
    accumulated squared prediction errors d_r(m) = |l_r - m|_2^2 with rate
    tau = 1/(8 N G^2 D^2).
    """

    def __init__(
        self,
        dset: GeodesicBall,
        grid_v: StepSizeGrid,
        grid_s: StepSizeGrid,
        T: int,
        G: float,
        L: float,
        delta: float,
        x0: Point,
        beta: Optional[float] = None,
    ):
        self.dset = dset
        self.delta = delta
        self.G = G
        self.L = L
        self.T = T
        zeta_ = zeta(dset.manifold.curvature_lower_bound, dset.diameter)
        zeta_eff = zeta(dset.manifold.curvature_lower_bound, dset.diameter + 2.0 * delta * G)
        self.zeta = zeta_
        self.zeta_eff = zeta_eff
        cap_s = 1.0 / (2.0 * zeta_ * L)
        omd = [
            OptimisticMirrorDescent(dset, eta, delta, G, L, x0, step_rule="allow")
            for eta in grid_v.etas
        ]
        ogd = [
            OnlineGradientDescent(dset, min(eta, cap_s), x0, G, zeta_)
            for eta in grid_s.etas
        ]
        self.experts = omd + ogd
        self.n_v = len(omd)
        self.play_set = omd[0].enlarged if omd else dset.enlarge(delta * G)
        n = len(self.experts)
        super().__init__(
            n,
            self.play_set.diameter,
            beta,
            beta_cap_value(dset.diameter, G, L, zeta_eff),
        )
        D = self.dset.diameter
        self.tau = 1.0 / (8.0 * n * G * G * D * D)
        self.err_v = 0.0  # sum_r |l_r - m_r^v|_2^2
        self.err_s = 0.0  # sum_r |l_r|_2^2
        self.gamma = 0.5
        self.f_prev: Optional[LossFunction] = None
        self.expert_plays = []

    def play(self) -> Point:
        self._enter_play()
        self.expert_plays = [e.play() for e in self.experts]
        self.xbar = _mean(self.expert_plays, self.w_prev, "frechet")
        if self.f_prev is None:
            mv = np.zeros(self.n)
        else:
            gbar = self.f_prev.grad(self.xbar)
            mv = self._surrogate(gbar, self.xbar, self.expert_plays)
        self.gamma = 1.0 / (1.0 + math.exp(min(self.tau * (self.err_v - self.err_s), 700.0)))
        self._mv = mv
        self._m = self.gamma * mv
        self.w = self._weights_for_round(self._m)
        self._x_t = _mean(self.expert_plays, self.w, "frechet")
        if not self.play_set.contains(self._x_t):
            raise GeometryError("barycenter escaped the enlarged set")
        return self._x_t

    def update(self, f: LossFunction) -> None:
        self._enter_update()
        sur = self._surrogate(f.grad(self._x_t), self._x_t, self.expert_plays)
        self._book_true_losses(f, self._x_t)
        self._book_surrogates(sur, self._m)
        self.err_v += float(np.dot(sur - self._mv, sur - self._mv))
        self.err_s += float(np.dot(sur, sur))
        if self.adaptive:
            qv = 3.0 * self.err_v
            qs = 2.0 * self.L * self.D**2 * self.meta_true_cum
            self._adaptive_q = self.n * min(qv, qs)
        for e in self.experts:
            e.update(f)
        self.f_prev = f


# ---------------------------------------------------------------------------
# regret metrics
# ---------------------------------------------------------------------------


def path_length(points: Sequence[Point]) -> float:
    """Total geodesic distance traveled by a comparator sequence."""
    if len(points) < 2:
        return 0.0
    m = points[0].manifold
    return float(sum(m.dist(a, b) for a, b in zip(points, points[1:])))


def probe_points(dset, count: int = 64, extra: Sequence[Point] = ()) -> list[Point]:
    """Fixed probe set for the gradient-variation proxy: ``count`` points
    sampled from seed 0 (always), plus any caller-supplied points."""
    rng = np.random.default_rng(0)
    return [dset.sample(rng) for _ in range(count)] + list(extra)


class GradientVariationProxy:
    """Lower-bound proxy for sup_x |grad f_{t-1}(x) - grad f_t(x)|^2.

    The supremum is maximized over a fixed probe grid; gradients are cached
    per loss so a horizon-T sweep costs one gradient pass per round.
    """

    def __init__(self, probes: Sequence[Point]):
        if not probes:
            raise GeometryError("need at least one probe point")
        self.probes = list(probes)
        self._cache_key: Optional[int] = None
        self._cache: Optional[list[Tangent]] = None

    def _grads(self, f: LossFunction) -> list[Tangent]:
        if self._cache_key == id(f):
            return self._cache
        g = [f.grad(p) for p in self.probes]
        self._cache_key, self._cache = id(f), g
        return g

    def step(self, f_prev: LossFunction, f_t: LossFunction) -> float:
        g_prev = self._grads(f_prev)
        g_t = [f_t.grad(p) for p in self.probes]
        best = 0.0
        for p, a, b in zip(self.probes, g_prev, g_t):
            diff = a + (-1.0) * b
            best = max(best, p.manifold.norm(p, diff) ** 2)
        self._cache_key, self._cache = id(f_t), g_t
        return best

    def total(self, losses: Sequence[LossFunction]) -> float:
        return float(
            sum(self.step(losses[t - 1], losses[t]) for t in range(1, len(losses)))
        )
