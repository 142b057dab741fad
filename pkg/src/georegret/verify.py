"""Acceptance criteria, runnable from the CLI (``georegret verify``) and from
the test suite.  Each criterion returns a :class:`CriterionResult`; tolerances
are pinned here and nowhere else.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import game as game_mod
from .algorithms import (
    OnlineGradientDescent,
    OptimisticMirrorDescent,
    omd_max_step,
    optimistic_hedge_weights,
)
from .harness import RunConfig, build_algorithm, run
from .losses import busemann_loss, finite_difference_check, squared_distance_loss
from .manifolds import DiagSpd, Euclidean, PoincareBall, SpdAffine, zeta
from .means import frechet_mean, geodesic_mean
from .scenarios import gen_alternating, gen_drifting_mean
from .sets import GeodesicBall


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _manifolds():
    return [Euclidean(3), PoincareBall(3), SpdAffine(3), DiagSpd(3)]


def _ball(manifold, radius=1.0):
    if manifold.kind in ("euclidean", "poincare_ball"):
        center = manifold.point(np.zeros(manifold.dim))
    else:
        center = manifold.point(np.eye(manifold.n))
    return GeodesicBall(center, radius)


def _unit_tangent(manifold, x, rng):
    raw = rng.standard_normal(x.coords.reshape(-1).shape[0])
    if x.coords.ndim == 2:
        a = raw.reshape(x.coords.shape)
        a = np.diag(np.diag(a)) if manifold.kind == "diag_spd" else 0.5 * (a + a.T)
    else:
        a = raw
    v = manifold.tangent(x, a)
    return (1.0 / manifold.norm(x, v)) * v


# ---------------------------------------------------------------------------
# criteria 1-4: geometry, comparison laws, losses, means
# ---------------------------------------------------------------------------


def criterion_geometry() -> CriterionResult:
    """exp/log round trip, transport isometry and constant-speed geodesics
    over 1000 seeded cases per manifold."""
    t0 = time.time()
    worst = {"roundtrip": 0.0, "isometry": 0.0, "speed": 0.0}
    for m in _manifolds():
        tol = 1e-6 if m.kind == "spd_affine" else 1e-8
        ball = _ball(m)
        rng = np.random.default_rng(11)
        for _ in range(1000):
            x, y = ball.sample(rng), ball.sample(rng)
            v = m.log(x, y)
            rt = m.dist(m.exp(x, v), y)
            worst["roundtrip"] = max(worst["roundtrip"], rt / tol * 1e-8)
            if rt > tol:
                return CriterionResult(
                    "geometry", False, f"round trip {rt:.2e} on {m.kind}", time.time() - t0
                )
            u = m.log(x, ball.sample(rng))
            w = m.log(x, ball.sample(rng))
            tu, tw = m.transport(x, y, u), m.transport(x, y, w)
            iso = abs(m.inner(y, tu, tw) - m.inner(x, u, w))
            worst["isometry"] = max(worst["isometry"], iso)
            if iso > 1e-8 * max(1.0, abs(m.inner(x, u, w))):
                return CriterionResult(
                    "geometry", False, f"isometry error {iso:.2e} on {m.kind}", time.time() - t0
                )
            nv = m.norm(x, v)
            for t in (0.25, 0.7):
                sp = abs(m.dist(x, m.exp(x, t * v)) - t * nv)
                worst["speed"] = max(worst["speed"], sp)
                if sp > tol:
                    return CriterionResult(
                        "geometry", False, f"speed error {sp:.2e} on {m.kind}", time.time() - t0
                    )
    return CriterionResult(
        "geometry",
        True,
        f"4 manifolds x 1000 cases; worst isometry {worst['isometry']:.1e}",
        time.time() - t0,
    )


def criterion_comparison_laws() -> CriterionResult:
    """Both triangle comparison inequalities on 1000 random geodesic
    triangles per manifold, 1e-8 slack."""
    t0 = time.time()
    checked = 0
    for m in _manifolds():
        ball = _ball(m)
        zt = zeta(m.curvature_lower_bound, ball.diameter)
        rng = np.random.default_rng(12)
        for _ in range(1000):
            x, y, z = ball.sample(rng), ball.sample(rng), ball.sample(rng)
            b, c = m.dist(x, y), m.dist(x, z)
            if b < 1e-9 or c < 1e-9:
                continue
            a = m.dist(y, z)
            cos_a = m.inner(x, m.log(x, y), m.log(x, z)) / (b * c)
            if a**2 > zt * b**2 + c**2 - 2 * b * c * cos_a + 1e-8:
                return CriterionResult(
                    "comparison-laws",
                    False,
                    f"distorted law violated on {m.kind}",
                    time.time() - t0,
                )
            if a**2 < b**2 + c**2 - 2 * b * c * cos_a - 1e-8:
                return CriterionResult(
                    "comparison-laws",
                    False,
                    f"flat lower law violated on {m.kind}",
                    time.time() - t0,
                )
            checked += 1
    return CriterionResult(
        "comparison-laws", True, f"{checked} triangles checked", time.time() - t0
    )


def criterion_losses() -> CriterionResult:
    """Finite-difference gradients, convexity/smoothness inequalities and the
    self-bounding property on 1000 samples."""
    t0 = time.time()
    rng = np.random.default_rng(13)
    for m in _manifolds():
        ball = _ball(m, radius=0.9)
        anchors = [ball.sample(rng) for _ in range(3)]
        f = squared_distance_loss(anchors, [0.5, 0.3, 0.2], ball)
        for _ in range(150):
            x = ball.sample(rng)
            v = _unit_tangent(m, x, rng)
            if finite_difference_check(f, x, v) > 1e-5 * (1.0 + f.G):
                return CriterionResult(
                    "losses", False, f"gradient mismatch on {m.kind}", time.time() - t0
                )
        for _ in range(1000):
            x, y = ball.sample(rng), ball.sample(rng)
            lin = f.value(x) + m.inner(x, f.grad(x), m.log(x, y))
            if f.value(y) < lin - 1e-8:
                return CriterionResult("losses", False, f"convexity on {m.kind}", time.time() - t0)
            if f.value(y) > lin + 0.5 * f.L * m.dist(x, y) ** 2 + 1e-8:
                return CriterionResult("losses", False, f"smoothness on {m.kind}", time.time() - t0)
        for _ in range(1000):
            x = ball.sample(rng)
            if m.norm(x, f.grad(x)) ** 2 > 2.0 * f.L * f.value(x) + 1e-8:
                return CriterionResult(
                    "losses", False, f"self-bounding on {m.kind}", time.time() - t0
                )
    dm = DiagSpd(3)
    ball = _ball(dm, radius=1.0)
    xd = rng.standard_normal(3)
    xd /= np.linalg.norm(xd)
    horo = busemann_loss(dm.tangent(dm.identity(), np.diag(xd)), scale=1.0)
    for _ in range(150):
        x = ball.sample(rng)
        v = _unit_tangent(dm, x, rng)
        if finite_difference_check(horo, x, v) > 1e-5 * (1.0 + horo.G):
            return CriterionResult("losses", False, "horofunction gradient", time.time() - t0)
        if dm.norm(x, horo.grad(x)) > horo.G + 1e-8:
            return CriterionResult("losses", False, "horofunction norm", time.time() - t0)
    return CriterionResult(
        "losses", True, "gradients, convexity, smoothness, self-bounding", time.time() - t0
    )


def criterion_means() -> CriterionResult:
    """Barycenter stationarity, two-point geodesic agreement, Jensen and the
    sensitivity inequality on 500 random instances."""
    t0 = time.time()
    tol = 1e-9
    for m in _manifolds():
        ball = _ball(m)
        rng = np.random.default_rng(14)
        for _ in range(40):
            n = int(rng.integers(2, 6))
            pts = [ball.sample(rng) for _ in range(n)]
            w = rng.uniform(0.05, 1.0, size=n)
            w /= w.sum()
            mean = frechet_mean(pts, w, tol=tol)
            g = m.zero(mean)
            for p, wi in zip(pts, w):
                g = g + wi * m.log(mean, p)
            if m.norm(mean, g) > tol:
                return CriterionResult("means", False, f"stationarity on {m.kind}", time.time() - t0)
        for _ in range(40):
            x, y = ball.sample(rng), ball.sample(rng)
            t = float(rng.uniform(0.1, 0.9))
            mean = frechet_mean([x, y], [1 - t, t], tol=1e-12)
            if m.dist(mean, m.exp(x, t * m.log(x, y))) > 1e-8:
                return CriterionResult("means", False, f"two-point on {m.kind}", time.time() - t0)
        probe = squared_distance_loss([ball.sample(rng)], [1.0], _ball(m, 1.5))
        for _ in range(20):
            pts = [ball.sample(rng) for _ in range(4)]
            w = rng.uniform(0.05, 1.0, size=4)
            w /= w.sum()
            for mean in (frechet_mean(pts, w), geodesic_mean(pts, w)):
                if probe.value(mean) > sum(wi * probe.value(p) for wi, p in zip(w, pts)) + 1e-8:
                    return CriterionResult("means", False, f"jensen on {m.kind}", time.time() - t0)
    m = PoincareBall(3)
    ball = _ball(m)
    rng = np.random.default_rng(15)
    for _ in range(500):
        n = int(rng.integers(2, 6))
        xs = [ball.sample(rng) for _ in range(n)]
        ys = [ball.sample(rng) for _ in range(n)]
        a = rng.uniform(0.05, 1.0, size=n)
        a /= a.sum()
        b = rng.uniform(0.05, 1.0, size=n)
        b /= b.sum()
        lhs = m.dist(frechet_mean(xs, a, tol=tol), frechet_mean(ys, b, tol=tol))
        rhs = (
            sum(ai * m.dist(x, y) for ai, x, y in zip(a, xs, ys))
            + ball.diameter * float(np.abs(a - b).sum())
            + 10 * tol
        )
        if lhs > rhs:
            return CriterionResult("means", False, "sensitivity bound", time.time() - t0)
    return CriterionResult(
        "means", True, "stationarity, geodesic agreement, jensen, sensitivity", time.time() - t0
    )


# ---------------------------------------------------------------------------
# criterion 5: pathwise regret guarantees
# ---------------------------------------------------------------------------


def _comparator_variants(scenario, rng):
    yield scenario.comparators
    yield [scenario.decision_set.center] * scenario.T  # fixed point
    walk = [scenario.decision_set.sample(rng)]
    m = scenario.manifold
    for _ in range(scenario.T - 1):
        step = m.tangent(walk[-1], 0.02 * _unit_tangent(m, walk[-1], rng).coords)
        walk.append(scenario.decision_set.project(m.exp(walk[-1], step)))
    yield walk


def criterion_bounds() -> CriterionResult:
    """Pathwise guarantees with oracle tuning: the gradient-descent bound on
    every run, the meta bound for every ensemble expert, the mirror-descent
    bound with stored drift sums, and the optimistic-weights inequality on
    200 random sequences.  Zero violations allowed."""
    t0 = time.time()
    scenarios = [gen_drifting_mean(300, seed=0), gen_alternating(300, seed=1)]
    rng = np.random.default_rng(16)

    for scen in scenarios:
        m = scen.manifold
        dset = scen.decision_set
        D = dset.diameter
        zt = zeta(m.curvature_lower_bound, D)
        eta_star = math.sqrt(D * D / (zt * scen.G**2 * scen.T))
        for eta in (eta_star, eta_star / 4, eta_star * 4):
            for comparators in _comparator_variants(scen, rng):
                algo = OnlineGradientDescent(dset, eta, dset.sample(rng), scen.G, zt)
                regret, P_t, prev = 0.0, 0.0, None
                for t, f in enumerate(scen.losses, start=1):
                    x = algo.play()
                    u = comparators[t - 1]
                    regret += f.value(x) - f.value(u)
                    if prev is not None:
                        P_t += m.dist(prev, u)
                    prev = u
                    algo.update(f)
                    bound = algo.regret_bound(P_t, t)
                    if regret > bound + 1e-8 * (1.0 + abs(bound)):
                        return CriterionResult(
                            "bounds",
                            False,
                            f"gradient-descent bound violated on {scen.kind} (eta={eta:.3g}, t={t})",
                            time.time() - t0,
                        )

    for scen in scenarios:
        for seed in (0, 1, 2):
            cfg = RunConfig(scenario={}, algorithm="hedge")
            algo = build_algorithm(scen, cfg, np.random.default_rng(seed))
            comp_cum = 0.0
            for f, u in zip(scen.losses, scen.comparators):
                algo.play()
                comp_cum += f.value(u)
                algo.update(f)
            gaps = algo.meta_true_cum - algo.expert_true_cum
            bounds = algo.meta_bound_per_expert(scen.T)
            if not np.all(gaps <= bounds + 1e-7):
                return CriterionResult(
                    "bounds", False, f"hedge meta bound violated on {scen.kind}", time.time() - t0
                )

    for scen in scenarios:
        m = scen.manifold
        dset = scen.decision_set
        delta = scen.delta
        zeff = zeta(m.curvature_lower_bound, dset.diameter + 2 * delta * scen.G)
        cap = omd_max_step(scen.G, scen.L, zeff, delta, scen.G)
        for eta in (cap, cap / 4, cap / 16):
            for comparators in _comparator_variants(scen, rng):
                algo = OptimisticMirrorDescent(
                    dset, eta, delta, scen.G, scen.L, dset.sample(rng)
                )
                regret, P_t, prev = 0.0, 0.0, None
                for t, f in enumerate(scen.losses, start=1):
                    x = algo.play()
                    u = comparators[t - 1]
                    regret += f.value(x) - f.value(u)
                    if prev is not None:
                        P_t += m.dist(prev, u)
                    prev = u
                    algo.update(f)
                    bound = algo.regret_bound(P_t)
                    if regret > bound + 1e-8 * (1.0 + abs(bound)):
                        return CriterionResult(
                            "bounds",
                            False,
                            f"mirror-descent bound violated on {scen.kind} (eta={eta:.3g}, t={t})",
                            time.time() - t0,
                        )

    rng2 = np.random.default_rng(17)
    for case in range(200):
        N = int(rng2.integers(2, 9))
        T = int(rng2.integers(2, 501))
        beta = float(rng2.uniform(0.02, 2.0))
        scale = float(rng2.uniform(0.1, 3.0))
        losses = rng2.uniform(-scale, scale, size=(T, N))
        hints = rng2.uniform(-scale, scale, size=(T, N))
        cum = np.zeros(N)
        lhs = np.zeros(N)
        neg = 0.0
        sq = 0.0
        w_prev = None
        for t in range(T):
            w = optimistic_hedge_weights(cum, hints[t], beta)
            lhs += float(np.dot(w, losses[t])) - losses[t]
            sq += float(np.max(np.abs(losses[t] - hints[t])) ** 2)
            if w_prev is not None:
                neg += float(np.abs(w - w_prev).sum() ** 2)
            w_prev = w
            cum += losses[t]
        rhs = (2.0 + math.log(N)) / beta + beta * sq - neg / (4.0 * beta)
        if np.any(lhs > rhs + 1e-9 * max(1.0, abs(rhs))):
            return CriterionResult(
                "bounds", False, f"optimistic-weights inequality violated (case {case})",
                time.time() - t0,
            )
    return CriterionResult(
        "bounds",
        True,
        "gradient-descent, meta, mirror-descent and weight inequalities: zero violations",
        time.time() - t0,
    )


# ---------------------------------------------------------------------------
# criterion 6: minimax game
# ---------------------------------------------------------------------------


def criterion_game() -> CriterionResult:
    """Optimal-vs-optimal matches the closed form for 20 seeded configs; the
    optimal adversary and player guarantee the value against baselines."""
    t0 = time.time()
    rng = np.random.default_rng(18)
    configs = []
    for i in range(20):
        n = int(rng.choice([3, 5]))
        T = int(rng.choice([10, 100, 1000]))
        kind = i % 3
        if kind == 0:
            budgets = float(rng.uniform(0.5, 2.0))
        elif kind == 1:
            budgets = list(rng.uniform(0.5, 2.0, size=T))
        else:
            budgets = [0.5 + 1.5 * t / T for t in range(T)]
        configs.append(game_mod.GameConfig(n=n, T=T, budgets=budgets, D=float(rng.uniform(1.0, 4.0))))
    for cfg in configs:
        value = game_mod.game_value(cfg)
        res = game_mod.play_game(cfg, game_mod.optimal_player, game_mod.optimal_adversary)
        if abs(res.regret - value) > 1e-9 * max(1.0, value):
            return CriterionResult(
                "game", False, f"optimal-vs-optimal off by {abs(res.regret - value):.2e}",
                time.time() - t0,
            )
    cfg = game_mod.GameConfig(n=4, T=100, budgets=1.0, D=2.0)
    value = game_mod.game_value(cfg)
    for name, player in game_mod.baseline_players(cfg, seed=5).items():
        res = game_mod.play_game(cfg, player, game_mod.optimal_adversary)
        if res.regret < value - 1e-9:
            return CriterionResult(
                "game", False, f"adversary under value against {name}", time.time() - t0
            )
    for seed in range(100):
        res = game_mod.play_game(cfg, game_mod.optimal_player, game_mod.random_adversary(cfg, seed))
        if res.regret > value + 1e-9:
            return CriterionResult(
                "game", False, f"player above value (seed {seed})", time.time() - t0
            )
    return CriterionResult(
        "game", True, "20 configs exact; 5 baselines and 100 random adversaries bounded",
        time.time() - t0,
    )


# ---------------------------------------------------------------------------
# criteria 7-9: scenario-level behavior (runs shared between criteria)
# ---------------------------------------------------------------------------

_RUN_CACHE: dict = {}


def _cached_run(scenario_kind: str, algorithm: str, T: int, seed: int) -> dict:
    key = (scenario_kind, algorithm, T, seed)
    if key not in _RUN_CACHE:
        cfg = RunConfig(
            scenario={"scenario": scenario_kind, "T": T, "seed": seed},
            algorithm=algorithm,
            v_proxy="off",
        )
        _RUN_CACHE[key] = run(cfg)[0].summary
    return _RUN_CACHE[key]


def criterion_sublinearity() -> CriterionResult:
    """Standard-ensemble regret grows no faster than the square root of the
    horizon on the drifting scenario, and stays within every expert's
    realized regret plus the meta guarantee."""
    t0 = time.time()
    seeds = [0, 1, 2, 3, 4]
    means = {}
    for T in (500, 1000, 2000):
        vals = []
        for s in seeds:
            scen = gen_drifting_mean(T, seed=s)
            algo = build_algorithm(
                scen, RunConfig(scenario={}, algorithm="hedge"), np.random.default_rng(s)
            )
            comp_cum = 0.0
            regret = 0.0
            for f, u in zip(scen.losses, scen.comparators):
                x = algo.play()
                regret += f.value(x) - f.value(u)
                comp_cum += f.value(u)
                algo.update(f)
            vals.append(regret)
            gaps = algo.meta_true_cum - algo.expert_true_cum
            bounds = algo.meta_bound_per_expert(T)
            if not np.all(gaps <= bounds + 1e-7):
                return CriterionResult(
                    "sublinearity",
                    False,
                    f"meta bound violated (T={T}, seed={s})",
                    time.time() - t0,
                )
        means[T] = float(np.mean(vals))
    r1 = means[1000] / means[500]
    r2 = means[2000] / means[1000]
    ok = r1 <= 1.5 and r2 <= 1.5
    return CriterionResult(
        "sublinearity",
        ok,
        f"regret ratios {r1:.3f}, {r2:.3f} (<= 1.5); every-expert meta bound held",
        time.time() - t0,
    )


def criterion_adaptivity_ordering() -> CriterionResult:
    """At T=2000 (5 seeds): the variation machine wins the drifting scenario,
    the small-loss machine wins the alternating scenario, and the combined
    machine stays within 1.3x of the better one on both."""
    t0 = time.time()
    T, seeds = 2000, [0, 1, 2, 3, 4]
    means = {}
    for scen_kind in ("drifting_mean", "alternating"):
        for algo in ("variation", "small_loss", "best_of_both"):
            vals = [_cached_run(scen_kind, algo, T, s)["final_regret"] for s in seeds]
            means[(scen_kind, algo)] = float(np.mean(vals))
    drift_ok = means[("drifting_mean", "variation")] < means[("drifting_mean", "small_loss")]
    alt_ok = means[("alternating", "small_loss")] < means[("alternating", "variation")]
    ratios = []
    for kind in ("drifting_mean", "alternating"):
        better = min(means[(kind, "variation")], means[(kind, "small_loss")])
        ratios.append(means[(kind, "best_of_both")] / better)
    bob_ok = all(r <= 1.3 for r in ratios)
    return CriterionResult(
        "adaptivity-ordering",
        drift_ok and alt_ok and bob_ok,
        (
            f"drifting: v={means[('drifting_mean', 'variation')]:.2f} vs "
            f"s={means[('drifting_mean', 'small_loss')]:.2f}; alternating: "
            f"s={means[('alternating', 'small_loss')]:.2f} vs "
            f"v={means[('alternating', 'variation')]:.2f}; combined ratios "
            f"{ratios[0]:.3f}, {ratios[1]:.3f}"
        ),
        time.time() - t0,
    )


def criterion_confinement() -> CriterionResult:
    """Every improper-learning play lies in the enlarged set and every
    mirror-descent anchor in the base set, across all adaptive-machine runs."""
    t0 = time.time()
    T, seeds = 2000, [0, 1, 2, 3, 4]
    for scen_kind in ("drifting_mean", "alternating"):
        for algo in ("variation", "best_of_both"):
            for s in seeds:
                summary = _cached_run(scen_kind, algo, T, s)
                if summary["confinement_fraction"] != 1.0:
                    return CriterionResult(
                        "confinement",
                        False,
                        f"{algo} on {scen_kind} seed {s}: "
                        f"{summary['confinement_fraction']:.4f}",
                        time.time() - t0,
                    )
    return CriterionResult(
        "confinement", True, "100% of plays and anchors confined (20 runs)", time.time() - t0
    )


CRITERIA: list[tuple[str, Callable[[], CriterionResult]]] = [
    ("geometry", criterion_geometry),
    ("comparison-laws", criterion_comparison_laws),
    ("losses", criterion_losses),
    ("means", criterion_means),
    ("bounds", criterion_bounds),
    ("game", criterion_game),
    ("sublinearity", criterion_sublinearity),
    ("adaptivity-ordering", criterion_adaptivity_ordering),
    ("confinement", criterion_confinement),
]

SUITES = {
    "geometry": ["geometry", "comparison-laws"],
    "bounds": ["losses", "means", "bounds"],
    "game": ["game"],
    "scenarios": ["sublinearity", "adaptivity-ordering", "confinement"],
}
SUITES["all"] = [name for name, _ in CRITERIA]


def run_suite(suite: str = "all") -> list[CriterionResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; options: {sorted(SUITES)}")
    wanted = set(SUITES[suite])
    return [fn() for name, fn in CRITERIA if name in wanted]
