"""Scenario generators for the experiment harness.

Two hyperbolic benchmark environments plus custom/adversarial kinds:

* ``drifting_mean`` -- anchors +-(t/2T) e_i on the Poincare ball drift slowly
  outward; the per-round minimizer is the origin by symmetry, so the
  comparator path length is zero while its cumulative loss grows linearly.
  Consecutive gradients differ by O(1/T^2): friendly territory for
  optimism that replays the previous gradient.

* ``alternating`` -- anchors flip sign every round between two small balls
  around +-e_1/2 of radius T^(-alpha).  Per-round comparator losses stay
  O(T^(1-2alpha)) while consecutive gradients differ by a constant, which
  punishes gradient replay.

The original descriptions use convex hulls as decision sets; hulls carry no
exact projection, so each scenario substitutes the enclosing geodesic ball
of matching extent (noted in ``Scenario.notes``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .losses import LossFunction, LossSequence, squared_distance_loss
from .manifolds import GeometryError, Manifold, PoincareBall, Point, manifold_from_config
from .means import frechet_mean
from .sets import GeodesicBall
from . import game as game_mod

__all__ = [
    "Scenario",
    "gen_drifting_mean",
    "gen_alternating",
    "gen_custom",
    "audit_scenario",
    "scenario_from_config",
]


@dataclass
class Scenario:
    kind: str
    manifold: Manifold
    decision_set: GeodesicBall
    T: int
    losses: LossSequence
    comparators: list  # one Point per round
    comparator_rule: str
    delta: float
    seed: int
    notes: dict = field(default_factory=dict)
    game_config: Optional[game_mod.GameConfig] = None

    @property
    def G(self) -> float:
        return self.losses.G

    @property
    def L(self) -> Optional[float]:
        return self.losses.L


def _solve_gradient_bound(anchor_reach: float, radius: float, delta: float) -> float:
    """Fixed point of G = 2 (anchor_reach + radius + delta G): the gradient
    bound of a unit-mass squared-distance loss on the delta-G-enlarged ball."""
    if delta >= 0.4:
        raise GeometryError("improper margin delta must stay below 0.4")
    return 2.0 * (anchor_reach + radius) / (1.0 - 2.0 * delta)


def gen_drifting_mean(T: int, dim: int = 2, delta: float = 0.1, seed: int = 0) -> Scenario:
    """Slowly drifting symmetric anchors on the Poincare ball."""
    if T < 2 or dim < 2:
        raise GeometryError("drifting_mean needs T >= 2 and dim >= 2")
    m = PoincareBall(dim)
    origin = m.point(np.zeros(dim))
    hull_radius = m.dist(origin, m.point(np.eye(dim)[0] * 0.5))  # ln 3
    dset = GeodesicBall(origin, hull_radius)

    anchor_reach = hull_radius  # anchors stay within distance d(0, e_1/2)
    G = _solve_gradient_bound(anchor_reach, dset.radius, delta)
    eval_set = dset.enlarge(delta * G)

    w = np.full(2 * dim, 1.0 / (2 * dim))
    losses = []
    for t in range(1, T + 1):
        r = t / (2.0 * T)
        anchors = [m.point(r * np.eye(dim)[i]) for i in range(dim)]
        anchors += [m.point(-r * np.eye(dim)[i]) for i in range(dim)]
        losses.append(squared_distance_loss(anchors, w, eval_set))
    comparators = [origin] * T

    return Scenario(
        kind="drifting_mean",
        manifold=m,
        decision_set=dset,
        T=T,
        losses=LossSequence.from_losses(losses),
        comparators=comparators,
        comparator_rule="offline_minimizer_per_round",
        delta=delta,
        seed=seed,
        notes={
            "decision_set": "enclosing geodesic ball substituted for the hull of +-e_i/2",
            "comparator": "origin each round (exact minimizer by symmetry)",
        },
    )


def gen_alternating(
    T: int, n: int = 4, alpha: float = 0.5, delta: float = 0.1, seed: int = 0
) -> Scenario:
    """Sign-alternating anchor clouds around +-e_1/2 on the Poincare ball."""
    if alpha <= 0:
        raise GeometryError("alpha must be positive")
    if T < 2 or n < 1:
        raise GeometryError("alternating needs T >= 2 and n >= 1")
    dim = 2
    m = PoincareBall(dim)
    origin = m.point(np.zeros(dim))
    rng = np.random.default_rng(seed)
    r_cloud = T ** (-alpha)
    pole = m.point(np.array([0.5, 0.0]))
    cloud = GeodesicBall(pole, r_cloud)
    ys = [cloud.sample(rng) for _ in range(n)]

    hull_radius = m.dist(origin, pole) + r_cloud
    dset = GeodesicBall(origin, hull_radius)
    G = _solve_gradient_bound(hull_radius, dset.radius, delta)
    eval_set = dset.enlarge(delta * G)

    w = np.full(n, 1.0 / n)
    odd_anchors = ys
    even_anchors = [m.point(-y.coords) for y in ys]
    losses = []
    for t in range(1, T + 1):
        anchors = odd_anchors if t % 2 == 1 else even_anchors
        losses.append(squared_distance_loss(anchors, w, eval_set))

    mean_odd = frechet_mean(odd_anchors, w)
    mean_even = m.point(-mean_odd.coords)  # the antipodal map is an isometry
    comparators = [mean_odd if t % 2 == 1 else mean_even for t in range(1, T + 1)]

    return Scenario(
        kind="alternating",
        manifold=m,
        decision_set=dset,
        T=T,
        losses=LossSequence.from_losses(losses),
        comparators=comparators,
        comparator_rule="offline_minimizer_per_round",
        delta=delta,
        seed=seed,
        notes={
            "decision_set": "enclosing geodesic ball substituted for the hull of the two anchor balls",
            "comparator": "per-parity barycenter of the anchor cloud",
            "alpha": alpha,
            "cloud_radius": r_cloud,
        },
    )


def _build_custom_loss(spec: dict, manifold: Manifold, eval_set) -> LossFunction:
    name = spec.get("name")
    if name == "squared_distance":
        anchors = [manifold.point(np.asarray(a, dtype=np.float64)) for a in spec["anchors"]]
        weights = spec.get("weights", [1.0 / len(anchors)] * len(anchors))
        return squared_distance_loss(anchors, weights, eval_set)
    if name == "busemann":
        from .losses import busemann_loss

        identity = manifold.point(np.eye(manifold.n))
        direction = manifold.tangent(identity, np.diag(np.asarray(spec["direction"], dtype=np.float64)))
        return busemann_loss(direction, float(spec.get("scale", 1.0)))
    raise GeometryError(f"unknown loss name {name!r}")


def gen_custom(
    manifold_cfg: dict,
    decision_cfg: dict,
    loss_specs: Sequence[dict],
    comparator_cfg: dict,
    delta: float = 0.1,
    seed: int = 0,
) -> Scenario:
    """Scenario assembled from explicit JSON pieces."""
    m = manifold_from_config(manifold_cfg)
    center = m.point(np.asarray(decision_cfg["center"], dtype=np.float64))
    dset = GeodesicBall(center, float(decision_cfg["radius"]))
    T = len(loss_specs)
    if T == 0:
        raise GeometryError("custom scenario needs at least one loss")

    # provisional eval set from a conservative gradient bound, then rebuild
    probe_set = dset.enlarge(0.0)
    provisional = [_build_custom_loss(s, m, probe_set) for s in loss_specs]
    G0 = max(f.G for f in provisional)
    eval_set = dset.enlarge(delta * G0 / max(1.0 - 2.0 * delta, 0.2))
    losses = [_build_custom_loss(s, m, eval_set) for s in loss_specs]
    seq = LossSequence.from_losses(losses)

    rule = comparator_cfg.get("rule", "fixed_point")
    comparators = _comparators_for(rule, comparator_cfg, m, dset, losses, loss_specs)
    return Scenario(
        kind="custom",
        manifold=m,
        decision_set=dset,
        T=T,
        losses=seq,
        comparators=comparators,
        comparator_rule=rule,
        delta=delta,
        seed=seed,
    )


def _minimizer_guess(loss_spec: dict, m: Manifold, dset: GeodesicBall) -> Point:
    """Projected anchor barycenter: the exact per-round minimizer whenever it
    falls inside the set."""
    if "anchors" not in loss_spec:
        return dset.center
    anchors = [m.point(np.asarray(a, dtype=np.float64)) for a in loss_spec["anchors"]]
    weights = loss_spec.get("weights", [1.0 / len(anchors)] * len(anchors))
    w = np.asarray(weights, dtype=np.float64)
    return dset.project(frechet_mean(anchors, w / w.sum()))


def _comparators_for(rule, cfg, m, dset, losses, loss_specs) -> list:
    T = len(losses)
    if rule == "fixed_point":
        u = dset.project(m.point(np.asarray(cfg["point"], dtype=np.float64)))
        return [u] * T
    if rule == "offline_minimizer_per_round":
        return [_minimizer_guess(s, m, dset) for s in loss_specs]
    if rule == "piecewise_constant":
        k = int(cfg.get("segments", 1))
        k = max(1, min(k, T))
        bounds = np.linspace(0, T, k + 1).astype(int)
        out = []
        for a, b in zip(bounds, bounds[1:]):
            block = [_minimizer_guess(s, m, dset) for s in loss_specs[a:b]]
            u = dset.project(frechet_mean(block, np.full(len(block), 1.0 / len(block))))
            out.extend([u] * (b - a))
        return out
    raise GeometryError(f"unknown comparator rule {rule!r}")


def audit_scenario(
    scenario: Scenario, rounds: int = 8, samples: int = 16, seed: int = 1
) -> dict:
    """Sample-based audit that declared constants hold on the enlarged set.

    Checks gradient norms against G and transported-gradient differences
    against L * d * (1 + 1e-3).  Raises on violation.
    """
    m = scenario.manifold
    margin = scenario.delta * scenario.G
    region = scenario.decision_set.enlarge(margin)
    rng = np.random.default_rng(seed)
    idx = np.linspace(0, scenario.T - 1, min(rounds, scenario.T)).astype(int)
    worst_g = 0.0
    worst_q = 0.0
    for t in idx:
        f = scenario.losses[int(t)]
        pts = [region.sample(rng) for _ in range(samples)]
        for p in pts:
            worst_g = max(worst_g, m.norm(p, f.grad(p)))
        if scenario.L is not None:
            for p, q in zip(pts, pts[1:]):
                d = m.dist(p, q)
                if d < 1e-9:
                    continue
                diff = m.transport(q, p, f.grad(q)) + (-1.0) * f.grad(p)
                worst_q = max(worst_q, m.norm(p, diff) / d)
    if worst_g > scenario.G * (1.0 + 1e-9) + 1e-12:
        raise GeometryError(
            f"audit failed: sampled gradient norm {worst_g} exceeds declared {scenario.G}"
        )
    if scenario.L is not None and worst_q > scenario.L * (1.0 + 1e-3):
        raise GeometryError(
            f"audit failed: smoothness quotient {worst_q} exceeds declared {scenario.L}"
        )
    return {"max_gradient_norm": worst_g, "max_smoothness_quotient": worst_q}


def scenario_from_config(cfg: dict) -> Scenario:
    """Build a scenario from the harness JSON config."""
    kind = cfg.get("scenario")
    T = int(cfg.get("T", 100))
    seed = int(cfg.get("seed", 0))
    delta = float(cfg.get("delta", 0.1))
    params = dict(cfg.get("scenario_params", {}))
    if kind == "drifting_mean":
        return gen_drifting_mean(T, dim=int(params.get("dim", 2)), delta=delta, seed=seed)
    if kind == "alternating":
        return gen_alternating(
            T,
            n=int(params.get("n", 4)),
            alpha=float(params.get("alpha", 0.5)),
            delta=delta,
            seed=seed,
        )
    if kind == "adversarial_game":
        game_cfg = game_mod.GameConfig(
            n=int(params.get("n", 3)),
            T=T,
            budgets=params.get("budgets", 1.0),
            D=float(params.get("D", 2.0)),
        )
        man = manifold_from_config({"kind": "diag_spd", "n": game_cfg.n})
        dset = GeodesicBall(man.point(np.eye(game_cfg.n)), game_cfg.D / 2.0)
        return Scenario(
            kind="adversarial_game",
            manifold=man,
            decision_set=dset,
            T=T,
            losses=LossSequence(losses=[], G=max(game_cfg.budgets), L=None, nonnegative=False),
            comparators=[],
            comparator_rule="offline_best_fixed",
            delta=delta,
            seed=seed,
            game_config=game_cfg,
        )
    if kind == "custom":
        return gen_custom(
            cfg["manifold"],
            cfg["decision_set"],
            cfg["losses"],
            cfg.get("comparator", {"rule": "offline_minimizer_per_round"}),
            delta=delta,
            seed=seed,
        )
    raise GeometryError(f"unknown scenario kind {kind!r}")
