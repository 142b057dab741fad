"""Experiment runner: builds scenarios and algorithms from a JSON config,
executes rounds, and writes per-round CSV traces plus a JSON summary.

CSV schema (version 1):

    t,loss,comp_loss,cum_regret,P_t,V_t_proxy,F_t,bound_value,bound_ok

``bound_value`` is the algorithm's pathwise guarantee evaluated with the
constants of the run; ``bound_ok`` records whether the realized cumulative
regret stays below it (``na`` when no fixed-rate guarantee applies, e.g.
adaptive tuning).  Runs are deterministic under a fixed seed: same seed,
byte-identical CSV.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import game as game_mod
from .algorithms import (
    BestOfBothEnsemble,
    GradientVariationProxy,
    HedgeEnsemble,
    OnlineGradientDescent,
    OptimisticMirrorDescent,
    SmallLossEnsemble,
    VariationEnsemble,
    beta_cap_value,
    grid_best_of_both,
    grid_path_length,
    grid_small_loss,
    grid_variation,
    omd_max_step,
    probe_points,
)
from .backend import backend_name
from .manifolds import GeometryError, zeta
from .scenarios import Scenario, scenario_from_config

__all__ = ["RunConfig", "RunResult", "run", "run_config_from_json", "build_algorithm"]

CSV_HEADER = "t,loss,comp_loss,cum_regret,P_t,V_t_proxy,F_t,bound_value,bound_ok"
SCHEMA_VERSION = 1

ALGORITHMS = ("ogd", "omd", "hedge", "variation", "small_loss", "best_of_both")
_SMOOTHNESS_GATED = ("omd", "variation", "small_loss", "best_of_both")


@dataclass
class RunConfig:
    scenario: dict
    algorithm: str
    tuning_mode: str = "oracle"
    eta: Optional[float] = None
    mean_rule: str = "frechet"
    v_proxy: str = "grid"  # "grid" | "off"
    probe_count: int = 64

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise GeometryError(f"unknown algorithm {self.algorithm!r}")
        if self.tuning_mode not in ("oracle", "adaptive"):
            raise GeometryError(f"unknown tuning mode {self.tuning_mode!r}")
        if self.v_proxy not in ("grid", "off"):
            raise GeometryError("v_proxy must be 'grid' or 'off'")


def run_config_from_json(cfg: dict) -> RunConfig:
    scenario_keys = (
        "scenario",
        "T",
        "seed",
        "delta",
        "scenario_params",
        "manifold",
        "decision_set",
        "losses",
        "comparator",
    )
    scenario = {k: cfg[k] for k in scenario_keys if k in cfg}
    return RunConfig(
        scenario=scenario,
        algorithm=cfg.get("algorithm", "hedge"),
        tuning_mode=cfg.get("tuning_mode", "oracle"),
        eta=cfg.get("eta"),
        mean_rule=cfg.get("mean_rule", "frechet"),
        v_proxy=cfg.get("v_proxy", "grid"),
        probe_count=int(cfg.get("probe_count", 64)),
    )


@dataclass
class RunResult:
    summary: dict
    rows: list
    csv_path: Optional[str] = None
    json_path: Optional[str] = None


def _fmt(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "na"
    return repr(float(x))


def _require_smoothness(scenario: Scenario, algorithm: str) -> None:
    if algorithm in _SMOOTHNESS_GATED and scenario.L is None:
        raise GeometryError(
            f"{algorithm} needs losses with a declared smoothness constant"
        )
    if algorithm in ("small_loss", "best_of_both") and not scenario.losses.nonnegative:
        raise GeometryError(f"{algorithm} needs nonnegative losses")


def _scenario_variation(scenario: Scenario, probe_count: int) -> float:
    """Gradient-variation proxy of the loss sequence over the fixed probe
    grid plus the comparator points (used for oracle tuning)."""
    extra = _thin(scenario.comparators, 64)
    probes = probe_points(scenario.decision_set, probe_count, extra=extra)
    return GradientVariationProxy(probes).total(list(scenario.losses))


def _thin(points, cap):
    if len(points) <= cap:
        return list(points)
    idx = np.linspace(0, len(points) - 1, cap).astype(int)
    return [points[i] for i in idx]


def build_algorithm(
    scenario: Scenario,
    config: RunConfig,
    rng: np.random.Generator,
    oracle_stats: Optional[dict] = None,
):
    """Instantiate the configured machine with the scenario constants.

    ``oracle_stats`` may carry precomputed quantities for oracle tuning
    ("V_T" and/or "F_bar"); missing entries trigger adaptive rates or an
    extra tuning pass in :func:`run`.
    """
    dset = scenario.decision_set
    D = dset.diameter
    G, L, T = scenario.G, scenario.L, scenario.T
    delta = scenario.delta
    kappa = scenario.manifold.curvature_lower_bound
    zeta_plain = zeta(kappa, D)
    x0 = dset.sample(rng)
    stats = oracle_stats or {}
    oracle = config.tuning_mode == "oracle"

    if config.algorithm == "ogd":
        eta = config.eta if config.eta else math.sqrt(D * D / (zeta_plain * G * G * T))
        return OnlineGradientDescent(dset, eta, x0, G, zeta_plain)

    if config.algorithm == "omd":
        zeta_eff = zeta(kappa, D + 2.0 * delta * G)
        cap = omd_max_step(G, L, zeta_eff, delta, G)
        eta = config.eta if config.eta else cap
        return OptimisticMirrorDescent(dset, eta, delta, G, L, x0)

    if config.algorithm == "hedge":
        grid = grid_path_length(D, G, zeta_plain, T)
        return HedgeEnsemble(dset, grid, T, G, x0, mean_rule=config.mean_rule)

    if config.algorithm == "variation":
        zeta_eff = zeta(kappa, D + 2.0 * delta * G)
        grid = grid_variation(D, G, L, zeta_eff, delta, T)
        beta = None
        if oracle and "V_T" in stats:
            cap = beta_cap_value(D, G, L, zeta_eff)
            beta = min(
                math.sqrt((2.0 + math.log(grid.count)) / (3.0 * D * D * (stats["V_T"] + G * G))),
                cap,
            )
        return VariationEnsemble(dset, grid, T, G, L, delta, x0, beta=beta)

    if config.algorithm == "small_loss":
        grid = grid_small_loss(D, G, L, zeta_plain, T)
        beta = None
        if oracle and "F_bar" in stats:
            fbar = max(stats["F_bar"], 1e-12)
            beta = math.sqrt((2.0 + math.log(grid.count)) / (2.0 * L * D * D * fbar))
        return SmallLossEnsemble(dset, grid, T, G, L, x0, beta=beta)

    if config.algorithm == "best_of_both":
        zeta_eff = zeta(kappa, D + 2.0 * delta * G)
        gv, gs = grid_best_of_both(D, G, L, zeta_plain, zeta_eff, delta, T)
        beta = None
        n = gv.count + gs.count
        if oracle and "V_T" in stats and "F_bar" in stats:
            cap = beta_cap_value(D, G, L, zeta_eff)
            inner = D * D * min(3.0 * (stats["V_T"] + G * G), stats["F_bar"])
            inner += 8.0 * G * G * D * D * math.log(2.0)
            beta = min(math.sqrt((2.0 + math.log(n)) / (n * inner)), cap)
        return BestOfBothEnsemble(dset, gv, gs, T, G, L, delta, x0, beta=beta)

    raise GeometryError(f"unknown algorithm {config.algorithm!r}")


def _loop(scenario: Scenario, algo, config: RunConfig) -> tuple[list, dict]:
    m = scenario.manifold
    dset = scenario.decision_set
    rows = []
    cum_regret = 0.0
    P_t = 0.0
    V_t = 0.0
    F_t = 0.0
    comp_prev = None
    proxy = None
    f_prev = None
    if config.v_proxy == "grid":
        probes = probe_points(
            dset, config.probe_count, extra=_thin(scenario.comparators, 64)
        )
        proxy = GradientVariationProxy(probes)
    is_ensemble = hasattr(algo, "composite_bound")
    confined = 0
    for t, f in enumerate(scenario.losses, start=1):
        x = algo.play()
        u = scenario.comparators[t - 1]
        loss = f.value(x)
        comp_loss = f.value(u)
        cum_regret += loss - comp_loss
        F_t += comp_loss
        if comp_prev is not None:
            P_t += m.dist(comp_prev, u)
        comp_prev = u
        if proxy is not None and f_prev is not None:
            V_t += proxy.step(f_prev, f)
        f_prev = f
        if hasattr(algo, "confinement_ok"):
            confined += 1 if algo.confinement_ok(x) else 0
        elif isinstance(algo, OptimisticMirrorDescent):
            confined += 1 if (algo.enlarged.contains(x) and dset.contains(algo.y)) else 0
        else:
            confined += 1 if dset.contains(x) else 0
        algo.update(f)
        if is_ensemble:
            bound = algo.composite_bound(F_t, t)
        elif isinstance(algo, OptimisticMirrorDescent):
            bound = algo.regret_bound(P_t)
        else:
            bound = algo.regret_bound(P_t, t)
        ok = None if math.isnan(bound) else (cum_regret <= bound + 1e-6 * (1.0 + abs(bound)))
        rows.append(
            (
                t,
                loss,
                comp_loss,
                cum_regret,
                P_t,
                V_t if proxy is not None else math.nan,
                F_t,
                bound,
                ok,
            )
        )
    stats = {
        "final_regret": cum_regret,
        "P_T": P_t,
        "V_T_proxy": V_t if proxy is not None else None,
        "F_T": F_t,
        "confinement_fraction": confined / max(scenario.T, 1),
    }
    return rows, stats


def _constants_of(algo) -> dict:
    out = {}
    if isinstance(algo, OnlineGradientDescent):
        out["eta"] = algo.eta
        out["zeta"] = algo.zeta
    elif isinstance(algo, OptimisticMirrorDescent):
        out["eta"] = algo.eta
        out["zeta"] = algo.zeta_eff
        out["delta"] = algo.delta
    else:
        out["eta_grid"] = [e.eta for e in algo.experts]
        if hasattr(algo, "beta"):
            out["beta"] = algo.beta
        elif getattr(algo, "beta_fixed", None) is not None:
            out["beta"] = algo.beta_fixed
        else:
            out["beta"] = None
        for name in ("zeta", "zeta_eff", "delta", "tau", "gamma", "n_v"):
            if hasattr(algo, name):
                out[name] = getattr(algo, name)
    return out


def _run_game(scenario: Scenario, config: RunConfig, seed: int) -> tuple[list, dict]:
    cfg = scenario.game_config
    params = dict(scenario.notes)
    player_name = params.get("player", "optimal")
    adversary_name = params.get("adversary", "optimal")
    if player_name == "optimal":
        player = game_mod.optimal_player
    else:
        player = game_mod.baseline_players(cfg, seed=seed)[player_name]
    if adversary_name == "optimal":
        adversary = game_mod.optimal_adversary
    elif adversary_name == "random":
        adversary = game_mod.random_adversary(cfg, seed)
    else:
        raise GeometryError(f"unknown adversary {adversary_name!r}")
    result = game_mod.play_game(cfg, player, adversary)
    value = game_mod.game_value(cfg)

    # resolve the offline comparator term per round against the closed-form
    # best fixed action in hindsight
    state = game_mod.GameState(cfg)
    moves = []
    for t in range(1, cfg.T + 1):
        y = np.asarray(player(state, t), dtype=np.float64)
        x = np.asarray(adversary(state, y, t), dtype=np.float64)
        state.X.append(x)
        state.Y.append(y)
        state.X_sum = state.X_sum + x
        moves.append(x)
    x_total = state.X_sum
    nx = float(np.linalg.norm(x_total))
    best = (cfg.D / 2.0) * x_total / nx if nx > 0 else np.zeros(cfg.n)
    rows = []
    cum = 0.0
    f_t = 0.0
    for t, loss, _ in result.trace:
        comp_loss = -float(np.dot(moves[t - 1], best))
        cum += loss - comp_loss
        f_t += comp_loss
        ok = True
        if player_name == "optimal" and t == cfg.T:
            ok = ok and cum <= value + 1e-9
        if adversary_name == "optimal" and t == cfg.T:
            ok = ok and cum >= value - 1e-9
        rows.append((t, loss, comp_loss, cum, 0.0, math.nan, f_t, value, ok))
    stats = {
        "final_regret": cum,
        "P_T": 0.0,
        "V_T_proxy": None,
        "F_T": f_t,
        "game_value": value,
        "player": player_name,
        "adversary": adversary_name,
    }
    return rows, stats


def run(
    config: RunConfig,
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
    reps: int = 1,
) -> list[RunResult]:
    """Execute ``reps`` repetitions (seeds seed, seed+1, ...) and write
    trace/summary files when ``out_dir`` is given."""
    results = []
    base_seed = seed if seed is not None else int(config.scenario.get("seed", 0))
    for rep in range(reps):
        rep_seed = base_seed + rep
        scen_cfg = dict(config.scenario)
        scen_cfg["seed"] = rep_seed
        scenario = scenario_from_config(scen_cfg)

        if scenario.kind == "adversarial_game":
            scenario.notes.update(config.scenario.get("scenario_params", {}))
            rows, stats = _run_game(scenario, config, rep_seed)
            constants = {"D": scenario.game_config.D, "budgets": scenario.game_config.budgets}
        else:
            _require_smoothness(scenario, config.algorithm)
            oracle_stats = {}
            if config.tuning_mode == "oracle":
                if config.algorithm in ("variation", "best_of_both"):
                    oracle_stats["V_T"] = _scenario_variation(scenario, config.probe_count)
                if config.algorithm in ("small_loss", "best_of_both"):
                    # tuning pass with adaptive rates to estimate the
                    # algorithm's own cumulative loss
                    pilot = build_algorithm(
                        scenario, _adaptive_clone(config), np.random.default_rng(rep_seed)
                    )
                    for f in scenario.losses:
                        pilot.play()
                        pilot.update(f)
                    oracle_stats["F_bar"] = pilot.meta_true_cum
            algo = build_algorithm(
                scenario, config, np.random.default_rng(rep_seed), oracle_stats
            )
            rows, stats = _loop(scenario, algo, config)
            constants = _constants_of(algo)
            constants.update({"G": scenario.G, "L": scenario.L, "D": scenario.decision_set.diameter})
            constants.update({k: v for k, v in oracle_stats.items()})

        summary = {
            "schema": SCHEMA_VERSION,
            "scenario": scenario.kind,
            "algorithm": config.algorithm if scenario.kind != "adversarial_game" else "game",
            "tuning_mode": config.tuning_mode,
            "T": scenario.T,
            "seed": rep_seed,
            "backend": backend_name(),
            "constants": constants,
            "probe": {
                "mode": config.v_proxy,
                "count": config.probe_count,
                "probe_seed": 0,
                "includes_comparators": True,
            },
            "notes": scenario.notes,
            **stats,
        }
        result = RunResult(summary=summary, rows=rows)
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
            stem = f"{summary['scenario']}_{summary['algorithm']}_T{scenario.T}_seed{rep_seed}"
            result.csv_path = os.path.join(out_dir, stem + ".csv")
            result.json_path = os.path.join(out_dir, stem + ".json")
            with open(result.csv_path, "w") as fh:
                fh.write(CSV_HEADER + "\n")
                for row in rows:
                    t, loss, comp, cum, p, v, ft, bound, ok = row
                    fh.write(
                        ",".join(
                            [
                                str(t),
                                _fmt(loss),
                                _fmt(comp),
                                _fmt(cum),
                                _fmt(p),
                                _fmt(v),
                                _fmt(ft),
                                _fmt(bound),
                                "na" if ok is None else ("true" if ok else "false"),
                            ]
                        )
                        + "\n"
                    )
            with open(result.json_path, "w") as fh:
                json.dump(summary, fh, indent=2, sort_keys=True, default=_json_default)
                fh.write("\n")
        results.append(result)
    return results


def _adaptive_clone(config: RunConfig) -> RunConfig:
    return RunConfig(
        scenario=config.scenario,
        algorithm=config.algorithm,
        tuning_mode="adaptive",
        eta=config.eta,
        mean_rule=config.mean_rule,
        v_proxy="off",
        probe_count=config.probe_count,
    )


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")
