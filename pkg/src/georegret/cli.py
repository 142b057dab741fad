"""Command-line interface.

    georegret run --config cfg.json --out outdir [--seed N] [--reps K]
    georegret verify --suite {geometry,bounds,game,scenarios,all}
    georegret adversarial-game --n 3 -T 100 --budget 1.0 --diameter 2.0

``verify`` exits nonzero when any criterion in the suite fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import game as game_mod
from .harness import run, run_config_from_json


def _cmd_run(args) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    config = run_config_from_json(cfg)
    results = run(config, out_dir=args.out, seed=args.seed, reps=args.reps)
    for r in results:
        s = r.summary
        print(
            f"{s['scenario']}/{s['algorithm']} T={s['T']} seed={s['seed']}: "
            f"regret={s['final_regret']:.6g}"
            + (f" -> {r.csv_path}" if r.csv_path else "")
        )
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name} ({r.elapsed:.1f}s): {r.detail}")
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def _cmd_game(args) -> int:
    budgets = args.budget if len(args.budget) > 1 else args.budget[0]
    cfg = game_mod.GameConfig(n=args.n, T=args.T, budgets=budgets, D=args.diameter)
    players = {"optimal": game_mod.optimal_player}
    players.update(game_mod.baseline_players(cfg, seed=args.seed))
    if args.player not in players:
        print(f"unknown player {args.player!r}; options: {sorted(players)}", file=sys.stderr)
        return 2
    if args.adversary == "optimal":
        adversary = game_mod.optimal_adversary
    elif args.adversary == "random":
        adversary = game_mod.random_adversary(cfg, args.seed)
    else:
        print("adversary must be 'optimal' or 'random'", file=sys.stderr)
        return 2
    result = game_mod.play_game(cfg, players[args.player], adversary)
    value = game_mod.game_value(cfg)
    print(f"value   = {value:.12g}")
    print(f"regret  = {result.regret:.12g}")
    print(f"play    = {result.play_term:.12g}")
    print(f"offline = {result.offline_term:.12g}")
    if args.out:
        import os

        os.makedirs(args.out, exist_ok=True)
        path = f"{args.out}/game_n{args.n}_T{args.T}.json"
        with open(path, "w") as fh:
            json.dump(
                {
                    "value": value,
                    "regret": result.regret,
                    "player": args.player,
                    "adversary": args.adversary,
                    "n": args.n,
                    "T": args.T,
                    "D": args.diameter,
                },
                fh,
                indent=2,
            )
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="georegret")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario/algorithm config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--reps", type=int, default=1)
    p_run.set_defaults(fn=_cmd_run)

    p_verify = sub.add_parser("verify", help="run an acceptance suite")
    p_verify.add_argument(
        "--suite",
        default="all",
        choices=["geometry", "bounds", "game", "scenarios", "all"],
    )
    p_verify.set_defaults(fn=_cmd_verify)

    p_game = sub.add_parser("adversarial-game", help="play the minimax game")
    p_game.add_argument("--n", type=int, default=3)
    p_game.add_argument("-T", "--T", type=int, default=100)
    p_game.add_argument("--budget", type=float, nargs="+", default=[1.0])
    p_game.add_argument("--diameter", type=float, default=2.0)
    p_game.add_argument("--player", default="optimal")
    p_game.add_argument("--adversary", default="optimal")
    p_game.add_argument("--seed", type=int, default=0)
    p_game.add_argument("--out", default=None)
    p_game.set_defaults(fn=_cmd_game)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
