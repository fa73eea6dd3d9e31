"""Command line: `run` trains and writes outputs, `oracle` prints the DP
optimum for a layout, `metrics` recomputes convergence numbers from a run
directory. Exit codes: 0 success, 1 configuration error, 2 runtime error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .agents import ExplorationSchedule, QiRLConfig
from .gridworld import build
from .harness import AGENT_KINDS, RunConfig, convergence_metrics, read_episodes_csv, run
from .layout import LayoutError, parse_layout
from .oracle import DPResult, dp_optimal

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors must exit 1, not argparse's 2
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qirl-uav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="train an agent and write episodes/trajectory/summary files")
    runp.add_argument("--config", required=True, help="environment layout file")
    runp.add_argument("--agent", required=True, choices=AGENT_KINDS)
    runp.add_argument("--episodes", required=True, type=int)
    runp.add_argument("--seeds", required=True, help="comma-separated integers, e.g. 0,1,2")
    runp.add_argument("--out", required=True, help="output directory")
    runp.add_argument("--alpha", type=float, default=0.1, help="learning rate (default 0.1)")
    runp.add_argument("--gamma", type=float, default=1.0, help="baseline discount (default 1.0)")
    runp.add_argument("--alpha-decay", type=float, default=0.0, help="qirl: c in alpha/(1+c*k)")
    runp.add_argument("--k-plus", type=float, default=1.0, help="qirl reinforcement exponent, positive branch")
    runp.add_argument("--k-minus", type=float, default=-1.0, help="qirl reinforcement exponent, negative branch")
    runp.add_argument("--reward-scale", type=float, default=None, help="qirl exponent divisor (default: terminal bonus)")
    runp.add_argument("--exponent-clamp", type=float, default=10.0)
    runp.add_argument("--p-floor", type=float, default=1e-4)
    runp.add_argument("--explore-initial", type=float, default=None, help="epsilon0 or tau0 override")
    runp.add_argument("--explore-decay", type=float, default=0.995)
    runp.add_argument("--explore-floor", type=float, default=None, help="epsilon/tau floor override")
    runp.set_defaults(func=_cmd_run)

    oraclep = sub.add_parser("oracle", help="print the DP-optimal return and path for a layout")
    oraclep.add_argument("--config", required=True)
    oraclep.add_argument("--horizon", type=int, default=None, help="override the layout's step budget")
    oraclep.set_defaults(func=_cmd_oracle)

    metricsp = sub.add_parser("metrics", help="recompute convergence metrics from a run directory")
    metricsp.add_argument("--in", dest="run_dir", required=True, help="directory written by `run`")
    metricsp.set_defaults(func=_cmd_metrics)
    return parser


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise _CliError(f"seeds must be comma-separated integers, got {text!r}")
    if not seeds:
        raise _CliError("at least one seed is required")
    return seeds


def _cmd_run(args) -> int:
    qirl_cfg = None
    schedule = None
    if args.agent == "qirl":
        qirl_cfg = QiRLConfig(
            alpha=args.alpha,
            k_plus=args.k_plus,
            k_minus=args.k_minus,
            reward_scale=args.reward_scale,
            exponent_clamp=args.exponent_clamp,
            p_floor=args.p_floor,
            alpha_decay=args.alpha_decay,
        )
    elif args.explore_initial is not None or args.explore_floor is not None:
        kind = "epsilon_greedy" if args.agent == "ql_eps" else "boltzmann"
        env = build(parse_layout(args.config))
        initial = args.explore_initial
        floor = args.explore_floor
        if kind == "epsilon_greedy":
            initial = 1.0 if initial is None else initial
            floor = 0.01 if floor is None else floor
        else:
            initial = env.terminal_bonus if initial is None else initial
            floor = 0.01 * env.terminal_bonus if floor is None else floor
        schedule = ExplorationSchedule(kind, initial, args.explore_decay, floor)

    config = RunConfig(
        env_file=args.config,
        agent=args.agent,
        episodes=args.episodes,
        seeds=_parse_seeds(args.seeds),
        output_dir=args.out,
        alpha=args.alpha,
        gamma=args.gamma,
        qirl=qirl_cfg,
        schedule=schedule,
    )
    paths = run(config)
    for name in ("episodes", "trajectory", "summary"):
        print(f"{name}: {paths[name]}")
    return EXIT_OK


def _print_oracle(result: DPResult, env) -> None:
    print(f"optimal_return: {result.optimal_return!r}")
    print(f"path_steps: {result.horizon_used}")
    per_step = result.optimal_return / result.horizon_used if result.horizon_used else 0.0
    print(f"return_per_step: {per_step!r}")
    print(f"reaches_terminal: {str(result.reaches_terminal).lower()}")
    print(f"terminal_reachable: {str(result.terminal_reachable).lower()}")
    cells = " ".join(f"({i},{j})" for i, j in (env.cell_of(s) for s in result.optimal_path))
    print(f"path: {cells}")


def _cmd_oracle(args) -> int:
    env = build(parse_layout(args.config))
    _print_oracle(dp_optimal(env, args.horizon), env)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    run_dir = Path(args.run_dir)
    episodes_path = run_dir / "episodes.csv"
    summary_path = run_dir / "summary.json"
    if not episodes_path.is_file() or not summary_path.is_file():
        raise _CliError(f"{run_dir} does not contain episodes.csv and summary.json")
    with open(summary_path) as fh:
        summary = json.load(fh)
    rows = read_episodes_csv(episodes_path)

    env = build(parse_layout(summary["env_file"]))
    oracle = dp_optimal(env)
    print("seed,episodes_to_90pct,final_return_mean,oracle_gap")
    for seed_key in sorted(summary["seeds"], key=int):
        seed = int(seed_key)
        logs = [log for s, log in rows if s == seed]
        metric = convergence_metrics(logs, oracle, summary["seeds"][seed_key]["greedy_return"])
        print(
            f"{seed},{metric.episodes_to_90pct},"
            f"{'' if metric.final_return_mean is None else repr(metric.final_return_mean)},"
            f"{metric.oracle_gap!r}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (_CliError, LayoutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
