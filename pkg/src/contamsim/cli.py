"""Command-line interface.

Subcommands:

* ``run``    -- play a batch from an experiment config, emit per-game CSV
* ``game``   -- play one game, optionally logging a JSONL trajectory
* ``wpc``    -- conquest cost and iteration trace for a component file
* ``bounds`` -- closed-form capacity bounds for a sensing configuration

Exit codes: 0 success, 1 invalid configuration or arguments, 2 I/O error.
"""

import argparse
import json
import sys

from .bounds import all_bounds
from .engine import run_game
from .geometry import WorldConfig
from .graph import load_component
from .harness import ExperimentConfig, run_batch, write_csv
from .strategies import STRATEGY_NAMES, make_strategy
from .wpc import wpc_trace


class _UsageError(Exception):
    pass


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _world_config(path):
    if path is None:
        return WorldConfig()
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise _UsageError(f"{path}: expected a JSON object of overrides")
    return WorldConfig().with_overrides(raw)


def _cmd_run(args):
    raw = _load_json(args.config)
    if not isinstance(raw, dict):
        raise _UsageError(f"{args.config}: expected a JSON object")
    exp = ExperimentConfig.from_dict(raw)
    rows = run_batch(exp, jobs=args.jobs)
    if args.out is None:
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    return 0


def _cmd_game(args):
    cfg = _world_config(args.config)
    kwargs = {}
    if args.init is not None:
        raw = _load_json(args.init)
        if not isinstance(raw, dict):
            raise _UsageError(f"{args.init}: expected a JSON object")
        if "cfg" in raw:
            cfg = WorldConfig().with_overrides(raw["cfg"])
        if "agents" in raw:
            from .graph import AgentSnapshot

            kwargs["agents"] = [
                AgentSnapshot(a["id"], a["x"], a["y"], a["state"])
                for a in raw["agents"]
            ]
        elif "n_healthy" in raw and "n_contaminated" in raw:
            kwargs["n_healthy"] = int(raw["n_healthy"])
            kwargs["n_contaminated"] = int(raw["n_contaminated"])
        else:
            raise _UsageError(
                f"{args.init}: needs either agents or both side counts"
            )
    elif args.n is not None:
        kwargs["n_healthy"] = kwargs["n_contaminated"] = args.n
    else:
        raise _UsageError("need --n or --init")

    traj = None
    try:
        if args.trajectory is not None:
            traj = open(args.trajectory, "w")
        result = run_game(
            cfg,
            make_strategy(args.healthy, cfg),
            make_strategy(args.contaminated, cfg),
            seed=args.seed,
            scheduler=args.scheduler,
            trajectory=traj,
            **kwargs,
        )
    finally:
        if traj is not None:
            traj.close()
    json.dump(result.as_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_wpc(args):
    comp = load_component(args.component)
    _, trace = wpc_trace(comp)
    json.dump(trace.as_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_bounds(args):
    overrides = {}
    if args.smin is not None:
        overrides["s_min"] = args.smin
    if args.smax is not None:
        overrides["s_max"] = args.smax
    if args.dr is not None:
        overrides["d_r"] = args.dr
    cfg = WorldConfig().with_overrides(overrides)
    json.dump(all_bounds(cfg), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="contamsim",
        description="Adversarial swarm contamination games: simulate, "
        "analyze resilience, compute capacity bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play a batch and emit per-game CSV")
    p.add_argument("--config", required=True, help="experiment JSON file")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("game", help="play a single game")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="agents per side")
    p.add_argument("--init", help="JSON initial condition file")
    p.add_argument("--healthy", default="circle", choices=STRATEGY_NAMES)
    p.add_argument(
        "--contaminated", default="random", choices=STRATEGY_NAMES
    )
    p.add_argument("--trajectory", help="write per-step JSONL here")
    p.add_argument(
        "--scheduler", default="random", choices=("random", "ordered")
    )
    p.add_argument("--config", help="world config overrides JSON file")
    p.set_defaults(func=_cmd_game)

    p = sub.add_parser(
        "wpc", help="conquest cost and trace for a component file"
    )
    p.add_argument("--component", required=True, help="component JSON file")
    p.set_defaults(func=_cmd_wpc)

    p = sub.add_parser("bounds", help="closed-form capacity bounds")
    p.add_argument("--smin", type=float)
    p.add_argument("--smax", type=float)
    p.add_argument("--dr", type=float)
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
