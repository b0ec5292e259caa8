"""Command-line interface: train experiments, solve mazes, print baselines.

Worker count for replicated runs comes from the QBMRL_WORKERS environment
variable (default 1).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .harness import (
    DESK_RUNS,
    FULL_RUNS,
    ExperimentSpec,
    oracle_table,
    random_policy_fidelity,
    run_experiment,
)
from .maze import TransitionKernel, generate_nx5, parse_maze, value_iteration
from .training import ALGORITHMS, default_config


def _add_maze_kernel(parser):
    parser.add_argument("--maze", required=True, help="path to a maze text file")
    parser.add_argument("--kernel", choices=("clear", "windy"), default="clear")


def _build_train_parser(sub):
    p = sub.add_parser("train", help="run replicated training and write CSVs")
    _add_maze_kernel(p)
    p.add_argument(
        "--algo",
        action="append",
        required=True,
        choices=ALGORITHMS,
        help="algorithm to run (repeatable)",
    )
    p.add_argument("--runs", type=int, default=DESK_RUNS)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument(
        "--strategy", choices=("sweep", "sweep-sas", "uniform"), default="sweep"
    )
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--full", action="store_true",
        help=f"full replication count ({FULL_RUNS} instead of {DESK_RUNS})",
    )
    p.add_argument("--hidden", type=str, default=None,
                   help="hidden layout, e.g. 16 or 8,8 (per-algorithm default otherwise)")
    p.add_argument("--reads", type=int, default=None,
                   help="override sampler reads for every sampled algorithm")
    p.add_argument("--sa-sweeps", type=int, default=None)
    p.add_argument("--sqa-sweeps", type=int, default=None)
    p.add_argument("--replicas", type=int, default=None,
                   help="override the SQA replica (slice) count")


def _training_overrides(args) -> dict:
    overrides = {}
    for algorithm in args.algo:
        kwargs = {"n_samples": args.samples, "strategy": args.strategy}
        if args.hidden:
            kwargs["hidden_layers"] = tuple(
                int(x) for x in args.hidden.split(",") if x
            )
        config = default_config(algorithm, **kwargs)
        sa_kwargs, sqa_kwargs = {}, {}
        if args.reads:
            sa_kwargs["n_reads"] = args.reads
            sqa_kwargs["n_reads"] = args.reads
        if args.sa_sweeps:
            sa_kwargs["n_sweeps"] = args.sa_sweeps
        if args.sqa_sweeps:
            sqa_kwargs["n_sweeps"] = args.sqa_sweeps
        if args.replicas:
            sqa_kwargs["n_replicas"] = args.replicas
        if sa_kwargs:
            config = dataclasses.replace(
                config,
                sa_schedule=dataclasses.replace(config.sa_schedule, **sa_kwargs),
            )
        if sqa_kwargs:
            config = dataclasses.replace(
                config,
                sqa_schedule=dataclasses.replace(config.sqa_schedule, **sqa_kwargs),
            )
        overrides[algorithm] = config
    return overrides


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qbmrl",
        description="Boltzmann-machine reinforcement learning on maze MDPs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _build_train_parser(sub)

    p_oracle = sub.add_parser("oracle", help="exact optimal-policy table")
    _add_maze_kernel(p_oracle)
    p_oracle.add_argument("--out", default=None, help="write JSON here (stdout otherwise)")

    p_base = sub.add_parser("baseline", help="random-policy fidelity")
    _add_maze_kernel(p_base)

    p_gen = sub.add_parser("generate-maze", help="emit a maze from a family")
    p_gen.add_argument("--family", choices=("nx5",), required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "generate-maze":
        text = generate_nx5(args.n)
        if args.out:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
        return 0

    if args.command == "oracle":
        maze = parse_maze(Path(args.maze).read_text(encoding="utf-8"))
        kernel = TransitionKernel(variant=args.kernel)
        table = oracle_table(maze, value_iteration(maze, kernel))
        payload = json.dumps(
            {"kernel": args.kernel, "states": table}, indent=2, sort_keys=True
        )
        if args.out:
            Path(args.out).write_text(payload + "\n", encoding="utf-8")
        else:
            print(payload)
        return 0

    if args.command == "baseline":
        maze = parse_maze(Path(args.maze).read_text(encoding="utf-8"))
        kernel = TransitionKernel(variant=args.kernel)
        policy_set = value_iteration(maze, kernel)
        print(f"{random_policy_fidelity(maze, policy_set):.6f}")
        return 0

    # train
    maze_text = Path(args.maze).read_text(encoding="utf-8")
    spec = ExperimentSpec(
        maze_text=maze_text,
        kernel_variant=args.kernel,
        algorithms=tuple(args.algo),
        n_runs=FULL_RUNS if args.full else args.runs,
        n_samples=args.samples,
        strategy=args.strategy,
        base_seed=args.seed,
        out_dir=args.out,
        config_overrides=_training_overrides(args),
    )
    paths = run_experiment(spec)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
