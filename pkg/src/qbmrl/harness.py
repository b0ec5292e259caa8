"""Experiment orchestration: replicated runs, fidelity curves, result files.

An experiment solves the maze exactly once, trains ``n_runs`` independent
replicas per algorithm (seeded so that adding runs never perturbs existing
ones), and writes one CSV of per-sample mean/std fidelity per algorithm, a
summary table of trailing-window average fidelities, and a JSON manifest
that pins everything needed to reproduce the outputs byte for byte.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .maze import ACTION_NAMES, Maze, OptimalPolicySet, TransitionKernel, parse_maze
from .maze import admissible_actions, value_iteration
from .training import PolicyTrace, TrainingConfig, default_config, train

WORKERS_ENV = "QBMRL_WORKERS"
FULL_RUNS = 1440
DESK_RUNS = 40


def splitmix64(x: int) -> int:
    """One splitmix64 output step; used to decorrelate run indices."""
    mask = (1 << 64) - 1
    z = (x + 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


def run_seed(base_seed: int, run_index: int) -> int:
    return (base_seed ^ splitmix64(run_index)) & ((1 << 63) - 1)


@dataclass(frozen=True)
class FidelityTrace:
    """Mean and across-run std of the per-state fidelity, indexed by training
    sample; index 0 scores the initial (untrained) policy."""

    mean: np.ndarray
    std: np.ndarray
    n_runs: int

    def __post_init__(self):
        if np.any(self.mean < -1e-12) or np.any(self.mean > 1 + 1e-12):
            raise ValueError("fidelity must lie in [0, 1]")
        if np.any(self.std < 0):
            raise ValueError("std must be non-negative")

    @property
    def n_samples(self) -> int:
        return len(self.mean) - 1


def per_run_fidelity(
    traces: list[PolicyTrace], policy_set: OptimalPolicySet
) -> np.ndarray:
    """Per-run state-averaged fidelity, shape (n_runs, n_samples + 1)."""
    if not traces:
        raise ValueError("need at least one trace")
    free = traces[0].free_states
    if free != tuple(policy_set.maze.free_states):
        raise ValueError("trace states do not match the oracle's maze")
    length = traces[0].actions.shape[0]
    optimal = np.zeros((len(free), 5), dtype=bool)
    for col, s in enumerate(free):
        for a in policy_set.optimal_actions[s]:
            optimal[col, int(a)] = True
    per_run = np.empty((len(traces), length))
    for k, trace in enumerate(traces):
        if trace.free_states != free or trace.actions.shape[0] != length:
            raise ValueError("traces disagree on maze or length")
        hits = optimal[np.arange(len(free))[None, :], trace.actions]
        per_run[k] = hits.mean(axis=1)
    return per_run


def fidelity(traces: list[PolicyTrace], policy_set: OptimalPolicySet) -> FidelityTrace:
    """Fraction of free states whose recorded greedy action is optimal,
    averaged over runs; std across the per-run state-averages."""
    per_run = per_run_fidelity(traces, policy_set)
    mean = per_run.mean(axis=0)
    std = (
        per_run.std(axis=0, ddof=1)
        if per_run.shape[0] > 1
        else np.zeros(per_run.shape[1])
    )
    return FidelityTrace(mean=mean, std=std, n_runs=per_run.shape[0])


def average_fidelity(trace: FidelityTrace, window: int) -> float:
    """Mean fidelity over the trailing window: samples T_s - window .. T_s
    inclusive (window + 1 points, taking the literal summation limits)."""
    if window > trace.n_samples:
        raise ValueError("window exceeds the number of training samples")
    return float(trace.mean[trace.n_samples - window :].mean())


def random_policy_fidelity(maze: Maze, policy_set: OptimalPolicySet) -> float:
    """Expected fidelity of a uniformly random admissible policy."""
    ratios = [
        len(policy_set.optimal_actions[s]) / len(admissible_actions(maze, s))
        for s in maze.free_states
    ]
    return float(np.mean(ratios))


def random_policy_fidelity_mc(
    maze: Maze,
    policy_set: OptimalPolicySet,
    n_draws: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) of the random baseline."""
    free = maze.free_states
    options = [admissible_actions(maze, s) for s in free]
    optimal = [set(policy_set.optimal_actions[s]) for s in free]
    per_draw = np.empty(n_draws)
    for d in range(n_draws):
        hits = sum(
            1 for acts, opt in zip(options, optimal)
            if acts[rng.integers(0, len(acts))] in opt
        )
        per_draw[d] = hits / len(free)
    return float(per_draw.mean()), float(per_draw.std(ddof=1) / np.sqrt(n_draws))


@dataclass(frozen=True)
class ExperimentSpec:
    maze_text: str
    kernel_variant: str = "clear"
    algorithms: tuple[str, ...] = ("rbm",)
    n_runs: int = DESK_RUNS
    n_samples: int = 500
    strategy: str = "sweep"
    base_seed: int = 1
    out_dir: str = "results"
    av_windows: tuple[int, ...] = (500, 250, 10)
    config_overrides: dict[str, TrainingConfig] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithm tags must be distinct")

    def config_for(self, algorithm: str) -> TrainingConfig:
        if algorithm in self.config_overrides:
            return self.config_overrides[algorithm]
        return default_config(
            algorithm, n_samples=self.n_samples, strategy=self.strategy
        )


def _run_replica(args) -> PolicyTrace:
    maze, kernel, config, seed = args
    return train(maze, kernel, config, seed)


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_fidelity_csv(path: Path | str, trace: FidelityTrace):
    """Rows 1..n_samples; UTF-8, LF, '.' decimals, 17 significant digits."""
    path = Path(path)
    lines = ["sample,mean_fid,std_fid"]
    for i in range(1, trace.n_samples + 1):
        lines.append(
            f"{i},{_format_float(trace.mean[i])},{_format_float(trace.std[i])}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_per_run_csv(path: Path | str, per_run: np.ndarray):
    """Per-run fidelity matrix, one row per sample index 0..n_samples."""
    path = Path(path)
    n_runs = per_run.shape[0]
    lines = ["sample," + ",".join(f"run{k}" for k in range(n_runs))]
    for i in range(per_run.shape[1]):
        lines.append(
            f"{i}," + ",".join(_format_float(v) for v in per_run[:, i])
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_per_run_csv(path: Path | str) -> np.ndarray:
    """Inverse of :func:`write_per_run_csv`; shape (n_runs, n_samples + 1)."""
    lines = Path(path).read_text(encoding="utf-8").strip().split("\n")
    rows = [[float(x) for x in line.split(",")[1:]] for line in lines[1:]]
    return np.array(rows).T


def read_fidelity_csv(path: Path | str) -> FidelityTrace:
    """Inverse of :func:`write_fidelity_csv`; index 0 is refilled with NaN-free
    placeholders (the initial policy is not serialized)."""
    lines = Path(path).read_text(encoding="utf-8").strip().split("\n")
    if lines[0] != "sample,mean_fid,std_fid":
        raise ValueError(f"unexpected CSV header: {lines[0]!r}")
    mean = [0.0]
    std = [0.0]
    for line in lines[1:]:
        _, m, s = line.split(",")
        mean.append(float(m))
        std.append(float(s))
    return FidelityTrace(mean=np.array(mean), std=np.array(std), n_runs=0)


def run_experiment(spec: ExperimentSpec) -> dict:
    """Train every algorithm, score fidelity, and write the result files."""
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    maze = parse_maze(spec.maze_text)
    kernel = TransitionKernel(variant=spec.kernel_variant)
    policy_set = value_iteration(maze, kernel)
    seeds = [run_seed(spec.base_seed, k) for k in range(spec.n_runs)]
    n_workers = int(os.environ.get(WORKERS_ENV, "1"))
    manifest = {
        "version": __version__,
        "maze": spec.maze_text,
        "kernel": spec.kernel_variant,
        "n_runs": spec.n_runs,
        "n_samples": spec.n_samples,
        "strategy": spec.strategy,
        "base_seed": spec.base_seed,
        "seeds": seeds,
        "av_windows": list(spec.av_windows),
        "algorithms": {},
        "complete": False,
    }
    results: dict[str, FidelityTrace] = {}
    paths = {"manifest": out / "manifest.json"}
    try:
        for algorithm in spec.algorithms:
            config = spec.config_for(algorithm)
            manifest["algorithms"][algorithm] = dataclasses.asdict(config)
            jobs = [(maze, kernel, config, seed) for seed in seeds]
            progress = os.environ.get("QBMRL_PROGRESS") == "1"
            if n_workers > 1:
                with ProcessPoolExecutor(max_workers=n_workers) as pool:
                    traces = list(pool.map(_run_replica, jobs))
            else:
                traces = []
                for k, job in enumerate(jobs):
                    started = time.time()
                    traces.append(_run_replica(job))
                    if progress:
                        print(
                            f"[{algorithm}] run {k + 1}/{len(jobs)}"
                            f" ({time.time() - started:.0f}s)",
                            flush=True,
                        )
            per_run = per_run_fidelity(traces, policy_set)
            trace = fidelity(traces, policy_set)
            results[algorithm] = trace
            csv_path = out / f"{algorithm}.csv"
            write_fidelity_csv(csv_path, trace)
            paths[algorithm] = csv_path
            runs_path = out / f"{algorithm}_runs.csv"
            write_per_run_csv(runs_path, per_run)
            paths[f"{algorithm}_runs"] = runs_path
        summary_lines = ["algorithm,window,average_fidelity"]
        for algorithm, trace in results.items():
            for window in spec.av_windows:
                if window <= trace.n_samples:
                    value = average_fidelity(trace, window)
                    summary_lines.append(
                        f"{algorithm},{window},{_format_float(value)}"
                    )
        baseline = random_policy_fidelity(maze, policy_set)
        summary_lines.append(f"random-baseline,,{_format_float(baseline)}")
        summary_path = out / "av_summary.csv"
        summary_path.write_text(
            "\n".join(summary_lines) + "\n", encoding="utf-8", newline="\n"
        )
        paths["summary"] = summary_path
        manifest["complete"] = True
    finally:
        paths["manifest"].write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return paths


def oracle_table(maze: Maze, policy_set: OptimalPolicySet) -> dict:
    """Serializable optimal-policy table keyed by "row,col"."""
    table = {}
    for s in maze.free_states:
        row, col = maze.position(s)
        table[f"{row},{col}"] = {
            "value": policy_set.values[s],
            "optimal_actions": [
                ACTION_NAMES[a] for a in policy_set.optimal_actions[s]
            ],
        }
    return table
