#!/usr/bin/env python3
"""Produce the replicated-training artifacts that the acceptance suite scores.

The three studies are expensive (hours of single-core Monte Carlo), so they
run here once, through the ordinary experiment harness, and land in
tests/data/acceptance/.  Seeds are fixed; reruns reproduce the files byte for
byte.  Sampler effort is desk-scale: fewer reads/sweeps/slices than the
full-effort defaults, with the transverse-field ramp for the classical-limit
arms started low so the sweeps concentrate on the freeze-out region.

Usage: python scripts/run_acceptance.py {a7,a8,a9,all}
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

from qbmrl.harness import ExperimentSpec, run_experiment
from qbmrl.maze import generate_nx5
from qbmrl.samplers import SaSchedule, SqaSchedule
from qbmrl.training import default_config

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "acceptance"
FIG_2A = "R....\n..W..\n..P.."

# desk-scale sampler settings (code defaults keep the full-effort values)
DBM_SQA_DESK = SqaSchedule(
    gamma_initial=0.5, gamma_final=0.01, n_replicas=10, n_sweeps=150, n_reads=20
)
QBM_DESK = SqaSchedule(
    gamma_initial=20.0, gamma_final=2.0, n_replicas=10, n_sweeps=100, n_reads=20
)
SA_DESK_A8 = SaSchedule(n_sweeps=400, n_reads=60)
SA_DESK_A9 = SaSchedule(n_sweeps=250, n_reads=60)


def _report(tag, paths, started):
    print(f"[{tag}] done in {time.time() - started:.0f}s")
    for name, path in sorted(paths.items()):
        print(f"  {name}: {path}")


def run_a7():
    started = time.time()
    spec = ExperimentSpec(
        maze_text=FIG_2A,
        kernel_variant="clear",
        algorithms=("rbm", "dbm-sqa", "qbm"),
        n_runs=40,
        n_samples=500,
        strategy="sweep",
        base_seed=1,
        out_dir=str(OUT / "a7"),
        av_windows=(500, 250, 100, 10),
        config_overrides={
            "rbm": default_config("rbm", n_samples=500),
            "dbm-sqa": default_config(
                "dbm-sqa", n_samples=500, sqa_schedule=DBM_SQA_DESK
            ),
            "qbm": default_config("qbm", n_samples=500, sqa_schedule=QBM_DESK),
        },
    )
    _report("a7", run_experiment(spec), started)


def run_a8():
    started = time.time()
    spec = ExperimentSpec(
        maze_text=FIG_2A,
        kernel_variant="clear",
        algorithms=("dbm-sa", "dbm-sqa"),
        n_runs=10,
        n_samples=500,
        strategy="sweep",
        base_seed=2,
        out_dir=str(OUT / "a8"),
        av_windows=(500, 100),
        config_overrides={
            "dbm-sa": default_config("dbm-sa", n_samples=500, sa_schedule=SA_DESK_A8),
            "dbm-sqa": default_config(
                "dbm-sqa", n_samples=500, sqa_schedule=DBM_SQA_DESK
            ),
        },
    )
    _report("a8", run_experiment(spec), started)


def run_a9():
    for n in (3, 5, 7):
        started = time.time()
        spec = ExperimentSpec(
            maze_text=generate_nx5(n),
            kernel_variant="clear",
            algorithms=("rbm", "dbm-sa"),
            n_runs=20,
            n_samples=500,
            strategy="sweep",
            base_seed=9,
            out_dir=str(OUT / f"a9-n{n}"),
            av_windows=(500, 250, 10),
            config_overrides={
                "rbm": default_config(
                    "rbm", hidden_layers=(20,), n_samples=500
                ),
                "dbm-sa": default_config(
                    "dbm-sa",
                    hidden_layers=(10, 10),
                    n_samples=500,
                    sa_schedule=SA_DESK_A9,
                ),
            },
        )
        _report(f"a9-n{n}", run_experiment(spec), started)


def main():
    stages = sys.argv[1:] or ["all"]
    if "all" in stages:
        stages = ["a7", "a8", "a9"]
    for stage in stages:
        {"a7": run_a7, "a8": run_a8, "a9": run_a9}[stage]()


if __name__ == "__main__":
    main()
