import json

import numpy as np
import pytest

from qbmrl.harness import (
    ExperimentSpec,
    FidelityTrace,
    average_fidelity,
    fidelity,
    oracle_table,
    random_policy_fidelity,
    random_policy_fidelity_mc,
    read_fidelity_csv,
    run_experiment,
    run_seed,
    splitmix64,
    write_fidelity_csv,
)
from qbmrl.maze import Action, TransitionKernel, parse_maze, value_iteration
from qbmrl.training import PolicyTrace, default_config

FIG_2A = "R....\n..W..\n..P.."


def _make_trace(maze, actions):
    return PolicyTrace(free_states=maze.free_states, actions=np.asarray(actions, dtype=np.int8))


def test_splitmix_is_deterministic_and_spreads():
    assert splitmix64(1) == splitmix64(1)
    seeds = {run_seed(42, k) for k in range(100)}
    assert len(seeds) == 100


def test_fidelity_all_optimal():
    maze = parse_maze("R.")
    pol = value_iteration(maze, TransitionKernel("clear"))
    perfect = [[int(Action.STAND), int(Action.LEFT)]] * 4
    trace = _make_trace(maze, perfect)
    result = fidelity([trace, trace], pol)
    assert np.allclose(result.mean, 1.0)
    assert np.allclose(result.std, 0.0)


def test_fidelity_half_optimal():
    maze = parse_maze("R.")
    pol = value_iteration(maze, TransitionKernel("clear"))
    half = [[int(Action.STAND), int(Action.STAND)]]  # second state is wrong
    result = fidelity([_make_trace(maze, half)], pol)
    assert result.mean[0] == pytest.approx(0.5)


def test_fidelity_identical_runs_have_zero_std():
    maze = parse_maze("R.")
    pol = value_iteration(maze, TransitionKernel("clear"))
    actions = [[int(Action.STAND), int(Action.LEFT)], [int(Action.STAND), int(Action.STAND)]]
    trace = _make_trace(maze, actions)
    result = fidelity([trace, trace, trace], pol)
    assert np.allclose(result.std, 0.0)


def test_fidelity_rejects_mismatched_traces():
    maze = parse_maze("R.")
    other = parse_maze("R..")
    pol = value_iteration(maze, TransitionKernel("clear"))
    with pytest.raises(ValueError):
        fidelity([_make_trace(other, [[0, 0, 0]])], pol)
    with pytest.raises(ValueError):
        fidelity([], pol)


def test_average_fidelity_constant():
    trace = FidelityTrace(mean=np.full(11, 0.7), std=np.zeros(11), n_runs=2)
    for window in (0, 1, 5, 10):
        assert average_fidelity(trace, window) == pytest.approx(0.7)


def test_average_fidelity_linear_ramp():
    # fid(i) = i / 500; the window covers samples 490..500 inclusive
    mean = np.arange(501) / 500.0
    trace = FidelityTrace(mean=mean, std=np.zeros(501), n_runs=1)
    assert average_fidelity(trace, 10) == pytest.approx(0.99)
    assert average_fidelity(trace, 500) == pytest.approx(0.5)


def test_average_fidelity_window_bounds():
    trace = FidelityTrace(mean=np.zeros(11), std=np.zeros(11), n_runs=1)
    with pytest.raises(ValueError):
        average_fidelity(trace, 11)


def test_random_policy_fidelity_closed_form():
    maze = parse_maze("R.")
    pol = value_iteration(maze, TransitionKernel("clear"))
    # both cells have 2 admissible actions and a unique optimal one
    assert random_policy_fidelity(maze, pol) == pytest.approx(0.5)


def test_random_policy_fidelity_matches_monte_carlo():
    maze = parse_maze(FIG_2A)
    pol = value_iteration(maze, TransitionKernel("clear"))
    closed = random_policy_fidelity(maze, pol)
    mc, se = random_policy_fidelity_mc(
        maze, pol, n_draws=20_000, rng=np.random.default_rng(0)
    )
    assert abs(mc - closed) < 3 * se


def test_csv_round_trip(tmp_path):
    trace = FidelityTrace(
        mean=np.array([0.25, 1 / 3, 2 / 3, 0.9999999999999999]),
        std=np.array([0.0, 0.1, 0.2, 0.3]),
        n_runs=4,
    )
    path = tmp_path / "x.csv"
    write_fidelity_csv(path, trace)
    text = path.read_text()
    assert text.startswith("sample,mean_fid,std_fid\n")
    assert len(text.strip().split("\n")) == 4  # header + samples 1..3
    back = read_fidelity_csv(path)
    assert np.array_equal(back.mean[1:], trace.mean[1:])
    assert np.array_equal(back.std[1:], trace.std[1:])


def test_run_experiment_end_to_end(tmp_path):
    spec = ExperimentSpec(
        maze_text=FIG_2A,
        algorithms=("rbm",),
        n_runs=3,
        n_samples=25,
        base_seed=11,
        out_dir=str(tmp_path / "out"),
        av_windows=(25, 10),
    )
    paths = run_experiment(spec)
    csv_lines = paths["rbm"].read_text().strip().split("\n")
    assert len(csv_lines) == 26  # header + one row per training sample
    manifest = json.loads(paths["manifest"].read_text())
    assert manifest["complete"] is True
    assert len(manifest["seeds"]) == 3
    assert manifest["algorithms"]["rbm"]["n_samples"] == 25
    summary = paths["summary"].read_text().strip().split("\n")
    assert summary[0] == "algorithm,window,average_fidelity"
    assert any(line.startswith("random-baseline") for line in summary)


def test_run_experiment_reproducible(tmp_path):
    kwargs = dict(
        maze_text="R.",
        algorithms=("rbm",),
        n_runs=2,
        n_samples=10,
        base_seed=3,
        av_windows=(10,),
        config_overrides={
            "rbm": default_config("rbm", hidden_layers=(4,), n_samples=10)
        },
    )
    a = run_experiment(ExperimentSpec(out_dir=str(tmp_path / "a"), **kwargs))
    b = run_experiment(ExperimentSpec(out_dir=str(tmp_path / "b"), **kwargs))
    assert a["rbm"].read_bytes() == b["rbm"].read_bytes()
    assert a["summary"].read_bytes() == b["summary"].read_bytes()
    assert a["manifest"].read_bytes() == b["manifest"].read_bytes()


def test_worker_pool_matches_serial_execution(tmp_path, monkeypatch):
    kwargs = dict(
        maze_text="R.",
        algorithms=("rbm",),
        n_runs=3,
        n_samples=8,
        base_seed=6,
        av_windows=(8,),
        config_overrides={
            "rbm": default_config("rbm", hidden_layers=(4,), n_samples=8)
        },
    )
    serial = run_experiment(ExperimentSpec(out_dir=str(tmp_path / "s"), **kwargs))
    monkeypatch.setenv("QBMRL_WORKERS", "2")
    pooled = run_experiment(ExperimentSpec(out_dir=str(tmp_path / "p"), **kwargs))
    assert serial["rbm"].read_bytes() == pooled["rbm"].read_bytes()
    assert serial["rbm_runs"].read_bytes() == pooled["rbm_runs"].read_bytes()


def test_csv_mean_matches_recomputed_traces(tmp_path):
    from qbmrl.harness import _run_replica
    from qbmrl.maze import TransitionKernel

    maze = parse_maze("R.")
    kernel = TransitionKernel("clear")
    config = default_config("rbm", hidden_layers=(4,), n_samples=12)
    seeds = [run_seed(3, k) for k in range(2)]
    traces = [_run_replica((maze, kernel, config, s)) for s in seeds]
    pol = value_iteration(maze, kernel)
    trace = fidelity(traces, pol)
    spec = ExperimentSpec(
        maze_text="R.",
        algorithms=("rbm",),
        n_runs=2,
        n_samples=12,
        base_seed=3,
        out_dir=str(tmp_path / "c"),
        av_windows=(10,),
        config_overrides={"rbm": config},
    )
    paths = run_experiment(spec)
    back = read_fidelity_csv(paths["rbm"])
    assert np.allclose(back.mean[1:], trace.mean[1:])


def test_oracle_table_serializable():
    maze = parse_maze(FIG_2A)
    pol = value_iteration(maze, TransitionKernel("clear"))
    table = oracle_table(maze, pol)
    assert table["0,0"]["optimal_actions"] == ["stand-still"]
    assert table["0,1"]["optimal_actions"] == ["left"]
    assert "1,2" not in table  # the wall
    json.dumps(table)  # must be serializable


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(maze_text="R.", algorithms=("rbm", "rbm"))
    with pytest.raises(ValueError):
        ExperimentSpec(maze_text="R.", n_runs=0)
