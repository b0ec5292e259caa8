import dataclasses

import numpy as np
import pytest

from qbmrl.maze import (
    ACTION_NAMES,
    Action,
    Cell,
    TransitionKernel,
    admissible_actions,
    generate_nx5,
    parse_maze,
    step,
    transition_support,
    value_iteration,
)

FIG_2A = "R....\n..W..\n..P.."

# optimal-action sets of the 3x5 reference maze, cell by cell
FIG_2C = {
    (0, 0): {Action.STAND},
    (0, 1): {Action.LEFT},
    (0, 2): {Action.LEFT},
    (0, 3): {Action.LEFT},
    (0, 4): {Action.LEFT},
    (1, 0): {Action.UP},
    (1, 1): {Action.LEFT, Action.UP},
    (1, 3): {Action.UP},
    (1, 4): {Action.LEFT, Action.UP},
    (2, 0): {Action.UP},
    (2, 1): {Action.LEFT, Action.UP},
    (2, 2): {Action.LEFT},
    (2, 3): {Action.UP},
    (2, 4): {Action.LEFT, Action.UP},
}


def test_parse_basic():
    maze = parse_maze("R..\n.W.\n..P")
    assert (maze.rows, maze.cols) == (3, 3)
    assert maze.cell(maze.state_of(0, 0)) is Cell.REWARD
    assert maze.cell(maze.state_of(1, 1)) is Cell.WALL
    assert maze.cell(maze.state_of(2, 2)) is Cell.PIT
    assert maze.cell(maze.state_of(0, 1)) is Cell.NEUTRAL


def test_parse_reference_mazes():
    maze = parse_maze(FIG_2A)
    assert (maze.rows, maze.cols) == (3, 5)
    stoc = parse_maze("R...S\n..W..\nS.P..")
    assert stoc.cell(stoc.state_of(2, 0)) is Cell.STOCHASTIC
    assert stoc.cell(stoc.state_of(0, 4)) is Cell.STOCHASTIC


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_maze("R..\n.W")
    with pytest.raises(ValueError):
        parse_maze("R.X")
    with pytest.raises(ValueError):
        parse_maze("")
    with pytest.raises(ValueError):
        parse_maze("WW\nWW")


def test_admissible_interior_cell():
    maze = parse_maze(".....\n.....\n.....")
    actions = admissible_actions(maze, maze.state_of(1, 2))
    assert set(actions) == set(Action)


def test_admissible_corner():
    maze = parse_maze("...\n...")
    assert set(admissible_actions(maze, 0)) == {
        Action.DOWN, Action.RIGHT, Action.STAND,
    }


def test_admissible_next_to_wall():
    maze = parse_maze(FIG_2A)
    actions = admissible_actions(maze, maze.state_of(1, 1))
    assert Action.RIGHT not in actions
    assert set(actions) == {Action.UP, Action.DOWN, Action.LEFT, Action.STAND}


def test_admissible_on_wall_is_error():
    maze = parse_maze(FIG_2A)
    with pytest.raises(ValueError):
        admissible_actions(maze, maze.state_of(1, 2))


def test_clear_kernel_is_deterministic():
    maze = parse_maze(FIG_2A)
    kernel = TransitionKernel("clear")
    rng = np.random.default_rng(0)
    s = maze.state_of(1, 1)
    for _ in range(5):
        nxt, reward = step(maze, kernel, s, Action.UP, rng)
        assert nxt == maze.state_of(0, 1)
        assert reward == 100.0


def test_windy_open_cell_probabilities():
    maze = parse_maze(".....\n.....\n.....")
    kernel = TransitionKernel("windy")
    s = maze.state_of(1, 2)
    support = dict(transition_support(maze, kernel, s, Action.RIGHT))
    assert support[maze.state_of(1, 3)] == pytest.approx(0.8)
    for other in ((0, 2), (2, 2), (1, 1), (1, 2)):
        assert support[maze.state_of(*other)] == pytest.approx(0.05)
    assert sum(support.values()) == pytest.approx(1.0, abs=1e-12)


def test_windy_wall_below_probabilities():
    maze = parse_maze(".....\n.....\n..W..")
    kernel = TransitionKernel("windy")
    s = maze.state_of(1, 2)  # wall directly below
    support = dict(transition_support(maze, kernel, s, Action.RIGHT))
    assert support[maze.state_of(1, 3)] == pytest.approx(0.8)
    assert len(support) == 4
    for other in ((0, 2), (1, 1), (1, 2)):
        assert support[maze.state_of(*other)] == pytest.approx(1.0 / 15.0, abs=1e-12)


def test_windy_rows_sum_to_one_everywhere():
    maze = parse_maze(generate_nx5(5))
    kernel = TransitionKernel("windy")
    for s in maze.free_states:
        for a in admissible_actions(maze, s):
            support = transition_support(maze, kernel, s, a)
            assert sum(p for _, p in support) == pytest.approx(1.0, abs=1e-12)
            assert all(p > 0 for _, p in support)


def test_step_requires_admissible_action():
    maze = parse_maze(FIG_2A)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        step(maze, TransitionKernel("clear"), maze.state_of(1, 1), Action.RIGHT, rng)


def test_stochastic_reward_draws():
    maze = parse_maze("S.")
    rng = np.random.default_rng(1)
    draws = {maze.draw_cell_value(0, rng) for _ in range(50)}
    assert draws == {0.0, 200.0}
    assert maze.expected_cell_value(0) == 100.0


def test_value_iteration_single_cell():
    maze = parse_maze(".")
    result = value_iteration(maze, TransitionKernel("clear"))
    assert result.optimal_actions[0] == (Action.STAND,)
    assert result.values[0] == pytest.approx(100.0 / (1 - 0.8))


def test_value_iteration_reward_cell_value():
    maze = parse_maze(FIG_2A)
    result = value_iteration(maze, TransitionKernel("clear"))
    assert result.values[0] == pytest.approx(200.0 / (1 - 0.8))


def test_value_iteration_matches_reference_solution():
    maze = parse_maze(FIG_2A)
    result = value_iteration(maze, TransitionKernel("clear"))
    for (row, col), expected in FIG_2C.items():
        s = maze.state_of(row, col)
        assert set(result.optimal_actions[s]) == expected, (row, col)


def test_value_iteration_stochastic_cells_use_expectation():
    """The stochastic maze has the same solution set as the plain one."""
    plain = value_iteration(parse_maze(FIG_2A), TransitionKernel("clear"))
    stoc = parse_maze("R...S\n..W..\nS.P..")
    result = value_iteration(stoc, TransitionKernel("clear"))
    for (row, col), expected in FIG_2C.items():
        s = stoc.state_of(row, col)
        assert set(result.optimal_actions[s]) == expected
    assert plain.values[0] == pytest.approx(result.values[0])


def test_optimal_actions_invariant_under_value_shift():
    maze = parse_maze(FIG_2A)
    kernel = TransitionKernel("windy")
    base = value_iteration(maze, kernel)
    shifted_maze = dataclasses.replace(
        maze, reward_value=250.0, pit_value=50.0, neutral_value=150.0
    )
    shifted = value_iteration(shifted_maze, kernel)
    assert base.optimal_actions == shifted.optimal_actions


def test_optimal_actions_nonempty_and_admissible():
    maze = parse_maze(generate_nx5(7))
    for kernel in (TransitionKernel("clear"), TransitionKernel("windy")):
        result = value_iteration(maze, kernel)
        for s in maze.free_states:
            acts = result.optimal_actions[s]
            assert acts
            assert set(acts) <= set(admissible_actions(maze, s))


def test_generate_nx5_family():
    assert generate_nx5(3) == "R...S\n..W..\nS.P.."
    maze = parse_maze(generate_nx5(7))
    cells = maze.cells
    assert cells[maze.state_of(0, 0)] is Cell.REWARD
    assert cells[maze.state_of(6, 2)] is Cell.PIT
    assert cells[maze.state_of(0, 4)] is Cell.STOCHASTIC
    assert cells[maze.state_of(6, 0)] is Cell.STOCHASTIC
    walls = [s for s in range(maze.n_states) if cells[s] is Cell.WALL]
    assert walls == [maze.state_of(k, 2) for k in range(1, 6)]
    with pytest.raises(ValueError):
        generate_nx5(2)


def test_windy_step_frequencies():
    maze = parse_maze(".....\n.....\n.....")
    kernel = TransitionKernel("windy")
    rng = np.random.default_rng(5)
    s = maze.state_of(1, 2)
    hits = 0
    n = 4000
    for _ in range(n):
        nxt, _ = step(maze, kernel, s, Action.RIGHT, rng)
        hits += nxt == maze.state_of(1, 3)
    assert abs(hits / n - 0.8) < 4 * np.sqrt(0.8 * 0.2 / n)


def test_action_names_table():
    assert ACTION_NAMES[Action.STAND] == "stand-still"
    assert [ACTION_NAMES[a] for a in sorted(Action)] == [
        "up", "down", "left", "right", "stand-still",
    ]
