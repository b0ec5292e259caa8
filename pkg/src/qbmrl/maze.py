"""Maze MDPs: grid worlds with walls, pits, and (stochastic) rewards.

States are grid cells indexed row-major over the whole grid, walls included
(the Boltzmann machines carry one state node per cell).  Actions are the
five moves up/down/left/right/stand-still in screen coordinates (row 0 on
top).  Moves into walls or off the grid are inadmissible.  An exact value
iteration solver produces the optimal-action sets used for fidelity scoring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

NEUTRAL_VALUE = 100.0
REWARD_VALUE = 200.0
PIT_VALUE = 0.0
DISCOUNT = 0.8
WINDY_P_INTENDED = 0.8


class Cell(Enum):
    NEUTRAL = "."
    WALL = "W"
    REWARD = "R"
    PIT = "P"
    STOCHASTIC = "S"


class Action(IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    STAND = 4


# fixed order used for sweeps and tie-breaking
ACTION_ORDER = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT, Action.STAND)
_DELTAS = {
    Action.UP: (-1, 0),
    Action.DOWN: (1, 0),
    Action.LEFT: (0, -1),
    Action.RIGHT: (0, 1),
    Action.STAND: (0, 0),
}
ACTION_NAMES = {
    Action.UP: "up",
    Action.DOWN: "down",
    Action.LEFT: "left",
    Action.RIGHT: "right",
    Action.STAND: "stand-still",
}


@dataclass(frozen=True)
class Maze:
    rows: int
    cols: int
    cells: tuple[Cell, ...]  # row-major, length rows * cols
    discount: float = DISCOUNT
    reward_value: float = REWARD_VALUE
    pit_value: float = PIT_VALUE
    neutral_value: float = NEUTRAL_VALUE

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("maze must have positive dimensions")
        if len(self.cells) != self.rows * self.cols:
            raise ValueError("cell count does not match dimensions")
        if all(c is Cell.WALL for c in self.cells):
            raise ValueError("maze needs at least one non-wall cell")
        if not (0 <= self.discount < 1):
            raise ValueError("discount must lie in [0, 1)")
        for v in (self.reward_value, self.pit_value, self.neutral_value):
            if not np.isfinite(v):
                raise ValueError("cell values must be finite")

    @property
    def n_states(self) -> int:
        return self.rows * self.cols

    def cell(self, state: int) -> Cell:
        return self.cells[state]

    def state_of(self, row: int, col: int) -> int:
        return row * self.cols + col

    def position(self, state: int) -> tuple[int, int]:
        return divmod(state, self.cols)

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.rows and 0 <= col < self.cols

    def is_free(self, state: int) -> bool:
        return self.cells[state] is not Cell.WALL

    @property
    def free_states(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_states) if self.is_free(s))

    def expected_cell_value(self, state: int) -> float:
        """Deterministic reward value; stochastic cells use their mean
        (which equals the neutral value at the default settings)."""
        cell = self.cells[state]
        if cell is Cell.REWARD:
            return self.reward_value
        if cell is Cell.PIT:
            return self.pit_value
        if cell is Cell.WALL:
            raise ValueError("wall cells carry no value")
        if cell is Cell.STOCHASTIC:
            return (self.reward_value + self.pit_value) / 2.0
        return self.neutral_value

    def draw_cell_value(self, state: int, rng: np.random.Generator) -> float:
        """Reward for entering a cell; stochastic cells draw a fresh
        Bernoulli(0.5) sample over {pit_value, reward_value}."""
        if self.cells[state] is Cell.STOCHASTIC:
            return (
                self.reward_value
                if rng.integers(0, 2)
                else self.pit_value
            )
        return self.expected_cell_value(state)


def parse_maze(text: str) -> Maze:
    """Parse an ASCII maze over {., W, R, P, S}; rows must be equal length."""
    lines = [line for line in text.strip("\n").split("\n")]
    if not lines or not lines[0]:
        raise ValueError("empty maze")
    width = len(lines[0])
    cells: list[Cell] = []
    for line in lines:
        if len(line) != width:
            raise ValueError("ragged maze rows")
        for ch in line:
            try:
                cells.append(Cell(ch))
            except ValueError:
                raise ValueError(f"unknown maze character {ch!r}") from None
    return Maze(rows=len(lines), cols=width, cells=tuple(cells))


def generate_nx5(n: int) -> str:
    """The n x 5 scaling family: reward top-left, pit at (n-1, 2), stochastic
    rewards at (0, 4) and (n-1, 0), and a column of n-2 walls at (k, 2)."""
    if n < 3:
        raise ValueError("family starts at n = 3")
    grid = [["." for _ in range(5)] for _ in range(n)]
    grid[0][0] = "R"
    grid[0][4] = "S"
    grid[n - 1][0] = "S"
    grid[n - 1][2] = "P"
    for k in range(1, n - 1):
        grid[k][2] = "W"
    return "\n".join("".join(row) for row in grid)


def admissible_actions(maze: Maze, state: int) -> tuple[Action, ...]:
    """Stand-still plus every direction whose target is in bounds and free."""
    if not maze.is_free(state):
        raise ValueError("no admissible actions at a wall cell")
    row, col = maze.position(state)
    out = []
    for action in ACTION_ORDER:
        dr, dc = _DELTAS[action]
        r2, c2 = row + dr, col + dc
        if maze.in_bounds(r2, c2) and maze.is_free(maze.state_of(r2, c2)):
            out.append(action)
    return tuple(out)


def action_destination(maze: Maze, state: int, action: Action) -> int:
    row, col = maze.position(state)
    dr, dc = _DELTAS[action]
    return maze.state_of(row + dr, col + dc)


@dataclass(frozen=True)
class TransitionKernel:
    """Clear kernel moves surely; the windy kernel moves as intended with
    probability ``p_intended`` and spreads the rest equally over the other
    states reachable by some admissible action (including standing still)."""

    variant: str = "clear"  # "clear" | "windy"
    p_intended: float = WINDY_P_INTENDED

    def __post_init__(self):
        if self.variant not in ("clear", "windy"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if not (0 < self.p_intended <= 1):
            raise ValueError("p_intended must lie in (0, 1]")


def transition_support(
    maze: Maze, kernel: TransitionKernel, state: int, action: Action
) -> list[tuple[int, float]]:
    """Next states with probabilities for an admissible (state, action)."""
    if action not in admissible_actions(maze, state):
        raise ValueError(f"action {action.name} not admissible at state {state}")
    intended = action_destination(maze, state, action)
    if kernel.variant == "clear":
        return [(intended, 1.0)]
    others = [
        action_destination(maze, state, a)
        for a in admissible_actions(maze, state)
        if action_destination(maze, state, a) != intended
    ]
    if not others:
        return [(intended, 1.0)]
    spread = (1.0 - kernel.p_intended) / len(others)
    return [(intended, kernel.p_intended)] + [(s, spread) for s in others]


def step(
    maze: Maze,
    kernel: TransitionKernel,
    state: int,
    action: Action,
    rng: np.random.Generator,
) -> tuple[int, float]:
    """Draw the next state and its reward (the value of the destination)."""
    support = transition_support(maze, kernel, state, action)
    states, probs = zip(*support)
    nxt = int(rng.choice(states, p=probs)) if len(states) > 1 else states[0]
    return nxt, maze.draw_cell_value(nxt, rng)


@dataclass(frozen=True)
class OptimalPolicySet:
    """Exact solution of the maze MDP: V*, Q*, and all optimal actions."""

    maze: Maze
    values: dict[int, float]
    q_values: dict[tuple[int, Action], float]
    optimal_actions: dict[int, tuple[Action, ...]] = field(default_factory=dict)

    def is_optimal(self, state: int, action: Action) -> bool:
        return action in self.optimal_actions[state]


def value_iteration(
    maze: Maze,
    kernel: TransitionKernel,
    tol: float = 1e-12,
    tie_tol: float = 1e-9,
    max_iterations: int = 100_000,
) -> OptimalPolicySet:
    """Iterate the Bellman operator over the free cells until the max-norm
    change drops below ``tol``; stochastic rewards enter as their mean."""
    free = maze.free_states
    admissible = {s: admissible_actions(maze, s) for s in free}
    support = {
        (s, a): transition_support(maze, kernel, s, a)
        for s in free
        for a in admissible[s]
    }
    values = {s: 0.0 for s in free}
    gamma = maze.discount
    previous_delta = None
    for _ in range(max_iterations):
        delta = 0.0
        new_values = {}
        for s in free:
            best = -np.inf
            for a in admissible[s]:
                q = sum(
                    p * (maze.expected_cell_value(s2) + gamma * values[s2])
                    for s2, p in support[(s, a)]
                )
                best = max(best, q)
            new_values[s] = best
            delta = max(delta, abs(best - values[s]))
        values = new_values
        # gamma-contraction of the Bellman operator, up to roundoff
        if previous_delta is not None:
            assert delta <= gamma * previous_delta + 1e-12
        previous_delta = delta
        if delta < tol:
            break
    q_values = {
        (s, a): sum(
            p * (maze.expected_cell_value(s2) + gamma * values[s2])
            for s2, p in support[(s, a)]
        )
        for s in free
        for a in admissible[s]
    }
    optimal = {}
    for s in free:
        best = max(q_values[(s, a)] for a in admissible[s])
        optimal[s] = tuple(
            a for a in admissible[s] if q_values[(s, a)] >= best - tie_tol
        )
    return OptimalPolicySet(
        maze=maze, values=values, q_values=q_values, optimal_actions=optimal
    )
