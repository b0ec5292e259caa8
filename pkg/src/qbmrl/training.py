"""Temporal-difference training of Boltzmann machines on maze MDPs.

The negative clamped free energy approximates the Q-function.  For each
training sample (s1, a1) the trainer obtains s2 and a reward from the
transition kernel, picks a2 greedily, estimates Q at both pairs (sampling
afresh for each estimate), and moves every weight along
E_TD * (activation) with a per-weight adaptive learning rate, where
E_TD = r + gamma * Q(s2, a2) - Q(s1, a1) and the bootstrapped target is
held constant.  After every update the full greedy policy is recorded, which
is what the fidelity measure scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .machines import (
    BoltzmannMachine,
    VisibleAssignment,
    binary_expectations_from_samples,
    clamp,
    classical_free_energy,
    dbm,
    quantum_free_energy,
    rbm,
    rbm_free_energy,
    rbm_hidden_activations,
)
from .maze import (
    ACTION_ORDER,
    Action,
    Maze,
    TransitionKernel,
    admissible_actions,
    step,
    transition_support,
)
from .samplers import SaSchedule, SqaSchedule, sa_sample, sqa_sample

ALGORITHMS = ("rbm", "dbm-sa", "dbm-sqa", "qbm")
STRATEGIES = ("sweep", "sweep-sas", "uniform")

QBM_GAMMA_FINAL = 2.00
DBM_GAMMA_FINAL = 0.01
ADAGRAD_DELTA = 1e-8
RATE_CAP_FACTOR = 100.0


@dataclass(frozen=True)
class TrainingConfig:
    algorithm: str
    hidden_layers: tuple[int, ...]
    n_samples: int = 500
    strategy: str = "sweep"
    learning_rate: float = 0.01
    discount: float = 0.8
    weight_scale: float = 1.0
    free_energy_beta: float = 2.00  # sampled estimators; the RBM form fixes beta = 1
    sa_schedule: SaSchedule = field(default_factory=SaSchedule)
    sqa_schedule: SqaSchedule | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n_samples < 0:
            raise ValueError("n_samples must be non-negative")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if any(m < 1 for m in self.hidden_layers):
            raise ValueError("hidden layer sizes must be positive")
        if self.sqa_schedule is None:
            gamma_final = QBM_GAMMA_FINAL if self.algorithm == "qbm" else DBM_GAMMA_FINAL
            object.__setattr__(
                self, "sqa_schedule", SqaSchedule(gamma_final=gamma_final)
            )


def default_config(algorithm: str, **overrides) -> TrainingConfig:
    """Per-algorithm defaults: RBM with 16 hidden nodes, deep machines with
    two layers of 8."""
    hidden = (16,) if algorithm == "rbm" else (8, 8)
    return TrainingConfig(
        algorithm=algorithm, hidden_layers=overrides.pop("hidden_layers", hidden),
        **overrides,
    )


def build_machine(maze: Maze, config: TrainingConfig) -> BoltzmannMachine:
    n_states, n_actions = maze.n_states, len(ACTION_ORDER)
    if config.algorithm == "rbm":
        if len(config.hidden_layers) != 1:
            raise ValueError("RBM takes a single hidden layer")
        return rbm(n_states, n_actions, config.hidden_layers[0])
    return dbm(n_states, n_actions, config.hidden_layers)


def adagrad_rates(
    accumulators: np.ndarray,
    base_rate: float,
    delta: float = ADAGRAD_DELTA,
    cap_factor: float = RATE_CAP_FACTOR,
) -> np.ndarray:
    """Per-weight rate eps0 / sqrt(G + delta), capped at cap_factor * eps0."""
    return np.minimum(
        base_rate / np.sqrt(accumulators + delta), cap_factor * base_rate
    )


@dataclass(frozen=True)
class QValue:
    """Q estimate plus the expectations of the sampling pass that produced it
    (binary units), aligned with the machine's hidden nodes and edge list."""

    value: float
    hidden_means: np.ndarray
    pair_means: np.ndarray  # per masked hidden edge; empty for the RBM


@dataclass(frozen=True)
class PolicyTrace:
    """Greedy action per free state, recorded before training (row 0) and
    after every update (rows 1..n_samples)."""

    free_states: tuple[int, ...]
    actions: np.ndarray  # (n_samples + 1, n_free) int8

    def __post_init__(self):
        if self.actions.shape[1] != len(self.free_states):
            raise ValueError("trace width does not match the free states")

    @property
    def n_samples(self) -> int:
        return self.actions.shape[0] - 1


def generate_samples(
    maze: Maze,
    kernel: TransitionKernel,
    strategy: str,
    n_samples: int,
    rng: np.random.Generator,
) -> list[tuple[int, Action, int | None]]:
    """Training inputs (s1, a1, s2-or-None); None means "draw s2 in the loop".

    ``sweep`` cycles over admissible pairs in row-major state order and fixed
    action order; ``sweep-sas`` cycles over kernel-supported triples (windy
    kernels only); ``uniform`` draws pairs i.i.d.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    pairs = [
        (s, a) for s in maze.free_states for a in admissible_actions(maze, s)
    ]
    if strategy == "sweep":
        return [pairs[i % len(pairs)] + (None,) for i in range(n_samples)]
    if strategy == "sweep-sas":
        if kernel.variant != "windy":
            raise ValueError("sweep-sas requires the windy kernel")
        triples = [
            (s, a, s2)
            for s, a in pairs
            for s2, p in transition_support(maze, kernel, s, a)
            if p > 0
        ]
        return [triples[i % len(triples)] for i in range(n_samples)]
    if strategy == "uniform":
        idx = rng.integers(0, len(pairs), size=n_samples)
        return [pairs[i] + (None,) for i in idx]
    raise ValueError(f"unknown strategy {strategy!r}")


class Trainer:
    """One training run: machine, adaptive-rate state, and RNG streams.

    Streams are split per purpose (weight init / environment draws / sampler
    seeds) so the run is reproducible from its single seed.
    """

    def __init__(
        self,
        maze: Maze,
        kernel: TransitionKernel,
        config: TrainingConfig,
        seed: int,
    ):
        self.maze = maze
        self.kernel = kernel
        self.config = config
        self.seed = seed
        self.machine = build_machine(maze, config)
        init_rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
        self.env_rng = np.random.default_rng(np.random.SeedSequence((seed, 1)))
        self._seed_rng = np.random.default_rng(np.random.SeedSequence((seed, 2)))
        self.machine.initialize_weights(init_rng, config.weight_scale)
        self._g2_vis = np.zeros_like(self.machine.visible_weights)
        self._g2_hid = np.zeros_like(self.machine.hidden_weights)
        self._pairs = self.machine.hidden_pairs()
        self._pair_rows = np.array([i for i, _ in self._pairs], dtype=np.int64)
        self._pair_cols = np.array([j for _, j in self._pairs], dtype=np.int64)
        self._admissible = {
            s: admissible_actions(maze, s) for s in maze.free_states
        }

    def _next_sampler_seed(self) -> int:
        return int(self._seed_rng.integers(0, 2**63))

    def q_value(self, state: int, action: Action) -> QValue:
        """Negative clamped free energy, with the expectations of the pass."""
        if state not in self._admissible:
            raise ValueError(f"state {state} is not a free cell")
        if action not in self._admissible[state]:
            raise ValueError(f"action {action.name} not admissible at {state}")
        va = VisibleAssignment(state, int(action))
        cfg = self.config
        if cfg.algorithm == "rbm":
            estimate = rbm_free_energy(self.machine, va)
            means = rbm_hidden_activations(self.machine, va)
            return QValue(-estimate.value, means, np.zeros(0))
        model = clamp(self.machine, va)
        if cfg.algorithm == "dbm-sa":
            samples = sa_sample(model, cfg.sa_schedule, self._next_sampler_seed())
            estimate = classical_free_energy(
                self.machine, va, samples, cfg.free_energy_beta
            )
        elif cfg.algorithm == "dbm-sqa":
            samples = sqa_sample(model, cfg.sqa_schedule, self._next_sampler_seed())
            estimate = classical_free_energy(
                self.machine, va, samples, cfg.free_energy_beta
            )
        else:  # qbm
            samples = sqa_sample(model, cfg.sqa_schedule, self._next_sampler_seed())
            estimate = quantum_free_energy(samples, cfg.free_energy_beta)
        means, pair_dict = binary_expectations_from_samples(samples)
        pair_means = np.array(
            [pair_dict[pair] for pair in self._pairs], dtype=np.float64
        )
        return QValue(-estimate.value, means, pair_means)

    def greedy_action(self, state: int) -> Action:
        """Argmax of Q over admissible actions; ties keep the earlier action
        in the fixed order up, down, left, right, stand-still."""
        best_action, best_q = None, -np.inf
        for action in self._admissible[state]:
            q = self.q_value(state, action).value
            if q > best_q:
                best_action, best_q = action, q
        return best_action

    def td_update(
        self,
        assignment: VisibleAssignment,
        reward: float,
        q1: QValue,
        q2: QValue,
    ) -> float:
        """Apply the TD(0) step; returns the temporal-difference error.

        Each weight moves by rate * E_TD * activation, where the per-weight
        rate adapts to the accumulated squared activation history.  Keeping
        the TD error out of the accumulator preserves the error's magnitude
        in the step; folding it in would cap every step at the base rate,
        which cannot retrain N(0,1)-initialized weights within the training
        budgets used here.
        """
        cfg = self.config
        e_td = reward + cfg.discount * q2.value - q1.value
        if not np.isfinite(e_td):
            raise FloatingPointError("temporal-difference error diverged")
        bm = self.machine
        for row in (assignment.state, bm.n_states + assignment.action):
            mask = bm.visible_mask[row]
            activation = np.where(mask, q1.hidden_means, 0.0)
            self._g2_vis[row] += activation * activation
            rates = adagrad_rates(self._g2_vis[row], cfg.learning_rate)
            bm.visible_weights[row] += rates * e_td * activation
        if len(self._pairs):
            activation = q1.pair_means
            rows, cols = self._pair_rows, self._pair_cols
            self._g2_hid[rows, cols] += activation * activation
            rates = adagrad_rates(self._g2_hid[rows, cols], cfg.learning_rate)
            bm.hidden_weights[rows, cols] += rates * e_td * activation
        return e_td

    def policy_snapshot(self) -> np.ndarray:
        return np.array(
            [int(self.greedy_action(s)) for s in self.maze.free_states],
            dtype=np.int8,
        )

    def run(self) -> PolicyTrace:
        cfg = self.config
        free = self.maze.free_states
        trace = np.empty((cfg.n_samples + 1, len(free)), dtype=np.int8)
        trace[0] = self.policy_snapshot()
        if cfg.n_samples:
            samples = generate_samples(
                self.maze, self.kernel, cfg.strategy, cfg.n_samples, self.env_rng
            )
            for i, (s1, a1, s2) in enumerate(samples, start=1):
                if s2 is None:
                    s2, reward = step(self.maze, self.kernel, s1, a1, self.env_rng)
                else:
                    reward = self.maze.draw_cell_value(s2, self.env_rng)
                a2 = self.greedy_action(s2)
                q1 = self.q_value(s1, a1)
                q2 = self.q_value(s2, a2)
                self.td_update(VisibleAssignment(s1, int(a1)), reward, q1, q2)
                trace[i] = self.policy_snapshot()
        return PolicyTrace(free_states=free, actions=trace)


def train(
    maze: Maze, kernel: TransitionKernel, config: TrainingConfig, seed: int
) -> PolicyTrace:
    """Run one training replica and return its greedy-policy trace."""
    return Trainer(maze, kernel, config, seed).run()
