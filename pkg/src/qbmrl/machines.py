"""Boltzmann machines over state/action/hidden nodes and their free energies.

Visible nodes split into state nodes and action nodes; a visible assignment
is one-hot on each.  Clamping a machine to an assignment leaves an energy
model over the hidden nodes alone, which is rewritten in spin units and
handed to the samplers.  Free energies can be computed four ways: the RBM
closed form, sampled classical (DBM), sampled quantum (effective model of
one dimension higher), and exact enumeration for verification.

Hidden units are binary in {0, 1}; samplers work on spins in {-1, +1}.  The
mapping h = (sigma + 1) / 2 turns the clamped binary energy into spin
couplings w/4 and biases built from w/2 and w/4, plus an additive constant
recorded on the Ising model's ``offset``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact
from .ising import IsingModel
from .samplers import SampleSet, SqaSchedule, slice_expectations

ACTIVATION_CLIP = 1e-12
MAX_ENUM_HIDDEN = 16
MAX_DENSE_HIDDEN = 10


@dataclass(frozen=True, eq=False)
class BoltzmannMachine:
    """Layered Boltzmann machine with mutable weights on a fixed edge set.

    ``visible_weights`` has one row per visible node (states first, then
    actions) and one column per hidden node; ``hidden_weights`` is strictly
    upper triangular.  Boolean masks fix the layout; entries outside the
    masks stay zero.
    """

    n_states: int
    n_actions: int
    hidden_layers: tuple[int, ...]
    layout: str  # "rbm" | "dbm" | "gbm"
    visible_mask: np.ndarray
    hidden_mask: np.ndarray
    visible_weights: np.ndarray
    hidden_weights: np.ndarray

    @property
    def n_visible(self) -> int:
        return self.n_states + self.n_actions

    @property
    def n_hidden(self) -> int:
        return int(sum(self.hidden_layers))

    @property
    def n_weights(self) -> int:
        return int(self.visible_mask.sum() + self.hidden_mask.sum())

    def hidden_pairs(self) -> list[tuple[int, int]]:
        ii, jj = np.nonzero(self.hidden_mask)
        return [(int(i), int(j)) for i, j in zip(ii, jj)]

    def initialize_weights(self, rng: np.random.Generator, scale: float = 1.0):
        """Independent zero-mean Gaussians (std ``scale``) on every edge."""
        self.visible_weights[:] = rng.normal(0.0, scale, self.visible_weights.shape)
        self.visible_weights[~self.visible_mask] = 0.0
        self.hidden_weights[:] = rng.normal(0.0, scale, self.hidden_weights.shape)
        self.hidden_weights[~self.hidden_mask] = 0.0


def _empty_weights(n_visible: int, n_hidden: int):
    return (
        np.zeros((n_visible, n_hidden)),
        np.zeros((n_hidden, n_hidden)),
    )


def rbm(n_states: int, n_actions: int, n_hidden: int) -> BoltzmannMachine:
    """Complete bipartite visible-hidden machine; no hidden-hidden edges."""
    n_visible = n_states + n_actions
    w_vis, w_hid = _empty_weights(n_visible, n_hidden)
    return BoltzmannMachine(
        n_states=n_states,
        n_actions=n_actions,
        hidden_layers=(n_hidden,),
        layout="rbm",
        visible_mask=np.ones((n_visible, n_hidden), dtype=bool),
        hidden_mask=np.zeros((n_hidden, n_hidden), dtype=bool),
        visible_weights=w_vis,
        hidden_weights=w_hid,
    )


def dbm(n_states: int, n_actions: int, layer_sizes) -> BoltzmannMachine:
    """Deep machine: states connect to the first hidden layer, actions to the
    last, consecutive hidden layers are fully connected, no intra-layer edges."""
    layer_sizes = tuple(int(m) for m in layer_sizes)
    if len(layer_sizes) < 1 or any(m < 1 for m in layer_sizes):
        raise ValueError("layer_sizes must be positive")
    n_visible = n_states + n_actions
    n_hidden = sum(layer_sizes)
    vis_mask = np.zeros((n_visible, n_hidden), dtype=bool)
    hid_mask = np.zeros((n_hidden, n_hidden), dtype=bool)
    offsets = np.cumsum((0,) + layer_sizes)
    first = slice(offsets[0], offsets[1])
    last = slice(offsets[-2], offsets[-1])
    vis_mask[:n_states, first] = True
    vis_mask[n_states:, last] = True
    for layer in range(len(layer_sizes) - 1):
        a = slice(offsets[layer], offsets[layer + 1])
        b = slice(offsets[layer + 1], offsets[layer + 2])
        hid_mask[a, b] = True
    w_vis, w_hid = _empty_weights(n_visible, n_hidden)
    return BoltzmannMachine(
        n_states=n_states,
        n_actions=n_actions,
        hidden_layers=layer_sizes,
        layout="dbm",
        visible_mask=vis_mask,
        hidden_mask=hid_mask,
        visible_weights=w_vis,
        hidden_weights=w_hid,
    )


def gbm(n_states: int, n_actions: int, n_hidden: int) -> BoltzmannMachine:
    """All visible-hidden edges plus a complete graph on the hidden nodes."""
    n_visible = n_states + n_actions
    w_vis, w_hid = _empty_weights(n_visible, n_hidden)
    return BoltzmannMachine(
        n_states=n_states,
        n_actions=n_actions,
        hidden_layers=(n_hidden,),
        layout="gbm",
        visible_mask=np.ones((n_visible, n_hidden), dtype=bool),
        hidden_mask=np.triu(np.ones((n_hidden, n_hidden), dtype=bool), k=1),
        visible_weights=w_vis,
        hidden_weights=w_hid,
    )


@dataclass(frozen=True)
class VisibleAssignment:
    """One-hot assignment of the visible nodes: one active state, one action."""

    state: int
    action: int

    def validate(self, bm: BoltzmannMachine) -> "VisibleAssignment":
        if not (0 <= self.state < bm.n_states):
            raise ValueError(f"state index {self.state} out of range")
        if not (0 <= self.action < bm.n_actions):
            raise ValueError(f"action index {self.action} out of range")
        return self

    @classmethod
    def from_vectors(cls, state_vec, action_vec) -> "VisibleAssignment":
        state_vec = np.asarray(state_vec)
        action_vec = np.asarray(action_vec)
        for name, vec in (("state", state_vec), ("action", action_vec)):
            if not (np.all((vec == 0) | (vec == 1)) and vec.sum() == 1):
                raise ValueError(f"{name} vector must be one-hot binary")
        return cls(int(np.argmax(state_vec)), int(np.argmax(action_vec)))


@dataclass(frozen=True)
class FreeEnergyEstimate:
    value: float
    estimator: str  # rbm_closed | classical_sampled | quantum_sampled | exact_enumeration
    n_samples: int


def active_hidden_inputs(bm: BoltzmannMachine, v: VisibleAssignment) -> np.ndarray:
    """Per-hidden-node input from the active state and action rows."""
    v.validate(bm)
    return bm.visible_weights[v.state] + bm.visible_weights[bm.n_states + v.action]


def clamp(bm: BoltzmannMachine, v: VisibleAssignment) -> IsingModel:
    """Ising model over the hidden spins for a fixed visible assignment.

    The binary energy -sum w^{vh} v h - sum w^{hh'} h h' becomes spin
    couplings w^{hh'}/4 and per-spin biases (sum_v w^{vh} v)/2 +
    (sum_{h'} w^{hh'})/4; only hidden nodes adjacent to the active state or
    action pick up a visible bias.  The additive constant of the rewriting
    is recorded on the model's ``offset``.
    """
    active = active_hidden_inputs(bm, v)
    hid = np.where(bm.hidden_mask, bm.hidden_weights, 0.0)
    biases = active / 2.0 + (hid.sum(axis=0) + hid.sum(axis=1)) / 4.0
    couplings = {
        (i, j): bm.hidden_weights[i, j] / 4.0 for (i, j) in bm.hidden_pairs()
    }
    offset = -active.sum() / 2.0 - hid.sum() / 4.0
    return IsingModel._from_canonical(
        n_spins=bm.n_hidden,
        couplings=couplings,
        biases=biases,
        transverse_field=0.0,
        offset=float(offset),
    )


def rbm_hidden_activations(bm: BoltzmannMachine, v: VisibleAssignment) -> np.ndarray:
    """<h> per hidden node: sigmoid of the active visible inputs (RBM only)."""
    if bm.layout != "rbm":
        raise ValueError("closed-form activations require the RBM layout")
    x = active_hidden_inputs(bm, v)
    return 1.0 / (1.0 + np.exp(-x))


def rbm_free_energy(bm: BoltzmannMachine, v: VisibleAssignment) -> FreeEnergyEstimate:
    """Closed-form RBM free energy (implicit beta = 1, natural logs)."""
    p = rbm_hidden_activations(bm, v)
    x = active_hidden_inputs(bm, v)
    p = np.clip(p, ACTIVATION_CLIP, 1.0 - ACTIVATION_CLIP)
    entropy = -(p * np.log(p) + (1.0 - p) * np.log(1.0 - p)).sum()
    minus_f = float(x @ p + entropy)
    return FreeEnergyEstimate(-minus_f, "rbm_closed", 0)


def binary_expectations_from_samples(samples: SampleSet):
    """Slice-averaged spin expectations converted to {0,1} units.

    Returns (``h_means``, ``pair_means``) with h = (sigma + 1)/2 and
    hh' = (sigma sigma' + sigma + sigma' + 1)/4; pairs follow the sampled
    model's couplings.
    """
    spin_means, spin_pairs = slice_expectations(samples)
    h_means = (spin_means + 1.0) / 2.0
    pair_means = {
        (i, j): (v + spin_means[i] + spin_means[j] + 1.0) / 4.0
        for (i, j), v in spin_pairs.items()
    }
    return h_means, pair_means


def _plugin_entropy(rows: np.ndarray) -> float:
    """Plug-in entropy (nats) of the empirical distribution over distinct rows."""
    _, counts = np.unique(np.ascontiguousarray(rows), axis=0, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log(p)).sum())


def classical_free_energy(
    bm: BoltzmannMachine, v: VisibleAssignment, samples: SampleSet, beta: float
) -> FreeEnergyEstimate:
    """Sampled free energy of the clamped classical machine.

    -F = sum w^{vh} v <h> + sum w^{hh'} <hh'> - (1/beta) sum_h P(h) ln P(h),
    with expectations slice-averaged in {0,1} units and P the empirical
    frequency of each distinct sampled hidden configuration (one per slice
    per read).
    """
    if samples.n_reads == 0:
        raise ValueError("empty sample set")
    v.validate(bm)
    h_means, pair_means = binary_expectations_from_samples(samples)
    active = active_hidden_inputs(bm, v)
    energy_terms = float(active @ h_means)
    for (i, j), hh in pair_means.items():
        energy_terms += bm.hidden_weights[i, j] * hh
    entropy = _plugin_entropy(samples.slice_configs())
    minus_f = energy_terms + entropy / beta
    return FreeEnergyEstimate(
        -minus_f, "classical_sampled", samples.n_reads * samples.n_replicas
    )


def suzuki_trotter_offset(
    n_spins: int, n_replicas: int, beta: float, gamma: float
) -> float:
    """Free-energy constant relating the replicated model to the quantum one.

    The quantum partition function factorizes as C^(n r) times the partition
    function of the effective classical model, with C^2 = sinh(2 beta
    gamma / r) / 2; the corresponding free-energy shift is
    -(n r / 2 beta) ln(sinh(2 beta gamma / r) / 2).
    """
    return float(
        -(n_spins * n_replicas)
        / (2.0 * beta)
        * np.log(0.5 * np.sinh(2.0 * beta * gamma / n_replicas))
    )


def quantum_free_energy(samples: SampleSet, beta: float) -> FreeEnergyEstimate:
    """Sampled free energy of the transverse-field (quantum) machine.

    F = <H_eff> + (1/beta) sum_c P(c) ln P(c) over whole extended
    configurations (one sample point per read), plus the replica-to-quantum
    normalization constant at the final field strength and the clamping
    offset of the sampled model.
    """
    if samples.n_reads == 0:
        raise ValueError("empty sample set")
    if not isinstance(samples.schedule, SqaSchedule):
        raise ValueError("quantum free energy requires SQA samples")
    e_mean = float(samples.effective_energies.mean())
    entropy = _plugin_entropy(samples.extended_configs())
    norm = suzuki_trotter_offset(
        samples.model.n_spins,
        samples.n_replicas,
        beta,
        samples.schedule.gamma_final,
    )
    f = e_mean - entropy / beta + norm + samples.model.offset
    return FreeEnergyEstimate(f, "quantum_sampled", samples.n_reads)


def _enumerate_binary(n: int) -> np.ndarray:
    idx = np.arange(2**n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.float64)


def _clamped_binary_energies(bm: BoltzmannMachine, v: VisibleAssignment):
    """Energies of all 2^m hidden configurations in {0,1} units."""
    m = bm.n_hidden
    if m > MAX_ENUM_HIDDEN:
        raise ValueError(f"enumeration capped at {MAX_ENUM_HIDDEN} hidden nodes")
    configs = _enumerate_binary(m)
    active = active_hidden_inputs(bm, v)
    energies = -(configs @ active)
    for i, j in bm.hidden_pairs():
        energies -= bm.hidden_weights[i, j] * configs[:, i] * configs[:, j]
    return configs, energies


def exact_free_energy(
    bm: BoltzmannMachine, v: VisibleAssignment, beta: float
) -> float:
    """-(1/beta) ln Z by brute-force enumeration of the hidden configurations."""
    _, energies = _clamped_binary_energies(bm, v)
    w = -beta * energies
    m = w.max()
    return float(-(m + np.log(np.exp(w - m).sum())) / beta)


def exact_hidden_expectations(
    bm: BoltzmannMachine, v: VisibleAssignment, beta: float
):
    """Exact Boltzmann <h> and <hh'> in {0,1} units (enumeration oracle)."""
    configs, energies = _clamped_binary_energies(bm, v)
    w = -beta * energies
    w -= w.max()
    p = np.exp(w)
    p /= p.sum()
    h_means = configs.T @ p
    pair_means = {
        (i, j): float((configs[:, i] * configs[:, j]) @ p)
        for (i, j) in bm.hidden_pairs()
    }
    return h_means, pair_means


def exact_quantum_free_energy(
    bm: BoltzmannMachine, v: VisibleAssignment, beta: float, gamma: float
) -> float:
    """-(1/beta) ln tr exp(-beta H) for the clamped machine with transverse
    field gamma, via dense eigendecomposition; reduces to the classical
    enumeration value at gamma = 0."""
    if bm.n_hidden > MAX_DENSE_HIDDEN:
        raise ValueError(f"dense oracle capped at {MAX_DENSE_HIDDEN} hidden nodes")
    clamped = clamp(bm, v)
    model = IsingModel(
        n_spins=clamped.n_spins,
        couplings=dict(clamped.couplings),
        biases=clamped.biases,
        transverse_field=gamma,
        offset=clamped.offset,
    )
    return exact.exact_quantum_free_energy(model, beta)
