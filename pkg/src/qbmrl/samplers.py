"""Simulated annealing (SA) and simulated quantum annealing (SQA) samplers.

Both samplers run single-spin-flip Metropolis sweeps in fixed site order.
SA anneals the inverse temperature linearly from ``beta_initial`` to
``beta_final`` and returns the final configuration of each read.  SQA holds
the inverse temperature fixed and anneals the transverse-field strength
linearly from ``gamma_initial`` down to ``gamma_final``, sweeping the
replicated classical model of one dimension higher; each read returns the
final extended configuration and its effective energy under the final field
strength.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ising import IsingModel, build_effective_model

_SEED_MASK = (1 << 64) - 1
# reads per kernel call; bounds the resident state to a few hundred KB
_READ_CHUNK = 256


@dataclass(frozen=True)
class SaSchedule:
    """Linear inverse-temperature ramp for classical annealing."""

    beta_initial: float = 0.01
    beta_final: float = 2.00
    n_sweeps: int = 50_000
    n_reads: int = 150

    def __post_init__(self):
        if not (0 < self.beta_initial <= self.beta_final):
            raise ValueError("need 0 < beta_initial <= beta_final")
        if self.n_sweeps < 1 or self.n_reads < 1:
            raise ValueError("n_sweeps and n_reads must be >= 1")

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_initial, self.beta_final, self.n_sweeps)


@dataclass(frozen=True)
class SqaSchedule:
    """Linear transverse-field ramp at fixed inverse temperature."""

    gamma_initial: float = 20.00
    gamma_final: float = 0.01
    beta: float = 2.00
    n_replicas: int = 25
    n_sweeps: int = 300
    n_reads: int = 150

    def __post_init__(self):
        if not (self.gamma_initial >= self.gamma_final > 0):
            raise ValueError("need gamma_initial >= gamma_final > 0")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.n_replicas < 2:
            raise ValueError("n_replicas must be >= 2")
        if self.n_sweeps < 1 or self.n_reads < 1:
            raise ValueError("n_sweeps and n_reads must be >= 1")

    def gammas(self) -> np.ndarray:
        return np.linspace(self.gamma_initial, self.gamma_final, self.n_sweeps)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Output of a sampler run.

    ``reads`` has shape (n_reads, n_replicas, n_spins); SA sets
    n_replicas = 1.  ``effective_energies[k]`` is exactly
    ``effective_energy(extended_model, reads[k])`` for the extended model at
    the final transverse-field strength (``classical_energy`` for SA).
    """

    model: IsingModel
    n_replicas: int
    reads: np.ndarray
    effective_energies: np.ndarray
    schedule: SaSchedule | SqaSchedule
    seed: int

    @property
    def n_reads(self) -> int:
        return self.reads.shape[0]

    def slice_configs(self) -> np.ndarray:
        """All per-slice configurations, shape (n_reads * n_replicas, n_spins)."""
        return self.reads.reshape(-1, self.model.n_spins)

    def extended_configs(self) -> np.ndarray:
        """Whole extended configurations, shape (n_reads, n_replicas * n_spins)."""
        return self.reads.reshape(self.n_reads, -1)


def _norm_seed(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _SEED_MASK)


def _row_energies(model: IsingModel, rows: np.ndarray) -> np.ndarray:
    """Per-row classical energies; bit-identical to classical_energy since it
    evaluates the same expression on the model's packed arrays."""
    ii, jj, vv = model._packed
    biases = model.biases
    out = np.empty(rows.shape[0])
    for k in range(rows.shape[0]):
        s = rows[k].astype(np.float64)
        out[k] = -vv @ (s[ii] * s[jj]) - biases @ s
    return out


def sa_sample(model: IsingModel, schedule: SaSchedule, seed: int) -> SampleSet:
    """Anneal ``schedule.n_reads`` independent classical chains."""
    indptr, indices, data = model.adjacency_csr
    betas = schedule.betas()
    chunks = []
    for start in range(0, schedule.n_reads, _READ_CHUNK):
        count = min(_READ_CHUNK, schedule.n_reads - start)
        chunks.append(
            _kernels.sa_kernel(
                model.n_spins, indptr, indices, data, model.biases,
                betas, count, start, _norm_seed(seed),
            )
        )
    reads = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    return SampleSet(
        model=model,
        n_replicas=1,
        reads=reads[:, None, :],
        effective_energies=_row_energies(model, reads),
        schedule=schedule,
        seed=seed,
    )


def sqa_sample(model: IsingModel, schedule: SqaSchedule, seed: int) -> SampleSet:
    """Anneal replicated chains; model supplies the classical (clamped) part,
    the transverse field comes from the schedule."""
    indptr, indices, data = model.adjacency_csr
    gammas = schedule.gammas()
    chunks = []
    for start in range(0, schedule.n_reads, _READ_CHUNK):
        count = min(_READ_CHUNK, schedule.n_reads - start)
        chunks.append(
            _kernels.sqa_kernel(
                model.n_spins, indptr, indices, data, model.biases,
                gammas, schedule.beta, schedule.n_replicas,
                count, start, _norm_seed(seed),
            )
        )
    reads = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    extended = build_effective_model(
        model, schedule.gamma_final, schedule.beta, schedule.n_replicas
    )
    flat = reads.reshape(reads.shape[0], -1)
    return SampleSet(
        model=model,
        n_replicas=schedule.n_replicas,
        reads=reads,
        effective_energies=_row_energies(extended, flat),
        schedule=schedule,
        seed=seed,
    )


def slice_expectations(samples: SampleSet):
    """Per-spin means and within-slice pair means, averaged over all reads
    and all slices.

    Pair means are computed for exactly the coupling pairs of the sampled
    model.  Returns ``(means, pair_means)`` with ``means`` an array over
    spins and ``pair_means`` a dict keyed by (i, j), i < j.
    """
    if samples.n_reads == 0:
        raise ValueError("empty sample set")
    flat = samples.slice_configs().astype(np.float64)
    means = flat.mean(axis=0)
    ii, jj, _ = samples.model._packed
    pair_means: dict[tuple[int, int], float] = {}
    if len(ii):
        pm = np.einsum("ki,ki->i", flat[:, ii], flat[:, jj]) / flat.shape[0]
        pair_means = {
            (int(i), int(j)): float(v) for i, j, v in zip(ii, jj, pm)
        }
    return means, pair_means
