"""Brute-force and dense linear-algebra oracles for small Ising models.

These are verification tools: classical quantities come from full enumeration
of the 2^n spin configurations, quantum ones from the eigendecomposition of
the dense 2^n x 2^n Hamiltonian.  Everything here is deliberately independent
of the Monte Carlo samplers.
"""

from __future__ import annotations

import numpy as np

from .ising import IsingModel

MAX_ENUM_SPINS = 16
MAX_DENSE_SPINS = 10


def enumerate_configurations(n_spins: int) -> np.ndarray:
    """All 2^n spin configurations, shape (2^n, n); bit i of the row index
    gives the sign of spin i (bit set -> +1)."""
    if n_spins > MAX_ENUM_SPINS:
        raise ValueError(f"enumeration capped at {MAX_ENUM_SPINS} spins")
    idx = np.arange(2**n_spins, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n_spins)) & 1
    return (2 * bits - 1).astype(np.float64)


def all_energies(model: IsingModel) -> np.ndarray:
    """Classical energies of every configuration, in enumeration order."""
    configs = enumerate_configurations(model.n_spins)
    ii, jj, vv = model._packed
    e = -(configs[:, ii] * configs[:, jj]) @ vv - configs @ model.biases
    return e


def boltzmann_distribution(model: IsingModel, beta: float) -> np.ndarray:
    """Exact Boltzmann probabilities over the 2^n configurations."""
    e = all_energies(model)
    w = -beta * e
    w -= w.max()
    p = np.exp(w)
    return p / p.sum()


def exact_classical_free_energy(model: IsingModel, beta: float) -> float:
    """F = -(1/beta) ln sum_s exp(-beta E(s)), plus the model's offset."""
    e = all_energies(model)
    w = -beta * e
    m = w.max()
    return float(-(m + np.log(np.exp(w - m).sum())) / beta) + model.offset


def dense_hamiltonian(model: IsingModel) -> np.ndarray:
    """Dense transverse-field Hamiltonian in the sigma^z product basis.

    Diagonal entries are the classical energies; the transverse field
    contributes -gamma on every pair of basis states differing in one spin.
    """
    n = model.n_spins
    if n > MAX_DENSE_SPINS:
        raise ValueError(f"dense Hamiltonian capped at {MAX_DENSE_SPINS} spins")
    dim = 2**n
    h = np.diag(all_energies(model))
    gamma = model.transverse_field
    if gamma != 0.0:
        for b in range(dim):
            for i in range(n):
                h[b, b ^ (1 << i)] -= gamma
    return h


def _thermal_state(model: IsingModel, beta: float):
    h = dense_hamiltonian(model)
    eigvals, eigvecs = np.linalg.eigh(h)
    w = -beta * eigvals
    m = w.max()
    pops = np.exp(w - m)
    log_z = m + np.log(pops.sum())
    return eigvals, eigvecs, pops / pops.sum(), log_z


def exact_quantum_free_energy(model: IsingModel, beta: float) -> float:
    """F = -(1/beta) ln tr exp(-beta H), plus the model's offset."""
    _, _, _, log_z = _thermal_state(model, beta)
    return float(-log_z / beta) + model.offset


def exact_z_expectations(model: IsingModel, beta: float) -> np.ndarray:
    """<sigma_i^z> under the thermal state of the transverse-field model."""
    _, eigvecs, pops, _ = _thermal_state(model, beta)
    diag_rho = (eigvecs**2) @ pops
    signs = enumerate_configurations(model.n_spins)
    return signs.T @ diag_rho


def config_index(spins: np.ndarray) -> int:
    """Enumeration-order index of a configuration (inverse of enumerate)."""
    bits = (np.asarray(spins) > 0).astype(np.int64)
    return int(bits @ (1 << np.arange(len(bits))))


def empirical_distribution(configs: np.ndarray, n_spins: int) -> np.ndarray:
    """Frequency vector over the 2^n configurations from sampled rows."""
    rows = np.asarray(configs).reshape(-1, n_spins)
    bits = (rows > 0).astype(np.int64)
    idx = bits @ (1 << np.arange(n_spins, dtype=np.int64))
    counts = np.bincount(idx, minlength=2**n_spins)
    return counts / counts.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(0.5 * np.abs(np.asarray(p) - np.asarray(q)).sum())
