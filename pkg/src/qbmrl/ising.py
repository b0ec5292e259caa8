"""Classical and transverse-field Ising models over spin variables in {-1, +1}.

A transverse-field model with strength ``gamma`` can be mapped to a classical
model of one dimension higher (``n_replicas`` coupled copies of the spin
system) whose Boltzmann distribution approximates the quantum one; see
:func:`build_effective_model`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

Couplings = dict[tuple[int, int], float]


def _canonical_couplings(couplings: Couplings, n_spins: int) -> Couplings:
    """Validate and normalize a coupling map to unordered (i<j) keys."""
    out: Couplings = {}
    for (i, j), value in couplings.items():
        if i == j:
            raise ValueError(f"self-coupling ({i},{i}) is not allowed")
        if not (0 <= i < n_spins and 0 <= j < n_spins):
            raise ValueError(f"coupling ({i},{j}) out of range for {n_spins} spins")
        if not math.isfinite(value):
            raise ValueError(f"coupling ({i},{j}) is not finite")
        key = (i, j) if i < j else (j, i)
        if key in out:
            raise ValueError(f"coupling {key} specified twice")
        out[key] = float(value)
    return out


@dataclass(frozen=True)
class IsingModel:
    """Ising energy model: E(s) = -sum_ij J_ij s_i s_j - sum_i h_i s_i.

    ``transverse_field`` adds a -gamma * sum_i sigma^x_i term in the quantum
    reading; samplers and exact oracles decide how to treat it.  ``offset``
    is an additive energy constant carried for bookkeeping (e.g. the constant
    produced when a clamped Boltzmann machine is rewritten in spin units);
    raw energy evaluations do not include it, free-energy computations do.
    """

    n_spins: int
    couplings: Couplings = field(default_factory=dict)
    biases: np.ndarray | None = None
    transverse_field: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be positive")
        if self.transverse_field < 0:
            raise ValueError("transverse_field must be non-negative")
        object.__setattr__(
            self, "couplings", _canonical_couplings(self.couplings, self.n_spins)
        )
        b = (
            np.zeros(self.n_spins)
            if self.biases is None
            else np.asarray(self.biases, dtype=np.float64)
        )
        if b.shape != (self.n_spins,):
            raise ValueError(f"biases must have length {self.n_spins}")
        if not np.all(np.isfinite(b)):
            raise ValueError("biases must be finite")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "biases", b)

    def coupling(self, i: int, j: int) -> float:
        """Coupling J_ij; symmetric lookup, 0.0 for absent pairs."""
        key = (i, j) if i < j else (j, i)
        return self.couplings.get(key, 0.0)

    @classmethod
    def _from_canonical(
        cls,
        n_spins: int,
        couplings: Couplings,
        biases: np.ndarray,
        transverse_field: float = 0.0,
        offset: float = 0.0,
    ) -> "IsingModel":
        """Construction fast path for callers that build canonical data
        (keys already i < j, finite values, float64 biases)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n_spins", n_spins)
        object.__setattr__(obj, "couplings", couplings)
        biases = np.ascontiguousarray(biases, dtype=np.float64)
        biases.setflags(write=False)
        object.__setattr__(obj, "biases", biases)
        object.__setattr__(obj, "transverse_field", transverse_field)
        object.__setattr__(obj, "offset", offset)
        return obj

    @cached_property
    def _packed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coupling arrays (rows, cols, values) for vectorized energy sums."""
        if not self.couplings:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), np.zeros(0)
        keys = np.array(sorted(self.couplings), dtype=np.int64)
        vals = np.array([self.couplings[tuple(k)] for k in keys], dtype=np.float64)
        return keys[:, 0].copy(), keys[:, 1].copy(), vals

    @cached_property
    def adjacency_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, data) with each coupling stored in both rows."""
        ii, jj, vv = self._packed
        counts = np.zeros(self.n_spins + 1, dtype=np.int64)
        for a in (ii, jj):
            np.add.at(counts, a + 1, 1)
        indptr = np.cumsum(counts)
        indices = np.empty(indptr[-1], dtype=np.int64)
        data = np.empty(indptr[-1], dtype=np.float64)
        cursor = indptr[:-1].copy()
        for a, b in ((ii, jj), (jj, ii)):
            for k in range(len(a)):
                pos = cursor[a[k]]
                indices[pos] = b[k]
                data[pos] = vv[k]
                cursor[a[k]] += 1
        return indptr, indices, data


def validate_spins(spins: np.ndarray, n_spins: int) -> np.ndarray:
    """Check a spin configuration: length n_spins, entries exactly +-1."""
    s = np.asarray(spins)
    if s.shape != (n_spins,):
        raise ValueError(f"configuration has length {s.shape}, expected ({n_spins},)")
    if not np.all(np.abs(s) == 1):
        raise ValueError("spins must be exactly -1 or +1")
    return s.astype(np.float64)


def classical_energy(model: IsingModel, spins: np.ndarray) -> float:
    """E(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i (transverse field ignored)."""
    s = validate_spins(spins, model.n_spins)
    ii, jj, vv = model._packed
    return float(-vv @ (s[ii] * s[jj]) - model.biases @ s)


def slice_coupling(gamma: float, beta: float, n_replicas: int) -> float:
    """Ferromagnetic coupling between adjacent replicas: (1/2b) ln coth(gamma*b/r)."""
    if gamma <= 0 or beta <= 0:
        raise ValueError("gamma and beta must be positive")
    return -math.log(math.tanh(gamma * beta / n_replicas)) / (2.0 * beta)


def build_effective_model(
    model: IsingModel, gamma: float, beta: float, n_replicas: int
) -> IsingModel:
    """Classical model of one dimension higher for a transverse-field model.

    Each of ``n_replicas`` slices carries the couplings J_ij/r and biases
    h_i/r; spin i of adjacent slices (periodic in the slice index) couples
    ferromagnetically with strength ``slice_coupling(gamma, beta, r)``.  Site
    (i, k) of slice k maps to flat index k * n_spins + i.  For r = 2 the two
    periodic bonds between a pair of slices coincide and are stored once with
    twice the weight.
    """
    r = n_replicas
    if r < 2:
        raise ValueError("n_replicas must be at least 2")
    jplus = slice_coupling(gamma, beta, r)
    n = model.n_spins
    bii, bjj, bvv = model._packed
    shifts = np.arange(r, dtype=np.int64)[:, None] * n
    intra_i = (bii[None, :] + shifts).ravel()
    intra_j = (bjj[None, :] + shifts).ravel()
    intra_v = np.tile(bvv / r, r)
    sites = np.arange(n, dtype=np.int64)
    if r == 2:
        inter_i = sites
        inter_j = sites + n
        inter_v = np.full(n, 2.0 * jplus)
    else:
        inter_i = np.concatenate(
            [sites + k * n for k in range(r - 1)] + [sites]
        )
        inter_j = np.concatenate(
            [sites + (k + 1) * n for k in range(r - 1)] + [sites + (r - 1) * n]
        )
        inter_v = np.full(n * r, jplus)
    ii = np.concatenate([intra_i, inter_i])
    jj = np.concatenate([intra_j, inter_j])
    vv = np.concatenate([intra_v, inter_v])
    couplings = {
        (int(i), int(j)): float(v) for i, j, v in zip(ii, jj, vv)
    }
    extended = IsingModel._from_canonical(
        n_spins=n * r,
        couplings=couplings,
        biases=np.tile(model.biases / r, r),
        transverse_field=0.0,
        offset=model.offset,
    )
    # pre-seed the packed cache in construction order; re-deriving (and
    # sorting) it from the dict would dominate small sampling calls
    extended.__dict__["_packed"] = (ii, jj, vv)
    return extended


def effective_energy(extended_model: IsingModel, spins: np.ndarray) -> float:
    """Energy of an extended configuration under the one-dimension-higher model."""
    return classical_energy(extended_model, spins)
