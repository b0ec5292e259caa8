"""Numba kernels for single-spin-flip Metropolis annealing.

Layout and semantics shared by both kernels:

* Reads (independent anneals) are vectorized in the innermost dimension, so
  arrays are laid out site-major / read-minor and the hot loops run over a
  contiguous read axis.
* Every read owns a splitmix64 stream keyed by ``seed ^ read_index`` and
  consumes exactly one uniform per site visit (plus one per site at
  initialization), so splitting the reads of one call across chunks and
  merging by read index reproduces the unchunked result bit for bit.
* Site visit order within a sweep is fixed ascending index (slice-major for
  the replicated model), which keeps runs reproducible.
* The local field at every site is cached and updated with a masked
  (branch-free) pass over the neighbours after each visit.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0
# Rejection shortcut: exp(-45) < 2^-53, below the resolution of the uniforms.
_LOG_REJECT = 45.0


@njit(cache=True, nogil=True, fastmath=True)
def sa_kernel(n, indptr, indices, data, biases, betas, n_reads, read_offset, seed):
    """Anneal ``n_reads`` classical chains; returns int8 spins (n_reads, n)."""
    n_sweeps = betas.shape[0]
    state = np.empty(n_reads, dtype=np.uint64)
    for read in range(n_reads):
        state[read] = seed ^ np.uint64(read + read_offset)
    s = np.empty((n, n_reads), dtype=np.float64)
    f = np.empty((n, n_reads), dtype=np.float64)
    u = np.empty(n_reads, dtype=np.float64)
    ds = np.empty(n_reads, dtype=np.float64)
    for i in range(n):
        for read in range(n_reads):
            st = state[read] + _GOLDEN
            state[read] = st
            z = (st ^ (st >> np.uint64(30))) * _MIX1
            z = (z ^ (z >> np.uint64(27))) * _MIX2
            z = z ^ (z >> np.uint64(31))
            s[i, read] = 1.0 if (z >> np.uint64(11)) * _INV_2_53 < 0.5 else -1.0
    for i in range(n):
        for read in range(n_reads):
            acc = biases[i]
            for e in range(indptr[i], indptr[i + 1]):
                acc += data[e] * s[indices[e], read]
            f[i, read] = acc
    for t in range(n_sweeps):
        beta = betas[t]
        for i in range(n):
            for read in range(n_reads):
                st = state[read] + _GOLDEN
                state[read] = st
                z = (st ^ (st >> np.uint64(30))) * _MIX1
                z = (z ^ (z >> np.uint64(27))) * _MIX2
                z = z ^ (z >> np.uint64(31))
                u[read] = (z >> np.uint64(11)) * _INV_2_53
            for read in range(n_reads):
                arg = beta * (2.0 * s[i, read] * f[i, read])
                flip = arg <= 0.0 or (
                    arg <= _LOG_REJECT and u[read] < np.exp(-arg)
                )
                delta = -2.0 * s[i, read] if flip else 0.0
                ds[read] = delta
                s[i, read] += delta
            for e in range(indptr[i], indptr[i + 1]):
                j = indices[e]
                w = data[e]
                for read in range(n_reads):
                    f[j, read] += w * ds[read]
    out = np.empty((n_reads, n), dtype=np.int8)
    for i in range(n):
        for read in range(n_reads):
            out[read, i] = np.int8(s[i, read])
    return out


@njit(cache=True, nogil=True, fastmath=True)
def sqa_kernel(
    n, indptr, indices, data, biases, gammas, beta, n_replicas, n_reads, read_offset, seed
):
    """Anneal replicated chains under a decreasing transverse field.

    Returns int8 spins of shape (n_reads, n_replicas, n).  The effective
    model of one dimension higher is rebuilt once per sweep: intra-slice
    weights J/r and h/r, inter-slice coupling J+ from the sweep's gamma,
    periodic in the slice index.
    """
    n_sweeps = gammas.shape[0]
    inv_r = 1.0 / n_replicas
    state = np.empty(n_reads, dtype=np.uint64)
    for read in range(n_reads):
        state[read] = seed ^ np.uint64(read + read_offset)
    s = np.empty((n_replicas, n, n_reads), dtype=np.float64)
    # f caches the intra-slice field (biases + couplings, without the 1/r);
    # the inter-slice term depends on the sweep's J+ and is added on the fly.
    f = np.empty((n_replicas, n, n_reads), dtype=np.float64)
    u = np.empty(n_reads, dtype=np.float64)
    ds = np.empty(n_reads, dtype=np.float64)
    for k in range(n_replicas):
        for i in range(n):
            for read in range(n_reads):
                st = state[read] + _GOLDEN
                state[read] = st
                z = (st ^ (st >> np.uint64(30))) * _MIX1
                z = (z ^ (z >> np.uint64(27))) * _MIX2
                z = z ^ (z >> np.uint64(31))
                s[k, i, read] = 1.0 if (z >> np.uint64(11)) * _INV_2_53 < 0.5 else -1.0
    for k in range(n_replicas):
        for i in range(n):
            for read in range(n_reads):
                acc = biases[i]
                for e in range(indptr[i], indptr[i + 1]):
                    acc += data[e] * s[k, indices[e], read]
                f[k, i, read] = acc
    for t in range(n_sweeps):
        jplus = -0.5 / beta * np.log(np.tanh(beta * gammas[t] / n_replicas))
        for k in range(n_replicas):
            km = k - 1 if k > 0 else n_replicas - 1
            kp = k + 1 if k < n_replicas - 1 else 0
            for i in range(n):
                for read in range(n_reads):
                    st = state[read] + _GOLDEN
                    state[read] = st
                    z = (st ^ (st >> np.uint64(30))) * _MIX1
                    z = (z ^ (z >> np.uint64(27))) * _MIX2
                    z = z ^ (z >> np.uint64(31))
                    u[read] = (z >> np.uint64(11)) * _INV_2_53
                for read in range(n_reads):
                    field = f[k, i, read] * inv_r + jplus * (
                        s[km, i, read] + s[kp, i, read]
                    )
                    arg = beta * (2.0 * s[k, i, read] * field)
                    flip = arg <= 0.0 or (
                        arg <= _LOG_REJECT and u[read] < np.exp(-arg)
                    )
                    delta = -2.0 * s[k, i, read] if flip else 0.0
                    ds[read] = delta
                    s[k, i, read] += delta
                for e in range(indptr[i], indptr[i + 1]):
                    j = indices[e]
                    w = data[e]
                    for read in range(n_reads):
                        f[k, j, read] += w * ds[read]
    out = np.empty((n_reads, n_replicas, n), dtype=np.int8)
    for k in range(n_replicas):
        for i in range(n):
            for read in range(n_reads):
                out[read, k, i] = np.int8(s[k, i, read])
    return out
