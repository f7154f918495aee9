"""Pure numpy kernel lane.

Vectorizes across reads (independent restarts/chains); the sequential
sweep-and-variable structure, RNG consumption, and floating-point term
order all mirror the compiled lane in ``_core.pyx``, so both lanes produce
identical output except for a theoretical last-ulp disagreement inside
``exp`` that has no practical effect.
"""

from __future__ import annotations

import numpy as np

from .rng import GOLDEN, mix64, stream_states, uniform53

_U64 = np.uint64
_GOLDEN = _U64(GOLDEN)
_S63 = _U64(63)


def _init_values(ctr: np.ndarray, num_vars: int, low: float) -> tuple[np.ndarray, np.ndarray]:
    """Random initial states; one draw per variable per read."""
    num_reads = ctr.shape[0]
    values = np.empty((num_reads, num_vars), dtype=np.float64, order="F")
    for i in range(num_vars):
        ctr += _GOLDEN
        bit = mix64(ctr) >> _S63
        values[:, i] = np.where(bit.astype(bool), 1.0, low)
    return values, ctr


def _local_field(lin_i, nbr_ptr, nbr_idx, nbr_val, values, i, num_reads):
    field = np.full(num_reads, lin_i)
    for slot in range(nbr_ptr[i], nbr_ptr[i + 1]):
        field += nbr_val[slot] * values[:, nbr_idx[slot]]
    return field


def sa_run(lin, nbr_ptr, nbr_idx, nbr_val, low, betas, num_reads, seed, salt):
    """Metropolis single-flip annealing; returns int8 states (reads, vars)."""
    num_vars = lin.shape[0]
    ctr = stream_states(seed, salt, num_reads).copy()
    values, ctr = _init_values(ctr, num_vars, low)
    flip_base = low + 1.0
    with np.errstate(over="ignore"):
        for beta in betas:
            for i in range(num_vars):
                field = _local_field(lin[i], nbr_ptr, nbr_idx, nbr_val, values, i, num_reads)
                cur = values[:, i]
                prop = flip_base - cur
                d_e = (prop - cur) * field
                ctr += _GOLDEN
                u = uniform53(mix64(ctr))
                accept = (d_e <= 0.0) | (u < np.exp(-beta * np.maximum(d_e, 0.0)))
                values[:, i] = np.where(accept, prop, cur)
    return values.astype(np.int8)


def gibbs_run(lin_rows, nbr_ptr, nbr_idx, val_rows, low, beta, sweeps, seed, salt):
    """Sequential-scan Gibbs sampling with per-read coefficients.

    ``lin_rows`` is (reads, vars) and ``val_rows`` (reads, nnz) so each
    read may carry its own perturbed model.  Returns the state after
    ``sweeps`` full sweeps.
    """
    num_reads, num_vars = lin_rows.shape
    ctr = stream_states(seed, salt, num_reads).copy()
    values, ctr = _init_values(ctr, num_vars, low)
    span = 1.0 - low
    with np.errstate(over="ignore"):
        for _ in range(sweeps):
            for i in range(num_vars):
                field = lin_rows[:, i].copy()
                for slot in range(nbr_ptr[i], nbr_ptr[i + 1]):
                    field += val_rows[:, slot] * values[:, nbr_idx[slot]]
                d_e = span * field
                ctr += _GOLDEN
                u = uniform53(mix64(ctr))
                p_high = 1.0 / (1.0 + np.exp(beta * d_e))
                values[:, i] = np.where(u < p_high, 1.0, low)
    return values.astype(np.int8)


def dp_spectrum_batch(lin_rows, pair_i, pair_j, pair_vals, low):
    """Energies of all 2^n assignments for each row of coefficients.

    Bit ``i`` of the state index is variable ``i`` (0 -> ``low``, 1 -> 1).
    Terms are accumulated in canonical order (linear by index, then pairs
    in the given order); the offset is not included.
    """
    num_rows, num_vars = lin_rows.shape
    energies = np.zeros((num_rows, 1 << num_vars))
    for i in range(num_vars):
        a = lin_rows[:, i]
        view = energies.reshape(num_rows, 1 << (num_vars - 1 - i), 2, 1 << i)
        if low != 0.0:
            view[:, :, 0, :] += (a * low)[:, None, None]
        view[:, :, 1, :] += a[:, None, None]
    for t in range(pair_i.shape[0]):
        i = int(pair_i[t])
        j = int(pair_j[t])
        b = pair_vals[:, t]
        view = energies.reshape(
            num_rows, 1 << (num_vars - 1 - j), 2, 1 << (j - i - 1), 2, 1 << i
        )
        if low != 0.0:
            bl = (b * low)[:, None, None, None]
            view[:, :, 0, :, 0, :] += (b * low * low)[:, None, None, None]
            view[:, :, 0, :, 1, :] += bl
            view[:, :, 1, :, 0, :] += bl
        view[:, :, 1, :, 1, :] += b[:, None, None, None]
    return energies
