# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernel lane.

Scalar C mirror of ``_pure``: identical RNG streams, identical term order,
identical accept rules.  See the lane contract in ``_kernels.__init__``.
"""

from libc.math cimport exp
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

import numpy as np

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    z ^= z >> 31
    return z


cdef inline uint64_t stream_state(uint64_t seed, uint64_t salt, uint64_t read) noexcept nogil:
    return mix64(mix64(seed ^ mix64(salt)) + (read + 1) * GOLDEN)


cdef inline double uniform53(uint64_t x) noexcept nogil:
    # [0, 1) on the 2^-53 grid; exact power-of-two scaling
    return <double>(x >> 11) * (1.0 / 9007199254740992.0)


cdef inline uint64_t init_values(uint64_t ctr, double* vals, Py_ssize_t n, double low) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        ctr += GOLDEN
        if mix64(ctr) >> 63:
            vals[i] = 1.0
        else:
            vals[i] = low
    return ctr


def sa_run(double[::1] lin, int64_t[::1] nbr_ptr, int32_t[::1] nbr_idx,
           double[::1] nbr_val, double low, double[::1] betas,
           Py_ssize_t num_reads, uint64_t seed, uint64_t salt):
    """Metropolis single-flip annealing; returns int8 states (reads, vars)."""
    cdef Py_ssize_t n = lin.shape[0]
    cdef Py_ssize_t sweeps = betas.shape[0]
    out = np.empty((num_reads, n), dtype=np.int8)
    scratch = np.empty(max(n, 1), dtype=np.float64)
    cdef int8_t[:, ::1] ov = out
    cdef double[::1] sv = scratch
    cdef double* vals = &sv[0]
    cdef double flip_base = low + 1.0
    cdef uint64_t ctr
    cdef Py_ssize_t r, t, i
    cdef int64_t slot
    cdef double beta, field, cur, prop, d_e
    with nogil:
        for r in range(num_reads):
            ctr = stream_state(seed, salt, <uint64_t>r)
            ctr = init_values(ctr, vals, n, low)
            for t in range(sweeps):
                beta = betas[t]
                for i in range(n):
                    field = lin[i]
                    for slot in range(nbr_ptr[i], nbr_ptr[i + 1]):
                        field += nbr_val[slot] * vals[nbr_idx[slot]]
                    cur = vals[i]
                    prop = flip_base - cur
                    d_e = (prop - cur) * field
                    ctr += GOLDEN
                    if d_e <= 0.0:
                        vals[i] = prop
                    elif uniform53(mix64(ctr)) < exp(-beta * d_e):
                        vals[i] = prop
            for i in range(n):
                ov[r, i] = <int8_t>vals[i]
    return out


def gibbs_run(double[:, ::1] lin_rows, int64_t[::1] nbr_ptr, int32_t[::1] nbr_idx,
              double[:, ::1] val_rows, double low, double beta, Py_ssize_t sweeps,
              uint64_t seed, uint64_t salt):
    """Sequential-scan Gibbs with per-read coefficient rows."""
    cdef Py_ssize_t num_reads = lin_rows.shape[0]
    cdef Py_ssize_t n = lin_rows.shape[1]
    out = np.empty((num_reads, n), dtype=np.int8)
    scratch = np.empty(max(n, 1), dtype=np.float64)
    cdef int8_t[:, ::1] ov = out
    cdef double[::1] sv = scratch
    cdef double* vals = &sv[0]
    cdef double span = 1.0 - low
    cdef uint64_t ctr
    cdef Py_ssize_t r, t, i
    cdef int64_t slot
    cdef double field, d_e, p_high
    with nogil:
        for r in range(num_reads):
            ctr = stream_state(seed, salt, <uint64_t>r)
            ctr = init_values(ctr, vals, n, low)
            for t in range(sweeps):
                for i in range(n):
                    field = lin_rows[r, i]
                    for slot in range(nbr_ptr[i], nbr_ptr[i + 1]):
                        field += val_rows[r, slot] * vals[nbr_idx[slot]]
                    d_e = span * field
                    ctr += GOLDEN
                    p_high = 1.0 / (1.0 + exp(beta * d_e))
                    if uniform53(mix64(ctr)) < p_high:
                        vals[i] = 1.0
                    else:
                        vals[i] = low
            for i in range(n):
                ov[r, i] = <int8_t>vals[i]
    return out


cdef inline void add_alternating(double* row, Py_ssize_t start, Py_ssize_t length,
                                 Py_ssize_t step, double v_lo, double v_hi) noexcept nogil:
    # within [start, start+length): blocks of `step` alternate v_lo, v_hi
    cdef Py_ssize_t pos = start
    cdef Py_ssize_t stop = start + length
    cdef Py_ssize_t k
    while pos < stop:
        for k in range(step):
            row[pos + k] += v_lo
        pos += step
        for k in range(step):
            row[pos + k] += v_hi
        pos += step


def dp_spectrum_batch(double[:, ::1] lin_rows, int32_t[::1] pair_i, int32_t[::1] pair_j,
                      double[:, ::1] pair_vals, double low):
    """Energies of all 2^n assignments per coefficient row (no offset).

    Bit ``i`` of the state index is variable ``i``; term order and per-state
    rounding match the numpy lane exactly.
    """
    cdef Py_ssize_t num_rows = lin_rows.shape[0]
    cdef Py_ssize_t n = lin_rows.shape[1]
    cdef Py_ssize_t num_pairs = pair_i.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.zeros((num_rows, size), dtype=np.float64)
    cdef double[:, ::1] ev = out
    cdef double* row
    cdef Py_ssize_t r, i, t, step_i, step_j, pos
    cdef double a, b, bl, v00
    with nogil:
        for r in range(num_rows):
            row = &ev[r, 0]
            for i in range(n):
                a = lin_rows[r, i]
                step_i = (<Py_ssize_t>1) << i
                add_alternating(row, 0, size, step_i, a * low, a)
            for t in range(num_pairs):
                i = pair_i[t]
                step_i = (<Py_ssize_t>1) << i
                step_j = (<Py_ssize_t>1) << pair_j[t]
                b = pair_vals[r, t]
                bl = b * low
                v00 = bl * low
                pos = 0
                while pos < size:
                    add_alternating(row, pos, step_j, step_i, v00, bl)
                    pos += step_j
                    add_alternating(row, pos, step_j, step_i, bl, b)
                    pos += step_j
    return out
