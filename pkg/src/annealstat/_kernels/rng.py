"""Counter-based pseudo-random streams shared by both kernel lanes.

Each read (independent sample) owns a stream addressed by
``(seed, salt, read_index)``; draw ``k`` of a stream is a pure function of
that address, so reads can be generated in any order, in parallel, or in
vectorized blocks and still reproduce bit for bit.  The generator is the
splitmix64 finalizer applied to a Weyl sequence, evaluated identically in
numpy (here) and in C (``_core``).
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

# Stream salts: one namespace per consumer so draw positions never collide.
SALT_SA = 1
SALT_GIBBS = 2
SALT_NOISE_LINEAR = 3
SALT_NOISE_QUADRATIC = 4
SALT_CATEGORICAL = 5

_U64 = np.uint64
_C1 = _U64(0xBF58476D1CE4E5B9)
_C2 = _U64(0x94D049BB133111EB)
_S30 = _U64(30)
_S27 = _U64(27)
_S31 = _U64(31)
_S11 = _U64(11)
_GOLDEN = _U64(GOLDEN)
_INV53 = 2.0**-53


def mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer on uint64 values (scalar or array)."""
    z = z ^ (z >> _S30)
    z = z * _C1
    z = z ^ (z >> _S27)
    z = z * _C2
    return z ^ (z >> _S31)


def mix64_int(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_states(seed: int, salt: int, num_streams: int) -> np.ndarray:
    """Initial counter for streams 0..num_streams-1 of (seed, salt)."""
    base = _U64((mix64_int((seed & _MASK) ^ mix64_int(salt))) & _MASK)
    idx = np.arange(1, num_streams + 1, dtype=np.uint64)
    return mix64(base + idx * _GOLDEN)


def stream_state_int(seed: int, salt: int, stream_index: int) -> int:
    base = mix64_int((seed & _MASK) ^ mix64_int(salt))
    return mix64_int((base + ((stream_index + 1) * GOLDEN)) & _MASK)


def draws(states: np.ndarray, first: int, count: int) -> np.ndarray:
    """Raw uint64 outputs for draws ``first .. first+count-1`` (1-based).

    Shape ``(len(states), count)``; column ``k`` is draw ``first + k`` of
    each stream.
    """
    ks = np.arange(first, first + count, dtype=np.uint64)
    return mix64(states[:, None] + ks[None, :] * _GOLDEN)


def uniform53(raw: np.ndarray) -> np.ndarray:
    """Map raw outputs to doubles in [0, 1) on the 2^-53 grid."""
    return (raw >> _S11).astype(np.float64) * _INV53


def uniform_open(raw: np.ndarray) -> np.ndarray:
    """Map raw outputs to doubles in (0, 1); safe for inverse-CDF use."""
    return ((raw >> _S11).astype(np.float64) + 0.5) * _INV53


def derive_seed(seed: int, index: int, tag: int = 0) -> int:
    """Deterministic child seed for an independent sub-task (column, restart,
    iteration).  Stable across processes and platforms."""
    return stream_state_int(seed, 0xD1B54A32D192ED03 ^ tag, index)
