"""Hot sampling kernels with two interchangeable lanes.

``_core`` is a compiled Cython extension; ``_pure`` is a numpy fallback.
Both implement the same three entry points with the same RNG streams and
floating-point term order, so swapping lanes does not change results:

- ``sa_run``            Metropolis simulated annealing over independent reads
- ``gibbs_run``         fixed-temperature Gibbs sweeps, per-read coefficients
- ``dp_spectrum_batch`` energies of all 2^n assignments per coefficient row

The compiled lane is selected at import when available; set the
environment variable ``ANNEALSTAT_PURE=1`` to force the numpy lane.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..models import Model, linear_terms, quadratic_terms
from . import _pure

try:
    from . import _core
except ImportError:  # extension not built; numpy lane carries the load
    _core = None

if _core is not None and not os.environ.get("ANNEALSTAT_PURE"):
    _active = _core
    ACTIVE_LANE = "compiled"
else:
    _active = _pure
    ACTIVE_LANE = "pure"


def lanes() -> dict[str, object]:
    """Importable lane modules keyed by name (for tests and benchmarks)."""
    out = {"pure": _pure}
    if _core is not None:
        out["compiled"] = _core
    return out


def active() -> object:
    return _active


@dataclass(frozen=True)
class ModelArrays:
    """Dense/CSR views of a model's coefficients for kernel calls.

    ``slot_pair[s]`` maps adjacency slot ``s`` back to the pair index whose
    coupling it mirrors, which lets callers expand per-read pair values
    into per-read adjacency values.
    """

    num_vars: int
    low: float
    lin: np.ndarray
    nbr_ptr: np.ndarray
    nbr_idx: np.ndarray
    nbr_val: np.ndarray
    pair_i: np.ndarray
    pair_j: np.ndarray
    pair_val: np.ndarray
    slot_pair: np.ndarray


def model_arrays(model: Model) -> ModelArrays:
    n = model.num_vars
    lin = np.zeros(n)
    for i, v in linear_terms(model).items():
        lin[i] = v
    pairs = sorted(quadratic_terms(model).items())
    m = len(pairs)
    pair_i = np.empty(m, dtype=np.int32)
    pair_j = np.empty(m, dtype=np.int32)
    pair_val = np.empty(m)
    rows: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
    for t, ((i, j), v) in enumerate(pairs):
        pair_i[t] = i
        pair_j[t] = j
        pair_val[t] = v
        rows[i].append((j, v, t))
        rows[j].append((i, v, t))
    nbr_ptr = np.zeros(n + 1, dtype=np.int64)
    nbr_idx = np.empty(2 * m, dtype=np.int32)
    nbr_val = np.empty(2 * m)
    slot_pair = np.empty(2 * m, dtype=np.int32)
    slot = 0
    for i in range(n):
        for j, v, t in sorted(rows[i]):
            nbr_idx[slot] = j
            nbr_val[slot] = v
            slot_pair[slot] = t
            slot += 1
        nbr_ptr[i + 1] = slot
    low = 0.0 if model.convention == "qubo" else -1.0
    return ModelArrays(
        num_vars=n,
        low=low,
        lin=lin,
        nbr_ptr=nbr_ptr,
        nbr_idx=nbr_idx,
        nbr_val=nbr_val,
        pair_i=pair_i,
        pair_j=pair_j,
        pair_val=pair_val,
        slot_pair=slot_pair,
    )


def states_to_index(states: np.ndarray, low: float) -> np.ndarray:
    """Inverse of :func:`index_to_states` (bit i of the index = variable i)."""
    bits = (states == 1).astype(np.uint64)
    idx = np.zeros(states.shape[0], dtype=np.uint64)
    for i in range(states.shape[1]):
        idx |= bits[:, i] << np.uint64(i)
    return idx


def index_to_states(indices: np.ndarray, num_vars: int, low: float) -> np.ndarray:
    """Decode spectrum state indices into int8 value rows."""
    idx = np.asarray(indices, dtype=np.uint64)
    out = np.empty((idx.shape[0], num_vars), dtype=np.int8)
    low_i = int(low) if low else 0
    for i in range(num_vars):
        bit = (idx >> np.uint64(i)) & np.uint64(1)
        out[:, i] = np.where(bit.astype(bool), 1, low_i)
    return out
