"""QUBO and Ising problem containers, energy evaluation, and conversions.

Both model classes store sparse coefficient maps (absent key = 0) plus a
constant ``offset`` so converted models report identical energies.  Energy
accumulation follows one canonical term order everywhere in the package
(linear terms by index, quadratic terms by sorted pair, offset last), which
makes scalar, batched, and enumerated energies agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

QUBO = "qubo"
ISING = "ising"


def _validated_linear(linear: Mapping[int, float], num_vars: int) -> dict[int, float]:
    out: dict[int, float] = {}
    for i, value in linear.items():
        i = int(i)
        if not 0 <= i < num_vars:
            raise ValueError(f"linear index {i} out of range for {num_vars} variables")
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"linear coefficient for {i} is not finite: {value!r}")
        out[i] = v
    return out


def _validated_quadratic(
    quadratic: Mapping[tuple[int, int], float], num_vars: int
) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for key, value in quadratic.items():
        i, j = (int(key[0]), int(key[1]))
        if not (0 <= i < j < num_vars):
            raise ValueError(
                f"quadratic key {key!r} must satisfy 0 <= i < j < num_vars={num_vars}"
            )
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"quadratic coefficient for {key!r} is not finite: {value!r}")
        out[(i, j)] = v
    return out


@dataclass(frozen=True)
class QuboModel:
    """Quadratic unconstrained binary optimization problem.

    Energy of an assignment ``q`` with ``q_i in {0, 1}``::

        E(q) = sum_i linear[i] * q_i
             + sum_{i<j} quadratic[i, j] * q_i * q_j
             + offset

    Coefficient maps are sparse; quadratic keys are upper triangular
    (``i < j``).  Instances are immutable after construction and safe to
    share across workers.
    """

    num_vars: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    convention = QUBO

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "linear", _validated_linear(self.linear, self.num_vars))
        object.__setattr__(
            self, "quadratic", _validated_quadratic(self.quadratic, self.num_vars)
        )

    def interactions(self) -> list[tuple[int, int]]:
        """Sorted list of variable pairs with a nonzero stored coupling."""
        return sorted(self.quadratic)


@dataclass(frozen=True)
class IsingModel:
    """Ising spin problem with spins ``s_i in {-1, +1}``.

    Energy is ``sum_i h[i] s_i + sum_{i<j} J[i, j] s_i s_j + offset``.
    Structural invariants match :class:`QuboModel`.
    """

    num_vars: int
    h: dict[int, float] = field(default_factory=dict)
    J: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    convention = ISING

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "h", _validated_linear(self.h, self.num_vars))
        object.__setattr__(self, "J", _validated_quadratic(self.J, self.num_vars))

    def interactions(self) -> list[tuple[int, int]]:
        return sorted(self.J)


Model = QuboModel | IsingModel


def linear_terms(model: Model) -> dict[int, float]:
    return model.linear if isinstance(model, QuboModel) else model.h


def quadratic_terms(model: Model) -> dict[tuple[int, int], float]:
    return model.quadratic if isinstance(model, QuboModel) else model.J


@dataclass(frozen=True)
class Assignment:
    """Binary assignment in either variable convention.

    ``values`` holds 0/1 bits for the qubo convention and -1/+1 spins for
    the ising convention.
    """

    values: tuple[int, ...]
    convention: str

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        domain = {0, 1} if self.convention == QUBO else {-1, 1}
        if self.convention not in (QUBO, ISING):
            raise ValueError(f"unknown convention {self.convention!r}")
        bad = [v for v in self.values if v not in domain]
        if bad:
            raise ValueError(f"values {bad} not in {sorted(domain)} for {self.convention}")

    @classmethod
    def qubo(cls, values: Iterable[int]) -> "Assignment":
        return cls(tuple(values), QUBO)

    @classmethod
    def ising(cls, values: Iterable[int]) -> "Assignment":
        return cls(tuple(values), ISING)

    def __len__(self) -> int:
        return len(self.values)

    def to_spins(self) -> "Assignment":
        """The same assignment under the bit -> spin map 0 -> -1, 1 -> +1."""
        if self.convention == ISING:
            return self
        return Assignment.ising(tuple(2 * v - 1 for v in self.values))

    def to_bits(self) -> "Assignment":
        if self.convention == QUBO:
            return self
        return Assignment.qubo(tuple((v + 1) // 2 for v in self.values))


@dataclass(frozen=True)
class HardwareRange:
    """Allowed coefficient ranges for the ising form on the target hardware."""

    h_min: float = -2.0
    h_max: float = 2.0
    j_min: float = -4.0
    j_max: float = 1.0

    def __post_init__(self):
        if not (self.h_min < 0.0 < self.h_max):
            raise ValueError("h range must straddle zero: h_min < 0 < h_max")
        if not (self.j_min < 0.0 <= self.j_max):
            raise ValueError("J range must satisfy j_min < 0 <= j_max")


def energy(model: Model, assignment: Assignment) -> float:
    """Evaluate the model energy of an assignment.

    Raises ``ValueError`` when the assignment convention or length does not
    match the model.
    """
    if assignment.convention != model.convention:
        raise ValueError(
            f"assignment convention {assignment.convention!r} does not match "
            f"model convention {model.convention!r}"
        )
    if len(assignment) != model.num_vars:
        raise ValueError(
            f"assignment length {len(assignment)} != num_vars {model.num_vars}"
        )
    values = assignment.values
    acc = 0.0
    lin = linear_terms(model)
    for i in sorted(lin):
        acc += lin[i] * values[i]
    quad = quadratic_terms(model)
    for i, j in sorted(quad):
        acc += quad[(i, j)] * (values[i] * values[j])
    acc += model.offset
    return acc


def qubo_to_ising(model: QuboModel) -> IsingModel:
    """Convert a qubo model via the substitution ``q = (1 + s) / 2``.

    Energies agree on every assignment under the map 0 <-> -1, 1 <-> +1;
    the constant parts move into the offset.
    """
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    offset = model.offset
    for i, a in model.linear.items():
        h[i] = h.get(i, 0.0) + a / 2.0
        offset += a / 2.0
    for (i, j), b in model.quadratic.items():
        J[(i, j)] = b / 4.0
        h[i] = h.get(i, 0.0) + b / 4.0
        h[j] = h.get(j, 0.0) + b / 4.0
        offset += b / 4.0
    h = {i: v for i, v in h.items() if v != 0.0}
    J = {k: v for k, v in J.items() if v != 0.0}
    return IsingModel(num_vars=model.num_vars, h=h, J=J, offset=offset)


def ising_to_qubo(model: IsingModel) -> QuboModel:
    """Inverse of :func:`qubo_to_ising` via ``s = 2 q - 1``."""
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = model.offset
    for i, hv in model.h.items():
        linear[i] = linear.get(i, 0.0) + 2.0 * hv
        offset -= hv
    for (i, j), jv in model.J.items():
        quadratic[(i, j)] = 4.0 * jv
        linear[i] = linear.get(i, 0.0) - 2.0 * jv
        linear[j] = linear.get(j, 0.0) - 2.0 * jv
        offset += jv
    linear = {i: v for i, v in linear.items() if v != 0.0}
    quadratic = {k: v for k, v in quadratic.items() if v != 0.0}
    return QuboModel(num_vars=model.num_vars, linear=linear, quadratic=quadratic, offset=offset)


def as_ising(model: Model) -> IsingModel:
    return model if isinstance(model, IsingModel) else qubo_to_ising(model)


def as_qubo(model: Model) -> QuboModel:
    return model if isinstance(model, QuboModel) else ising_to_qubo(model)


def rescale_to_hardware(
    model: IsingModel, hw_range: HardwareRange = HardwareRange()
) -> tuple[IsingModel, float]:
    """Divide all coefficients by one positive scalar so they fit the range.

    The divisor is the smallest value >= 1 that brings every ``h`` into
    ``[h_min, h_max]`` and every ``J`` into ``[j_min, j_max]``; a uniform
    positive divisor leaves the minimizing assignments unchanged.  Returns
    the rescaled model and the divisor.
    """
    h_limit = min(abs(hw_range.h_min), hw_range.h_max)
    scale = 1.0
    for hv in model.h.values():
        scale = max(scale, abs(hv) / h_limit)
    for jv in model.J.values():
        if jv > 0.0:
            if hw_range.j_max == 0.0:
                raise ValueError(
                    "positive coupling cannot be rescaled into a range with j_max == 0"
                )
            scale = max(scale, jv / hw_range.j_max)
        elif jv < 0.0:
            scale = max(scale, -jv / -hw_range.j_min)
    if scale == 1.0:
        return model, 1.0
    rescaled = IsingModel(
        num_vars=model.num_vars,
        h={i: v / scale for i, v in model.h.items()},
        J={k: v / scale for k, v in model.J.items()},
        offset=model.offset / scale,
    )
    return rescaled, scale


def coefficient_matrix(model: QuboModel) -> np.ndarray:
    """Dense upper-triangular matrix ``Q`` with ``x' Q x + offset = E(x)``."""
    Q = np.zeros((model.num_vars, model.num_vars))
    for i, a in model.linear.items():
        Q[i, i] = a
    for (i, j), b in model.quadratic.items():
        Q[i, j] = b
    return Q
