"""Maximum likelihood estimation by iterated quadratic surrogate
minimization.

Each iteration expands the total log-likelihood to second order around the
current point, encodes the two parameters on powers-of-two qubit ladders,
minimizes the resulting quadratic binary model with a sampler, decodes the
winner, and re-centers there.  The reported estimate is the visited point
with the highest exact log-likelihood, which tolerates noisy backends that
jitter around the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ._kernels.rng import derive_seed
from .errors import ExpansionPointError
from .models import QuboModel
from .samplers import SamplerConfig, SampleSet


@dataclass(frozen=True)
class BinaryEncoding:
    """Powers-of-two ladder mapping a qubit block to a non-negative real.

    ``powers`` are integer exponents in strictly decreasing order; the
    represented range is [0, sum(2^p)] with resolution 2^min(powers).
    """

    powers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "powers", tuple(int(p) for p in self.powers))
        if any(b >= a for a, b in zip(self.powers, self.powers[1:])):
            raise ValueError("powers must be strictly decreasing")

    @classmethod
    def from_range(cls, high: int, low: int) -> "BinaryEncoding":
        if low > high:
            raise ValueError("need low <= high")
        return cls(tuple(range(high, low - 1, -1)))

    @property
    def num_bits(self) -> int:
        return len(self.powers)

    @property
    def max_value(self) -> float:
        return sum(2.0**p for p in self.powers)

    @property
    def resolution(self) -> float:
        return 2.0 ** min(self.powers) if self.powers else 0.0


def decode(bits: Sequence[int], encoding: BinaryEncoding) -> float:
    """Value of a qubit block under its encoding: sum of 2^p over set bits."""
    if len(bits) != encoding.num_bits:
        raise ValueError(
            f"expected {encoding.num_bits} bits for this encoding, got {len(bits)}"
        )
    acc = 0.0
    for p, q in zip(encoding.powers, bits):
        acc += (2.0**p) * q
    return acc


@dataclass(frozen=True)
class LikelihoodModel:
    """Per-datum log-likelihood and its first and second derivatives.

    Any two-parameter family plugs in through these six callables; each
    takes ``(theta, phi, x)``.
    """

    name: str
    loglik: Callable[[float, float, float], float]
    d_theta: Callable[[float, float, float], float]
    d_phi: Callable[[float, float, float], float]
    d_theta_theta: Callable[[float, float, float], float]
    d_theta_phi: Callable[[float, float, float], float]
    d_phi_phi: Callable[[float, float, float], float]


def normal_model() -> LikelihoodModel:
    """Normal(theta, phi^2) with closed-form derivatives."""
    half_log_2pi = 0.5 * math.log(2.0 * math.pi)

    def loglik(theta, phi, x):
        return -half_log_2pi - math.log(phi) - (x - theta) ** 2 / (2.0 * phi * phi)

    def d_theta(theta, phi, x):
        return (x - theta) / (phi * phi)

    def d_phi(theta, phi, x):
        return -1.0 / phi + (x - theta) ** 2 / phi**3

    def d_theta_theta(theta, phi, x):
        return -1.0 / (phi * phi)

    def d_theta_phi(theta, phi, x):
        return -2.0 * (x - theta) / phi**3

    def d_phi_phi(theta, phi, x):
        return 1.0 / (phi * phi) - 3.0 * (x - theta) ** 2 / phi**4

    return LikelihoodModel(
        name="normal",
        loglik=loglik,
        d_theta=d_theta,
        d_phi=d_phi,
        d_theta_theta=d_theta_theta,
        d_theta_phi=d_theta_phi,
        d_phi_phi=d_phi_phi,
    )


NORMAL = normal_model()


@dataclass(frozen=True)
class MleProblem:
    data: tuple[float, ...]
    model: LikelihoodModel
    enc_theta: BinaryEncoding
    enc_phi: BinaryEncoding

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(float(x) for x in self.data))
        if not self.data:
            raise ValueError("data must be non-empty")

    @property
    def num_vars(self) -> int:
        return self.enc_theta.num_bits + self.enc_phi.num_bits

    def total_loglik(self, theta: float, phi: float) -> float:
        """Exact summed log-likelihood; -inf when undefined at (theta, phi)."""
        try:
            total = 0.0
            for x in self.data:
                total += self.model.loglik(theta, phi, x)
        except (ValueError, ZeroDivisionError, OverflowError):
            return -math.inf
        return total if not math.isnan(total) else -math.inf

    def decode_assignment(self, bits: Sequence[int]) -> tuple[float, float]:
        kt = self.enc_theta.num_bits
        return decode(bits[:kt], self.enc_theta), decode(bits[kt:], self.enc_phi)


def _derivative_sums(problem: MleProblem, theta0: float, phi0: float):
    """Data sums of the five derivatives and the value at the expansion
    point, accumulated in data order."""
    model = problem.model
    sums = [0.0] * 6
    fns = (
        model.loglik,
        model.d_theta,
        model.d_phi,
        model.d_theta_theta,
        model.d_theta_phi,
        model.d_phi_phi,
    )
    try:
        for x in problem.data:
            for idx, fn in enumerate(fns):
                sums[idx] += fn(theta0, phi0, x)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ExpansionPointError(
            f"log-likelihood undefined at expansion point ({theta0}, {phi0}): {exc}"
        ) from None
    if not all(math.isfinite(s) for s in sums):
        raise ExpansionPointError(
            f"non-finite derivative at expansion point ({theta0}, {phi0})"
        )
    return sums


def taylor_qubo(problem: MleProblem, theta0: float, phi0: float) -> QuboModel:
    """Quadratic binary model whose energy is the negated second-order
    expansion of the total log-likelihood at the decoded point.

    The offset absorbs every qubit-free expansion term, so
    ``energy(q) == -surrogate(theta(q), phi(q))`` exactly for all q.
    """
    s0, s_t, s_p, s_tt, s_tp, s_pp = _derivative_sums(problem, theta0, phi0)
    kt = problem.enc_theta.num_bits
    tp = problem.enc_theta.powers
    pp = problem.enc_phi.powers
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    for i, p in enumerate(tp):
        w = 2.0**p
        a = -(w * s_t + 2.0 ** (2 * p - 1) * s_tt - w * theta0 * s_tt - w * phi0 * s_tp)
        if a != 0.0:
            linear[i] = a
    for i, p in enumerate(pp):
        w = 2.0**p
        a = -(w * s_p + 2.0 ** (2 * p - 1) * s_pp - w * phi0 * s_pp - w * theta0 * s_tp)
        if a != 0.0:
            linear[kt + i] = a
    for i in range(len(tp)):
        for j in range(i + 1, len(tp)):
            b = -(2.0 ** (tp[i] + tp[j])) * s_tt
            if b != 0.0:
                quadratic[(i, j)] = b
    for i in range(len(pp)):
        for j in range(i + 1, len(pp)):
            b = -(2.0 ** (pp[i] + pp[j])) * s_pp
            if b != 0.0:
                quadratic[(kt + i, kt + j)] = b
    for i in range(len(tp)):
        for j in range(len(pp)):
            b = -(2.0 ** (tp[i] + pp[j])) * s_tp
            if b != 0.0:
                quadratic[(i, kt + j)] = b
    offset = -(
        s0
        - theta0 * s_t
        - phi0 * s_p
        + 0.5 * theta0 * theta0 * s_tt
        + theta0 * phi0 * s_tp
        + 0.5 * phi0 * phi0 * s_pp
    )
    return QuboModel(
        num_vars=problem.num_vars, linear=linear, quadratic=quadratic, offset=offset
    )


@dataclass(frozen=True)
class MleIteration:
    iteration: int
    theta: float
    phi: float
    energy: float
    loglik: float


@dataclass
class MleTrace:
    iterations: list[MleIteration]

    def best(self) -> MleIteration:
        """Iterate with the highest exact log-likelihood (earliest on ties)."""
        if not self.iterations:
            raise ValueError("empty trace")
        best = self.iterations[0]
        for it in self.iterations[1:]:
            if it.loglik > best.loglik:
                best = it
        return best

    def to_csv(self) -> str:
        lines = ["iteration,theta,phi,energy,loglik"]
        for it in self.iterations:
            lines.append(f"{it.iteration},{it.theta!r},{it.phi!r},{it.energy!r},{it.loglik!r}")
        return "\n".join(lines) + "\n"


def run_mle(
    problem: MleProblem,
    theta0: float,
    phi0: float,
    sampler: SamplerConfig | Callable[[QuboModel], SampleSet],
    iterations: int,
) -> MleTrace:
    """Iterate expand -> minimize -> decode -> re-center a fixed number of
    times (the stopping criterion) and return the full trace.

    A derivative failure mid-run raises :class:`ExpansionPointError`
    carrying the partial trace.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if isinstance(sampler, SamplerConfig):
        def sample(model, iteration):
            return sampler.sample(
                model, seed=derive_seed(sampler.params.seed, iteration, tag=0x31E)
            )
    else:
        def sample(model, iteration):
            return sampler(model)
    rows: list[MleIteration] = []
    theta, phi = float(theta0), float(phi0)
    for iteration in range(1, iterations + 1):
        try:
            surrogate = taylor_qubo(problem, theta, phi)
        except ExpansionPointError as exc:
            raise ExpansionPointError(str(exc), trace=MleTrace(rows)) from None
        result = sample(surrogate, iteration)
        best = result.best()
        theta, phi = problem.decode_assignment(best.assignment.values)
        rows.append(
            MleIteration(
                iteration=iteration,
                theta=theta,
                phi=phi,
                energy=best.energy,
                loglik=problem.total_loglik(theta, phi),
            )
        )
    return MleTrace(rows)
