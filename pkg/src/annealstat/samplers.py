"""Sampling backends: exact enumeration, simulated annealing, and a noisy
Boltzmann emulator of annealer output.

All backends return a :class:`SampleSet` whose energies are recomputed on
the clean input model, and all are deterministic functions of
``(model, parameters, seed)``: each read draws from its own counter-based
RNG stream, so results do not depend on execution order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ndtri

from . import _kernels
from ._kernels import rng
from .errors import CapacityError
from .models import (
    Assignment,
    HardwareRange,
    Model,
    as_ising,
    energy,
    linear_terms,
    quadratic_terms,
    rescale_to_hardware,
)

EXACT_MAX_VARS = 24
FULL_SPECTRUM_MAX_VARS = 20
BOLTZMANN_EXACT_MAX_VARS = 20

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerParams:
    """Knobs shared by the stochastic backends.

    ``sa_*`` fields control simulated annealing (geometric inverse
    temperature schedule); ``gibbs_burn_sweeps`` is the burn-in used by the
    Boltzmann emulator when the problem is too large for exact categorical
    draws.
    """

    num_reads: int = 1000
    seed: int = 0
    sa_sweeps: int = 1000
    sa_beta_initial: float = 0.1
    sa_beta_final: float = 10.0
    gibbs_burn_sweeps: int = 256

    def __post_init__(self):
        if self.num_reads < 1:
            raise ValueError("num_reads must be >= 1")
        if self.sa_sweeps < 1:
            raise ValueError("sa_sweeps must be >= 1")
        if not (0.0 < self.sa_beta_initial <= self.sa_beta_final):
            raise ValueError("need 0 < sa_beta_initial <= sa_beta_final")
        if self.gibbs_burn_sweeps < 1:
            raise ValueError("gibbs_burn_sweeps must be >= 1")


@dataclass(frozen=True)
class NoiseModel:
    """Per-read coefficient perturbations plus the Boltzmann temperature.

    Each read perturbs every linear field by N(bias_a, sigma_a^2) and every
    stored coupling by N(bias_b, sigma_b^2), independently per read and per
    coefficient.  The default sigmas are a configuration choice, not a
    measured hardware value.
    """

    sigma_a: float = 0.05
    sigma_b: float = 0.05
    bias_a: float = 0.0
    bias_b: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        for name in ("sigma_a", "sigma_b"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0")
        for name in ("bias_a", "bias_b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError("tau must be finite and > 0")


@dataclass(frozen=True)
class SampleRecord:
    assignment: Assignment
    energy: float
    occurrences: int
    num_broken_chains: int = 0


@dataclass
class SampleSet:
    """Aggregated sampler output, sorted by (energy, assignment).

    ``info`` carries backend metadata (name, seed, reads, parameters).
    """

    records: list[SampleRecord]
    info: dict

    def __post_init__(self):
        self.records = sorted(
            self.records,
            key=lambda r: (r.energy, r.assignment.values, r.num_broken_chains),
        )

    def best(self) -> SampleRecord:
        if not self.records:
            raise ValueError("empty sample set")
        return self.records[0]

    @property
    def total_occurrences(self) -> int:
        return sum(r.occurrences for r in self.records)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    @classmethod
    def from_states(
        cls,
        model: Model,
        states: np.ndarray,
        info: dict,
        occurrences: np.ndarray | None = None,
    ) -> "SampleSet":
        """Aggregate raw int8 state rows; energies come from the clean model."""
        states = np.asarray(states, dtype=np.int8)
        if occurrences is None:
            unique, counts = np.unique(states, axis=0, return_counts=True)
        else:
            unique, counts = states, np.asarray(occurrences)
        energies = batch_energies(model, unique)
        make = Assignment.qubo if model.convention == "qubo" else Assignment.ising
        records = [
            SampleRecord(
                assignment=make(unique[k].tolist()),
                energy=float(energies[k]),
                occurrences=int(counts[k]),
            )
            for k in range(unique.shape[0])
        ]
        return cls(records=records, info=info)

    def to_json_dict(self) -> dict:
        solutions = []
        for r in self.records:
            entry = {
                "assignment": list(r.assignment.values),
                "energy": r.energy,
                "occurrences": r.occurrences,
            }
            if r.num_broken_chains:
                entry["num_broken"] = r.num_broken_chains
            solutions.append(entry)
        return {"solutions": solutions, "info": dict(self.info)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def batch_energies(model: Model, states: np.ndarray) -> np.ndarray:
    """Clean-model energies of int8 state rows.

    Accumulates terms in the package's canonical order, so results equal
    :func:`annealstat.models.energy` bit for bit.
    """
    states = np.asarray(states)
    values = states.astype(np.float64)
    acc = np.zeros(states.shape[0])
    lin = linear_terms(model)
    for i in sorted(lin):
        acc += lin[i] * values[:, i]
    quad = quadratic_terms(model)
    for i, j in sorted(quad):
        acc += quad[(i, j)] * (values[:, i] * values[:, j])
    acc += model.offset
    return acc


def convert_sampleset(samples: "SampleSet", model: Model) -> "SampleSet":
    """Re-express records in ``model``'s convention and re-score on it.

    Occurrence counts and broken-chain metadata carry over unchanged.
    """
    records = []
    for r in samples.records:
        assignment = r.assignment.to_bits() if model.convention == "qubo" else r.assignment.to_spins()
        records.append(
            SampleRecord(
                assignment=assignment,
                energy=energy(model, assignment),
                occurrences=r.occurrences,
                num_broken_chains=r.num_broken_chains,
            )
        )
    return SampleSet(records=records, info=dict(samples.info))


def geometric_beta_schedule(beta_initial: float, beta_final: float, sweeps: int) -> np.ndarray:
    """Inverse temperatures for each sweep; a single sweep anneals at
    ``beta_final``."""
    if sweeps == 1:
        return np.array([beta_final])
    t = np.arange(sweeps) / (sweeps - 1)
    return beta_initial * (beta_final / beta_initial) ** t


def exact_solve(model: Model, *, full_spectrum: bool = False) -> SampleSet:
    """Enumerate all assignments; return every global minimizer once.

    With ``full_spectrum=True`` every assignment is returned (limited to
    20 variables; the minimizer-only form allows 24).  Deterministic, no
    RNG involved.
    """
    n = model.num_vars
    if n > EXACT_MAX_VARS:
        raise CapacityError(
            f"exact enumeration supports at most {EXACT_MAX_VARS} variables, got {n}"
        )
    if full_spectrum and n > FULL_SPECTRUM_MAX_VARS:
        raise CapacityError(
            f"full spectrum supports at most {FULL_SPECTRUM_MAX_VARS} variables, got {n}"
        )
    energies = _spectrum(model)
    if full_spectrum:
        indices = np.arange(energies.shape[0], dtype=np.uint64)
    else:
        indices = np.flatnonzero(energies == energies.min()).astype(np.uint64)
    arrays = _kernels.model_arrays(model)
    states = _kernels.index_to_states(indices, n, arrays.low)
    info = {
        "backend": "exact",
        "seed": None,
        "reads": int(indices.shape[0]),
        "full_spectrum": full_spectrum,
    }
    return SampleSet.from_states(
        model, states, info, occurrences=np.ones(indices.shape[0], dtype=np.int64)
    )


def _spectrum(model: Model) -> np.ndarray:
    """Energies of all 2^n assignments (offset included), canonical order."""
    arrays = _kernels.model_arrays(model)
    kern = _kernels.active()
    energies = kern.dp_spectrum_batch(
        np.ascontiguousarray(arrays.lin[None, :]),
        arrays.pair_i,
        arrays.pair_j,
        np.ascontiguousarray(arrays.pair_val[None, :]),
        arrays.low,
    )[0]
    energies += model.offset
    return energies


def simulated_anneal(model: Model, params: SamplerParams = SamplerParams()) -> SampleSet:
    """Independent single-flip Metropolis restarts with a geometric
    inverse-temperature schedule; one record stream per read."""
    arrays = _kernels.model_arrays(model)
    betas = geometric_beta_schedule(
        params.sa_beta_initial, params.sa_beta_final, params.sa_sweeps
    )
    kern = _kernels.active()
    states = kern.sa_run(
        arrays.lin,
        arrays.nbr_ptr,
        arrays.nbr_idx,
        arrays.nbr_val,
        arrays.low,
        betas,
        params.num_reads,
        params.seed & _MASK64,
        rng.SALT_SA,
    )
    info = {
        "backend": "sa",
        "seed": params.seed,
        "reads": params.num_reads,
        "sa_sweeps": params.sa_sweeps,
        "sa_beta_initial": params.sa_beta_initial,
        "sa_beta_final": params.sa_beta_final,
    }
    return SampleSet.from_states(model, states, info)


def noisy_boltzmann_sample(
    model: Model,
    noise: NoiseModel = NoiseModel(),
    params: SamplerParams = SamplerParams(),
    hw_range: HardwareRange = HardwareRange(),
) -> SampleSet:
    """Emulate one submission to an annealer that returns Boltzmann samples.

    Pipeline per submission: convert to the ising form, rescale into the
    hardware coefficient range, then per read (1) perturb coefficients with
    the noise model, (2) draw one assignment from P(s) proportional to
    exp(-E*(s) / tau) of the perturbed, rescaled model, (3) report the
    assignment's energy on the clean input model.  The draw is an exact
    categorical sample up to 20 variables and Gibbs sweeps with
    ``params.gibbs_burn_sweeps`` burn-in beyond that.
    """
    ising = as_ising(model)
    rescaled, scale = rescale_to_hardware(ising, hw_range)
    arrays = _kernels.model_arrays(rescaled)
    n = rescaled.num_vars
    num_reads = params.num_reads
    seed = params.seed & _MASK64
    beta = 1.0 / noise.tau

    if n <= BOLTZMANN_EXACT_MAX_VARS:
        spins = _boltzmann_exact_draws(arrays, noise, num_reads, seed, beta)
    else:
        spins = _boltzmann_gibbs_draws(arrays, noise, num_reads, seed, beta, params)

    if model.convention == "qubo":
        states = ((spins + 1) // 2).astype(np.int8)
    else:
        states = spins
    info = {
        "backend": "boltzmann",
        "seed": params.seed,
        "reads": num_reads,
        "tau": noise.tau,
        "sigma_a": noise.sigma_a,
        "sigma_b": noise.sigma_b,
        "bias_a": noise.bias_a,
        "bias_b": noise.bias_b,
        "rescale_divisor": scale,
        "draw_method": "exact" if n <= BOLTZMANN_EXACT_MAX_VARS else "gibbs",
    }
    return SampleSet.from_states(model, states, info)


def _perturbed_rows(arrays, noise: NoiseModel, seed: int, lo: int, hi: int):
    """Per-read coefficient rows for reads lo..hi-1 (noise stream layout:
    linear draws then quadratic draws, separate salts)."""
    block = hi - lo
    n = arrays.num_vars
    m = arrays.pair_val.shape[0]
    lin_rows = np.tile(arrays.lin, (block, 1))
    if noise.bias_a != 0.0:
        lin_rows += noise.bias_a
    if noise.sigma_a > 0.0 and n > 0:
        states = rng.stream_states(seed, rng.SALT_NOISE_LINEAR, hi)[lo:hi]
        z = ndtri(rng.uniform_open(rng.draws(states, 1, n)))
        lin_rows += noise.sigma_a * z
    pair_rows = np.tile(arrays.pair_val, (block, 1))
    if noise.bias_b != 0.0 and m > 0:
        pair_rows += noise.bias_b
    if noise.sigma_b > 0.0 and m > 0:
        states = rng.stream_states(seed, rng.SALT_NOISE_QUADRATIC, hi)[lo:hi]
        z = ndtri(rng.uniform_open(rng.draws(states, 1, m)))
        pair_rows += noise.sigma_b * z
    return lin_rows, pair_rows


def _boltzmann_exact_draws(arrays, noise, num_reads, seed, beta) -> np.ndarray:
    n = arrays.num_vars
    kern = _kernels.active()
    cat_states = rng.stream_states(seed, rng.SALT_CATEGORICAL, num_reads)
    uniforms = rng.uniform53(rng.draws(cat_states, 1, 1))[:, 0]
    noiseless = noise.sigma_a == 0.0 and noise.sigma_b == 0.0
    out = np.empty((num_reads, n), dtype=np.int8)
    if noiseless:
        lin_rows, pair_rows = _perturbed_rows(arrays, noise, seed, 0, 1)
        cdf = _boltzmann_cdf(kern, arrays, lin_rows, pair_rows, beta)[0]
        indices = np.searchsorted(cdf, uniforms, side="right").astype(np.uint64)
        return _kernels.index_to_states(indices, n, -1.0)
    block = max(1, min(num_reads, (1 << 22) // max(1, 1 << n)))
    for lo in range(0, num_reads, block):
        hi = min(lo + block, num_reads)
        lin_rows, pair_rows = _perturbed_rows(arrays, noise, seed, lo, hi)
        cdf = _boltzmann_cdf(kern, arrays, lin_rows, pair_rows, beta)
        indices = (cdf <= uniforms[lo:hi, None]).sum(axis=1).astype(np.uint64)
        out[lo:hi] = _kernels.index_to_states(indices, n, -1.0)
    return out


def _boltzmann_cdf(kern, arrays, lin_rows, pair_rows, beta) -> np.ndarray:
    energies = kern.dp_spectrum_batch(
        np.ascontiguousarray(lin_rows),
        arrays.pair_i,
        arrays.pair_j,
        np.ascontiguousarray(pair_rows),
        -1.0,
    )
    logw = -beta * energies
    logw -= logw.max(axis=1, keepdims=True)
    weights = np.exp(logw)
    cdf = np.cumsum(weights, axis=1)
    cdf /= cdf[:, -1:]
    return cdf


def _boltzmann_gibbs_draws(arrays, noise, num_reads, seed, beta, params) -> np.ndarray:
    kern = _kernels.active()
    lin_rows, pair_rows = _perturbed_rows(arrays, noise, seed, 0, num_reads)
    if arrays.slot_pair.shape[0]:
        val_rows = pair_rows[:, arrays.slot_pair]
    else:
        val_rows = np.zeros((num_reads, 0))
    return kern.gibbs_run(
        np.ascontiguousarray(lin_rows),
        arrays.nbr_ptr,
        arrays.nbr_idx,
        np.ascontiguousarray(val_rows),
        -1.0,
        beta,
        params.gibbs_burn_sweeps,
        seed,
        rng.SALT_GIBBS,
    )


@dataclass(frozen=True)
class SamplerConfig:
    """A named backend plus its parameters; the plumbing the applications
    and the CLI use to invoke samplers uniformly."""

    backend: str = "sa"
    params: SamplerParams = field(default_factory=SamplerParams)
    noise: NoiseModel = field(default_factory=NoiseModel)
    hw_range: HardwareRange = field(default_factory=HardwareRange)

    def __post_init__(self):
        if self.backend not in ("exact", "sa", "boltzmann"):
            raise ValueError(f"unknown backend {self.backend!r}")

    def sample(self, model: Model, *, seed: int | None = None) -> SampleSet:
        """Run the configured backend; ``seed`` overrides the params seed
        (used for per-column / per-iteration substreams)."""
        if self.backend == "exact":
            return exact_solve(model)
        params = self.params if seed is None else replace(self.params, seed=seed)
        if self.backend == "sa":
            return simulated_anneal(model, params)
        return noisy_boltzmann_sample(model, self.noise, params, self.hw_range)
