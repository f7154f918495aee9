"""Command-line interface.

Subcommands mirror the library workflow: ``solve`` (formulate -> optional
embed -> sample -> optional unembed -> analyze), ``embed``, and the three
applications ``mle``, ``design``, ``matinv``.

Exit codes: 0 success, 2 problem-file parse error, 3 embedding failure,
4 problem too large for the requested backend, 1 anything else.  Every
output document embeds the full effective configuration; timestamps live
only in metadata and are suppressed by ``--no-timestamp`` so runs with
identical flags and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .chimera import parse_topology
from .design import design_csv, generate_design
from .embedding import embed_model, find_embedding, unembed
from .errors import AnnealstatError, CapacityError, EmbeddingError, QuboParseError
from .matinv import invert, precompute
from .mle import NORMAL, BinaryEncoding, MleProblem, run_mle
from .models import HardwareRange, qubo_to_ising
from .qubofile import read_qubo
from .samplers import (
    NoiseModel,
    SamplerConfig,
    SamplerParams,
    convert_sampleset,
    exact_solve,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_EMBEDDING = 3
EXIT_CAPACITY = 4


def _add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("sampler")
    group.add_argument("--sampler", choices=("exact", "sa", "boltzmann"), default="sa")
    group.add_argument("--reads", type=int, default=1000, help="reads per submission")
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--sweeps", type=int, default=1000, help="annealing sweeps per read")
    group.add_argument("--beta-initial", type=float, default=0.1)
    group.add_argument("--beta-final", type=float, default=10.0)
    group.add_argument("--gibbs-burn", type=int, default=256)
    group.add_argument("--noise-sigma-a", type=float, default=0.05)
    group.add_argument("--noise-sigma-b", type=float, default=0.05)
    group.add_argument("--noise-bias-a", type=float, default=0.0)
    group.add_argument("--noise-bias-b", type=float, default=0.0)
    group.add_argument("--tau", type=float, default=1.0, help="Boltzmann temperature")
    group.add_argument("--h-min", type=float, default=-2.0)
    group.add_argument("--h-max", type=float, default=2.0)
    group.add_argument("--j-min", type=float, default=-4.0)
    group.add_argument("--j-max", type=float, default=1.0)


def _sampler_config(args) -> SamplerConfig:
    return SamplerConfig(
        backend=args.sampler,
        params=SamplerParams(
            num_reads=args.reads,
            seed=args.seed,
            sa_sweeps=args.sweeps,
            sa_beta_initial=args.beta_initial,
            sa_beta_final=args.beta_final,
            gibbs_burn_sweeps=args.gibbs_burn,
        ),
        noise=NoiseModel(
            sigma_a=args.noise_sigma_a,
            sigma_b=args.noise_sigma_b,
            bias_a=args.noise_bias_a,
            bias_b=args.noise_bias_b,
            tau=args.tau,
        ),
        hw_range=HardwareRange(
            h_min=args.h_min, h_max=args.h_max, j_min=args.j_min, j_max=args.j_max
        ),
    )


def _config_dict(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in cfg.items()}


def _metadata(args) -> dict:
    meta = {"config": _config_dict(args)}
    if not args.no_timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config_comment(args) -> str:
    return "# config " + json.dumps(_config_dict(args), sort_keys=True)


def _read_matrix(path: str) -> list[list[float]]:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise QuboParseError(f"bad matrix row {line!r}", lineno) from None
    if not rows:
        raise QuboParseError("empty matrix file", 1)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise QuboParseError("ragged matrix rows", 1)
    return rows


def _read_data(path: str) -> list[float]:
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for tok in line.replace(",", " ").split():
            try:
                values.append(float(tok))
            except ValueError:
                raise QuboParseError(f"bad data value {tok!r}", lineno) from None
    return values


def _cmd_solve(args) -> int:
    model = read_qubo(args.input)
    config = _sampler_config(args)

    def run(m):
        if args.sampler == "exact":
            return exact_solve(m, full_spectrum=args.full_spectrum)
        return config.sample(m)

    extra = {}
    if args.topology:
        hw = parse_topology(args.topology)
        ising = qubo_to_ising(model)
        emb = find_embedding(
            ising.interactions(),
            hw,
            num_vars=ising.num_vars,
            seed=args.embed_seed if args.embed_seed is not None else args.seed,
            chain_strength=args.chain_strength,
        )
        physical = embed_model(ising, emb, hw, hw_range=config.hw_range)
        samples = unembed(run(physical), emb, ising, discard_broken=args.discard_broken)
        samples = convert_sampleset(samples, model)
        extra = {
            "embedding_qubits": emb.num_physical_qubits,
            "embedding_max_chain": emb.max_chain_length,
        }
    else:
        samples = run(model)
    samples.info.update(extra)
    samples.info.update(_metadata(args))
    _emit(samples.to_json() + "\n", args.out)
    return EXIT_OK


def _cmd_embed(args) -> int:
    model = read_qubo(args.input)
    hw = parse_topology(args.topology)
    ising = qubo_to_ising(model)
    emb = find_embedding(
        ising.interactions(),
        hw,
        num_vars=ising.num_vars,
        seed=args.seed,
        chain_strength=args.chain_strength,
    )
    doc = emb.to_json_dict()
    doc["metrics"] = {
        "num_logical_variables": ising.num_vars,
        "num_physical_qubits": emb.num_physical_qubits,
        "max_chain_length": emb.max_chain_length,
    }
    doc.update(_metadata(args))
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _cmd_mle(args) -> int:
    data = _read_data(args.data)
    if args.model == "normal":
        model = NORMAL
    else:  # argparse choices guard this
        raise ValueError(f"unknown model {args.model!r}")
    encoding = BinaryEncoding.from_range(args.powers_high, args.powers_low)
    problem = MleProblem(
        data=tuple(data), model=model, enc_theta=encoding, enc_phi=encoding
    )
    start = args.start.split(",")
    if len(start) != 2:
        raise ValueError("--start must be 'theta0,phi0'")
    theta0, phi0 = (float(s) for s in start)
    trace = run_mle(problem, theta0, phi0, _sampler_config(args), args.iters)
    _emit(_config_comment(args) + "\n" + trace.to_csv(), args.out)
    return EXIT_OK


def _cmd_design(args) -> int:
    topology = parse_topology(args.topology) if args.topology else None
    design, _samples = generate_design(
        args.size,
        _sampler_config(args),
        topology=topology,
        chain_strength=args.chain_strength,
        embed_seed=args.embed_seed if args.embed_seed is not None else args.seed,
        discard_broken=args.discard_broken,
    )
    _emit(_config_comment(args) + "\n" + design_csv(design), args.out)
    return EXIT_OK


def _cmd_matinv(args) -> int:
    matrix = _read_matrix(args.input)
    encoding = BinaryEncoding.from_range(
        args.power_high, args.power_high - args.bits + 1
    )
    problem = precompute(matrix, encoding)
    result = invert(problem, _sampler_config(args), seed=args.seed)
    lines = [_config_comment(args)]
    for row in result.v_hat:
        lines.append(",".join(repr(float(v)) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    summary = {
        "column_energies": result.column_energies,
        "residual": result.residual,
        "failures": {str(k): v for k, v in result.failures.items()},
    }
    summary.update(_metadata(args))
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annealstat",
        description="Binary quadratic modeling, annealer-style sampling, and "
        "annealing-based statistics applications.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="sample a QUBO file, optionally via an embedding")
    p.add_argument("--input", required=True, help="QUBO problem file")
    p.add_argument("--full-spectrum", action="store_true")
    p.add_argument("--topology", help="e.g. chimera:8,8,4")
    p.add_argument("--chain-strength", type=float, default=-1.0)
    p.add_argument("--embed-seed", type=int, default=None)
    p.add_argument("--discard-broken", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--no-timestamp", action="store_true")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("embed", help="embed a problem graph onto a hardware topology")
    p.add_argument("--input", required=True, help="QUBO problem file")
    p.add_argument("--topology", required=True)
    p.add_argument("--chain-strength", type=float, default=-1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("mle", help="iterative quadratic-surrogate maximum likelihood")
    p.add_argument("--data", required=True, help="CSV of observations")
    p.add_argument("--model", choices=("normal",), default="normal")
    p.add_argument("--powers-high", type=int, default=1)
    p.add_argument("--powers-low", type=int, default=-7)
    p.add_argument("--start", default="0,1", help="'theta0,phi0'")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--out", default=None)
    p.add_argument("--no-timestamp", action="store_true")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_mle)

    p = sub.add_parser("design", help="queens-constrained experimental design")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--topology", default=None)
    p.add_argument("--chain-strength", type=float, default=-5.0)
    p.add_argument("--embed-seed", type=int, default=None)
    p.add_argument("--discard-broken", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--no-timestamp", action="store_true")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("matinv", help="column-wise matrix inversion")
    p.add_argument("--input", required=True, help="matrix CSV")
    p.add_argument("--bits", type=int, default=6, help="qubits per matrix entry")
    p.add_argument("--power-high", type=int, default=0)
    p.add_argument("--out", required=True, help="estimate CSV path")
    p.add_argument("--no-timestamp", action="store_true")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_matinv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuboParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMBEDDING
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (AnnealstatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
