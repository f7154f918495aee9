"""Plain-text QUBO problem files.

Line format, whitespace separated, 0-based indices::

    # comment (also allowed after a value)
    offset 1.5        # optional, first non-comment line only
    0 0 -1.0          # i == j: linear coefficient a_i
    0 1  3.0          # i < j: quadratic coefficient b_ij

Duplicate keys are an error.  The number of variables is one past the
largest index seen (or an explicit ``vars N`` header line).
"""

from __future__ import annotations

from pathlib import Path

from .errors import QuboParseError
from .models import QuboModel


def parse_qubo(text: str) -> QuboModel:
    """Parse QUBO file contents; raises :class:`QuboParseError` with the
    offending line number on malformed input."""
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0
    num_vars = 0
    declared_vars: int | None = None
    seen_terms = False
    seen_offset = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "offset":
            if seen_terms or seen_offset:
                raise QuboParseError("offset line must come first and appear once", lineno)
            if len(parts) != 2:
                raise QuboParseError("offset line must be 'offset <value>'", lineno)
            offset = _parse_float(parts[1], lineno)
            seen_offset = True
            continue
        if parts[0] == "vars":
            if seen_terms:
                raise QuboParseError("vars line must precede coefficient lines", lineno)
            if len(parts) != 2:
                raise QuboParseError("vars line must be 'vars <count>'", lineno)
            declared_vars = _parse_index(parts[1], lineno)
            continue
        if len(parts) != 3:
            raise QuboParseError(f"expected 'i j value', got {line!r}", lineno)
        i = _parse_index(parts[0], lineno)
        j = _parse_index(parts[1], lineno)
        value = _parse_float(parts[2], lineno)
        seen_terms = True
        if i > j:
            raise QuboParseError(f"indices must satisfy i <= j, got {i} > {j}", lineno)
        if i == j:
            if i in linear:
                raise QuboParseError(f"duplicate linear coefficient for variable {i}", lineno)
            linear[i] = value
        else:
            if (i, j) in quadratic:
                raise QuboParseError(f"duplicate quadratic coefficient for pair {(i, j)}", lineno)
            quadratic[(i, j)] = value
        num_vars = max(num_vars, j + 1)

    if declared_vars is not None:
        if declared_vars < num_vars:
            raise QuboParseError(
                f"declared vars {declared_vars} smaller than max index + 1 = {num_vars}", 1
            )
        num_vars = declared_vars
    return QuboModel(num_vars=num_vars, linear=linear, quadratic=quadratic, offset=offset)


def read_qubo(path: str | Path) -> QuboModel:
    return parse_qubo(Path(path).read_text())


def format_qubo(model: QuboModel) -> str:
    """Render a model in the file format (sorted keys, repr precision)."""
    lines = []
    if model.offset != 0.0:
        lines.append(f"offset {model.offset!r}")
    lines.append(f"vars {model.num_vars}")
    for i in sorted(model.linear):
        lines.append(f"{i} {i} {model.linear[i]!r}")
    for i, j in sorted(model.quadratic):
        lines.append(f"{i} {j} {model.quadratic[(i, j)]!r}")
    return "\n".join(lines) + "\n"


def write_qubo(model: QuboModel, path: str | Path) -> None:
    Path(path).write_text(format_qubo(model))


def _parse_index(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise QuboParseError(f"expected integer index, got {token!r}", lineno) from None
    if value < 0:
        raise QuboParseError(f"indices must be non-negative, got {value}", lineno)
    return value


def _parse_float(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise QuboParseError(f"expected a real number, got {token!r}", lineno) from None
