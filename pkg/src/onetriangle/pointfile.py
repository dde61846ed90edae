"""Text formats: point sets and squared-distance matrices.

Point set: one point per line, whitespace-separated coordinates written as
``p/q`` or as a decimal literal (parsed exactly, ``0.25 -> 1/4``). Blank lines
and ``#`` comments are ignored.

Distance matrix: first token ``n``, then the strict upper triangle row by
row; line breaks are free.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Iterable, TextIO

from .geometry import GeometryError, PointConfig, SquaredDistanceMatrix

_RATIONAL = re.compile(r"[+-]?\d+/\d+")
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class PointFileError(ValueError):
    """Malformed input file. ``kind`` selects the CLI exit code."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.kind = kind
        self.line = line


def parse_rational(token: str) -> Fraction:
    if _RATIONAL.fullmatch(token):
        num, den = token.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return Fraction(int(num), int(den))
    if _DECIMAL.fullmatch(token):
        return Fraction(token)
    raise ValueError(f"malformed number {token!r}")


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _read(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def parse_points(text: str) -> PointConfig:
    rows: list[tuple[Fraction, ...]] = []
    arity = None
    seen: dict[tuple[Fraction, ...], int] = {}
    for lineno, tokens in _content_lines(text):
        try:
            row = tuple(parse_rational(t) for t in tokens)
        except ValueError as exc:
            raise PointFileError("malformed", str(exc), lineno) from None
        if arity is None:
            arity = len(row)
        elif len(row) != arity:
            raise PointFileError(
                "arity", f"expected {arity} coordinates, found {len(row)}", lineno
            )
        if row in seen:
            raise PointFileError("duplicate", f"repeats the point on line {seen[row]}", lineno)
        seen[row] = lineno
        rows.append(row)
    if not rows:
        raise PointFileError("empty", "no points in input")
    return PointConfig.from_rows(rows)


def parse_point_file(source: str | Path | TextIO) -> PointConfig:
    return parse_points(_read(source))


def format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def format_points(rows, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [" ".join(format_number(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SquaredDistanceMatrix:
    tokens: list[tuple[int, str]] = [
        (lineno, t) for lineno, toks in _content_lines(text) for t in toks
    ]
    if not tokens:
        raise PointFileError("empty", "no matrix in input")
    lineno, first = tokens[0]
    if not first.isdigit() or int(first) < 1:
        raise PointFileError("malformed", f"expected a positive point count, got {first!r}", lineno)
    n = int(first)
    values = []
    for lineno, t in tokens[1:]:
        try:
            values.append(parse_rational(t))
        except ValueError as exc:
            raise PointFileError("malformed", str(exc), lineno) from None
    if len(values) != n * (n - 1) // 2:
        raise PointFileError(
            "arity", f"{n} points need {n * (n - 1) // 2} upper-triangle entries, got {len(values)}"
        )
    try:
        return SquaredDistanceMatrix.from_upper(n, values)
    except GeometryError as exc:
        raise PointFileError("malformed", str(exc)) from None


def parse_matrix_file(source) -> SquaredDistanceMatrix:
    return parse_matrix(_read(source))


def format_matrix(D: SquaredDistanceMatrix) -> str:
    n = D.n
    lines = [str(n)]
    for i in range(n - 1):
        lines.append(" ".join(format_number(D.entries[i][j]) for j in range(i + 1, n)))
    return "\n".join(lines) + "\n"
