"""Exact generators for the one-triangle families.

All constructors take positive rationals and return a :class:`PointConfig`
with rational coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import GeometryError, PointConfig, as_fraction

FAMILIES = ("simplex", "rectangle", "iso-tet", "opp-edge-tet")


def _positive(name: str, x) -> Fraction:
    x = as_fraction(x)
    if x <= 0:
        raise GeometryError(f"{name} must be positive, got {x}")
    return x


def regular_simplex(d: int) -> PointConfig:
    """Standard basis of R^{d+1}: d+1 points, all squared distances 2."""
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise GeometryError(f"simplex dimension must be an integer >= 1, got {d}")
    d = int(d)
    return PointConfig.from_rows(
        [[1 if i == j else 0 for j in range(d + 1)] for i in range(d + 1)]
    )


def rectangle(a, b) -> PointConfig:
    a, b = _positive("a", a), _positive("b", b)
    return PointConfig.from_rows([(0, 0), (a, 0), (0, b), (a, b)])


def square(side=1) -> PointConfig:
    return rectangle(side, side)


def isosceles_tetrahedron(d2, h) -> PointConfig:
    """Two perpendicular segments of length ``d2``, the second lifted by ``h``.

    Opposite edges PQ and RS have squared length ``d2**2``; the four cross
    edges share squared length ``d2**2 / 2 + h**2``. ``h == 0`` is the square.
    """
    d2 = _positive("d2", d2)
    h = as_fraction(h)
    if h < 0:
        raise GeometryError(f"h must be non-negative, got {h}")
    half = d2 / 2
    return PointConfig.from_rows(
        [(half, 0, 0), (-half, 0, 0), (0, half, h), (0, -half, h)]
    )


def opposite_edge_tetrahedron(p, q, r) -> PointConfig:
    """Alternate corners of a ``p x q x r`` box.

    Opposite edges pair up with squared lengths p^2+q^2, p^2+r^2, q^2+r^2, so
    every face is the same acute scalene triangle.
    """
    p, q, r = _positive("p", p), _positive("q", q), _positive("r", r)
    if len({p, q, r}) != 3:
        raise GeometryError(f"box sides must be pairwise distinct, got ({p}, {q}, {r})")
    return PointConfig.from_rows([(0, 0, 0), (p, q, 0), (p, 0, r), (0, q, r)])


@dataclass(frozen=True)
class ConstructionParams:
    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GeometryError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        expected = {"simplex": 1, "rectangle": 2, "iso-tet": 2, "opp-edge-tet": 3}[self.family]
        if len(self.params) != expected:
            raise GeometryError(
                f"family {self.family} takes {expected} parameter(s), got {len(self.params)}"
            )

    def build(self) -> PointConfig:
        if self.family == "simplex":
            return regular_simplex(self.params[0])
        if self.family == "rectangle":
            return rectangle(*self.params)
        if self.family == "iso-tet":
            return isosceles_tetrahedron(*self.params)
        return opposite_edge_tetrahedron(*self.params)


def construct(family: str, params) -> PointConfig:
    return ConstructionParams(family, tuple(params)).build()


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    from math import isqrt

    x = as_fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def witness_for_isosceles(leg_sq, base_sq) -> tuple[str, PointConfig] | None:
    """Rational 4-point witness with squared sides (leg, leg, base), if one exists.

    Needs ``leg_sq >= base_sq / 2``; equality gives the square.
    """
    leg_sq, base_sq = as_fraction(leg_sq), as_fraction(base_sq)
    d2 = rational_sqrt(base_sq)
    h = rational_sqrt(leg_sq - base_sq / 2)
    if d2 is None or h is None or d2 == 0:
        return None
    if h == 0:
        return "square", isosceles_tetrahedron(d2, 0)
    return "iso-tet", isosceles_tetrahedron(d2, h)


def witness_for_scalene(a, b, c) -> tuple[str, PointConfig] | None:
    """Rational 4-point witness with squared sides a < b < c, if one exists.

    Acute targets come from the box tetrahedron, right targets from the
    rectangle; obtuse targets have none.
    """
    a, b, c = sorted(as_fraction(x) for x in (a, b, c))
    if a + b == c:
        x, y = rational_sqrt(a), rational_sqrt(b)
        if x is None or y is None:
            return None
        return "rectangle", rectangle(x, y)
    if a + b < c:
        return None
    p = rational_sqrt((a + b - c) / 2)
    q = rational_sqrt((a + c - b) / 2)
    r = rational_sqrt((b + c - a) / 2)
    if None in (p, q, r):
        return None
    return "opp-edge-tet", opposite_edge_tetrahedron(p, q, r)
