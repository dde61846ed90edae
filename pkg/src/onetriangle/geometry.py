"""Exact point/distance arithmetic and the distinct-triangle census.

Everything here works with *squared* lengths so that rational inputs stay
rational. A triangle is identified by its sorted triple of squared side
lengths (SSS congruence, reflections included).
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class GeometryError(ValueError):
    """Raised on invalid geometric input (dimension mismatch, degenerate triple, ...)."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise GeometryError(f"not a rational coordinate: {x!r}")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        # floats are exact binary rationals; reject the non-finite ones
        if x != x or x in (float("inf"), float("-inf")):
            raise GeometryError(f"non-finite coordinate: {x!r}")
        return Fraction(x)
    raise GeometryError(f"not a rational coordinate: {x!r}")


@dataclass(frozen=True)
class Point:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if not coords:
            raise GeometryError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class PointConfig:
    """An ordered set of pairwise-distinct points sharing one ambient dimension."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point) else Point(tuple(p)) for p in self.points)
        if not pts:
            raise GeometryError("empty configuration")
        dim = pts[0].ambient_dim
        for i, p in enumerate(pts):
            if p.ambient_dim != dim:
                raise GeometryError(
                    f"point {i} has dimension {p.ambient_dim}, expected {dim}"
                )
        seen: dict[tuple[Fraction, ...], int] = {}
        for i, p in enumerate(pts):
            if p.coords in seen:
                raise GeometryError(f"point {i} duplicates point {seen[p.coords]}")
            seen[p.coords] = i
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> PointConfig:
        return cls(tuple(Point(tuple(r)) for r in rows))

    @property
    def ambient_dim(self) -> int:
        return self.points[0].ambient_dim

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_rows(self) -> list[tuple[Fraction, ...]]:
        return [p.coords for p in self.points]

    def to_float(self) -> np.ndarray:
        return np.array([[float(c) for c in p.coords] for p in self.points])


@dataclass(frozen=True)
class SquaredDistanceMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0:
            raise GeometryError("empty distance matrix")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GeometryError(f"row {i} has length {len(row)}, expected {n}")
            if row[i] != 0:
                raise GeometryError(f"non-zero diagonal entry at {i}")
            for j in range(i + 1, n):
                if row[j] != rows[j][i]:
                    raise GeometryError(f"asymmetric entries at ({i},{j})")
                if row[j] <= 0:
                    raise GeometryError(f"non-positive off-diagonal entry at ({i},{j})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_upper(cls, n: int, values: Sequence) -> SquaredDistanceMatrix:
        """Build from the strict upper triangle listed row by row."""
        if len(values) != comb(n, 2):
            raise GeometryError(f"expected {comb(n, 2)} upper-triangle values, got {len(values)}")
        m = [[Fraction(0)] * n for _ in range(n)]
        it = iter(values)
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = m[j][i] = as_fraction(next(it))
        return cls(tuple(tuple(r) for r in m))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def off_diagonal(self) -> list[Fraction]:
        n = self.n
        return [self.entries[i][j] for i in range(n) for j in range(i + 1, n)]


class TriangleSignature(NamedTuple):
    """Sorted squared side lengths ``a <= b <= c`` of a non-degenerate triangle."""

    a: Fraction
    b: Fraction
    c: Fraction

    @property
    def kind(self) -> str:
        distinct = len({self.a, self.b, self.c})
        return {1: "equilateral", 2: "isosceles", 3: "scalene"}[distinct]


@dataclass(frozen=True)
class CensusReport:
    n_points: int
    distinct_distances: tuple
    triangle_classes: tuple[tuple[TriangleSignature, int], ...]
    degenerate_triples: int

    @property
    def n_distinct_distances(self) -> int:
        return len(self.distinct_distances)

    @property
    def n_classes(self) -> int:
        return len(self.triangle_classes)

    @property
    def signatures(self) -> list[TriangleSignature]:
        return [sig for sig, _ in self.triangle_classes]


def squared_distance(p: Point | Sequence, q: Point | Sequence) -> Fraction:
    p = p.coords if isinstance(p, Point) else tuple(as_fraction(x) for x in p)
    q = q.coords if isinstance(q, Point) else tuple(as_fraction(x) for x in q)
    if len(p) != len(q):
        raise GeometryError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return sum(((x - y) ** 2 for x, y in zip(p, q)), Fraction(0))


def distance_matrix(cfg: PointConfig) -> SquaredDistanceMatrix:
    pts = cfg.points
    n = len(pts)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        m[i][j] = m[j][i] = squared_distance(pts[i], pts[j])
    return SquaredDistanceMatrix(tuple(tuple(r) for r in m))


def sixteen_area_squared(a, b, c):
    """16 * Area^2 of a triangle with squared sides a, b, c (Heron, squared form)."""
    return 2 * a * b + 2 * b * c + 2 * c * a - a * a - b * b - c * c


def is_degenerate_triple(a, b, c) -> bool:
    # Sides coming from real points always give 16A^2 >= 0; anything <= 0 is flat.
    return sixteen_area_squared(as_fraction(a), as_fraction(b), as_fraction(c)) <= 0


def triangle_signature(a, b, c) -> TriangleSignature:
    a, b, c = sorted((as_fraction(a), as_fraction(b), as_fraction(c)))
    if a <= 0 or sixteen_area_squared(a, b, c) <= 0:
        raise GeometryError(f"degenerate triple ({a}, {b}, {c})")
    return TriangleSignature(a, b, c)


def squared_circumradius(sig: TriangleSignature | Sequence) -> Fraction:
    """R^2 = abc / (16 Area^2) for squared sides a, b, c."""
    a, b, c = (as_fraction(x) for x in sig)
    area16 = sixteen_area_squared(a, b, c)
    if area16 <= 0:
        raise GeometryError(f"degenerate triple ({a}, {b}, {c}) has no circumcircle")
    return a * b * c / area16


def census(cfg: PointConfig) -> CensusReport:
    """Count distinct distances and distinct (non-degenerate) triangles of ``cfg``."""
    n = len(cfg)
    if n < 3:
        raise GeometryError(f"census needs at least 3 points, got {n}")
    D = distance_matrix(cfg).entries
    classes: Counter[TriangleSignature] = Counter()
    degenerate = 0
    for i, j, k in itertools.combinations(range(n), 3):
        a, b, c = D[i][j], D[j][k], D[i][k]
        if is_degenerate_triple(a, b, c):
            degenerate += 1
        else:
            classes[triangle_signature(a, b, c)] += 1
    dists = sorted({D[i][j] for i, j in itertools.combinations(range(n), 2)})
    return CensusReport(
        n_points=n,
        distinct_distances=tuple(dists),
        triangle_classes=tuple(sorted(classes.items())),
        degenerate_triples=degenerate,
    )


def _single_linkage(values: list[tuple[float, ...]], threshold: float) -> list[list[int]]:
    """Cluster vectors whose every component differs by at most ``threshold``.

    Values are visited in lexicographic order; links are transitive. Returns
    clusters as index lists, each sorted, ordered by their smallest member.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for pos, i in enumerate(order):
        for j in order[:pos]:
            if all(abs(x - y) <= threshold for x, y in zip(values[i], values[j])):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in order:
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def epsilon_census(coords, eps: float) -> CensusReport:
    """Tolerance-based census for floating-point coordinates.

    ``eps`` is relative to ``scale``, the largest pairwise squared distance.
    Signatures (and distances) closer than ``eps * scale`` componentwise are
    merged by single linkage; a triple is degenerate when
    ``16 A^2 <= eps * scale**2``. Each class is reported by its
    lexicographically smallest member.
    """
    if not eps > 0:
        raise GeometryError(f"eps must be positive, got {eps}")
    X = np.asarray(coords, dtype=float)
    if X.ndim != 2 or X.shape[0] < 3:
        raise GeometryError("epsilon_census needs an (n, d) array with n >= 3")
    n = X.shape[0]
    diff = X[:, None, :] - X[None, :, :]
    D = np.einsum("ijk,ijk->ij", diff, diff)
    iu = np.triu_indices(n, 1)
    scale = float(D[iu].max())
    if not scale > 0 or float(D[iu].min()) <= eps * scale:
        raise GeometryError("points closer than the census resolution")
    thr = eps * scale

    sigs: list[tuple[float, float, float]] = []
    degenerate = 0
    for i, j, k in itertools.combinations(range(n), 3):
        a, b, c = sorted((float(D[i, j]), float(D[j, k]), float(D[i, k])))
        if sixteen_area_squared(a, b, c) <= eps * scale * scale:
            degenerate += 1
        else:
            sigs.append((a, b, c))
    classes = []
    for members in _single_linkage(sigs, thr):
        rep = min(sigs[m] for m in members)
        classes.append((TriangleSignature(*rep), len(members)))
    dist_vals = [(float(v),) for v in D[iu]]
    dists = sorted(min(dist_vals[m] for m in grp)[0] for grp in _single_linkage(dist_vals, thr))
    return CensusReport(
        n_points=n,
        distinct_distances=tuple(dists),
        triangle_classes=tuple(sorted(classes)),
        degenerate_triples=degenerate,
    )
