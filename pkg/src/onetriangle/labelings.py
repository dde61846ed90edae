"""Distance graphs: edge labelings of K_n whose triangles all look alike.

A labeling assigns an abstract distance label to every edge of K_n. The
search below enumerates every labeling in which each vertex triple carries a
prescribed label multiset, and quotients by vertex relabeling only (labels
keep their identity, so d1 and d2 are never swapped).
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .constructions import regular_simplex, witness_for_isosceles, witness_for_scalene
from .geometry import PointConfig, SquaredDistanceMatrix, as_fraction, census
from .realizability import embedding_dimension

MAX_ENUM_N = 7


class TriangleType(enum.Enum):
    EQUILATERAL = ("x", "x", "x")
    ISOSCELES = ("d1", "d1", "d2")
    SCALENE = ("d1", "d2", "d3")

    @property
    def label_multiset(self) -> Counter:
        return Counter(self.value)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.value)))

    @classmethod
    def parse(cls, text: str) -> TriangleType:
        key = text.strip().lower()
        for t in cls:
            if t.name.lower().startswith(key[:3]) and len(key) >= 2:
                return t
        raise ValueError(f"unknown triangle type {text!r} (use eq, iso or sca)")

    @property
    def short(self) -> str:
        return self.name.lower()


def edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


@dataclass(frozen=True)
class EdgeLabeling:
    n: int
    labels: tuple[str, ...]  # one per edge, edges in lexicographic order

    def __post_init__(self):
        if len(self.labels) != self.n * (self.n - 1) // 2:
            raise ValueError(f"K_{self.n} has {self.n * (self.n - 1) // 2} edges, got {len(self.labels)} labels")

    @classmethod
    def from_dict(cls, n: int, mapping: dict) -> EdgeLabeling:
        return cls(n, tuple(mapping[e] if e in mapping else mapping[e[::-1]] for e in edges(n)))

    def label(self, i: int, j: int) -> str:
        if i > j:
            i, j = j, i
        # index of (i, j) in lexicographic edge order
        return self.labels[i * (2 * self.n - i - 1) // 2 + (j - i - 1)]

    def permuted(self, perm: Sequence[int]) -> EdgeLabeling:
        """Image under vertex map ``v -> perm[v]``."""
        new = {}
        for (i, j), lab in zip(edges(self.n), self.labels):
            a, b = perm[i], perm[j]
            new[(min(a, b), max(a, b))] = lab
        return EdgeLabeling(self.n, tuple(new[e] for e in edges(self.n)))

    def restricted(self, vertices: Sequence[int]) -> EdgeLabeling:
        vs = list(vertices)
        return EdgeLabeling(len(vs), tuple(self.label(vs[i], vs[j]) for i, j in edges(len(vs))))

    def edge_list(self) -> str:
        return " ".join(f"{i}-{j}:{lab}" for (i, j), lab in zip(edges(self.n), self.labels))

    def to_matrix(self, values: dict[str, Fraction]) -> SquaredDistanceMatrix:
        m = [[Fraction(0)] * self.n for _ in range(self.n)]
        for (i, j), lab in zip(edges(self.n), self.labels):
            m[i][j] = m[j][i] = as_fraction(values[lab])
        return SquaredDistanceMatrix(tuple(tuple(r) for r in m))


@dataclass(frozen=True)
class EnumerationResult:
    n: int
    type: TriangleType
    representatives: tuple[EdgeLabeling, ...]

    @property
    def count(self) -> int:
        return len(self.representatives)


def triangle_constraint_holds(labeling: EdgeLabeling, ttype: TriangleType) -> bool:
    target = ttype.label_multiset
    return all(
        Counter((labeling.label(i, j), labeling.label(j, k), labeling.label(i, k))) == target
        for i, j, k in itertools.combinations(range(labeling.n), 3)
    )


def canonical_form(labeling: EdgeLabeling) -> EdgeLabeling:
    """Lexicographically least label string over all vertex permutations."""
    n = labeling.n
    es = edges(n)
    best = None
    for perm in itertools.permutations(range(n)):
        # label string of the relabeled graph, read in lexicographic edge order
        inv = [0] * n
        for v, pv in enumerate(perm):
            inv[pv] = v
        cand = tuple(labeling.label(inv[i], inv[j]) for i, j in es)
        if best is None or cand < best:
            best = cand
    return EdgeLabeling(n, best)


def _backtrack(n: int, ttype: TriangleType) -> list[tuple[str, ...]]:
    """All labelings satisfying the triple constraint, before symmetry reduction.

    Edges are filled in lexicographic order; a triple is checked as soon as
    its last edge (the (j,k) edge for i<j<k is the latest) is assigned. Vertex
    0's star is fixed in sorted label order up to relabeling of vertices 1..n-1,
    which is a symmetry the canonicalization step would quotient anyway.
    """
    es = edges(n)
    index = {e: t for t, e in enumerate(es)}
    target = ttype.label_multiset
    alphabet = ttype.alphabet
    closes: list[list[tuple[int, int]]] = [[] for _ in es]
    for i, j, k in itertools.combinations(range(n), 3):
        last = max(index[(i, j)], index[(i, k)], index[(j, k)])
        others = [index[e] for e in ((i, j), (i, k), (j, k)) if index[e] != last]
        closes[last].append(tuple(others))
    out: list[tuple[str, ...]] = []
    labels: list[str] = [""] * len(es)

    def rec(t: int):
        if t == len(es):
            out.append(tuple(labels))
            return
        i, j = es[t]
        for lab in alphabet:
            # star of vertex 0 non-decreasing: vertices 1..n-1 are interchangeable there
            if i == 0 and j > 1 and lab < labels[t - 1]:
                continue
            labels[t] = lab
            if all(Counter((labels[a], labels[b], lab)) == target for a, b in closes[t]):
                rec(t + 1)
        labels[t] = ""

    rec(0)
    return out


def enumerate_one_triangle_labelings(n: int, ttype: TriangleType) -> EnumerationResult:
    if not 3 <= n <= MAX_ENUM_N:
        raise ValueError(f"n must lie in [3, {MAX_ENUM_N}], got {n}")
    classes = {canonical_form(EdgeLabeling(n, labs)) for labs in _backtrack(n, ttype)}
    reps = tuple(sorted(classes, key=lambda L: L.labels))
    return EnumerationResult(n, ttype, reps)


def uniform_labeling(n: int, label: str = "x") -> EdgeLabeling:
    """The single labeling over a one-letter alphabet (any n)."""
    return EdgeLabeling(n, (label,) * (n * (n - 1) // 2))


# ---------------------------------------------------------------------------
# verification pipeline

DEFAULT_SCALENE_GRID = ((5, 10, 13), (13, 40, 45), (9, 16, 25))
DEFAULT_ISOSCELES_GRID = ((3, 4), (2, 4))


def default_grid(ttype: TriangleType) -> tuple[tuple[int, ...], ...]:
    if ttype is TriangleType.SCALENE:
        return DEFAULT_SCALENE_GRID
    if ttype is TriangleType.ISOSCELES:
        return DEFAULT_ISOSCELES_GRID
    return ((1,),)


@dataclass(frozen=True)
class GridCheck:
    n: int
    values: tuple[Fraction, ...]
    labeling: EdgeLabeling
    psd: bool
    rank: int
    fits: bool


@dataclass(frozen=True)
class Witness:
    family: str
    config: PointConfig
    values: tuple[Fraction, ...]


@dataclass
class VerificationRecord:
    dim: int
    type: TriangleType
    max_points: int
    survivors_above: int  # labelings surviving on max_points + 1 vertices
    checks: list[GridCheck] = field(default_factory=list)
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def witness_families(self) -> list[str]:
        seen: list[str] = []
        for w in self.witnesses:
            if w.family not in seen:
                seen.append(w.family)
        return seen


def _validate_grid(ttype: TriangleType, grid) -> list[tuple[Fraction, ...]]:
    if ttype is TriangleType.EQUILATERAL:
        return [tuple(as_fraction(v) for v in row) for row in (grid or ((1,),))]
    if not grid:
        raise ValueError("non-equilateral verification needs a non-empty value grid")
    width = len(ttype.alphabet)
    rows = []
    for row in grid:
        vals = tuple(as_fraction(v) for v in row)
        if len(vals) != width:
            raise ValueError(f"{ttype.short} grid rows need {width} values, got {row!r}")
        if any(v <= 0 for v in vals):
            raise ValueError(f"grid values must be positive: {row!r}")
        if len(set(vals)) != width:
            raise ValueError(f"grid values must be distinct for {ttype.short}: {row!r}")
        rows.append(vals)
    return rows


def _check(labeling: EdgeLabeling, ttype: TriangleType, vals, dim: int) -> GridCheck:
    D = labeling.to_matrix(dict(zip(ttype.alphabet, vals)))
    rep = embedding_dimension(D)
    return GridCheck(labeling.n, vals, labeling, rep.psd, rep.rank, rep.realizable_in(dim))


def verify_bound(dim: int, ttype: TriangleType, value_grid=None) -> VerificationRecord:
    """Largest one-triangle point count in R^dim for ``ttype``, with witnesses.

    Equilateral: the unique labeling on dim+2 vertices needs dimension dim+1,
    while dim+1 vertices fit (regular simplex). Other types: no labeling
    survives on 5 vertices; each realizable grid value on 4 vertices yields a
    rational witness configuration.
    """
    if not 3 <= dim <= 10:
        raise ValueError(f"dimension must lie in [3, 10], got {dim}")
    grid = _validate_grid(ttype, value_grid)

    if ttype is TriangleType.EQUILATERAL:
        # one-letter alphabet: exactly one labeling on any vertex count
        too_many = uniform_labeling(dim + 2)
        enough = uniform_labeling(dim + 1)
        checks = [_check(L, ttype, v, dim) for L in (too_many, enough) for v in grid]
        above = sum(c.fits for c in checks if c.n == dim + 2)
        if above or not all(c.fits for c in checks if c.n == dim + 1):
            max_points = max(c.n for c in checks if c.fits) if any(c.fits for c in checks) else 0
            return VerificationRecord(dim, ttype, max_points, above, checks, [])
        w = regular_simplex(dim)
        return VerificationRecord(dim, ttype, dim + 1, 0, checks, [Witness("simplex", w, (Fraction(2),))])

    above = enumerate_one_triangle_labelings(5, ttype)
    below = enumerate_one_triangle_labelings(4, ttype)
    checks = [_check(L, ttype, v, dim) for L in below.representatives for v in grid]
    checks += [_check(L, ttype, v, dim) for L in above.representatives for v in grid]
    witnesses = []
    for c in checks:
        if c.n != 4 or not c.fits:
            continue
        if ttype is TriangleType.ISOSCELES:
            found = witness_for_isosceles(c.values[0], c.values[1])
        else:
            found = witness_for_scalene(*c.values)
        if found is not None:
            family, cfg = found
            rep = census(cfg)
            if rep.n_classes == 1 and rep.degenerate_triples == 0:
                witnesses.append(Witness(family, cfg, c.values))
    fits_above = sum(c.fits for c in checks if c.n == 5)
    if fits_above:
        max_points = 5
    elif any(c.fits for c in checks if c.n == 4):
        max_points = 4
    else:
        max_points = 3
    return VerificationRecord(dim, ttype, max_points, above.count, checks, witnesses)
