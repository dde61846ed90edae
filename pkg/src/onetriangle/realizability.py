"""Euclidean realizability of squared-distance matrices.

Decisions (PSD, rank, minimal embedding dimension) are made exactly over the
rationals with a diagonally pivoted LDL^T elimination of the Gram matrix.
Coordinates, which generally need square roots, are recovered in floating
point only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .geometry import SquaredDistanceMatrix

NOT_REALIZABLE = None

Matrix = tuple[tuple[Fraction, ...], ...]


class NotRealizableError(ValueError):
    pass


class ResidualError(ValueError):
    """Numerical reconstruction missed the target distances (ill-conditioned input)."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class GramMatrix:
    entries: Matrix
    base_index: int

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RealizabilityReport:
    psd: bool
    rank: int
    min_embedding_dim: Optional[int]
    witness: Optional[tuple[Fraction, ...]] = None
    base_index: int = 0

    @property
    def realizable(self) -> bool:
        return self.psd

    def realizable_in(self, dim: int) -> bool:
        return self.psd and self.rank <= dim


def gram_from_squared_distances(D: SquaredDistanceMatrix, base: int = 0) -> GramMatrix:
    """Inner products of the points relative to point ``base``.

    ``G[i][j] = (D[b][i] + D[b][j] - D[i][j]) / 2`` over the other points, kept
    in their original order.
    """
    n = D.n
    if not 0 <= base < n:
        raise IndexError(f"base index {base} out of range for {n} points")
    others = [i for i in range(n) if i != base]
    E = D.entries
    G = tuple(
        tuple((E[base][i] + E[base][j] - E[i][j]) / 2 for j in others) for i in others
    )
    return GramMatrix(G, base)


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan solve of a nonsingular system."""
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def exact_rank(A: Sequence[Sequence]) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, rows):
            if M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def quadratic_form(G: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Fraction:
    n = len(v)
    return sum((v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)), Fraction(0))


def psd_rank(G: GramMatrix | Sequence[Sequence]) -> tuple[bool, int, Optional[tuple[Fraction, ...]]]:
    """Exact PSD test and rank of a symmetric rational matrix.

    Returns ``(psd, rank, witness)``; ``witness`` is ``None`` when PSD, else a
    rational vector ``v`` with ``v^T G v < 0``.
    """
    A = [[Fraction(x) for x in row] for row in (G.entries if isinstance(G, GramMatrix) else G)]
    n = len(A)
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise ValueError(f"matrix not symmetric at ({i},{j})")

    S = [row[:] for row in A]  # Schur complement on `remaining`
    remaining = list(range(n))
    pivots: list[int] = []
    witness_dir = None
    while remaining:
        neg = next((i for i in remaining if S[i][i] < 0), None)
        if neg is not None:
            witness_dir = {neg: Fraction(1)}
            break
        # largest diagonal first; ties go to the smallest index
        p = max(remaining, key=lambda i: (S[i][i], -i))
        d = S[p][p]
        if d == 0:
            nz = next(
                ((i, j) for i in remaining for j in remaining if i < j and S[i][j] != 0),
                None,
            )
            if nz is None:
                break  # Schur complement vanishes: PSD with rank len(pivots)
            i, j = nz
            # zero diagonals, so (e_i - sign * e_j) has form -2|S_ij|
            witness_dir = {i: Fraction(1), j: Fraction(-1 if S[i][j] > 0 else 1)}
            break
        pivots.append(p)
        remaining.remove(p)
        for i in remaining:
            if S[i][p] == 0:
                continue
            f = S[i][p] / d
            for j in remaining:
                S[i][j] -= f * S[p][j]

    if witness_dir is None:
        return True, len(pivots), None

    # Lift the Schur-complement direction w to v = (-A_PP^{-1} A_PR w, w).
    v = [Fraction(0)] * n
    for k, val in witness_dir.items():
        v[k] = val
    if pivots:
        rhs = [-sum((A[p][k] * val for k, val in witness_dir.items()), Fraction(0)) for p in pivots]
        sol = _solve([[A[p][q] for q in pivots] for p in pivots], rhs)
        for p, x in zip(pivots, sol):
            v[p] = x
    witness = tuple(v)
    assert quadratic_form(A, witness) < 0
    return False, exact_rank(A), witness


def embedding_dimension(D: SquaredDistanceMatrix, base: int = 0) -> RealizabilityReport:
    """Minimal Euclidean dimension in which ``D`` is realizable, if any."""
    if D.n == 1:
        return RealizabilityReport(True, 0, 0, None, base)
    G = gram_from_squared_distances(D, base)
    psd, rank, witness = psd_rank(G)
    return RealizabilityReport(
        psd=psd,
        rank=rank,
        min_embedding_dim=rank if psd else NOT_REALIZABLE,
        witness=witness,
        base_index=base,
    )


def max_relative_residual(D: SquaredDistanceMatrix, X: np.ndarray) -> float:
    n = D.n
    diff = X[:, None, :] - X[None, :, :]
    got = np.einsum("ijk,ijk->ij", diff, diff)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            target = float(D.entries[i][j])
            worst = max(worst, abs(got[i, j] - target) / target)
    return worst


def realize_coordinates(
    D: SquaredDistanceMatrix, dim: int, tol: float = 1e-9
) -> tuple[np.ndarray, float]:
    """Floating-point coordinates in R^dim reproducing ``D``.

    Returns ``(X, residual)`` with ``X`` of shape ``(n, dim)``, the first point
    at the origin, and ``residual`` the worst relative squared-distance error.
    """
    report = embedding_dimension(D)
    if not report.realizable_in(dim):
        need = "no Euclidean space" if not report.psd else f"dimension {report.rank}"
        raise NotRealizableError(f"matrix needs {need}, target dimension is {dim}")
    n = D.n
    X = np.zeros((n, dim))
    if n > 1 and report.rank > 0:
        G = np.array([[float(x) for x in row] for row in gram_from_squared_distances(D, 0).entries])
        w, V = np.linalg.eigh(G)
        idx = np.argsort(w)[::-1][: report.rank]
        Y = V[:, idx] * np.sqrt(np.clip(w[idx], 0.0, None))
        X[1:, : report.rank] = Y
    residual = max_relative_residual(D, X) if n > 1 else 0.0
    if residual > tol:
        raise ResidualError(f"relative residual {residual:.3e} exceeds {tol:.1e}", residual)
    return X, residual
