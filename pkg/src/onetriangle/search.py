"""Numerical probe: minimize a one-triangle defect over n points in R^d.

The defect of a configuration X is built from the squared pair distances
normalized by their mean ``s``. Every triple contributes its sorted
normalized side vector; the defect is the variance (mean squared deviation
from the mean vector) of those vectors plus ``(margin - 16 A^2 / s^2)^2`` for
every triple below the degeneracy margin. Near-flat triples enter the
variance with weight ``16 A^2 / (s^2 margin)`` so the defect is continuous;
when every triple clears the margin all weights are 1.

The defect vanishes exactly on configurations whose triples all clear the
margin and are pairwise congruent, and it is invariant under similarity
transforms.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import CensusReport, epsilon_census


@lru_cache(maxsize=None)
def _index_tables(n: int):
    pairs = np.array(list(itertools.combinations(range(n), 2)), dtype=np.intp)
    pair_id = {tuple(p): t for t, p in enumerate(pairs.tolist())}
    triples = np.array(
        [[pair_id[(i, j)], pair_id[(j, k)], pair_id[(i, k)]]
         for i, j, k in itertools.combinations(range(n), 3)],
        dtype=np.intp,
    )
    return pairs, triples


@lru_cache(maxsize=None)
def _incidence(n: int) -> np.ndarray:
    pairs, _ = _index_tables(n)
    inc = np.zeros((n, len(pairs)))
    inc[pairs[:, 0], np.arange(len(pairs))] = 1.0
    inc[pairs[:, 1], np.arange(len(pairs))] = -1.0
    return inc


def _defect_parts(X: np.ndarray, margin: float, want_grad: bool):
    """Return ``(defect, gradient or None, total weight)``.

    Triple weights are ``min(1, q / margin)`` with ``q = 16 A^2 / s^2``, so a
    triple fades out of the variance exactly as its penalty fades in.
    """
    n = X.shape[0]
    pairs, triples = _index_tables(n)
    diff = X[pairs[:, 0]] - X[pairs[:, 1]]
    e = np.einsum("pk,pk->p", diff, diff)
    P = e.size
    s = e.mean()
    if not s > 0:
        return np.inf, None, 0.0

    sides = e[triples]  # (T, 3)
    order = np.argsort(sides, axis=1, kind="stable")
    sig = np.take_along_axis(sides, order, axis=1) / s
    a, b, c = sides[:, 0], sides[:, 1], sides[:, 2]
    Q = 2 * (a * b + b * c + c * a) - a * a - b * b - c * c
    q = np.maximum(Q / (s * s), 0.0)
    below = q < margin
    w = np.where(below, q / margin, 1.0)
    W = float(w.sum())
    if not W > 0:
        return np.inf, None, 0.0

    mean = (w @ sig) / W
    dev = sig - mean
    dev2 = np.einsum("tk,tk->t", dev, dev)
    var = float(w @ dev2) / W
    gap = np.where(below, margin - q, 0.0)
    value = var + float(gap @ gap)
    if not want_grad:
        return value, None, W

    g_sig = (2.0 / W) * w[:, None] * dev  # d var / d sig
    g_q = np.where(below, (dev2 - var) / (W * margin) - 2.0 * gap, 0.0)

    # sig = sorted(sides) / s and q = Q / s^2: chain both to e and to s
    ge = np.bincount(
        np.take_along_axis(triples, order, axis=1).ravel(), (g_sig / s).ravel(), minlength=P
    )
    g_s = -float(np.sum(g_sig * sig)) / s
    dQ = 2.0 * np.stack([b + c - a, a + c - b, a + b - c], axis=1)
    ge += np.bincount(triples.ravel(), ((g_q / (s * s))[:, None] * dQ).ravel(), minlength=P)
    g_s += float(g_q @ (-2.0 * q / s))
    ge += g_s / P  # ds/de_p = 1/P

    wpair = (2.0 * ge)[:, None] * diff
    return value, _incidence(n) @ wpair, W


def triangle_defect(config, margin: float = 1e-2) -> float:
    X = np.asarray(config, dtype=float)
    if X.ndim != 2 or X.shape[0] < 3:
        raise ValueError("need an (n, d) configuration with n >= 3")
    value, _, weight = _defect_parts(X, margin, want_grad=False)
    if weight == 0:
        raise ValueError("every triple is degenerate")
    return value


def defect_gradient(config, margin: float = 1e-2, tie_tol: float = 1e-7) -> np.ndarray:
    """Analytic gradient of :func:`triangle_defect`, shape ``(n, d)``.

    Raises ``ValueError`` at side-length ties or on the margin boundary,
    where the defect is not differentiable.
    """
    X = np.asarray(config, dtype=float)
    n = X.shape[0]
    pairs, triples = _index_tables(n)
    diff = X[pairs[:, 0]] - X[pairs[:, 1]]
    e = np.einsum("pk,pk->p", diff, diff)
    s = e.mean()
    srt = np.sort(e[triples], axis=1)
    if np.any(np.diff(srt, axis=1) < tie_tol * s):
        raise ValueError("configuration sits on a side-length tie; perturb it")
    a, b, c = srt.T
    q = (2 * (a * b + b * c + c * a) - a * a - b * b - c * c) / (s * s)
    if np.any(np.abs(q - margin) < tie_tol):
        raise ValueError("configuration sits on the degeneracy margin; perturb it")
    value, G, weight = _defect_parts(X, margin, want_grad=True)
    if weight == 0:
        raise ValueError("every triple is degenerate")
    return G


@dataclass(frozen=True)
class SearchConfig:
    n: int
    d: int
    restarts: int = 16
    max_iters: int = 2000
    seed: int = 0
    step: float = 1.0
    shrink: float = 0.5
    degeneracy_margin: float = 1e-2
    grad_tol: float = 1e-14
    step_tol: float = 1e-14

    def __post_init__(self):
        if self.n < 3 or self.d < 1 or self.restarts < 1 or self.max_iters < 1:
            raise ValueError("need n >= 3, d >= 1, restarts >= 1, max_iters >= 1")
        if not 0 < self.degeneracy_margin < 1:
            raise ValueError("degeneracy_margin must lie in (0, 1)")
        if not (self.step > 0 and 0 < self.shrink < 1):
            raise ValueError("step must be positive and shrink in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class DefectResult:
    best_defect: float
    best_config: np.ndarray
    per_restart: tuple[tuple[int, float], ...]
    iterations_used: int


def descend(X: np.ndarray, cfg: SearchConfig) -> tuple[np.ndarray, float, int]:
    """Gradient descent with Armijo backtracking from ``X``."""
    margin = cfg.degeneracy_margin
    f, g, _ = _defect_parts(X, margin, want_grad=True)
    if g is None:
        return X, f, 0
    t = cfg.step
    it = 0
    for it in range(1, cfg.max_iters + 1):
        gg = float(np.sum(g * g))
        if f == 0.0 or gg < cfg.grad_tol**2:
            break
        while t >= cfg.step_tol:
            Xn = X - t * g
            fn, gn, _ = _defect_parts(Xn, margin, want_grad=True)
            if fn <= f - 1e-4 * t * gg:
                break
            t *= cfg.shrink
        else:
            break
        # Recenter and rescale to unit mean square size. The defect is
        # similarity-invariant, so f is unchanged and g scales by the factor.
        Xn = Xn - Xn.mean(axis=0)
        lam = np.sqrt(np.mean(np.sum(Xn * Xn, axis=1)))
        X, f, g = Xn / lam, fn, gn * lam
        t = min(t / cfg.shrink, 1e6)
    return X, f, it


def _run_restart(args):
    cfg, i = args
    rng = np.random.default_rng((cfg.seed + i) % 2**64)
    X0 = rng.uniform(-1.0, 1.0, size=(cfg.n, cfg.d))
    X, f, it = descend(X0, cfg)
    return X, f, it


def minimize_defect(cfg: SearchConfig, workers: int = 1) -> DefectResult:
    """Random-restart descent; restart ``i`` draws from seed ``cfg.seed + i``.

    Results are merged in restart order, so ``workers`` never changes output.
    """
    jobs = [(cfg, i) for i in range(cfg.restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_restart, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_restart(j) for j in jobs]
    per_restart = tuple(((cfg.seed + i) % 2**64, float(f)) for i, (_, f, _) in enumerate(results))
    best = min(range(len(results)), key=lambda i: (results[i][1], i))
    return DefectResult(
        best_defect=float(results[best][1]),
        best_config=results[best][0],
        per_restart=per_restart,
        iterations_used=sum(r[2] for r in results),
    )


@dataclass(frozen=True)
class SnapCensus:
    report: CensusReport
    defect: float


def snap_and_census(config, eps: float, margin: float = 1e-2) -> SnapCensus:
    X = np.asarray(config, dtype=float)
    report = epsilon_census(X, eps)
    value, _, _ = _defect_parts(X, margin, want_grad=False)
    return SnapCensus(report, float(value))
