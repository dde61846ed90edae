import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from onetriangle.constructions import rectangle, regular_simplex
from onetriangle.geometry import (
    GeometryError,
    Point,
    PointConfig,
    TriangleSignature,
    census,
    distance_matrix,
    epsilon_census,
    is_degenerate_triple,
    squared_circumradius,
    squared_distance,
    triangle_signature,
)

from conftest import point_rows, positive_rationals, rationals

F = Fraction


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((0, 0), (3, 4), 25),
        ((1, 0, 0), (0, 1, 0), 2),
        ((F(1, 2), 0), (F(-1, 2), 0), 1),
    ],
)
def test_squared_distance(p, q, expected):
    assert squared_distance(Point(p), Point(q)) == expected


def test_squared_distance_dimension_mismatch():
    with pytest.raises(GeometryError):
        squared_distance(Point((0, 0)), Point((0, 0, 0)))


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point((float("nan"), 0))


def test_config_rejects_duplicates_and_mixed_dims():
    with pytest.raises(GeometryError):
        PointConfig.from_rows([(0, 0), (0, 0)])
    with pytest.raises(GeometryError):
        PointConfig.from_rows([(0, 0), (0, 0, 1)])


def test_distance_matrix_examples():
    assert distance_matrix(PointConfig.from_rows([(0,), (2,)])).entries == ((0, 4), (4, 0))
    off = sorted(distance_matrix(rectangle(3, 4)).off_diagonal())
    assert off == [9, 9, 16, 16, 25, 25]
    assert set(distance_matrix(regular_simplex(3)).off_diagonal()) == {2}


@pytest.mark.parametrize(
    "sides, degenerate",
    [((1, 1, 4), True), ((2, 2, 2), False), ((9, 16, 25), False), ((1, 4, 9), True)],
)
def test_is_degenerate_triple(sides, degenerate):
    assert is_degenerate_triple(*sides) is degenerate


def test_triangle_signature():
    assert triangle_signature(25, 9, 16) == (9, 16, 25)
    assert triangle_signature(2, 2, 2) == (2, 2, 2)
    assert triangle_signature(2, 2, 2).kind == "equilateral"
    assert triangle_signature(3, 3, 4).kind == "isosceles"
    with pytest.raises(GeometryError):
        triangle_signature(1, 1, 4)


@pytest.mark.parametrize(
    "sig, expected",
    [((3, 3, 3), 1), ((9, 16, 25), F(25, 4)), ((2, 2, 2), F(2, 3))],
)
def test_squared_circumradius(sig, expected):
    assert squared_circumradius(TriangleSignature(*map(F, sig))) == expected


def test_squared_circumradius_degenerate():
    with pytest.raises(GeometryError):
        squared_circumradius((1, 1, 4))


@given(positive_rationals)
def test_equilateral_circumradius_is_a_third(a):
    assert squared_circumradius((a, a, a)) == a / 3


def _circumcenter_radius_sq(pts):
    """Oracle: solve for the circumcenter of a planar rational triangle."""
    (x1, y1), (x2, y2), (x3, y3) = pts
    # |c-p1|^2 = |c-p2|^2 = |c-p3|^2 -> two linear equations
    a11, a12, b1 = 2 * (x2 - x1), 2 * (y2 - y1), x2**2 - x1**2 + y2**2 - y1**2
    a21, a22, b2 = 2 * (x3 - x1), 2 * (y3 - y1), x3**2 - x1**2 + y3**2 - y1**2
    det = a11 * a22 - a12 * a21
    cx = (b1 * a22 - a12 * b2) / det
    cy = (a11 * b2 - b1 * a21) / det
    return (cx - x1) ** 2 + (cy - y1) ** 2


@given(st.lists(st.tuples(rationals(), rationals()), min_size=3, max_size=3, unique=True))
def test_circumradius_matches_solved_circumcenter(pts):
    pts = [tuple(map(F, p)) for p in pts]
    a = squared_distance(pts[0], pts[1])
    b = squared_distance(pts[1], pts[2])
    c = squared_distance(pts[0], pts[2])
    if is_degenerate_triple(a, b, c):
        return
    assert squared_circumradius((a, b, c)) == _circumcenter_radius_sq(pts)


def test_census_examples():
    rep = census(rectangle(3, 4))
    assert rep.triangle_classes == ((TriangleSignature(9, 16, 25), 4),)
    assert rep.n_distinct_distances == 3 and rep.degenerate_triples == 0

    rep = census(regular_simplex(4))
    assert rep.triangle_classes == ((TriangleSignature(2, 2, 2), 10),)
    assert rep.distinct_distances == (2,)

    rep = census(PointConfig.from_rows([(0,), (1,), (2,)]))
    assert rep.n_classes == 0 and rep.degenerate_triples == 1


def test_census_needs_three_points():
    with pytest.raises(GeometryError):
        census(PointConfig.from_rows([(0,), (1,)]))


def _brute_census(rows):
    """Oracle: census by direct enumeration of triples with plain tuples."""
    classes = {}
    degenerate = 0
    for t in itertools.combinations(rows, 3):
        sides = sorted(
            sum((x - y) ** 2 for x, y in zip(p, q)) for p, q in itertools.combinations(t, 2)
        )
        a, b, c = sides
        if 2 * (a * b + b * c + c * a) - a * a - b * b - c * c == 0:
            degenerate += 1
        else:
            classes[tuple(sides)] = classes.get(tuple(sides), 0) + 1
    return sorted(classes.items()), degenerate


@given(point_rows())
def test_census_matches_brute_force_and_conserves_count(rows):
    rep = census(PointConfig.from_rows(rows))
    classes, degenerate = _brute_census([tuple(map(F, r)) for r in rows])
    assert [(tuple(s), m) for s, m in rep.triangle_classes] == classes
    assert rep.degenerate_triples == degenerate
    assert sum(m for _, m in rep.triangle_classes) + rep.degenerate_triples == comb(len(rows), 3)
    assert all(s.a <= s.b <= s.c for s in rep.signatures)
    assert len(set(rep.signatures)) == rep.n_classes


@given(point_rows(), st.data())
def test_census_isometry_invariance(rows, data):
    dim = len(rows[0])
    shift = data.draw(st.tuples(*[rationals()] * dim))
    perm = data.draw(st.permutations(range(dim)))
    flips = data.draw(st.tuples(*[st.sampled_from([1, -1])] * dim))
    moved = [tuple(flips[k] * r[perm[k]] + shift[k] for k in range(dim)) for r in rows]
    assert census(PointConfig.from_rows(moved)) == census(PointConfig.from_rows(rows))


@given(point_rows(), positive_rationals)
def test_census_scaling_covariance(rows, s):
    base = census(PointConfig.from_rows(rows))
    scaled = census(PointConfig.from_rows([tuple(s * x for x in r) for r in rows]))
    s2 = s * s
    assert scaled.distinct_distances == tuple(s2 * v for v in base.distinct_distances)
    assert scaled.triangle_classes == tuple(
        (TriangleSignature(*(s2 * v for v in sig)), m) for sig, m in base.triangle_classes
    )
    assert scaled.degenerate_triples == base.degenerate_triples


def _isometry_exists(t1, t2):
    """Oracle: an explicit planar isometry mapping triple t1 onto t2 (some vertex order).

    Translate so the first vertex is at the origin, solve the linear map that
    sends the two remaining edge vectors across, and check it is orthogonal.
    """
    for perm in itertools.permutations(t2):
        u1 = [t1[1][k] - t1[0][k] for k in range(2)]
        u2 = [t1[2][k] - t1[0][k] for k in range(2)]
        v1 = [perm[1][k] - perm[0][k] for k in range(2)]
        v2 = [perm[2][k] - perm[0][k] for k in range(2)]
        det = u1[0] * u2[1] - u2[0] * u1[1]
        if det == 0:
            return False
        # M [u1 u2] = [v1 v2]  ->  M = V U^{-1}
        inv = [[u2[1] / det, -u2[0] / det], [-u1[1] / det, u1[0] / det]]
        M = [[v1[r] * inv[0][c] + v2[r] * inv[1][c] for c in range(2)] for r in range(2)]
        MtM = [[sum(M[k][r] * M[k][c] for k in range(2)) for c in range(2)] for r in range(2)]
        if MtM == [[1, 0], [0, 1]]:
            return True
    return False


@given(point_rows(min_n=3, max_n=5, min_dim=2, max_dim=2, coord=st.integers(-2, 2).map(F)))
def test_sss_soundness_small_grid(rows):
    pts = [tuple(r) for r in rows]
    triples = []
    for t in itertools.combinations(pts, 3):
        sides = [squared_distance(p, q) for p, q in itertools.combinations(t, 2)]
        if not is_degenerate_triple(*sides):
            triples.append((t, triangle_signature(*sides)))
    for (t1, s1), (t2, s2) in itertools.combinations(triples, 2):
        assert (s1 == s2) == _isometry_exists(t1, t2)


# -- epsilon census ---------------------------------------------------------


def test_epsilon_census_perturbed_square():
    exact = census(rectangle(1, 1))
    X = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    X += 1e-9 * np.random.default_rng(0).standard_normal(X.shape)
    rep = epsilon_census(X, 1e-6)
    assert rep.n_classes == exact.n_classes == 1
    assert rep.n_distinct_distances == exact.n_distinct_distances == 2


def test_epsilon_census_matches_exact_rectangle():
    cfg = rectangle(3, 4)
    exact = census(cfg)
    rep = epsilon_census(cfg.to_float(), 1e-6)
    assert rep.n_classes == exact.n_classes
    assert [m for _, m in rep.triangle_classes] == [m for _, m in exact.triangle_classes]
    assert rep.distinct_distances == tuple(float(v) for v in exact.distinct_distances)


def test_epsilon_census_separates_close_classes():
    # two non-congruent triangles: (9,16,25) and the same stretched by 1%
    rows = [(0, 0), (3, 0), (0, 4), (100, 0), (103.03, 0), (100, 4.04)]
    exact_rows = [(0, 0), (3, 0), (0, 4), (100, 0), (F(10303, 100), 0), (100, F(101, 25))]
    rep = epsilon_census(np.array(rows, dtype=float), 1e-6)
    exact = census(PointConfig.from_rows(exact_rows))
    assert rep.n_classes == exact.n_classes
    assert rep.degenerate_triples == exact.degenerate_triples
    assert sum(m for _, m in rep.triangle_classes) + rep.degenerate_triples == 20


def test_epsilon_census_errors():
    X = np.array([[0, 0], [1, 0], [0, 1]], dtype=float)
    with pytest.raises(GeometryError):
        epsilon_census(X, 0)
    with pytest.raises(GeometryError):
        epsilon_census(np.array([[0, 0], [1e-9, 0], [0, 1]]), 1e-6)


def test_epsilon_census_deterministic():
    X = np.random.default_rng(5).standard_normal((6, 3))
    assert epsilon_census(X, 1e-3) == epsilon_census(X.copy(), 1e-3)
