import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxarc.ff import KIND_I_MODULUS, GF2m
from maxarc.geom import (
    NUCLEUS,
    Collineation,
    Conic,
    GeometryError,
    all_points,
    canon,
    compose_oplus,
    conic_image,
    conic_points,
    conic_points_brute,
    conics_disjoint,
    disjoint_by_trace,
    elation_iota,
    in_family,
    incident,
    line_at_infinity_pair,
    points_on_line,
)
from maxarc.singer import ThetaParams, theta_matrix

F7 = GF2m(7, KIND_I_MODULUS)
nonzero7 = st.integers(1, 127)
elems7 = st.integers(0, 127)


def family_conic(rng, F=F7):
    while True:
        a, b, lam = rng.randrange(F.q), rng.randrange(F.q), rng.randrange(1, F.q)
        if F.trace(F.mul(a, b)):
            return Conic(a, b, lam)


def test_canon_is_scale_invariant():
    p = (3, 5, 7)
    for c in F7.nonzero():
        assert canon(F7, [F7.mul(c, x) for x in p]) == canon(F7, p)
    with pytest.raises(GeometryError):
        canon(F7, (0, 0, 0))


def test_lines_have_q_plus_one_points():
    for line in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (3, 1, 1), (0, 1, 9), (5, 6, 7)]:
        pts = points_on_line(F7, line)
        assert len(set(pts)) == 129
        assert all(incident(F7, p, line) for p in pts)


@pytest.mark.parametrize("h", [3, 5, 7])
def test_conic_points_match_brute_force(h):
    F = GF2m(h)
    rng = random.Random(h)
    for _ in range(60):
        C = Conic(rng.randrange(F.q), rng.randrange(F.q), rng.randrange(1, F.q))
        assert conic_points(F, C) == conic_points_brute(F, C)


def test_family_conic_avoids_z0_and_has_nucleus():
    C1 = Conic(1, 1, 1)
    pts = conic_points(F7, C1)
    assert len(pts) == 129
    assert all(p[2] != 0 for p in pts)
    assert NUCLEUS not in pts
    # every line through the nucleus meets C_1 exactly once
    for u, v in [(1, y) for y in F7.elements()] + [(0, 1)]:
        line = (u, v, 0)
        assert sum(incident(F7, p, line) for p in pts) == 1


def test_compose_oplus_examples():
    w = 5
    assert compose_oplus(F7, Conic(3, 4, 1), Conic(3, 4, w)) == Conic(3, 4, 1 ^ w)
    assert compose_oplus(F7, Conic(1, 1, 1), Conic(1, 1, w)) == Conic(1, 1, w ^ 1)
    with pytest.raises(GeometryError):
        compose_oplus(F7, Conic(1, 1, 3), Conic(2, 1, 3))


@given(elems7, elems7, nonzero7, elems7, elems7, nonzero7)
def test_oplus_triple_closure(a1, b1, l1, a2, b2, l2):
    if l1 == l2:
        return
    c1, c2 = Conic(a1, b1, l1), Conic(a2, b2, l2)
    c3 = compose_oplus(F7, c1, c2)
    assert compose_oplus(F7, c2, c1) == c3
    assert compose_oplus(F7, c3, c2) == c1
    assert compose_oplus(F7, c1, c3) == c2


def test_disjoint_by_trace_standard_pencil():
    for lam in range(2, 128):
        assert disjoint_by_trace(F7, Conic(1, 1, 1), Conic(1, 1, lam)) == 1


def test_disjoint_by_trace_requires_family():
    with pytest.raises(GeometryError):
        disjoint_by_trace(F7, Conic(0, 0, 1), Conic(1, 1, 2))
    with pytest.raises(GeometryError):
        disjoint_by_trace(F7, Conic(1, 1, 2), Conic(1, 1, 2))


def test_general_disjointness_matches_point_sets():
    rng = random.Random(11)
    for _ in range(300):
        c1 = Conic(rng.randrange(128), rng.randrange(128), rng.randrange(1, 128))
        c2 = Conic(rng.randrange(128), rng.randrange(128), rng.randrange(1, 128))
        if c1 == c2:
            continue
        meet = bool(conic_points(F7, c1) & conic_points(F7, c2))
        assert conics_disjoint(F7, c1, c2) == (not meet)


def test_trace_criterion_sample():
    rng = random.Random(7)
    for _ in range(300):
        c1, c2 = family_conic(rng), family_conic(rng)
        if c1.lam == c2.lam:
            continue
        if disjoint_by_trace(F7, c1, c2):
            c3 = compose_oplus(F7, c1, c2)
            p1, p2, p3 = (conic_points(F7, c) for c in (c1, c2, c3))
            assert not (p1 & p2 or p1 & p3 or p2 & p3)


def test_line_at_infinity():
    assert line_at_infinity_pair(F7, Conic(1, 1, 1), Conic(1, 1, 9)) == (0, 0, 1)
    rng = random.Random(2)
    for _ in range(50):
        c1, c2 = family_conic(rng), family_conic(rng)
        if c1 == c2:
            continue
        line = line_at_infinity_pair(F7, c1, c2)
        on_line = set(points_on_line(F7, line))
        if conics_disjoint(F7, c1, c2):
            assert not (on_line & conic_points(F7, c1))
    with pytest.raises(GeometryError):
        line_at_infinity_pair(F7, Conic(1, 1, 1), Conic(1, 1, 1))


def test_collineation_compose_matches_action():
    rng = random.Random(4)
    for _ in range(20):
        M1 = tuple(tuple(rng.randrange(128) for _ in range(3)) for _ in range(3))
        M2 = tuple(tuple(rng.randrange(128) for _ in range(3)) for _ in range(3))
        try:
            T1 = Collineation(F7, M1, rng.randrange(7))
            T2 = Collineation(F7, M2, rng.randrange(7))
        except GeometryError:
            continue
        T = T1 @ T2
        for p in [(1, 2, 3), (0, 1, 5), (0, 0, 1), (7, 0, 1)]:
            assert T(p) == T1(T2(p))
        assert (T1 @ T1.inverse()).is_identity()
        assert T1 @ Collineation.identity(F7) == T1


def test_collineation_preserves_incidence():
    T = Collineation(F7, ((3, 1, 0), (5, 7, 2), (1, 0, 9)), 3)
    for line in [(1, 2, 3), (0, 1, 0), (4, 0, 1)]:
        img = T.apply_line(line)
        assert all(incident(F7, T(p), img) for p in points_on_line(F7, line)[:20])


def test_singular_matrix_rejected():
    with pytest.raises(GeometryError):
        Collineation(F7, ((1, 0, 0), (1, 0, 0), (0, 0, 1)))


def test_conic_image_examples():
    C = Conic(3, 4, 5)
    assert conic_image(Collineation.identity(F7), C) == C
    rng = random.Random(9)
    for _ in range(20):
        w = rng.randrange(2, 128)
        t = rng.randrange(128)
        T = theta_matrix(ThetaParams(F7, w, t, 1))
        assert conic_image(T, Conic(1, 1, w)) == Conic(1, 1, 1)
        winv = F7.inv(w)
        # C_1 under the shifted (t + 1/w) matrix
        alpha = 1 ^ F7.mul(w ^ winv, t) ^ F7.mul(F7.mul(w, w) ^ 1, F7.mul(t, t))
        Ts = elation_iota(F7) @ T
        assert conic_image(Ts, Conic(1, 1, 1)) == Conic(alpha, 1, F7.mul(winv, winv))
        D = Conic(rng.randrange(128), rng.randrange(128), rng.randrange(1, 128))
        assert conic_image(T.inverse(), conic_image(T, D)) == D
        assert {T(p) for p in conic_points(F7, D)} == conic_points(F7, conic_image(T, D))


def test_conic_image_rejects_moved_nucleus():
    T = Collineation(F7, ((1, 0, 1), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(GeometryError):
        conic_image(T, Conic(1, 1, 1))


def test_elation_fixes_standard_pencil():
    E = elation_iota(F7)
    assert (E @ E).is_identity()
    for lam in F7.nonzero():
        assert conic_image(E, Conic(1, 1, lam)) == Conic(1, 1, lam)


def test_all_points_count():
    F = GF2m(3)
    assert len(set(all_points(F))) == 73
    assert in_family(F7, Conic(1, 1, 1))
