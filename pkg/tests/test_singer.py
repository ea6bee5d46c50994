import random

import pytest

from maxarc.arcs import MathonArc, certify_by_theorem, is_closed_set
from maxarc.ff import KIND_II_MODULUS, GF2m
from maxarc.geom import Collineation, Conic, canon, conic_image, conic_points, conics_disjoint, elation_iota
from maxarc.singer import (
    QuarticCase,
    SingerError,
    SingerKind,
    ThetaParams,
    arc_from_theta,
    build_singer_arc,
    case_w_values,
    cayley_table,
    enumerate_w_candidates,
    infinity_chain,
    is_denniston_t,
    j_table,
    labelled_cycle,
    lift_frobenius_exponent,
    lift_to_extension,
    power_set,
    quartic_coefficients,
    quartic_geometric_roots,
    sigma_power_to_square,
    sigmatox_x,
    singer_theta,
    solve_t_quartic,
    subgroup_by_heptics,
    subgroup_criterion,
    subgroup_x_values,
    theta_matrix,
    theta_matrix_shifted,
    theta_squared_point,
    trace_condition_pair,
    trace_hyperplanes,
    trace_solutions,
    verify_singer_action,
    x0_intercepts,
)

# Addition table for 1 + x = x^7; labels are exponents of x, None is zero.
PUBLISHED_CAYLEY = [
    [None, 0, 1, 3, 7, 15, 31, 63],
    [0, None, 7, 63, 1, 31, 15, 3],
    [1, 7, None, 15, 0, 3, 63, 31],
    [3, 63, 15, None, 31, 1, 7, 0],
    [7, 1, 0, 31, None, 63, 3, 15],
    [15, 31, 3, 1, 63, None, 0, 7],
    [31, 15, 63, 7, 3, 0, None, 1],
    [63, 3, 31, 0, 15, 7, 1, None],
]
PUBLISHED_J_TABLE = {
    1: (2, 3, 4, 5, 6),
    2: (4, 6, 1, 3, 5),
    3: (6, 2, 5, 1, 4),
    4: (1, 5, 2, 6, 3),
    5: (3, 1, 6, 4, 2),
    6: (5, 4, 3, 2, 1),
}


def test_theta_fixes_nucleus_and_maps_cw(F7):
    rng = random.Random(1)
    for _ in range(30):
        p = ThetaParams(F7, rng.randrange(2, 128), rng.randrange(128), rng.randrange(1, 7))
        T = theta_matrix(p)
        assert T((0, 0, 1)) == (0, 0, 1)
        assert T((0, 1, 0)) == (0, 1, 0)
        assert conic_image(T, Conic(1, 1, p.w)) == Conic(1, 1, 1)


def test_theta_t_zero_fixes_z0(F7):
    T = theta_matrix(ThetaParams(F7, 9, 0, 2))
    assert T.apply_line((0, 0, 1)) == (0, 0, 1)
    assert is_denniston_t(ThetaParams(F7, 9, 0, 2))


def test_theta_rejects_gf2(F7):
    with pytest.raises(SingerError):
        ThetaParams(F7, 1, 3)


def test_shifted_matrix_is_iota_after_theta(F7):
    p = ThetaParams(F7, 11, 23, 1)
    assert theta_matrix_shifted(p) == elation_iota(F7) @ theta_matrix(p)
    assert theta_matrix_shifted(p) == theta_matrix(ThetaParams(F7, 11, 23 ^ p.s, 1))


def test_power_matrix_diagonal_entries(F7):
    w, k = 37, 3
    p = ThetaParams(F7, w, 5, k)
    T = theta_matrix(p)
    chain = infinity_chain(F7, w, k)
    g = T
    for i in range(1, 7):
        M = g.matrix
        assert F7.div(M[1][1], M[2][2]) == chain[i]
        g = T @ g


def test_trace_conditions_match_geometry(F7):
    for w in range(2, 128, 9):
        for k in range(1, 7):
            try:
                sols = trace_solutions(F7, w, k)
            except SingerError:
                continue
            assert len(sols) == 32
            direct = []
            for t in F7.elements():
                T = theta_matrix(ThetaParams(F7, w, t, k))
                imgs = [conic_image(T, Conic(1, 1, lam)) for lam in (1, w ^ 1)]
                if all(conics_disjoint(F7, c, Conic(1, 1, b)) for c in imgs for b in (w, w ^ 1)):
                    direct.append(t)
            assert sols == direct
            p = ThetaParams(F7, w, sols[3], k)
            assert trace_condition_pair(p) == (0, 0)
            a1, a2 = trace_hyperplanes(F7, w, k)
            assert a1 and a2 and a1 != a2
            s = p.s
            assert {t ^ s for t in sols} == set(sols)


def test_infinity_chain_sigma2(F7):
    w = 77
    x = F7.inv(w)
    chain = infinity_chain(F7, w, 1)
    assert chain == [F7.pow(x, e) for e in (0, 1, 3, 7, 15, 31, 63)]
    with pytest.raises(SingerError):
        infinity_chain(F7, 1, 1)


def test_sigmatox(F7):
    rng = random.Random(2)
    assert sigma_power_to_square(1) == 1 and sigma_power_to_square(4) == 2
    for k in range(1, 7):
        for _ in range(50):
            w = rng.randrange(2, 128)
            x = sigmatox_x(F7, w, k)
            assert set(infinity_chain(F7, w, k)) | {0} == set(power_set(F7, x))


def test_j_table_matches_published():
    assert j_table() == PUBLISHED_J_TABLE


def test_subgroup_criterion_exhaustive(F7):
    xs = subgroup_x_values(F7)
    assert len(xs) == 14
    r1 = F7.find_roots([1, 1, 0, 0, 0, 0, 0, 1])
    r2 = F7.find_roots([1, 0, 0, 1, 0, 0, 0, 1])
    assert set(xs) == r1 | r2 and not (r1 & r2)
    for x in F7.elements():
        elems = power_set(F7, x)
        if len(set(elems)) == 8:
            assert subgroup_criterion(F7, x) == subgroup_by_heptics(F7, x)


def test_cayley_table(F7):
    x = 2  # root of X^7 + X + 1
    assert cayley_table(F7, x) == PUBLISHED_CAYLEY
    assert 1 ^ F7.pow(x, 3) == F7.pow(x, 63)


def test_subgroup_fails_for_other_relation(F7):
    for x in F7.find_roots([1, 1, 0, 1]):  # 1 + x = x^3 has no root in GF(2^7)
        assert not subgroup_criterion(F7, x)
    with pytest.raises(SingerError):
        subgroup_criterion(F7, 1)


def test_w_candidates(F7):
    cands = enumerate_w_candidates(F7)
    assert len(cands) == 84
    assert len({w for w, _ in cands}) == 84
    for w, k in cands:
        x = sigmatox_x(F7, w, k)
        assert subgroup_criterion(F7, x)
        others = [j for j in range(1, 7) if j != k and _passes(F7, w, j)]
        assert others == []
    sigma2 = sorted(w for w, k in cands if k == 1)
    assert sigma2 == sorted(F7.inv(x) for x in subgroup_x_values(F7))


def _passes(F, w, k):
    x = sigmatox_x(F, w, k)
    elems = power_set(F, x)
    return len(set(elems)) == 8 and subgroup_criterion(F, x)


@pytest.mark.parametrize(
    "kind,case,exps",
    [(SingerKind.I, QuarticCase.C3, (115, 39)), (SingerKind.II, QuarticCase.C6, (91, 8))],
)
def test_quartic_roots(kind, case, exps):
    F = GF2m(7, kind.modulus)
    w = F.inv(2)
    roots = solve_t_quartic(case, F, w)
    assert roots == {0, F.inv(w), F.pow(w, exps[0]), F.pow(w, exps[1])}
    coeffs = quartic_coefficients(case, F, w)
    assert roots == {t for t in F.elements() if F.poly_eval(coeffs, t) == 0}
    assert F.pow(w, exps[0]) ^ F.inv(w) == F.pow(w, exps[1])
    assert quartic_geometric_roots(case, F, w) == roots


def test_quartic_roots_frobenius_invariant(F7):
    for case in QuarticCase:
        ws = case_w_values(case, F7)
        assert len(ws) == 7
        for w in ws:
            roots = solve_t_quartic(case, F7, w)
            exps = sorted(F7.log(t, w) for t in roots if t)
            assert exps == sorted(e % 127 for e in ((-1,) + SingerKind.I.t_exponents if case is QuarticCase.C3 else (-1,) + SingerKind.II.t_exponents))


def test_quartic_rejects_bad_w(F7):
    with pytest.raises(SingerError):
        solve_t_quartic(QuarticCase.C3, F7, 5)


def test_theta_squared_point(F7):
    w, t = F7.inv(2), 77
    T = theta_matrix_shifted(ThetaParams(F7, w, t, 1))
    T2 = T @ T
    for p in sorted(conic_points(F7, Conic(1, 1, 1)))[:40]:
        x, y, z = p
        if z == 0:
            continue
        zi = F7.inv(z)
        x, y = F7.mul(x, zi), F7.mul(y, zi)
        assert T2((x, y, 1)) == _canon(F7, theta_squared_point(F7, w, t, x, y))


def _canon(F, p):
    return canon(F, p)


@pytest.mark.parametrize("kind", list(SingerKind))
def test_singer_arc_structure(kind):
    arc = build_singer_arc(kind)
    F = arc.field
    assert is_closed_set(F, list(arc.conics))
    a = 2
    w = F.inv(a)
    c_w1 = Conic(1, 1, w ^ 1)
    assert arc.conics[2] == c_w1
    ys = x0_intercepts(arc)
    group = set(ys) | {0}
    assert len(group) == 8 and all((p ^ q) in group for p in group for q in group)


@pytest.mark.parametrize("kind", list(SingerKind))
def test_singer_theta_action(kind):
    arc = build_singer_arc(kind)
    thetas = singer_theta(kind)
    assert len(thetas) == 2
    for p in thetas:
        assert arc_from_theta(p) == arc
        rep = verify_singer_action(arc, theta_matrix(p))
        assert rep.is_seven_cycle and rep.ok
        assert rep.seventh_power in ("identity", "iota")
        assert rep.group_order == 14 and rep.conic_image_order == 7
    cycles = {tuple(labelled_cycle(p)) for p in thetas}
    expected = (1, 4, 3, 5, 7, 6, 2, 1) if kind is SingerKind.I else (1, 4, 6, 7, 3, 5, 2, 1)
    assert cycles == {expected}


def test_iota_identity_on_conics(singer_arcs):
    for arc in singer_arcs.values():
        rep = verify_singer_action(arc, elation_iota(arc.field))
        assert rep.permutation == tuple(range(7))


def test_action_requires_stabiliser(singer_arcs):
    arc = singer_arcs[SingerKind.I]
    with pytest.raises(SingerError):
        verify_singer_action(arc, Collineation(arc.field, ((1, 0, 0), (0, 1, 0), (0, 0, 5))))


def test_lift_exponents():
    assert lift_frobenius_exponent(7) == (1, 7)
    assert lift_frobenius_exponent(21) == (15, 7)
    assert lift_frobenius_exponent(49) == (1, 49)
    with pytest.raises(SingerError):
        lift_frobenius_exponent(14)
    with pytest.raises(SingerError):
        lift_frobenius_exponent(9)


@pytest.mark.parametrize("kind", list(SingerKind))
def test_lift_h21(kind):
    res = lift_to_extension(kind, 21)
    assert res.frob_exp == 15 and res.frob_order == 7
    assert res.classification == "first"
    assert res.transitive
    assert certify_by_theorem(res.arc, res.shear)
    F = res.arc.field
    sub = F.subfield(7)
    assert all(F.frobenius(v, 15) == F.mul(v, v) for v in sub[:20])


def test_lift_h49_second_kind():
    res = lift_to_extension(SingerKind.I, 49)
    assert res.frob_order == 49 and res.classification == "second"
    assert res.transitive and res.kernel_fixes_conics


def test_build_in_other_modulus():
    F = GF2m(7, KIND_II_MODULUS)
    arc = build_singer_arc(SingerKind.I, F)
    assert isinstance(arc, MathonArc) and arc.field == F
