"""Singer 8-arcs: the extension collineations theta_{t,sigma} and their analysis.

Throughout, C_lam denotes the standard-pencil conic x^2 + xy + y^2 + lam z^2
and theta_{t,sigma} is p -> A p^sigma with sigma = 2^k and

    A = [[s, 0, 0], [t, s, 0], [sqrt(s t + t^2), 0, 1]],   s = (w^(-1/2))^sigma.

theta fixes (0,0,1) and (0,1,0) and maps C_w onto C_1.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import gcd

from .arcs import MathonArc, closure, conic_permutation, find_family_shear, is_closed_set
from .ff import KIND_I_MODULUS, KIND_II_MODULUS, GF2m, SubfieldEmbedding, default_modulus
from .geom import (
    Collineation,
    Conic,
    compose_oplus,
    conic_image,
    conics_disjoint,
    elation_iota,
)

SUBFIELD_DEGREE = 7
SUBFIELD_ORDER = (1 << SUBFIELD_DEGREE) - 1  # 127, the order of a
X_POWERS = (0, 1, 3, 7, 15, 31, 63)  # x^e with e = 2^i - 1 (the 1 is x^0)


class SingerError(ValueError):
    pass


class QuarticCase(enum.Enum):
    """Which conic C_1^(theta^2) is required to be: C_3 = C_{w+1} or C_6 = C_w (+) C_1^theta."""

    C3 = "C3"
    C6 = "C6"


class SingerKind(enum.Enum):
    I = "I"
    II = "II"

    @property
    def modulus(self) -> int:
        return KIND_I_MODULUS if self is SingerKind.I else KIND_II_MODULUS

    @property
    def exponents(self) -> tuple[tuple[int, int], ...]:
        """(i, j) for the conics a^i x^2 + xy + y^2 + a^j z^2."""
        if self is SingerKind.I:
            return ((0, 0), (0, -1), (0, 6), (16, 2), (39, 14), (93, 62), (101, 30))
        return ((0, 0), (0, -1), (0, 30), (18, 2), (12, 62), (33, 6), (43, 14))

    @property
    def x_heptic(self) -> list[int]:
        """Coefficients (low to high) of the relation satisfied by x = w^-1."""
        return [(self.modulus >> i) & 1 for i in range(8)]

    @property
    def w_heptic(self) -> list[int]:
        """Reciprocal of x_heptic: the relation satisfied by w."""
        return self.x_heptic[::-1]

    @property
    def quartic_case(self) -> QuarticCase:
        return QuarticCase.C3 if self is SingerKind.I else QuarticCase.C6

    @property
    def t_exponents(self) -> tuple[int, int]:
        """Exponents e with t = w^e for the two non-Denniston quartic roots."""
        return (115, 39) if self is SingerKind.I else (91, 8)

    @classmethod
    def parse(cls, text: str) -> "SingerKind":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise SingerError(f"unknown Singer kind {text!r}; use I or II") from None


# ----------------------------------------------------------------------------
# theta


@dataclass(frozen=True)
class ThetaParams:
    field: GF2m
    w: int
    t: int
    sigma_exp: int = 1

    def __post_init__(self):
        if self.w in (0, 1):
            raise SingerError("w must lie outside GF(2)")

    @property
    def s(self) -> int:
        """sqrt(w)^(-sigma), the diagonal entry of the matrix."""
        F = self.field
        return F.frobenius(F.inv(F.sqrt(self.w)), self.sigma_exp)


def theta_matrix(p: ThetaParams) -> Collineation:
    F, s, t = p.field, p.s, p.t
    corner = F.sqrt(F.mul(s, t) ^ F.mul(t, t))
    return Collineation(F, ((s, 0, 0), (t, s, 0), (corner, 0, 1)), p.sigma_exp)


def theta_matrix_shifted(p: ThetaParams) -> Collineation:
    """The variant whose (2,1) entry is t + s; equals iota after theta."""
    F, s, t = p.field, p.s, p.t
    corner = F.sqrt(F.mul(s, t) ^ F.mul(t, t))
    return Collineation(F, ((s, 0, 0), (t ^ s, s, 0), (corner, 0, 1)), p.sigma_exp)


def standard_conic(lam: int) -> Conic:
    return Conic(1, 1, lam)


def is_denniston_t(p: ThetaParams) -> bool:
    """theta stabilises z = 0 exactly when its (3,1) entry vanishes."""
    F = p.field
    return F.mul(p.s, p.t) ^ F.mul(p.t, p.t) == 0


# ----------------------------------------------------------------------------
# trace conditions


def _trace_denominators(F: GF2m, w: int, sigma_exp: int) -> tuple[int, int]:
    w_sig = F.frobenius(F.inv(w), sigma_exp)
    d1, d2 = w_sig ^ w, w_sig ^ w ^ 1
    if d1 == 0 or d2 == 0:
        raise SingerError(f"zero denominator in trace conditions for w={w:#x}, sigma=2^{sigma_exp}")
    return d1, d2


def trace_condition_pair(p: ThetaParams) -> tuple[int, int]:
    """The two traces that must vanish for D_1^theta to meet D_1 only in C_1."""
    F, w, t = p.field, p.w, p.t
    d1, d2 = _trace_denominators(F, w, p.sigma_exp)
    u = F.mul(t, p.s ^ t)
    return F.trace(F.div(F.mul(1 ^ w, u), d1)), F.trace(F.div(F.mul(w, u), d2))


def trace_hyperplanes(F: GF2m, w: int, sigma_exp: int) -> tuple[int, int]:
    """(A1, A2) with Tr(A_i t) equal to the i-th trace condition for every t.

    Tr(c t (s + t)) = Tr(c s t) + Tr(c t^2) = Tr((c s + sqrt(c)) t).
    """
    d1, d2 = _trace_denominators(F, w, sigma_exp)
    s = ThetaParams(F, w, 0, sigma_exp).s
    c1, c2 = F.div(1 ^ w, d1), F.div(w, d2)
    return F.mul(c1, s) ^ F.sqrt(c1), F.mul(c2, s) ^ F.sqrt(c2)


def trace_solutions(F: GF2m, w: int, sigma_exp: int) -> list[int]:
    """All t for which both trace conditions vanish."""
    a1, a2 = trace_hyperplanes(F, w, sigma_exp)
    return [t for t in F.elements() if F.trace(F.mul(a1, t)) == 0 and F.trace(F.mul(a2, t)) == 0]


# ----------------------------------------------------------------------------
# the intersections with x = 0


def infinity_chain(F: GF2m, w: int, sigma_exp: int) -> list[int]:
    """y-coordinates of (0,1,1) and its images under theta, theta^2, ...

    theta acts on (0, y, 1) as y -> s y^sigma, so the i-th value is
    sqrt(w)^-(sigma + ... + sigma^i).  Returns h values.
    """
    if w in (0, 1):
        raise SingerError("w must lie outside GF(2)")
    if sigma_exp % F.h == 0:
        raise SingerError("sigma must be a nontrivial automorphism")
    s = ThetaParams(F, w, 0, sigma_exp).s
    chain = [1]
    for _ in range(F.h - 1):
        chain.append(F.mul(s, F.frobenius(chain[-1], sigma_exp)))
    return chain


def _exponent_sum(sigma_exp: int, j: int, h: int = SUBFIELD_DEGREE) -> int:
    """sigma + sigma^2 + ... + sigma^j as an integer mod 2^h - 1."""
    n = (1 << h) - 1
    return sum(pow(2, i * sigma_exp, n) for i in range(1, j + 1)) % n


def sigma_power_to_square(sigma_exp: int, h: int = SUBFIELD_DEGREE) -> int:
    """The l in 1..h-1 with sigma^l = 2, i.e. k l = 1 mod h."""
    if sigma_exp % h == 0 or gcd(sigma_exp, h) != 1:
        raise SingerError(f"2^{sigma_exp} does not generate the Frobenius group of GF(2^{h})")
    return pow(sigma_exp, -1, h)


def sigmatox_x(F: GF2m, w: int, sigma_exp: int) -> int:
    """x = sqrt(w)^-(sigma + ... + sigma^l) with sigma^l = 2."""
    if F.h != SUBFIELD_DEGREE:
        raise SingerError("the chain-to-powers rewrite is specific to h = 7")
    return infinity_chain(F, w, sigma_exp)[sigma_power_to_square(sigma_exp)]


def j_table(h: int = SUBFIELD_DEGREE) -> dict[int, tuple[int, ...]]:
    """For each l, the j with e (sigma + ... + sigma^l) = sigma + ... + sigma^j, e = 3, 7, 15, 31, 63."""
    n = (1 << h) - 1
    table = {}
    for k in range(1, h):
        l = sigma_power_to_square(k, h)
        base = _exponent_sum(k, l, h)
        row = []
        for e in X_POWERS[2:]:
            target = e * base % n
            js = [j for j in range(1, h) if _exponent_sum(k, j, h) == target]
            if len(js) != 1:
                raise SingerError(f"no unique j for l={l}, e={e}")
            row.append(js[0])
        table[l] = tuple(row)
    return dict(sorted(table.items()))


def power_set(F: GF2m, x: int) -> list[int]:
    """[0, 1, x, x^3, x^7, x^15, x^31, x^63]."""
    return [0] + [F.pow(x, e) for e in X_POWERS]


def subgroup_criterion(F: GF2m, x: int) -> bool:
    """Is {0, 1, x, x^3, ..., x^63} closed under addition?"""
    elems = power_set(F, x)
    if len(set(elems)) != len(elems):
        raise SingerError(f"x={x:#x}: the listed powers are not distinct")
    s = set(elems)
    return all((a ^ b) in s for a in elems for b in elems)


def subgroup_by_heptics(F: GF2m, x: int) -> bool:
    """1 + x = x^7 or 1 + x^3 = x^7."""
    x7 = F.pow(x, 7)
    return 1 ^ x == x7 or 1 ^ F.pow(x, 3) == x7


def cayley_table(F: GF2m, x: int) -> list[list[int | None]]:
    """Addition table of the power set, entries as exponents (None for 0)."""
    labels = [None] + list(X_POWERS)
    elems = power_set(F, x)
    index = {v: labels[i] for i, v in enumerate(elems)}
    table = []
    for a in elems:
        row = []
        for b in elems:
            if (a ^ b) not in index:
                raise SingerError(f"x={x:#x}: power set is not closed")
            row.append(index[a ^ b])
        table.append(row)
    return table


def subgroup_x_values(F: GF2m) -> list[int]:
    """All x with distinct powers forming an additive subgroup."""
    out = []
    for x in F.elements():
        elems = power_set(F, x)
        if len(set(elems)) == len(elems) and subgroup_criterion(F, x):
            out.append(x)
    return out


def enumerate_w_candidates(F: GF2m) -> list[tuple[int, int]]:
    """(w, sigma_exp) pairs whose x = w-chain value gives an additive subgroup.

    From x = sqrt(w)^-e with e = sigma + ... + sigma^l, w = x^-(2 / e) in the
    exponent group Z/127.
    """
    if F.h != SUBFIELD_DEGREE:
        raise SingerError("candidate enumeration is defined for h = 7")
    n = F.q - 1
    out = []
    for x in subgroup_x_values(F):
        for k in range(1, F.h):
            e = _exponent_sum(k, sigma_power_to_square(k))
            w = F.pow(x, -2 * pow(e, -1, n))
            out.append((w, k))
    return sorted(out)


# ----------------------------------------------------------------------------
# the two quartics in t (sigma = 2)


def _winv_powers(F: GF2m, w: int) -> dict[int, int]:
    return {e: F.pow(w, e) for e in range(-8, 3)}


def quartic_coefficients(case: QuarticCase, F: GF2m, w: int) -> list[int]:
    """t-polynomial (low to high) that must vanish, sigma = 2."""
    p = _winv_powers(F, w)
    if case is QuarticCase.C3:
        c4 = p[-2] ^ p[1] ^ 1
        c2 = p[-4] ^ p[-3] ^ p[-2] ^ p[-1]
        c1 = p[-4]
    else:
        c4 = p[2] ^ p[-1]
        c2 = p[-2] ^ 1
        c1 = p[-4] ^ p[-3]
    return [0, c1, c2, 0, c4]


def quartic_constant(case: QuarticCase, F: GF2m, w: int) -> int:
    p = _winv_powers(F, w)
    if case is QuarticCase.C3:
        return p[-6] ^ p[1] ^ 1
    return p[-8] ^ p[-5] ^ p[-4] ^ p[2]


def case_w_values(case: QuarticCase, F: GF2m) -> list[int]:
    """w outside GF(2) with vanishing constant term."""
    return [w for w in F.elements() if w > 1 and quartic_constant(case, F, w) == 0]


def solve_t_quartic(case: QuarticCase, F: GF2m, w: int | None = None) -> set[int]:
    """Root set of the case's quartic; w defaults to the smallest admissible value."""
    if w is None:
        ws = case_w_values(case, F)
        if not ws:
            raise SingerError(f"no w satisfies the {case.value} constant condition in GF(2^{F.h})")
        w = ws[0]
    if w in (0, 1) or quartic_constant(case, F, w) != 0:
        raise SingerError(f"w={w:#x} fails the {case.value} constant condition")
    return F.find_roots(quartic_coefficients(case, F, w))


def theta_squared_point(F: GF2m, w: int, t: int, x: int, y: int) -> tuple[int, int, int]:
    """Closed form of theta^2 (sigma = 2, shifted matrix) applied to (x, y, 1)."""
    m = F.mul
    wi = F.inv(w)
    w2, w3 = m(wi, wi), m(m(wi, wi), wi)
    x4, y4 = F.pow(x, 4), F.pow(y, 4)
    r = m(wi, t) ^ m(t, t)
    return (
        m(w3, x4),
        m(m(w2, t) ^ m(wi, m(t, t)), x4) ^ m(w3, y4),
        m(m(w2, F.sqrt(r)) ^ r, x4) ^ 1,
    )


def quartic_geometric_roots(case: QuarticCase, F: GF2m, w: int) -> set[int]:
    """t (sigma = 2) for which C_1^(theta^2) is C_3 or C_6 respectively; test oracle."""
    c1, c2 = standard_conic(1), standard_conic(w)
    out = set()
    for t in F.elements():
        T = theta_matrix(ThetaParams(F, w, t, 1))
        c4 = conic_image(T, c1)
        target = standard_conic(w ^ 1) if case is QuarticCase.C3 else compose_oplus(F, c2, c4)
        if conic_image(T @ T, c1) == target:
            out.add(t)
    return out


# ----------------------------------------------------------------------------
# the explicit arcs


def singer_generator(kind: SingerKind, F: GF2m | None = None) -> tuple[GF2m, int]:
    """The field and the element a (a root of the kind's modulus) used for the arc."""
    base = GF2m(SUBFIELD_DEGREE, kind.modulus)
    if F is None or F == base:
        return base, 2
    if F.h % SUBFIELD_DEGREE:
        raise SingerError(f"GF(2^{F.h}) does not contain GF(2^7)")
    return F, SubfieldEmbedding(base, F).root


def build_singer_arc(kind: SingerKind, F: GF2m | None = None) -> MathonArc:
    F, a = singer_generator(kind, F)
    if F.h % 2 == 0:
        raise SingerError("Singer arcs are built over GF(2^h) with h odd")
    conics = tuple(
        Conic(F.pow(a, i % SUBFIELD_ORDER), 1, F.pow(a, j % SUBFIELD_ORDER)) for i, j in kind.exponents
    )
    return MathonArc(F, conics)


def singer_theta(kind: SingerKind, F: GF2m | None = None) -> list[ThetaParams]:
    """The theta (sigma = 2, w = a^-1) for the two non-Denniston quartic roots."""
    F, a = singer_generator(kind, F)
    if F.h != SUBFIELD_DEGREE:
        raise SingerError("use lift_to_extension above h = 7")
    w = F.inv(a)
    roots = solve_t_quartic(kind.quartic_case, F, w)
    return [ThetaParams(F, w, t, 1) for t in sorted(roots) if not is_denniston_t(ThetaParams(F, w, t, 1))]


def arc_from_theta(p: ThetaParams) -> MathonArc:
    """<D_1, C_1^theta> with D_1 = {C_1, C_w, C_(w+1)}."""
    F = p.field
    base = [standard_conic(1), standard_conic(p.w), standard_conic(p.w ^ 1)]
    ext = conic_image(theta_matrix(p), standard_conic(1))
    return MathonArc(F, tuple(closure(F, base + [ext])))


def x0_intercepts(arc: MathonArc) -> list[int]:
    """y with (0, y, 1) on a conic of the arc (one per conic)."""
    F = arc.field
    return [F.sqrt(F.div(c.lam, c.beta)) for c in arc.conics]


def labelled_cycle(p: ThetaParams) -> list[int]:
    """Orbit of C_1 under theta, with C1..C7 named from theta's point of view.

    C1, C2, C3 = C_1, C_w, C_(w+1); C4 = C1^theta, C5 = C1 (+) C4,
    C6 = C2 (+) C4, C7 = C3 (+) C4.
    """
    F = p.field
    T = theta_matrix(p)
    c = [standard_conic(1), standard_conic(p.w), standard_conic(p.w ^ 1)]
    c4 = conic_image(T, c[0])
    c += [c4, compose_oplus(F, c[0], c4), compose_oplus(F, c[1], c4), compose_oplus(F, c[2], c4)]
    label = {conic: i + 1 for i, conic in enumerate(c)}
    if len(label) != 7:
        raise SingerError("labelled conics are not distinct")
    cyc, cur = [1], conic_image(T, c[0])
    while cur != c[0]:
        if cur not in label or len(cyc) > 7:
            raise SingerError("theta does not permute the labelled conics")
        cyc.append(label[cur])
        cur = conic_image(T, cur)
    return cyc + [1]


def cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    seen, lengths = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def generated_group(gens: list[Collineation], limit: int = 10_000) -> set[Collineation]:
    F = gens[0].field
    group = {Collineation.identity(F)}
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                if h not in group:
                    group.add(h)
                    nxt.append(h)
                    if len(group) > limit:
                        raise SingerError(f"group exceeds {limit} elements")
        frontier = nxt
    return group


@dataclass(frozen=True)
class SingerActionReport:
    permutation: tuple[int, ...]
    cycle_type: tuple[int, ...]
    order: int
    seventh_power: str  # "identity", "iota" or "other"
    iota_fixes_conics: bool
    group_order: int
    conic_image_order: int

    @property
    def is_seven_cycle(self) -> bool:
        return self.cycle_type == (7,)

    @property
    def ok(self) -> bool:
        return (
            self.is_seven_cycle
            and self.seventh_power in ("identity", "iota")
            and self.iota_fixes_conics
            and self.conic_image_order == 7
        )


def verify_singer_action(arc: MathonArc, T: Collineation) -> SingerActionReport:
    perm = conic_permutation(arc, T)
    if perm is None:
        raise SingerError("collineation does not stabilise the arc")
    F = arc.field
    iota = elation_iota(F)
    iota_perm = conic_permutation(arc, iota)
    t7 = T.power(7)
    seventh = "identity" if t7.is_identity() else "iota" if t7 == iota else "other"
    order = T.order(limit=4 * F.h * 1024)
    group = generated_group([T, iota]) if order * 2 <= 10_000 else set()
    images = {conic_permutation(arc, g) for g in group} if group else set()
    return SingerActionReport(
        permutation=perm,
        cycle_type=cycle_type(perm),
        order=order,
        seventh_power=seventh,
        iota_fixes_conics=iota_perm == tuple(range(len(arc.conics))),
        group_order=len(group),
        conic_image_order=len(images),
    )


# ----------------------------------------------------------------------------
# larger fields


def lift_frobenius_exponent(h: int) -> tuple[int, int]:
    """k = 1 mod 7 in 1..h-1 minimising the order h / gcd(h, k); returns (k, order)."""
    if h % 2 == 0 or h % SUBFIELD_DEGREE:
        raise SingerError(f"h = {h} must be odd and divisible by 7")
    best = min(range(1, h, SUBFIELD_DEGREE), key=lambda k: (h // gcd(h, k), k))
    return best, h // gcd(h, best)


@dataclass(frozen=True)
class LiftResult:
    kind: SingerKind
    arc: MathonArc
    collineation: Collineation
    frob_exp: int
    frob_order: int
    classification: str  # "first" or "second"
    permutation: tuple[int, ...]
    kernel_fixes_conics: bool
    shear: tuple[int, int] | None

    @property
    def transitive(self) -> bool:
        return cycle_type(self.permutation) == (7,)


def lift_to_extension(kind: SingerKind, h: int, F: GF2m | None = None) -> LiftResult:
    """The Singer arc over GF(2^h) with theta's matrix embedded and sigma replaced by 2^k."""
    if h > 63:
        raise SingerError("h must be at most 63")
    k, order = lift_frobenius_exponent(h)
    base = GF2m(SUBFIELD_DEGREE, kind.modulus)
    if F is None:
        F = base if h == SUBFIELD_DEGREE else GF2m(h, default_modulus(h))
    elif F.h != h:
        raise SingerError(f"field degree {F.h} does not match h = {h}")
    emb = (lambda v: v) if F == base else SubfieldEmbedding(base, F)
    arc = build_singer_arc(kind, F)
    theta = theta_matrix(singer_theta(kind, base)[0])
    T = Collineation(F, tuple(tuple(emb(v) for v in row) for row in theta.matrix), k)
    perm = conic_permutation(arc, T)
    if perm is None:
        raise SingerError("lifted collineation does not stabilise the arc")
    kernel = T.power(SUBFIELD_DEGREE)
    base_arc = build_singer_arc(kind, base)
    uv = find_family_shear(base_arc)
    shear_uv = None if uv is None else (emb(uv[0]), emb(uv[1]))
    return LiftResult(
        kind=kind,
        arc=arc,
        collineation=T,
        frob_exp=k,
        frob_order=order,
        classification="first" if order == SUBFIELD_DEGREE else "second",
        permutation=perm,
        kernel_fixes_conics=conic_permutation(arc, kernel) == tuple(range(7)),
        shear=shear_uv,
    )


def pairwise_disjoint(arc: MathonArc) -> bool:
    F = arc.field
    return all(conics_disjoint(F, a, b) for a, b in itertools.combinations(arc.conics, 2))


def closed(arc: MathonArc) -> bool:
    return is_closed_set(arc.field, list(arc.conics))
