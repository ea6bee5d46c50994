"""Points, lines, conics with nucleus (0,0,1), and collineations of PG(2,2^h).

Points and lines are triples of field ints, canonically scaled so the first
nonzero coordinate is 1.  A conic ``Conic(alpha, beta, lam)`` is the quadric
alpha x^2 + xy + beta y^2 + lam z^2 = 0; every such conic has (0,0,1) as its
nucleus.  It belongs to Mathon's family when Tr(alpha beta) = 1, which is
exactly the condition that z = 0 misses it.

Quadratic forms in three variables are 6-tuples of coefficients of
(x^2, y^2, z^2, xy, xz, yz).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .ff import GF2m, format_elem

Point = tuple[int, int, int]
Line = tuple[int, int, int]
Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

NUCLEUS: Point = (0, 0, 1)
LINE_Z0: Line = (0, 0, 1)


class GeometryError(ValueError):
    pass


class Conic(NamedTuple):
    alpha: int
    beta: int
    lam: int

    def to_string(self) -> str:
        return f"alpha={format_elem(self.alpha)} beta={format_elem(self.beta)} lambda={format_elem(self.lam)}"

    @classmethod
    def from_string(cls, text: str) -> "Conic":
        kv = dict(tok.split("=", 1) for tok in text.split() if "=" in tok)
        return cls(int(kv["alpha"], 16), int(kv["beta"], 16), int(kv["lambda"], 16))

    def form(self) -> tuple[int, int, int, int, int, int]:
        return (self.alpha, self.beta, self.lam, 1, 0, 0)


def canon(F: GF2m, v: Sequence[int]) -> tuple[int, int, int]:
    """Scale a nonzero triple so its first nonzero coordinate is 1."""
    for c in v:
        if c:
            if c == 1:
                return (v[0], v[1], v[2])
            d = F.inv(c)
            return (F.mul(v[0], d), F.mul(v[1], d), F.mul(v[2], d))
    raise GeometryError("the zero vector is not a projective point")


def incident(F: GF2m, p: Point, line: Line) -> bool:
    return (F.mul(p[0], line[0]) ^ F.mul(p[1], line[1]) ^ F.mul(p[2], line[2])) == 0


def cross(F: GF2m, a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    """Join of two points / meet of two lines (characteristic 2, signs vanish)."""
    m = F.mul
    return (
        m(a[1], b[2]) ^ m(a[2], b[1]),
        m(a[2], b[0]) ^ m(a[0], b[2]),
        m(a[0], b[1]) ^ m(a[1], b[0]),
    )


def all_points(F: GF2m):
    yield (0, 0, 1)
    for z in F.elements():
        yield (0, 1, z)
    for y in F.elements():
        for z in F.elements():
            yield (1, y, z)


all_lines = all_points


def points_on_line(F: GF2m, line: Line) -> list[Point]:
    u, v, w = canon(F, line)
    m = F.mul
    if u:  # x = v y + w z
        return [(v, 1, 0)] + [canon(F, (m(v, y) ^ w, y, 1)) for y in F.elements()]
    if v:  # y = w z
        return [(1, 0, 0)] + [canon(F, (x, w, 1)) for x in F.elements()]
    return [(0, 1, 0)] + [(1, y, 0) for y in F.elements()]


# ----------------------------------------------------------------------------
# quadratic forms


def eval_form(F: GF2m, f: Sequence[int], p: Sequence[int]) -> int:
    x, y, z = p
    m = F.mul
    return (
        m(f[0], m(x, x)) ^ m(f[1], m(y, y)) ^ m(f[2], m(z, z))
        ^ m(f[3], m(x, y)) ^ m(f[4], m(x, z)) ^ m(f[5], m(y, z))
    )


_CROSS = ((0, 1, 3), (0, 2, 4), (1, 2, 5))


def substitute_form(F: GF2m, f: Sequence[int], N: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """The form v -> f(N v)."""
    m = F.mul
    out = [0] * 6
    rows = N

    def add_product(c: int, r1: Sequence[int], r2: Sequence[int]) -> None:
        if not c:
            return
        for i in range(3):
            out[i] ^= m(c, m(r1[i], r2[i]))
        for i, j, k in _CROSS:
            out[k] ^= m(c, m(r1[i], r2[j]) ^ m(r1[j], r2[i]))

    for i in range(3):
        if f[i]:
            # squares are additive in characteristic 2
            for j in range(3):
                out[j] ^= m(f[i], m(rows[i][j], rows[i][j]))
    for i, j, k in _CROSS:
        add_product(f[k], rows[i], rows[j])
    return tuple(out)


def conic_from_form(F: GF2m, f: Sequence[int]) -> Conic:
    """Normalise a form with nucleus (0,0,1) to xy-coefficient 1."""
    if f[4] or f[5]:
        raise GeometryError("conic does not have (0,0,1) as nucleus")
    if not f[3]:
        raise GeometryError("degenerate form: zero xy-coefficient")
    d = F.inv(f[3])
    c = Conic(F.mul(f[0], d), F.mul(f[1], d), F.mul(f[2], d))
    if c.lam == 0:
        raise GeometryError("degenerate form: zero z^2-coefficient")
    return c


# ----------------------------------------------------------------------------
# conics


def in_family(F: GF2m, C: Conic) -> bool:
    """Tr(alpha beta) = 1, i.e. the line z = 0 is external to C."""
    return F.trace(F.mul(C.alpha, C.beta)) == 1


def on_conic(F: GF2m, C: Conic, p: Point) -> bool:
    return eval_form(F, C.form(), p) == 0


def conic_points(F: GF2m, C: Conic) -> set[Point]:
    """The q+1 points of C, by solving u^2 + u = c along each line x = const."""
    a, b, lam = C
    if lam == 0:
        raise GeometryError("lambda must be nonzero")
    m = F.mul
    pts: set[Point] = set()
    # z = 0: a x^2 + xy + b y^2 = 0
    if b == 0:
        pts.add((0, 1, 0))
        pts.add((1, a, 0))
    else:
        sol = F.solve_artin_schreier(m(a, b))
        if sol:
            binv = F.inv(b)
            pts.update((1, m(u, binv), 0) for u in sol)
    # z = 1, x = 0: b y^2 = lam
    if b:
        pts.add(canon(F, (0, F.sqrt(F.div(lam, b)), 1)))
    # z = 1, x != 0
    for x in F.nonzero():
        c0 = m(a, m(x, x)) ^ lam
        if b == 0:
            pts.add(canon(F, (x, F.div(c0, x), 1)))
            continue
        # y = (x/b) u, u^2 + u = b c0 / x^2
        sol = F.solve_artin_schreier(F.div(m(b, c0), m(x, x)))
        if sol:
            xb = F.div(x, b)
            for u in sol:
                pts.add(canon(F, (x, m(xb, u), 1)))
    return pts


def conic_points_brute(F: GF2m, C: Conic) -> set[Point]:
    """Test oracle: evaluate the form on every point of the plane."""
    f = C.form()
    return {p for p in all_points(F) if eval_form(F, f, p) == 0}


def compose_oplus(F: GF2m, C1: Conic, C2: Conic) -> Conic:
    """Mathon's composition: lambda-weighted averages of alpha and beta."""
    if C1.lam == C2.lam:
        raise GeometryError("composition needs distinct lambdas")
    L = C1.lam ^ C2.lam
    m = F.mul
    return Conic(
        F.div(m(C1.alpha, C1.lam) ^ m(C2.alpha, C2.lam), L),
        F.div(m(C1.beta, C1.lam) ^ m(C2.beta, C2.lam), L),
        L,
    )


def conic_vector(F: GF2m, C: Conic) -> tuple[int, int, int]:
    """(alpha lam, beta lam, lam): composition is vector addition in these coordinates."""
    return (F.mul(C.alpha, C.lam), F.mul(C.beta, C.lam), C.lam)


def conic_from_vector(F: GF2m, v: Sequence[int]) -> Conic:
    if v[2] == 0:
        raise GeometryError("vector with zero lambda is not a conic")
    d = F.inv(v[2])
    return Conic(F.mul(v[0], d), F.mul(v[1], d), v[2])


def disjoint_by_trace(F: GF2m, C1: Conic, C2: Conic) -> int:
    """Tr((alpha1 (+) alpha2)(beta1 (+) beta2)) for two conics of Mathon's family.

    For family members a value of 1 means C1, C2 and C1 (+) C2 are pairwise
    disjoint.  Use :func:`conics_disjoint` for conics that may meet z = 0.
    """
    if not (in_family(F, C1) and in_family(F, C2)):
        raise GeometryError("trace criterion requires both conics in the family Tr(alpha beta) = 1")
    C = compose_oplus(F, C1, C2)
    return F.trace(F.mul(C.alpha, C.beta))


def conics_disjoint(F: GF2m, C1: Conic, C2: Conic) -> bool:
    """Exact disjointness test for any two conics with nucleus (0,0,1).

    lam2 Q1 + lam1 Q2 is a binary form in x, y; the conics meet iff it has a
    root, i.e. iff its discriminant-type trace vanishes.
    """
    if C1 == C2:
        return False
    if C1.lam == C2.lam:
        return False
    m = F.mul
    L = C1.lam ^ C2.lam
    a = m(C1.alpha, C2.lam) ^ m(C2.alpha, C1.lam)
    b = m(C1.beta, C2.lam) ^ m(C2.beta, C1.lam)
    return F.trace(F.div(m(a, b), m(L, L))) == 1


def line_at_infinity_pair(F: GF2m, C1: Conic, C2: Conic) -> Line:
    """The double line Q1 + Q2 of the pencil spanned by C1 and C2."""
    if C1 == C2:
        raise GeometryError("a single conic does not span a pencil")
    s = F.sqrt
    return canon(F, (s(C1.alpha ^ C2.alpha), s(C1.beta ^ C2.beta), s(C1.lam ^ C2.lam)))


# ----------------------------------------------------------------------------
# collineations


def _matmul(F: GF2m, A: Matrix, B: Matrix) -> Matrix:
    m = F.mul
    return tuple(
        tuple(m(A[i][0], B[0][j]) ^ m(A[i][1], B[1][j]) ^ m(A[i][2], B[2][j]) for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


def _det(F: GF2m, A: Matrix) -> int:
    m = F.mul
    return (
        m(A[0][0], m(A[1][1], A[2][2]) ^ m(A[1][2], A[2][1]))
        ^ m(A[0][1], m(A[1][0], A[2][2]) ^ m(A[1][2], A[2][0]))
        ^ m(A[0][2], m(A[1][0], A[2][1]) ^ m(A[1][1], A[2][0]))
    )


def _matinv(F: GF2m, A: Matrix) -> Matrix:
    d = _det(F, A)
    if d == 0:
        raise GeometryError("singular matrix")
    dinv = F.inv(d)
    m = F.mul

    def cof(i: int, j: int) -> int:
        r = [x for x in range(3) if x != i]
        c = [x for x in range(3) if x != j]
        return m(A[r[0]][c[0]], A[r[1]][c[1]]) ^ m(A[r[0]][c[1]], A[r[1]][c[0]])

    return tuple(tuple(m(cof(j, i), dinv) for j in range(3)) for i in range(3))  # type: ignore[return-value]


def _frob_matrix(F: GF2m, A: Matrix, k: int) -> Matrix:
    if k % F.h == 0:
        return A
    return tuple(tuple(F.frobenius(x, k) for x in row) for row in A)  # type: ignore[return-value]


@dataclass(frozen=True)
class Collineation:
    """p -> matrix . p^(2^frob), with the matrix taken up to a scalar."""

    field: GF2m
    matrix: Matrix
    frob: int = 0

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if _det(self.field, M) == 0:
            raise GeometryError("collineation matrix is singular")
        object.__setattr__(self, "matrix", _canon_matrix(self.field, M))
        object.__setattr__(self, "frob", self.frob % self.field.h)

    @classmethod
    def identity(cls, F: GF2m) -> "Collineation":
        return cls(F, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), 0)

    def is_identity(self) -> bool:
        return self.frob == 0 and self.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def apply(self, p: Sequence[int]) -> Point:
        F = self.field
        ps = [F.frobenius(c, self.frob) for c in p]
        M = self.matrix
        m = F.mul
        return canon(F, [m(M[i][0], ps[0]) ^ m(M[i][1], ps[1]) ^ m(M[i][2], ps[2]) for i in range(3)])

    __call__ = apply

    def apply_line(self, line: Sequence[int]) -> Line:
        """Image of a line: (M^-1)^T l^sigma."""
        F = self.field
        ls = [F.frobenius(c, self.frob) for c in line]
        N = _matinv(F, self.matrix)
        m = F.mul
        return canon(F, [m(N[0][j], ls[0]) ^ m(N[1][j], ls[1]) ^ m(N[2][j], ls[2]) for j in range(3)])

    def compose(self, other: "Collineation") -> "Collineation":
        """self after other."""
        F = self.field
        if other.field != F:
            raise GeometryError("collineations over different fields")
        return Collineation(F, _matmul(F, self.matrix, _frob_matrix(F, other.matrix, self.frob)), self.frob + other.frob)

    __matmul__ = compose

    def inverse(self) -> "Collineation":
        F = self.field
        return Collineation(F, _frob_matrix(F, _matinv(F, self.matrix), -self.frob), -self.frob)

    def power(self, n: int) -> "Collineation":
        result = Collineation.identity(self.field)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                result = base @ result
            base = base @ base
            n >>= 1
        return result

    def order(self, limit: int = 1 << 20) -> int:
        g = self
        for n in range(1, limit + 1):
            if g.is_identity():
                return n
            g = self @ g
        raise GeometryError(f"collineation order exceeds {limit}")


def _canon_matrix(F: GF2m, M: Matrix) -> Matrix:
    for row in M:
        for x in row:
            if x:
                if x == 1:
                    return M
                d = F.inv(x)
                return tuple(tuple(F.mul(y, d) for y in r) for r in M)  # type: ignore[return-value]
    raise GeometryError("zero matrix")


def form_image(T: Collineation, f: Sequence[int]) -> tuple[int, ...]:
    """Quadratic form of the image of the quadric f = 0 under T."""
    F = T.field
    fs = [F.frobenius(c, T.frob) for c in f]
    return substitute_form(F, fs, _matinv(F, T.matrix))


def conic_image(T: Collineation, C: Conic) -> Conic:
    """Image of C under T, renormalised to Mathon coordinates.

    Raises GeometryError when the image no longer has nucleus (0,0,1).
    """
    return conic_from_form(T.field, form_image(T, C.form()))


def collineation_compose(T1: Collineation, T2: Collineation) -> Collineation:
    return T1 @ T2


ELATION_E: Matrix = ((1, 0, 0), (1, 1, 0), (0, 0, 1))


def elation_iota(F: GF2m) -> Collineation:
    """(x, y, z) -> (x, x + y, z): axis x = 0, centre (0,1,0)."""
    return Collineation(F, ELATION_E, 0)


def format_point(p: Sequence[int]) -> str:
    return f"x={format_elem(p[0])} y={format_elem(p[1])} z={format_elem(p[2])}"


def format_line(line: Sequence[int]) -> str:
    return f"u={format_elem(line[0])} v={format_elem(line[1])} w={format_elem(line[2])}"
