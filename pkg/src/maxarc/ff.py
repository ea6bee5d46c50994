"""Arithmetic in binary fields GF(2^h).

Elements are plain integers whose bits are the coefficients of the
polynomial representative (bit i <-> X^i), reduced modulo an irreducible
polynomial of degree h.  :class:`GF2m` carries all the operations and works
on ints directly; :class:`FieldElem` is a small value wrapper with operator
overloading for interactive use.

Fields with h <= 16 use exp/log tables; larger fields fall back to
shift-and-add multiplication.  Trace, square root and half-trace are
GF(2)-linear, so they are evaluated from per-basis-vector tables for every h.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_DEGREE = 63
TABLE_LIMIT = 16
EXHAUSTIVE_LIMIT = 21

# Fixed moduli (bit patterns).  h=7 carries both of the primitive heptics
# used by the Singer constructions; the rest are standard primitive trinomials.
KIND_I_MODULUS = 0b10000011  # X^7 + X + 1
KIND_II_MODULUS = 0b10001001  # X^7 + X^3 + 1
DEFAULT_MODULI = {
    2: 0b111,
    3: 0b1011,
    5: 0b100101,
    7: KIND_I_MODULUS,
    21: (1 << 21) | 0b101,  # X^21 + X^2 + 1
    49: (1 << 49) | (1 << 9) | 1,  # X^49 + X^9 + 1
}


class FieldError(ValueError):
    """Invalid field construction or arithmetic request."""


class FieldMismatchError(FieldError):
    """Elements of two different fields were combined."""


# ----------------------------------------------------------------------------
# GF(2)[X] helpers on bitmask polynomials


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return poly_mod(r, m)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: int) -> bool:
    """Rabin's test: X^(2^h) = X mod f and gcd(X^(2^(h/r)) - X, f) = 1."""
    h = poly_degree(modulus)
    if h == 1:
        return True
    if h < 1 or not modulus & 1:
        return False
    x = 0b10
    powers = [x]
    for _ in range(h):
        powers.append(poly_mulmod(powers[-1], powers[-1], modulus))
    if powers[h] != x:
        return False
    return all(poly_gcd(modulus, powers[h // r] ^ x) == 1 for r in _prime_factors(h))


def smallest_irreducible(h: int) -> int:
    """Lexicographically smallest irreducible trinomial, else pentanomial."""
    top = (1 << h) | 1
    for k in range(1, h):
        if is_irreducible(top | (1 << k)):
            return top | (1 << k)
    for k3 in range(3, h):
        for k2 in range(2, k3):
            for k1 in range(1, k2):
                cand = top | (1 << k1) | (1 << k2) | (1 << k3)
                if is_irreducible(cand):
                    return cand
    raise FieldError(f"no irreducible trinomial or pentanomial of degree {h}")


def default_modulus(h: int) -> int:
    mod = DEFAULT_MODULI.get(h)
    if mod is not None and is_irreducible(mod):
        return mod
    return smallest_irreducible(h)


# ----------------------------------------------------------------------------


class GF2m:
    """The field GF(2^h) defined by ``modulus``.

    Parameters
    ----------
    h : int
        Extension degree, 1 <= h <= 63.
    modulus : int, optional
        Bit pattern of an irreducible degree-h polynomial; defaults to
        :func:`default_modulus`.
    check_primitive : bool
        Verify that X generates the multiplicative group; raises if not.
    """

    def __init__(self, h: int, modulus: int | None = None, check_primitive: bool = False):
        if not 1 <= h <= MAX_DEGREE:
            raise FieldError(f"extension degree {h} outside 1..{MAX_DEGREE}")
        if modulus is None:
            modulus = default_modulus(h)
        if poly_degree(modulus) != h or not modulus & 1:
            raise FieldError(f"modulus {modulus:#x} is not a degree-{h} polynomial with constant term")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.h = h
        self.modulus = modulus
        self.q = 1 << h
        self.mask = self.q - 1
        self.primitive_checked = False
        if check_primitive:
            if not self.is_primitive:
                raise FieldError(f"X is not primitive modulo {modulus:#x}")
            self.primitive_checked = True
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if h <= TABLE_LIMIT:
            self._build_tables()
        self._trace_mask = self._linear_trace_mask()
        self._sqrt_basis = [self._pow_slow(1 << i, 1 << (h - 1)) for i in range(h)]

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF2m) and (self.h, self.modulus) == (other.h, other.modulus)

    def __hash__(self) -> int:
        return hash((self.h, self.modulus))

    def __repr__(self) -> str:
        return f"GF2m(h={self.h}, modulus={self.modulus:#x})"

    def to_string(self) -> str:
        return f"h={self.h};mod={self.modulus:x}"

    @classmethod
    def from_string(cls, text: str) -> "GF2m":
        fields = dict(part.split("=", 1) for part in text.strip().split(";"))
        return cls(int(fields["h"]), int(fields["mod"], 16))

    def __call__(self, bits: int) -> "FieldElem":
        return FieldElem(self._check(bits), self)

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a:#x} is not an element of GF(2^{self.h})")
        return a

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # -- multiplication ---------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        r = 0
        q, m = self.q, self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & q:
                a ^= m
        return r

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _build_tables(self) -> None:
        n = self.q - 1
        gen = next(g for g in range(2, self.q) if self._order_slow(g) == n) if self.h > 1 else 1
        exp = [0] * (2 * n)
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = exp[i + n] = x
            log[x] = i
            x = self._mul_slow(x, gen)
        self._exp, self._log = exp, log
        self._table_gen = gen

    def _order_slow(self, a: int) -> int:
        n = self.q - 1
        order = n
        for r in _prime_factors(n):
            while order % r == 0 and self._pow_slow(a, order // r) == 1:
                order //= r
        return order

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_slow(a, b)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_slow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0 if e else 1
        n = self.q - 1
        e %= n
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % n]
        return self._pow_slow(a, e)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        return self._order_slow(a)

    @cached_property
    def is_primitive(self) -> bool:
        return self.h == 1 or self._order_slow(2) == self.q - 1

    def log(self, a: int, base: int = 2) -> int:
        """Discrete logarithm of ``a`` to ``base`` (brute force beyond the tables)."""
        if a == 0:
            raise FieldError("log of zero")
        if self._exp is not None:
            n = self.q - 1
            lb, la = self._log[base], self._log[a]
            for e in range(n):
                if (lb * e - la) % n == 0:
                    return e
            raise FieldError(f"{a:#x} is not a power of {base:#x}")
        x = 1
        for e in range(self.q - 1):
            if x == a:
                return e
            x = self._mul_slow(x, base)
        raise FieldError(f"{a:#x} is not a power of {base:#x}")

    # -- linear maps ------------------------------------------------------

    def _linear_trace_mask(self) -> int:
        mask = 0
        for i in range(self.h):
            x = s = 1 << i
            for _ in range(self.h - 1):
                x = self.mul(x, x)
                s ^= x
            if s == 1:
                mask |= 1 << i
            elif s != 0:
                raise FieldError("trace left GF(2); modulus is not irreducible")
        return mask

    def trace(self, a: int) -> int:
        return (a & self._trace_mask).bit_count() & 1

    def trace_by_definition(self, a: int) -> int:
        """Sum of a^(2^i), i < h, computed literally (test oracle for :meth:`trace`)."""
        s = x = a
        for _ in range(self.h - 1):
            x = self.mul(x, x)
            s ^= x
        return s

    def sqrt(self, a: int) -> int:
        r = 0
        i = 0
        while a:
            if a & 1:
                r ^= self._sqrt_basis[i]
            a >>= 1
            i += 1
        return r

    def frobenius(self, a: int, k: int) -> int:
        """a^(2^k); negative k runs the Frobenius backwards."""
        k %= self.h
        for _ in range(k):
            a = self.mul(a, a)
        return a

    def half_trace(self, c: int) -> int | None:
        """Root H of H^2 + H = c (h odd), or None when Tr(c) = 1."""
        if self.h % 2 == 0:
            raise FieldError("half-trace needs odd extension degree")
        if self.trace(c):
            return None
        s = x = c
        for _ in range((self.h - 1) // 2):
            x = self.mul(self.mul(x, x), self.mul(x, x))
            s ^= x
        return s

    def solve_artin_schreier(self, c: int) -> tuple[int, int] | None:
        """Both roots of u^2 + u = c, or None when there are none."""
        if self.h % 2:
            u = self.half_trace(c)
            return None if u is None else (u, u ^ 1)
        if self.trace(c):
            return None
        if self.h > TABLE_LIMIT:
            raise FieldError("Artin-Schreier solving for even h is table based (h <= 16)")
        if not hasattr(self, "_as_table"):
            self._as_table = {}
            for u in range(self.q):
                self._as_table.setdefault(self.mul(u, u) ^ u, u)
        u = self._as_table[c]
        return u, u ^ 1

    # -- polynomials over the field --------------------------------------

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Horner evaluation; ``coeffs[i]`` multiplies x^i."""
        r = 0
        for c in reversed(coeffs):
            r = self.mul(r, x) ^ c
        return r

    def find_roots(self, coeffs: Sequence[int], candidates: Iterable[int] | None = None) -> set[int]:
        """All roots in the field of the polynomial with given coefficients.

        Exhaustive evaluation, stopping once degree-many roots are found.
        ``candidates`` restricts the search (e.g. to a subfield).
        """
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise FieldError("the zero polynomial has every element as a root")
        if candidates is None:
            if self.h > EXHAUSTIVE_LIMIT:
                raise FieldError(f"exhaustive root search capped at h={EXHAUSTIVE_LIMIT}")
            candidates = range(self.q)
        deg = len(coeffs) - 1
        roots: set[int] = set()
        for x in candidates:
            if self.poly_eval(coeffs, x) == 0:
                roots.add(x)
                if len(roots) == deg:
                    break
        return roots

    def subfield(self, m: int) -> list[int]:
        """Elements of the subfield GF(2^m), sorted by bit pattern."""
        if self.h % m:
            raise FieldError(f"GF(2^{m}) is not a subfield of GF(2^{self.h})")
        n_sub = (1 << m) - 1
        cofactor = (self.q - 1) // n_sub
        for cand in range(2, self.q):
            g = self.pow(cand, cofactor)
            if g != 0 and all(self.pow(g, n_sub // r) != 1 for r in _prime_factors(n_sub)):
                break
        else:  # pragma: no cover - only m = 1
            g = 1
        elems = [0]
        x = 1
        for _ in range(n_sub):
            elems.append(x)
            x = self.mul(x, g)
        return sorted(elems)


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`GF2m`, with arithmetic operators."""

    bits: int
    field: GF2m

    def _other(self, other: "FieldElem | int") -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.bits
        if other in (0, 1):
            return other
        raise TypeError("only FieldElem or the integers 0/1 combine with a FieldElem")

    def __add__(self, other):
        return FieldElem(self.bits ^ self._other(other), self.field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        return FieldElem(self.field.mul(self.bits, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field.div(self.bits, self._other(other)), self.field)

    def __pow__(self, e: int):
        return FieldElem(self.field.pow(self.bits, e), self.field)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def __str__(self) -> str:
        return f"{self.bits:x}"

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field.inv(self.bits), self.field)

    def trace(self) -> int:
        return self.field.trace(self.bits)

    def half_trace(self) -> "FieldElem | None":
        r = self.field.half_trace(self.bits)
        return None if r is None else FieldElem(r, self.field)

    def sqrt(self) -> "FieldElem":
        return FieldElem(self.field.sqrt(self.bits), self.field)

    def frobenius(self, k: int) -> "FieldElem":
        return FieldElem(self.field.frobenius(self.bits, k), self.field)


def parse_elem(text: str) -> int:
    return int(text, 16)


def format_elem(a: int) -> str:
    return f"{a:x}"


class SubfieldEmbedding:
    """Ring embedding GF(2^m) -> GF(2^h), m | h.

    The source generator X is sent to the smallest root (by bit pattern) of
    the source modulus inside the target field.
    """

    def __init__(self, source: GF2m, target: GF2m):
        if target.h % source.h:
            raise FieldError(f"{source.h} does not divide {target.h}")
        self.source = source
        self.target = target
        coeffs = [(source.modulus >> i) & 1 for i in range(source.h + 1)]
        roots = target.find_roots(coeffs, candidates=target.subfield(source.h))
        if not roots:  # pragma: no cover - impossible for a genuine subfield
            raise FieldError("source modulus has no root in the target field")
        self.root = min(roots)
        self._basis = [target.pow(self.root, i) for i in range(source.h)]

    def __call__(self, a: int) -> int:
        r = 0
        i = 0
        while a:
            if a & 1:
                r ^= self._basis[i]
            a >>= 1
            i += 1
        return r

    def image(self) -> Iterator[int]:
        return (self(a) for a in self.source.elements())
