"""Denniston and Mathon maximal arcs: construction, verification, structure.

A Mathon arc is stored as its set of conics (all with nucleus (0,0,1)); the
arc's points are the union of the conics plus the nucleus.  A set of conics
is closed under composition exactly when the vectors (alpha lam, beta lam, lam)
together with 0 form an additive subgroup, which is how closures are built.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .ff import GF2m
from .geom import (
    NUCLEUS,
    Collineation,
    Conic,
    GeometryError,
    Line,
    Point,
    canon,
    compose_oplus,
    conic_from_vector,
    conic_image,
    conic_points,
    conic_vector,
    conics_disjoint,
    cross,
    format_point,
    in_family,
    incident,
    line_at_infinity_pair,
)

SWEEP_LIMIT = 13


class ArcError(ValueError):
    pass


def _check_distinct(conics: Sequence[Conic]) -> None:
    if len(set(conics)) != len(conics):
        raise ArcError("duplicate conics")
    lams = Counter(c.lam for c in conics)
    if any(c.lam == 0 for c in conics):
        raise ArcError("conic with lambda = 0 is degenerate")
    dup = [lam for lam, n in lams.items() if n > 1]
    if dup:
        raise ArcError(f"repeated lambda {dup[0]:#x} with different alpha/beta: composition undefined")


def is_closed_set(F: GF2m, conics: Sequence[Conic]) -> bool:
    """True iff the composition of every pair of distinct conics lies in the set."""
    _check_distinct(conics)
    s = set(conics)
    return all(compose_oplus(F, a, b) in s for a, b in itertools.combinations(conics, 2))


def closure(F: GF2m, conics: Iterable[Conic]) -> list[Conic]:
    """Smallest closed set containing ``conics`` (sorted)."""
    span = {(0, 0, 0)}
    for c in conics:
        v = conic_vector(F, c)
        if v in span:
            continue
        span |= {(v[0] ^ s[0], v[1] ^ s[1], v[2] ^ s[2]) for s in span}
    span.discard((0, 0, 0))
    if any(v[2] == 0 for v in span):
        raise ArcError("closure contains two conics with the same lambda")
    return sorted(conic_from_vector(F, v) for v in span)


@dataclass(frozen=True, eq=False)
class MathonArc:
    """A closed set of pairwise disjoint conics on the nucleus (0,0,1)."""

    field: GF2m
    conics: tuple[Conic, ...]
    validate: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "conics", tuple(Conic(*c) for c in self.conics))
        if self.validate:
            self.check()

    def check(self) -> None:
        F, cs = self.field, self.conics
        _check_distinct(cs)
        d = len(cs) + 1
        if d & (d - 1):
            raise ArcError(f"{len(cs)} conics: degree {d} is not a power of 2")
        s = set(cs)
        for a, b in itertools.combinations(cs, 2):
            if compose_oplus(F, a, b) not in s:
                raise ArcError(f"not closed: {a} (+) {b} missing")
            if not conics_disjoint(F, a, b):
                raise ArcError(f"conics {a} and {b} meet")

    @property
    def degree(self) -> int:
        return len(self.conics) + 1

    @property
    def conic_set(self) -> frozenset[Conic]:
        return frozenset(self.conics)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MathonArc) and self.field == other.field and self.conic_set == other.conic_set

    def __hash__(self) -> int:
        return hash((self.field, self.conic_set))

    def point_count(self) -> int:
        return self.field.q * (self.degree - 1) + self.degree

    def all_in_family(self) -> bool:
        return all(in_family(self.field, c) for c in self.conics)

    def image(self, T: Collineation) -> "MathonArc":
        return MathonArc(self.field, tuple(sorted(conic_image(T, c) for c in self.conics)))


def denniston_from_subgroup(F: GF2m, alpha: int, lambdas: Iterable[int]) -> MathonArc:
    """Denniston arc {F_{alpha,1,lam} : lam in A}, A + {0} additively closed."""
    A = set(lambdas)
    if F.trace(alpha) != 1:
        raise ArcError("Denniston construction needs Tr(alpha) = 1")
    if 0 in A or not A:
        raise ArcError("lambda set must be a nonempty set of nonzero elements")
    if any((a ^ b) not in A for a in A for b in A if a != b):
        raise ArcError("lambda set plus 0 is not closed under addition")
    return MathonArc(F, tuple(sorted(Conic(alpha, 1, lam) for lam in A)))


def arc_points(arc: MathonArc) -> set[Point]:
    """Union of the conics plus the nucleus; raises if two conics overlap."""
    F = arc.field
    if F.h > SWEEP_LIMIT:
        raise ArcError(f"point enumeration capped at h = {SWEEP_LIMIT}")
    pts: set[Point] = {NUCLEUS}
    for c in arc.conics:
        cp = conic_points(F, c)
        if pts & cp:
            raise ArcError(f"conic {c} overlaps the rest of the arc")
        pts |= cp
    return pts


# ----------------------------------------------------------------------------
# line sweep


def _mul_vec(F: GF2m, a: int, ys: np.ndarray) -> np.ndarray:
    if a == 0:
        return np.zeros_like(ys)
    exp = np.asarray(F._exp, dtype=np.int64)
    log = np.asarray(F._log, dtype=np.int64)
    out = exp[log[a] + log[ys]]
    out[ys == 0] = 0
    return out


def line_intersection_counts(F: GF2m, points: Iterable[Point]) -> np.ndarray:
    """|line ∩ points| for every line of PG(2,q).

    Lines are ordered [u,v,1] (index v*q + u), then [u,1,0], then [1,0,0].
    Each point adds one to every line through it.
    """
    if F.h > SWEEP_LIMIT:
        raise ArcError(f"line sweep capped at h = {SWEEP_LIMIT}")
    q = F.q
    cnt_a = np.zeros((q, q), dtype=np.int64)  # [v, u] for line [u, v, 1]
    cnt_b = np.zeros(q, dtype=np.int64)  # [u, 1, 0]
    cnt_c = 0  # [1, 0, 0]
    ys, zs = [], []
    for p in points:
        p = canon(F, p)
        if p[0]:
            ys.append(p[1])
            zs.append(p[2])
        elif p[1]:
            cnt_a[p[2], :] += 1
            cnt_c += 1
        else:
            cnt_b += 1
            cnt_c += 1
    if ys:
        Y = np.asarray(ys, dtype=np.int64)
        Z = np.asarray(zs, dtype=np.int64)
        cnt_b += np.bincount(Y, minlength=q)
        for v in range(q):
            cnt_a[v] += np.bincount(Z ^ _mul_vec(F, v, Y), minlength=q)
    return np.concatenate([cnt_a.ravel(), cnt_b, [cnt_c]])


def secant_histogram(F: GF2m, points: Iterable[Point]) -> dict[int, int]:
    """{k: number of lines meeting the set in exactly k points}."""
    vals, counts = np.unique(line_intersection_counts(F, points), return_counts=True)
    return {int(k): int(n) for k, n in zip(vals, counts)}


def verify_maximal(F: GF2m, points: Iterable[Point], d: int) -> bool:
    """Every line meets the set in 0 or d points."""
    pts = set(points)
    if not pts:
        return False
    return set(secant_histogram(F, pts)) <= {0, d}


# ----------------------------------------------------------------------------
# structure of arcs


def synthetic_extension(M: MathonArc, C: Conic) -> MathonArc:
    """The unique Mathon arc of twice the degree containing M and C."""
    F = M.field
    if C in M.conic_set:
        raise ArcError("conic already belongs to the arc")
    for c in M.conics:
        if not conics_disjoint(F, c, C):
            raise ArcError(f"extension conic meets {c}")
    if F.h <= SWEEP_LIMIT:
        cp = conic_points(F, C)
        for c in M.conics:
            if cp & conic_points(F, c):  # pragma: no cover - trace test is exact
                raise ArcError(f"extension conic meets {c} (point check)")
    new = list(M.conics) + [C] + [compose_oplus(F, m, C) for m in M.conics]
    if len(set(new)) != len(new):
        raise ArcError("extension produced repeated conics")
    for a, b in itertools.combinations(new, 2):
        if not conics_disjoint(F, a, b):
            raise ArcError(f"closure failure: {a} and {b} meet")
    return MathonArc(F, tuple(sorted(closure(F, new))))


def fano_structure(arc: MathonArc) -> list[frozenset[Conic]]:
    """The 7 degree-4 subarcs (closed triples) of a degree-8 arc."""
    if arc.degree != 8:
        raise ArcError("Fano structure needs a degree-8 arc")
    F = arc.field
    s = arc.conic_set
    triples = set()
    for a, b in itertools.combinations(arc.conics, 2):
        c = compose_oplus(F, a, b)
        if c not in s:
            raise ArcError("arc is not closed")
        triples.add(frozenset((a, b, c)))
    return sorted(triples, key=lambda t: sorted(t))


@dataclass(frozen=True)
class InfinityLines:
    lines: tuple[Line, ...]
    center: Point | None

    @property
    def distinct(self) -> int:
        return len(set(self.lines))


def lines_at_infinity(arc: MathonArc) -> InfinityLines:
    """One line per Denniston subarc, plus their common point when distinct."""
    F = arc.field
    lines = []
    for t in fano_structure(arc):
        a, b, c = sorted(t)
        ls = {line_at_infinity_pair(F, a, b), line_at_infinity_pair(F, a, c), line_at_infinity_pair(F, b, c)}
        if len(ls) != 1:
            raise ArcError(f"subarc {sorted(t)} does not lie in one pencil")
        lines.append(ls.pop())
    distinct = sorted(set(lines))
    if len(distinct) == 1:
        return InfinityLines(tuple(lines), None)
    center = canon(F, cross(F, distinct[0], distinct[1]))
    if not all(incident(F, center, line) for line in distinct):
        raise ArcError("lines at infinity are not concurrent")
    return InfinityLines(tuple(lines), center)


def is_denniston_type(arc: MathonArc) -> bool:
    return lines_at_infinity(arc).distinct == 1


def stabilizes_each_conic(arc: MathonArc, T: Collineation) -> bool:
    try:
        return all(conic_image(T, c) == c for c in arc.conics)
    except GeometryError:
        return False


def elation_involution_check(arc: MathonArc, T: Collineation) -> bool:
    """T is an involution (or trivial) fixing every conic of the arc setwise."""
    if not (T @ T).is_identity():
        raise ArcError("collineation is not an involution")
    return stabilizes_each_conic(arc, T)


def conic_permutation(arc: MathonArc, T: Collineation) -> tuple[int, ...] | None:
    """perm[i] = index of the image of conic i, or None if T does not stabilise the arc."""
    index = {c: i for i, c in enumerate(arc.conics)}
    perm = []
    for c in arc.conics:
        try:
            img = conic_image(T, c)
        except GeometryError:
            return None
        if img not in index:
            return None
        perm.append(index[img])
    return tuple(perm)


# ----------------------------------------------------------------------------
# certification above the sweep limit


def shear(F: GF2m, u: int, v: int) -> Collineation:
    """(x, y, z) -> (x, y, z + u x + v y); fixes the nucleus."""
    return Collineation(F, ((1, 0, 0), (0, 1, 0), (u, v, 1)), 0)


def find_family_shear(arc: MathonArc, candidates: Iterable[int] | None = None) -> tuple[int, int] | None:
    """A shear (u, v) moving every conic of the arc into Mathon's family.

    The sheared conic of F_{a,b,l} is F_{a + l u^2, b + l v^2, l}.
    """
    F = arc.field
    cand = list(F.elements() if candidates is None else candidates)
    sq = {u: F.mul(u, u) for u in cand}
    for u in cand:
        alphas = [c.alpha ^ F.mul(c.lam, sq[u]) for c in arc.conics]
        for v in cand:
            if all(
                F.trace(F.mul(a, c.beta ^ F.mul(c.lam, sq[v]))) == 1 for a, c in zip(alphas, arc.conics)
            ):
                return u, v
    return None


def certify_by_theorem(arc: MathonArc, shear_uv: tuple[int, int] | None = None) -> bool:
    """Closed + (after a nucleus-fixing shear) inside Mathon's family.

    Mathon's theorem then guarantees a maximal arc of degree |C| + 1.
    """
    F = arc.field
    if not is_closed_set(F, list(arc.conics)):
        return False
    if shear_uv is None:
        shear_uv = find_family_shear(arc)
        if shear_uv is None:
            return False
    moved = arc.image(shear(F, *shear_uv))
    return moved.all_in_family() and is_closed_set(F, list(moved.conics))


# ----------------------------------------------------------------------------
# file formats


def write_arc(arc: MathonArc, out: TextIO) -> None:
    out.write(f"{arc.field.to_string()};degree={arc.degree}\n")
    for c in arc.conics:
        out.write(f"conic {c.to_string()}\n")


def read_arc(src: TextIO) -> MathonArc:
    lines = [ln.strip() for ln in src if ln.strip()]
    if not lines:
        raise ArcError("empty arc file")
    header = dict(part.split("=", 1) for part in lines[0].split(";"))
    try:
        F = GF2m(int(header["h"]), int(header["mod"], 16))
        degree = int(header["degree"])
    except (KeyError, ValueError) as exc:
        raise ArcError(f"bad arc header: {lines[0]!r}") from exc
    conics = []
    for ln in lines[1:]:
        if not ln.startswith("conic "):
            raise ArcError(f"bad arc record: {ln!r}")
        conics.append(Conic.from_string(ln[len("conic "):]))
    arc = MathonArc(F, tuple(conics))
    if arc.degree != degree:
        raise ArcError(f"header says degree {degree}, file has {arc.degree}")
    return arc


def write_points(points: Iterable[Point], out: TextIO) -> None:
    for p in sorted(points):
        out.write(format_point(p) + "\n")
