"""Charges, unsteady idempotents and truncated steadied quotients."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import NOT_HOMOGENEOUS, AlgebraError, WklrAlgebra, WklrElement
from .loading import (Loading, SizeError, canonical_rep, compose, enumerate_chambers,
                      max_points)
from .polyops import Poly, perm_sort_key
from .quiver import Quiver

GREATER, EQUAL_ARG, LESS = 1, 0, -1


class ChargeError(ValueError):
    pass


@dataclass(frozen=True)
class Charge:
    values: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        for re, im in self.values:
            if not (im > 0 or (im == 0 and re > 0)):
                raise ChargeError(f"charge value {re}+{im}i is not in the upper half plane")

    @classmethod
    def of(cls, pairs) -> "Charge":
        return cls(tuple((Fraction(a), Fraction(b)) for a, b in pairs))

    @classmethod
    def parse(cls, text: str) -> "Charge":
        """``"re/im,re/im,..."`` with each part a rational such as ``-1`` or ``1/2``."""
        out = []
        for part in text.split(","):
            re, sep, im = part.strip().partition("/")
            if not sep:
                raise ChargeError(f"bad charge entry {part!r}")
            # allow rationals on either side: "1/2/3" is ambiguous, so use ':' for those
            out.append((Fraction(re.replace(":", "/")), Fraction(im.replace(":", "/"))))
        return cls.of(out)

    def of_vector(self, mu: Sequence[int]) -> Tuple[Fraction, Fraction]:
        re = sum((m * v[0] for m, v in zip(mu, self.values)), Fraction(0))
        im = sum((m * v[1] for m, v in zip(mu, self.values)), Fraction(0))
        return re, im


def cb_preset(q: Quiver) -> Charge:
    """``-1 + i`` on the original vertices and ``sum(d) + i`` on the added vertex.

    This is one reading of an ambiguous formula; pass an explicit charge to
    use another.
    """
    if q.cb_vertex is None:
        raise ChargeError("quiver has no Crawley-Boevey vertex")
    total = sum(d for v, d in enumerate(q.symmetrizers) if v != q.cb_vertex)
    vals = []
    for v in range(q.vertex_count):
        vals.append((Fraction(total), Fraction(1)) if v == q.cb_vertex else (Fraction(-1), Fraction(1)))
    return Charge(tuple(vals))


def compare_c(c: Charge, mu: Sequence[int], nu: Sequence[int]) -> int:
    if not any(mu) or not any(nu):
        raise ChargeError("zero dimension vector")
    a, b = c.of_vector(mu), c.of_vector(nu)
    cross = a[0] * b[1] - a[1] * b[0]
    if cross < 0:
        return GREATER
    if cross > 0:
        return LESS
    return EQUAL_ARG


def splittings(nu: Sequence[int]):
    for first in iproduct(*(range(v + 1) for v in nu)):
        second = tuple(v - f for v, f in zip(nu, first))
        if any(first) and any(second):
            yield tuple(first), second


def unsteady_idempotents(q: Quiver, nu: Sequence[int], c: Charge) -> List[Loading]:
    out = set()
    for n1, n2 in splittings(nu):
        if compare_c(c, n1, n2) != GREATER:
            continue
        for i1 in enumerate_chambers(q, n1).representatives:
            for i2 in enumerate_chambers(q, n2).representatives:
                out.add(canonical_rep(q, compose(q, i1, i2)))
    reps = enumerate_chambers(q, tuple(nu)).representatives
    return [r for r in reps if r in out]


def reduced_generators(q: Quiver, nu: Sequence[int], alg: Optional[WklrAlgebra] = None) -> List[WklrElement]:
    if q.cb_vertex is None:
        raise ChargeError("no CB vertex")
    if nu[q.cb_vertex] != 1:
        raise ChargeError("CB multiplicity must be 1")
    alg = alg or WklrAlgebra(q)
    out = []
    for i in enumerate_chambers(q, tuple(nu)).representatives:
        k0 = i.labels.index(q.cb_vertex)
        out.append(alg.dot(i, k0))
    return out


# ------------------------------------------------------------ linear algebra

def _rank_rows(rows: List[Dict[tuple, Fraction]], key) -> List[Dict[tuple, Fraction]]:
    """Reduced row echelon basis of the span of sparse rows."""
    basis: List[Tuple[tuple, Dict[tuple, Fraction]]] = []
    for row in rows:
        r = {k: v for k, v in row.items() if v}
        for piv, b in basis:
            c = r.get(piv)
            if c:
                for k, v in b.items():
                    nv = r.get(k, 0) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        piv = min(r, key=key)
        inv = 1 / r[piv]
        r = {k: v * inv for k, v in r.items()}
        new_basis = []
        for p, b in basis:
            c = b.get(piv)
            if c:
                b = dict(b)
                for k, v in r.items():
                    nv = b.get(k, 0) - c * v
                    if nv:
                        b[k] = nv
                    else:
                        b.pop(k, None)
            new_basis.append((p, b))
        basis = new_basis + [(piv, r)]
    basis.sort(key=lambda t: key(t[0]))
    return [b for _, b in basis]


def _coord_key(k):
    pi, exp = k
    return (perm_sort_key(pi), sum(exp), tuple(-e for e in exp))


def coordinates(x: WklrElement) -> Dict[tuple, Fraction]:
    out = {}
    for pi, p in x.coeffs:
        for exp, c in p.terms.items():
            out[(pi, exp)] = c
    return out


def basis_element(src: Loading, tgt: Loading, pi, exp) -> WklrElement:
    return WklrElement.build(src, tgt, {pi: Poly.monomial(exp)})


class SteadyComputation:
    """Degree-truncated ideals of the algebra on a fixed set of chamber representatives."""

    def __init__(self, q: Quiver, nu: Sequence[int]):
        if sum(nu) > max_points():
            raise SizeError(f"instance too large: {sum(nu)} points")
        self.q = q
        self.nu = tuple(nu)
        self.objects = list(enumerate_chambers(q, self.nu).representatives)
        self.alg = WklrAlgebra(q)
        self._lo: Dict[tuple, Optional[int]] = {}

    def index(self, i: Loading) -> int:
        return self.objects.index(i)

    def lowest(self, src, tgt) -> Optional[int]:
        key = (src, tgt)
        if key not in self._lo:
            perms = self.alg.basis_perms(src, tgt)
            self._lo[key] = min((self.alg.basis_degree(p, src, tgt) for p in perms), default=None)
        return self._lo[key]

    def basis(self, src, tgt, degree):
        return [basis_element(src, tgt, p, e) for p, e in self.alg.graded_basis(src, tgt, degree)]

    def ideal_span(self, gens: Sequence[WklrElement], src: Loading, tgt: Loading, degree: int):
        """Row-reduced spanning set of the ideal's degree piece at ``(src, tgt)``."""
        rows = []
        for g in gens:
            dg = self.alg.degree(g)
            if dg is NOT_HOMOGENEOUS:
                raise AlgebraError("ideal generators must be homogeneous")
            lo_a, lo_b = self.lowest(g.tgt, tgt), self.lowest(src, g.src)
            if lo_a is None or lo_b is None:
                continue
            for da in range(lo_a, degree - dg - lo_b + 1):
                db = degree - dg - da
                left = self.basis(g.tgt, tgt, da)
                if not left:
                    continue
                right = self.basis(src, g.src, db)
                for b in right:
                    gb = self.alg.multiply(g, b)
                    if gb.is_zero():
                        continue
                    for a in left:
                        rows.append(coordinates(self.alg.multiply(a, gb)))
        return _rank_rows(rows, _coord_key)

    def quotient_table(self, gens: Sequence[WklrElement], cutoff: int) -> Dict[Tuple[int, int, int], int]:
        table = {}
        for si, src in enumerate(self.objects):
            for ti, tgt in enumerate(self.objects):
                for d, full in self.alg.graded_dim(src, tgt, cutoff):
                    span = self.ideal_span(gens, src, tgt, d) if full else []
                    table[(si, ti, d)] = full - len(span)
        return table


def unsteady_generators(comp: SteadyComputation, c: Charge) -> List[WklrElement]:
    return [comp.alg.idempotent(u) for u in unsteady_idempotents(comp.q, comp.nu, c)]


def steadied_graded_dim(q: Quiver, nu: Sequence[int], c: Charge, cutoff: int,
                        reduced: bool = False, extra: Sequence[WklrElement] = ()):
    comp = SteadyComputation(q, nu)
    gens = unsteady_generators(comp, c)
    if reduced:
        gens += reduced_generators(q, nu, comp.alg)
    gens += list(extra)
    return comp, comp.quotient_table(gens, cutoff)


def table_csv(table: Mapping[Tuple[int, int, int], int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["src_index", "tgt_index", "degree", "dim"])
    for (s, t, d), v in sorted(table.items()):
        w.writerow([s, t, d, v])
    return buf.getvalue()
