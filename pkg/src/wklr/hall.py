"""Trace functions of loaded-flag pushforwards and the Hall algebra over F_p."""
from __future__ import annotations

import csv
import io
import os
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Sequence, Tuple

from . import fq
from .loading import Loading, SizeError, compose
from .quiver import Quiver, pairing_bracket

Matrix = Tuple[Tuple[int, ...], ...]


class HallError(ValueError):
    pass


def max_reps() -> int:
    return int(os.environ.get("WKLR_MAX_REPS", 2 ** 20))


@dataclass(frozen=True)
class QSqrt:
    """``a + b*sqrt(q)`` for a fixed prime ``q`` carried alongside."""

    q: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @classmethod
    def power(cls, q: int, k: int) -> "QSqrt":
        """``sqrt(q)**k`` for any integer ``k``."""
        half, odd = divmod(k, 2)
        c = Fraction(q) ** half
        return cls(q, Fraction(0), c) if odd else cls(q, c, Fraction(0))

    def _chk(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt(self.q, Fraction(other))
        if other.q != self.q:
            raise HallError("field mismatch")
        return other

    def __add__(self, other):
        o = self._chk(other)
        return QSqrt(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(self.q, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._chk(other))

    def __mul__(self, other):
        o = self._chk(other)
        return QSqrt(self.q, self.a * o.a + self.q * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return isinstance(other, QSqrt) and (self.q, self.a, self.b) == (other.q, other.a, other.b)

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*v"
        return f"{self.a} + {self.b}*v"


@dataclass(frozen=True)
class FqRep:
    p: int
    nu: Tuple[int, ...]
    mats: Tuple[Matrix, ...]

    def key(self) -> bytes:
        return bytes(x for m in self.mats for row in m for x in row)

    def hex(self) -> str:
        return self.key().hex() or "-"

    def is_zero(self) -> bool:
        return not any(self.key())


def _check_quiver(q: Quiver):
    if any(d != 1 for d in q.symmetrizers) or any(e.c != 1 or e.cbar != 1 for e in q.edges):
        raise HallError("finite-field realization needs d_i = 1 and unit multiplicities")


def rep_space_dim(q: Quiver, nu) -> int:
    return sum(nu[e.tail] * nu[e.head] for e in q.edges)


def enumerate_reps(q: Quiver, nu: Sequence[int], p: int) -> List[FqRep]:
    _check_quiver(q)
    nu = tuple(nu)
    dim = rep_space_dim(q, nu)
    if p ** dim > max_reps():
        raise SizeError(f"instance too large: {p}^{dim} points")
    shapes = [(nu[e.head], nu[e.tail]) for e in q.edges]
    out = []
    for flat in iproduct(range(p), repeat=dim):
        mats, k = [], 0
        for r, c in shapes:
            mats.append(tuple(tuple(flat[k + i * c: k + (i + 1) * c]) for i in range(r)))
            k += r * c
        out.append(FqRep(p, nu, tuple(mats)))
    return out


def _flag_data(q: Quiver, i: Loading):
    """Step labels and the incidence checks ``f_e(F^k) in F^m`` grouped by step."""
    pos = list(i.positions)
    n = len(pos)
    checks = [[] for _ in range(n)]
    for e_idx, e in enumerate(q.edges):
        for k in range(1, n + 1):
            # F_a is constant on [x_k, x_{k+1}); the condition is tightest at a = x_k
            m = bisect_right(pos, pos[k - 1] - e.weight)
            if e.tail not in i.labels[:k]:
                continue
            top = max(k, m)
            checks[top - 1].append((e_idx, k, m))
    return list(i.labels), checks


def count_flags(q: Quiver, i: Loading, rep: FqRep) -> int:
    if tuple(rep.nu) != i.nu(q.vertex_count):
        raise HallError("loading and representation have different dimension vectors")
    steps, checks = _flag_data(q, i)
    mats = [(e.tail, e.head, rep.mats[k]) for k, e in enumerate(q.edges)]
    return fq.count_flags(rep.p, list(rep.nu), steps, mats, checks)


def u_dim(q: Quiver, i: Loading) -> int:
    total = 0
    for e in q.edges:
        for a, la in i.points:
            if la != e.tail:
                continue
            for b, lb in i.points:
                if lb == e.head and a - b >= e.weight:
                    total += 1
    for v in i.nu(q.vertex_count):
        total -= v * (v + 1) // 2
    return total


@dataclass
class HallFunction:
    nu: Tuple[int, ...]
    p: int
    values: Dict[bytes, QSqrt]

    def __call__(self, rep: FqRep) -> QSqrt:
        return self.values.get(rep.key(), QSqrt(self.p))

    def __eq__(self, other):
        if not isinstance(other, HallFunction) or (self.nu, self.p) != (other.nu, other.p):
            return False
        keys = set(self.values) | set(other.values)
        zero = QSqrt(self.p)
        return all(self.values.get(k, zero) == other.values.get(k, zero) for k in keys)

    def to_csv(self, reps: Sequence[FqRep]) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep", "a", "b"])
        for r in reps:
            v = self(r)
            w.writerow([r.hex(), str(v.a), str(v.b)])
        return buf.getvalue()


def unit(q: Quiver, p: int) -> HallFunction:
    nu = (0,) * q.vertex_count
    r = FqRep(p, nu, tuple(() for _ in q.edges))
    return HallFunction(nu, p, {r.key(): QSqrt(p, Fraction(1))})


def func_y(q: Quiver, i: Loading, p: int) -> HallFunction:
    nu = i.nu(q.vertex_count)
    scale = QSqrt.power(p, u_dim(q, i))
    vals = {}
    for r in enumerate_reps(q, nu, p):
        c = count_flags(q, i, r)
        if c:
            vals[r.key()] = scale * c
    return HallFunction(nu, p, vals)


# ------------------------------------------------------------ sub and quotient

def _pivots(basis):
    out = []
    for row in basis:
        for k, x in enumerate(row):
            if x:
                out.append(k)
                break
    return out


def _coords_in(vec, basis):
    """Coordinates of ``vec`` in an RREF basis (``vec`` must lie in its span)."""
    return tuple(vec[k] for k in _pivots(basis))


def _std(n, k):
    v = [0] * n
    v[k] = 1
    return tuple(v)


def split_rep(q: Quiver, rep: FqRep, sub: Sequence) -> Tuple[FqRep, FqRep]:
    """Restriction to an invariant graded subspace and the induced quotient."""
    p = rep.p
    nu = rep.nu
    comp = []
    for v, basis in enumerate(sub):
        piv = set(_pivots(basis))
        comp.append([k for k in range(nu[v]) if k not in piv])
    nu1 = tuple(len(b) for b in sub)
    nu2 = tuple(len(c) for c in comp)
    m1, m2 = [], []
    for k, e in enumerate(q.edges):
        mat = rep.mats[k]
        cols = [_coords_in(fq.apply(mat, b, p), sub[e.head]) for b in sub[e.tail]]
        m1.append(tuple(tuple(c[r] for c in cols) for r in range(nu1[e.head])))
        cols = []
        for j in comp[e.tail]:
            img = fq.reduce_vec(fq.apply(mat, _std(nu[e.tail], j), p), sub[e.head], p)
            cols.append(tuple(img[r] for r in comp[e.head]))
        m2.append(tuple(tuple(c[r] for c in cols) for r in range(nu2[e.head])))
    return FqRep(p, nu1, tuple(m1)), FqRep(p, nu2, tuple(m2))


def subreps(q: Quiver, rep: FqRep, nu1: Sequence[int]):
    choices = [fq.subspaces(rep.nu[v], nu1[v], rep.p) for v in range(q.vertex_count)]
    for sub in iproduct(*choices):
        if all(fq.image_in(rep.mats[k], sub[e.tail], sub[e.head], rep.p) for k, e in enumerate(q.edges)):
            yield sub


def hall_mult(q: Quiver, f: HallFunction, g: HallFunction, twist_sign: int = -1) -> HallFunction:
    """``(f*g)(M) = v^(twist_sign*<nu'',nu'>) * sum_{N <= M, dim N = nu'} f(N) g(M/N)``."""
    if f.p != g.p:
        raise HallError("field mismatch")
    p = f.p
    nu = tuple(a + b for a, b in zip(f.nu, g.nu))
    scale = QSqrt.power(p, twist_sign * pairing_bracket(q, g.nu, f.nu))
    vals = {}
    for m in enumerate_reps(q, nu, p):
        tot = QSqrt(p)
        for sub in subreps(q, m, f.nu):
            n_rep, q_rep = split_rep(q, m, sub)
            a = f(n_rep)
            if a:
                tot = tot + a * g(q_rep)
        if tot:
            vals[m.key()] = tot * scale
    return HallFunction(nu, p, vals)


def hall_comult(q: Quiver, f: HallFunction, nu1: Sequence[int], nu2: Sequence[int]) -> Dict[Tuple[bytes, bytes], QSqrt]:
    """EXPERIMENTAL restriction to ``E_nu' x E_nu''``.

    ``(Df)(N, Q) = v^<nu'',nu'> q^-c sum_b f([[N, b], [0, Q]])`` with
    ``c = sum_e nu'_t nu''_h``.  The normalization is a derived convention.
    """
    p = f.p
    nu1, nu2 = tuple(nu1), tuple(nu2)
    if tuple(a + b for a, b in zip(nu1, nu2)) != f.nu:
        raise HallError("split does not add up to the function's dimension vector")
    c = sum(nu1[e.tail] * nu2[e.head] for e in q.edges)
    scale = QSqrt.power(p, pairing_bracket(q, nu2, nu1) - 2 * c)
    blocks = [(nu1[e.head], nu2[e.tail]) for e in q.edges]
    nb = sum(r * s for r, s in blocks)
    if p ** (nb + rep_space_dim(q, nu1) + rep_space_dim(q, nu2)) > max_reps():
        raise SizeError("instance too large")
    out = {}
    for n_rep in enumerate_reps(q, nu1, p):
        for q_rep in enumerate_reps(q, nu2, p):
            tot = QSqrt(p)
            for flat in iproduct(range(p), repeat=nb):
                mats, k = [], 0
                for idx, e in enumerate(q.edges):
                    r, s = blocks[idx]
                    b = [flat[k + i * s: k + (i + 1) * s] for i in range(r)]
                    k += r * s
                    top = [tuple(n_rep.mats[idx][i]) + tuple(b[i]) for i in range(r)]
                    bot = [(0,) * nu1[e.tail] + tuple(q_rep.mats[idx][i]) for i in range(nu2[e.head])]
                    mats.append(tuple(top + bot))
                # block coordinates put V' first in every vertex
                tot = tot + f(FqRep(p, f.nu, tuple(mats)))
            if tot:
                out[(n_rep.key(), q_rep.key())] = tot * scale
    return out


@dataclass
class HallCheck:
    ok: bool
    rows: List[Tuple[str, QSqrt, QSqrt]]

    def table(self) -> str:
        lines = ["rep\tlhs\trhs"]
        lines += [f"{r}\t{a}\t{b}" for r, a, b in self.rows]
        return "\n".join(lines) + "\n"


def check_hq_algebra_map(q: Quiver, i: Loading, j: Loading, p: int, twist_sign: int = -1) -> HallCheck:
    lhs = func_y(q, compose(q, i, j), p)
    rhs = hall_mult(q, func_y(q, i, p), func_y(q, j, p), twist_sign)
    rows = []
    ok = True
    for r in enumerate_reps(q, lhs.nu, p):
        a, b = lhs(r), rhs(r)
        ok = ok and a == b
        rows.append((r.hex(), a, b))
    return HallCheck(ok, rows)
