"""Exact polynomials, difference-denominator fractions and the skew group ring.

Variables are ``y_0 .. y_{n-1}`` internally and print as ``y1 .. yn``.
Permutations are one-line tuples ``p`` with ``p[k]`` the image of ``k``;
acting on polynomials they relabel ``y_k -> y_{p[k]}``, which makes the
action a left action: ``p(q(f)) == compose(p, q)(f)``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from typing import Dict, Iterable, Mapping, Optional, Tuple

Exp = Tuple[int, ...]
Perm = Tuple[int, ...]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _grlex_key(e: Exp):
    return (sum(e), e)


class Poly:
    """Sparse polynomial in ``n`` variables with rational coefficients."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Exp, object]] = None, *, _clean=False):
        self.n = n
        if terms is None:
            self.terms: Dict[Exp, Fraction] = {}
        elif _clean:
            self.terms = terms  # type: ignore[assignment]
        else:
            t = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for n={n}")
                c = _frac(c)
                if c:
                    t[tuple(e)] = c
            self.terms = t
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n, {}, _clean=True)

    @classmethod
    def const(cls, n: int, c=1) -> "Poly":
        c = _frac(c)
        return cls(n, {(0,) * n: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, n: int, k: int) -> "Poly":
        e = [0] * n
        e[k] = 1
        return cls(n, {tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, exp: Iterable[int], c=1) -> "Poly":
        exp = tuple(exp)
        return cls(len(exp), {exp: c})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, weights) -> set:
        return {sum(w * a for w, a in zip(weights, e)) for e in self.terms}

    def leading(self) -> Tuple[Exp, Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # ring operations
    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly(self.n, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _frac(other)
            if not c:
                return Poly.zero(self.n)
            return Poly(self.n, {e: v * c for e, v in self.terms.items()}, _clean=True)
        self._check(other)
        return Poly(self.n, _mul_terms(self.terms, other.terms), _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # variable manipulation
    def permute(self, perm: Perm) -> "Poly":
        """Relabel ``y_k -> y_{perm[k]}``."""
        t = {}
        n = self.n
        for e, c in self.terms.items():
            ne = [0] * n
            for k, a in enumerate(e):
                if a:
                    ne[perm[k]] = a
            t[tuple(ne)] = c
        return Poly(n, t, _clean=True)

    def substitute(self, values: Mapping[int, object]) -> "Poly":
        """Replace ``y_k`` by ``values[k]`` (a scalar or a Poly in the same ring)."""
        vals = {k: (v if isinstance(v, Poly) else Poly.const(self.n, v)) for k, v in values.items()}
        out = Poly.zero(self.n)
        for e, c in self.terms.items():
            keep = [0 if k in vals else a for k, a in enumerate(e)]
            term = Poly(self.n, {tuple(keep): c}, _clean=True)
            for k, v in vals.items():
                if e[k]:
                    term = term * (v ** e[k])
            out = out + term
        return out

    def embed(self, n: int, positions: Iterable[int]) -> "Poly":
        """Move into ``n`` variables, sending ``y_k`` to ``y_{positions[k]}``."""
        positions = list(positions)
        t = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for k, a in enumerate(e):
                if a:
                    ne[positions[k]] += a
            t[tuple(ne)] = t.get(tuple(ne), 0) + c
        return Poly(n, t)

    def evaluate(self, point) -> Fraction:
        tot = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v *= _frac(x) ** a
            tot += v
        return tot

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"Poly({self.n}, {poly_str(self)!r})"


def _mul_terms(a: Dict[Exp, Fraction], b: Dict[Exp, Fraction]) -> Dict[Exp, Fraction]:
    out: Dict[Exp, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def poly_str(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mon = " ".join(f"y{k + 1}" + (f"^{a}" if a > 1 else "") for k, a in enumerate(e) if a)
        parts.append(f"{c} * {mon}" if mon else f"{c}")
    return " + ".join(parts)


def divide_linear(p: Poly, a: int, b: int) -> Optional[Poly]:
    """Exact quotient of ``p`` by ``y_a - y_b``, or None when not divisible."""
    if a == b:
        raise ValueError("a == b")
    n = p.n
    if p.is_zero():
        return Poly.zero(n)
    # group by the power of y_a; coefficients are dicts over the other variables
    groups: Dict[int, Dict[Exp, Fraction]] = {}
    for e, c in p.terms.items():
        rest = e[:a] + (0,) + e[a + 1:]
        groups.setdefault(e[a], {})[rest] = c
    top = max(groups)
    # synthetic division by (y_a - r) with r = y_b
    q: Dict[int, Dict[Exp, Fraction]] = {}
    carry: Dict[Exp, Fraction] = {}
    for k in range(top, 0, -1):
        ck = dict(groups.get(k, {}))
        for e, c in carry.items():
            v = ck.get(e, 0) + c
            if v:
                ck[e] = v
            else:
                ck.pop(e, None)
        q[k - 1] = ck
        # carry = r * q_{k-1}
        carry = {}
        for e, c in ck.items():
            ne = list(e)
            ne[b] += 1
            carry[tuple(ne)] = c
    rem = dict(groups.get(0, {}))
    for e, c in carry.items():
        v = rem.get(e, 0) + c
        if v:
            rem[e] = v
        else:
            rem.pop(e, None)
    if rem:
        return None
    t = {}
    for k, d in q.items():
        for e, c in d.items():
            ne = list(e)
            ne[a] = k
            t[tuple(ne)] = c
    return Poly(n, t, _clean=True)


def divexact(p: Poly, d: Poly) -> Optional[Poly]:
    """Exact quotient ``p / d`` if ``d`` divides ``p``, else None (grlex division)."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    p._check(d)
    if d.is_const():
        return p * (1 / d.const_value())
    le, lc = d.leading()
    rem = dict(p.terms)
    q: Dict[Exp, Fraction] = {}
    while rem:
        e = max(rem, key=_grlex_key)
        if any(x < y for x, y in zip(e, le)):
            return None
        qe = tuple(x - y for x, y in zip(e, le))
        qc = rem[e] / lc
        q[qe] = qc
        for de, dc in d.terms.items():
            te = tuple(x + y for x, y in zip(de, qe))
            v = rem.get(te, 0) - qc * dc
            if v:
                rem[te] = v
            else:
                rem.pop(te, None)
    return Poly(p.n, q, _clean=True)


# ---------------------------------------------------------------- permutations

def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply q first."""
    return tuple(p[q[k]] for k in range(len(q)))


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v] = k
    return tuple(inv)


def transposition(j: int, n: int) -> Perm:
    p = list(range(n))
    p[j], p[j + 1] = p[j + 1], p[j]
    return tuple(p)


def perm_length(p: Perm) -> int:
    n = len(p)
    return sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])


def reduced_word(p: Perm) -> Tuple[int, ...]:
    """A reduced word ``(j1, ..., jl)`` with ``p = s_{j1} ... s_{jl}``.

    Built by bubble sorting; deterministic, so usable as a cache key.
    """
    word = []
    cur = list(p)
    n = len(cur)
    # right-multiplying by s_j swaps entries j, j+1 of the one-line form
    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if cur[j] > cur[j + 1]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                word.append(j)
                changed = True
                break
    return tuple(reversed(word))


def perm_sort_key(p: Perm):
    return (perm_length(p), reduced_word(p), p)


# ---------------------------------------------------------- rational functions

Den = Tuple[Tuple[int, int], ...]


def _norm_pair(a: int, b: int) -> Tuple[Tuple[int, int], int]:
    if a == b:
        raise ValueError("difference form with a == b")
    return ((a, b), 1) if a < b else ((b, a), -1)


class DiffFrac:
    """``num / prod (y_a - y_b)`` over a multiset of pairs with ``a < b``.

    Always stored reduced, which makes the representation canonical.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Iterable[Tuple[int, int]] = (), *, _reduced=False):
        if _reduced:
            self.num = num
            self.den: Den = tuple(den)
        else:
            sign = 1
            pairs = []
            for a, b in den:
                pr, s = _norm_pair(a, b)
                pairs.append(pr)
                sign *= s
            self.num, self.den = _reduce(num if sign > 0 else -num, sorted(pairs))
        self._hash = None

    @property
    def n(self) -> int:
        return self.num.n

    @classmethod
    def from_poly(cls, p: Poly) -> "DiffFrac":
        return cls(p, (), _reduced=True)

    @classmethod
    def inv_diff(cls, n: int, a: int, b: int) -> "DiffFrac":
        """``1 / (y_a - y_b)``."""
        return cls(Poly.const(n, 1), [(a, b)])

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return not self.den

    def to_poly(self) -> Poly:
        if self.den:
            raise ValueError("not a polynomial")
        return self.num

    def den_poly(self) -> Poly:
        n = self.n
        out = Poly.const(n, 1)
        for a, b in self.den:
            out = out * (Poly.var(n, a) - Poly.var(n, b))
        return out

    def __eq__(self, other):
        if isinstance(other, DiffFrac):
            return self.den == other.den and self.num == other.num
        if isinstance(other, Poly):
            return not self.den and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self):
        return DiffFrac(-self.num, self.den, _reduced=True)

    def __add__(self, other: "DiffFrac") -> "DiffFrac":
        if isinstance(other, Poly):
            other = DiffFrac.from_poly(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return DiffFrac(self.num + other.num, self.den)
        lcm, ext_s = _den_lcm(self.den, other.den)
        ext_o = _den_diff(lcm, other.den)
        n = self.n
        num = self.num * _pairs_poly(n, ext_s) + other.num * _pairs_poly(n, ext_o)
        return DiffFrac(num, lcm)

    def __sub__(self, other):
        if isinstance(other, Poly):
            other = DiffFrac.from_poly(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not other or not self.num:
                return DiffFrac.from_poly(Poly.zero(self.n))
            return DiffFrac(self.num * other, self.den)
        if not isinstance(other, DiffFrac):
            return DiffFrac(self.num * _frac(other), self.den, _reduced=True) if other else DiffFrac.from_poly(Poly.zero(self.n))
        if not self.num or not other.num:
            return DiffFrac.from_poly(Poly.zero(self.n))
        return DiffFrac(self.num * other.num, tuple(sorted(self.den + other.den)))

    __rmul__ = __mul__

    def permute(self, perm: Perm) -> "DiffFrac":
        return DiffFrac(self.num.permute(perm), [(perm[a], perm[b]) for a, b in self.den])

    def divide_by(self, other: "DiffFrac") -> Optional["DiffFrac"]:
        """``self / other`` when it is again a difference-denominator function."""
        if not other.num:
            raise ZeroDivisionError("division by zero")
        n = self.n
        num = self.num * _pairs_poly(n, other.den)
        q = divexact(num, other.num)
        if q is not None:
            return DiffFrac(q, self.den)
        # move any difference-form factors of the divisor into the denominator
        rest, extra = other.num, []
        for a in range(n):
            for b in range(a + 1, n):
                while True:
                    r = divide_linear(rest, a, b)
                    if r is None:
                        break
                    rest = r
                    extra.append((a, b))
        if not extra:
            return None
        q = divexact(num, rest)
        if q is None:
            return None
        return DiffFrac(q, tuple(self.den) + tuple(extra))

    def __str__(self):
        if not self.den:
            return poly_str(self.num)
        d = " ".join(f"(y{a + 1} - y{b + 1})" for a, b in self.den)
        return f"({poly_str(self.num)}) / {d}"

    __repr__ = __str__


def _pairs_poly(n: int, pairs) -> Poly:
    out = Poly.const(n, 1)
    for a, b in pairs:
        out = out * (Poly.var(n, a) - Poly.var(n, b))
    return out


def _count(pairs) -> Dict[Tuple[int, int], int]:
    c: Dict[Tuple[int, int], int] = {}
    for p in pairs:
        c[p] = c.get(p, 0) + 1
    return c


def _den_lcm(d1: Den, d2: Den):
    c1, c2 = _count(d1), _count(d2)
    lcm = []
    ext1 = []
    for p in sorted(set(c1) | set(c2)):
        m = max(c1.get(p, 0), c2.get(p, 0))
        lcm += [p] * m
        ext1 += [p] * (m - c1.get(p, 0))
    return tuple(lcm), ext1


def _den_diff(big: Den, small: Den):
    c = _count(big)
    for p in small:
        c[p] -= 1
    out = []
    for p, m in sorted(c.items()):
        out += [p] * m
    return out


def _reduce(num: Poly, pairs) -> Tuple[Poly, Den]:
    if num.is_zero():
        return num, ()
    kept = []
    for a, b in pairs:
        q = divide_linear(num, a, b)
        if q is None:
            kept.append((a, b))
        else:
            num = q
    return num, tuple(kept)


# ----------------------------------------------------------------- skew ring

class Skew:
    """Element ``sum_pi f_pi * pi`` of the skew group ring, ``f_pi`` a DiffFrac."""

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: Optional[Mapping[Perm, DiffFrac]] = None):
        self.n = n
        self.comps: Dict[Perm, DiffFrac] = {}
        if comps:
            for p, f in comps.items():
                if isinstance(f, Poly):
                    f = DiffFrac.from_poly(f)
                if f:
                    self.comps[tuple(p)] = f

    @classmethod
    def identity(cls, n: int) -> "Skew":
        return cls(n, {perm_identity(n): DiffFrac.from_poly(Poly.const(n, 1))})

    @classmethod
    def zero(cls, n: int) -> "Skew":
        return cls(n)

    @classmethod
    def perm(cls, p: Perm) -> "Skew":
        n = len(p)
        return cls(n, {tuple(p): DiffFrac.from_poly(Poly.const(n, 1))})

    @classmethod
    def mult(cls, f) -> "Skew":
        """Multiplication by a polynomial or DiffFrac."""
        if isinstance(f, Poly):
            f = DiffFrac.from_poly(f)
        return cls(f.n, {perm_identity(f.n): f})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Skew):
            return NotImplemented
        return self.n == other.n and self.comps == other.comps

    def __hash__(self):
        return hash((self.n, frozenset(self.comps.items())))

    def __add__(self, other: "Skew") -> "Skew":
        out = dict(self.comps)
        for p, f in other.comps.items():
            out[p] = out[p] + f if p in out else f
        return Skew(self.n, out)

    def __neg__(self):
        return Skew(self.n, {p: -f for p, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "Skew":
        """Left multiplication by a scalar, Poly or DiffFrac."""
        if isinstance(f, (int, Fraction)):
            return Skew(self.n, {p: g * f for p, g in self.comps.items()}) if f else Skew(self.n)
        if isinstance(f, Poly):
            f = DiffFrac.from_poly(f)
        return Skew(self.n, {p: f * g for p, g in self.comps.items()})

    def __mul__(self, other):
        if not isinstance(other, Skew):
            return self.scale(other)
        if self.n != other.n:
            raise ValueError("variable count mismatch")
        acc: Dict[Perm, list] = {}
        for p, f in self.comps.items():
            for q, g in other.comps.items():
                acc.setdefault(perm_compose(p, q), []).append(f * g.permute(p))
        out = {}
        for r, fs in acc.items():
            tot = _sum_fracs(fs, self.n)
            if tot:
                out[r] = tot
        return Skew(self.n, out)

    def apply(self, p: Poly) -> DiffFrac:
        return _sum_fracs([f * p.permute(q) for q, f in self.comps.items()], self.n)

    def max_length(self) -> int:
        return max((perm_length(p) for p in self.comps), default=-1)

    def __str__(self):
        if not self.comps:
            return "0"
        return " + ".join(f"[{f}]*{list(p)}" for p, f in sorted(self.comps.items(), key=lambda t: perm_sort_key(t[0])))

    __repr__ = __str__


def _sum_fracs(fs, n: int) -> DiffFrac:
    """Sum with one common denominator, reducing only once."""
    fs = [f for f in fs if f]
    if not fs:
        return DiffFrac.from_poly(Poly.zero(n))
    if len(fs) == 1:
        return fs[0]
    lcm: Den = ()
    for f in fs:
        lcm, _ = _den_lcm(lcm, f.den)
    num = Poly.zero(n)
    for f in fs:
        num = num + f.num * _pairs_poly(n, _den_diff(lcm, f.den))
    return DiffFrac(num, lcm)


def demazure(j: int, n: int) -> Skew:
    """``(s_j - 1) / (y_j - y_{j+1})`` acting on strands ``j, j+1`` (0-based)."""
    if not 0 <= j < n - 1:
        raise ValueError(f"demazure index {j} out of range for n={n}")
    inv = DiffFrac.inv_diff(n, j, j + 1)
    return Skew(n, {transposition(j, n): inv, perm_identity(n): -inv})


def all_exponents(n: int, weights, degree: int):
    """Exponent vectors with ``sum w_k a_k == degree``."""
    if n == 0:
        if degree == 0:
            yield ()
        return
    w = weights[0]
    for a in range(degree // w + 1):
        for rest in all_exponents(n - 1, weights[1:], degree - a * w):
            yield (a,) + rest


def exponent_grid(n: int, bound: int):
    return _iproduct(range(bound + 1), repeat=n)
