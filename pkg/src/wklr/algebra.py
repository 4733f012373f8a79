"""The weighted KLR algebra: generators, the ``b_pi`` basis, straightening and products."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagrams import DiagramError, diagram_operator
from .loading import (Loading, LoadingError, canonical_rep, ghosts, is_generic,
                      signature)
from .polyops import (DiffFrac, Perm, Poly, Skew, all_exponents, perm_identity,
                      perm_inverse, perm_length, perm_sort_key)
from .quiver import Quiver


class AlgebraError(ValueError):
    pass


class _Zero:
    """The formal zero produced by stacking diagrams whose loadings disagree."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO_MISMATCH"

    def __bool__(self):
        return False


ZERO_MISMATCH = _Zero()


class _NotHomogeneous:
    def __repr__(self):
        return "NOT_HOMOGENEOUS"


NOT_HOMOGENEOUS = _NotHomogeneous()


@dataclass(frozen=True)
class WklrElement:
    """``sum_pi b_pi * p_pi`` with the dot polynomial ``p_pi`` acting on the source first."""

    src: Loading
    tgt: Loading
    coeffs: Tuple[Tuple[Perm, Poly], ...] = ()

    @classmethod
    def build(cls, src, tgt, coeffs: Dict[Perm, Poly]) -> "WklrElement":
        items = tuple(sorted(((p, c) for p, c in coeffs.items() if c), key=lambda t: perm_sort_key(t[0])))
        return cls(src, tgt, items)

    @property
    def n(self) -> int:
        return len(self.src)

    def as_dict(self) -> Dict[Perm, Poly]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "WklrElement") -> "WklrElement":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise AlgebraError("adding elements with different loadings")
        d = self.as_dict()
        for p, c in other.coeffs:
            d[p] = d[p] + c if p in d else c
        return WklrElement.build(self.src, self.tgt, d)

    def __neg__(self):
        return WklrElement.build(self.src, self.tgt, {p: -c for p, c in self.coeffs})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WklrElement":
        return WklrElement.build(self.src, self.tgt, {p: x * c for p, x in self.coeffs})

    def __str__(self):
        if not self.coeffs:
            return f"0 : {self.src} -> {self.tgt}"
        body = " + ".join(f"b{list(p)}*({c})" for p, c in self.coeffs)
        return f"{body} : {self.src} -> {self.tgt}"

    def to_dict(self) -> dict:
        def ld(l):
            return [[str(x), v] for x, v in l.points]
        return {"src": ld(self.src), "tgt": ld(self.tgt),
                "terms": [[list(p), str(c)] for p, c in self.coeffs]}


def compatible(src: Loading, tgt: Loading, pi: Perm) -> bool:
    return all(src.labels[a] == tgt.labels[pi[a]] for a in range(len(pi)))


def like_matching(src: Loading, tgt: Loading) -> Perm:
    """The permutation sending the m-th ``v``-point of ``src`` to the m-th of ``tgt``."""
    if sorted(src.labels) != sorted(tgt.labels):
        raise AlgebraError("loadings have different dimension vectors")
    slots: Dict[int, List[int]] = {}
    for k, v in enumerate(tgt.labels):
        slots.setdefault(v, []).append(k)
    used: Dict[int, int] = {}
    out = []
    for v in src.labels:
        out.append(slots[v][used.get(v, 0)])
        used[v] = used.get(v, 0) + 1
    return tuple(out)


class WklrAlgebra:
    """Operations on ``e_j W e_i`` for a fixed weighted quiver.

    ``loadings`` fixes the object set used to canonicalize targets; by
    default each loading is replaced by its chamber representative.
    """

    def __init__(self, q: Quiver, loadings: Optional[Iterable[Loading]] = None):
        self.q = q
        self.loadings = None if loadings is None else list(loadings)
        self._wire: Dict[tuple, Skew] = {}
        self._sig_cache: Dict[Loading, tuple] = {}

    # ------------------------------------------------------------- plumbing
    def weights(self, n: int) -> Tuple[int, ...]:
        return tuple(2 * self.q.d(v) for v in range(self.q.vertex_count))

    def var_weights(self, i: Loading) -> Tuple[int, ...]:
        return tuple(2 * self.q.d(v) for v in i.labels)

    def _signature(self, i: Loading):
        if i not in self._sig_cache:
            self._sig_cache[i] = signature(self.q, i)
        return self._sig_cache[i]

    def canonical(self, i: Loading) -> Loading:
        if self.loadings is None:
            return canonical_rep(self.q, i)
        sig = self._signature(i)
        nu = i.nu(self.q.vertex_count)
        fallback = None
        for j in self.loadings:
            if j.nu(self.q.vertex_count) != nu or self._signature(j) != sig:
                continue
            if j.labels == i.labels:
                return j
            fallback = fallback or j
        if fallback is None:
            raise AlgebraError(f"no loading in the object set is equivalent to {i}")
        return fallback

    def check_generic(self, i: Loading):
        if not is_generic(self.q, i):
            raise LoadingError(f"non-generic loading {i}")

    # ------------------------------------------------------------ diagrams
    def frames_operator(self, labels, frames, weights=None, log=None) -> Skew:
        op, _ = diagram_operator(self.q, labels, frames, weights, log)
        return op

    def path_frames(self, src: Loading, tgt: Loading, pi: Perm) -> List[List[Fraction]]:
        end = [tgt.positions[pi[a]] for a in range(len(src))]
        return [list(src.positions), end]

    def wire_b(self, pi: Perm, src: Loading, tgt: Loading) -> Skew:
        key = (tuple(pi), src, tgt)
        op = self._wire.get(key)
        if op is None:
            if not compatible(src, tgt, pi):
                raise AlgebraError("permutation incompatible with labels")
            op = self.frames_operator(src.labels, self.path_frames(src, tgt, pi))
            self._wire[key] = op
        return op

    def leading(self, pi: Perm, src: Loading, tgt: Loading) -> DiffFrac:
        return self.wire_b(pi, src, tgt).comps[tuple(pi)]

    def basis_perms(self, src: Loading, tgt: Loading) -> List[Perm]:
        n = len(src)
        if sorted(src.labels) != sorted(tgt.labels):
            return []
        return sorted((p for p in permutations(range(n)) if compatible(src, tgt, p)), key=perm_sort_key)

    # ------------------------------------------------------------ straightening
    def to_operator(self, x: WklrElement) -> Skew:
        n = x.n
        op = Skew.zero(n)
        for pi, p in x.coeffs:
            op = op + self.wire_b(pi, x.src, x.tgt) * Skew.mult(p)
        return op

    def straighten(self, F: Skew, src: Loading, tgt: Loading, trace: Optional[list] = None) -> WklrElement:
        coeffs: Dict[Perm, Poly] = {}
        rest = F
        while not rest.is_zero():
            top = max(rest.comps, key=lambda p: (perm_length(p), perm_sort_key(p)))
            if not compatible(src, tgt, top):
                raise AlgebraError("not in algebra span: permutation breaks labels")
            if top in coeffs:
                raise AlgebraError("straightening revisited a permutation")
            r = self.leading(top, src, tgt)
            quo = rest.comps[top].divide_by(r)
            if quo is None:
                raise AlgebraError("not in algebra span: coefficient not divisible")
            quo = quo.permute(perm_inverse(top))
            if not quo.is_poly():
                raise AlgebraError("not in algebra span: non-polynomial coordinate")
            p = quo.to_poly()
            coeffs[top] = p
            if trace is not None:
                trace.append(top)
            rest = rest - self.wire_b(top, src, tgt) * Skew.mult(p)
        return WklrElement.build(src, tgt, coeffs)

    # ------------------------------------------------------------ generators
    def idempotent(self, i: Loading) -> WklrElement:
        self.check_generic(i)
        n = len(i)
        return WklrElement.build(i, i, {perm_identity(n): Poly.const(n, 1)})

    def dot(self, i: Loading, k: int) -> WklrElement:
        if not 0 <= k < len(i):
            raise AlgebraError(f"strand index {k} out of range")
        n = len(i)
        return WklrElement.build(i, i, {perm_identity(n): Poly.var(n, k)})

    def mult(self, i: Loading, p: Poly) -> WklrElement:
        return WklrElement.build(i, i, {perm_identity(len(i)): p})

    def diagram(self, labels, frames, src: Loading, tgt: Loading) -> WklrElement:
        return self.straighten(self.frames_operator(labels, frames), src, tgt)

    def _scale(self, i: Loading) -> Fraction:
        vals = set(i.positions) | {g for g, _, _ in ghosts(self.q, i)}
        vals |= {e.weight for e in self.q.edges}
        vals = sorted(vals)
        gaps = [b - a for a, b in zip(vals, vals[1:]) if b > a]
        gaps += [abs(e.weight) for e in self.q.edges if e.weight]
        return min(gaps, default=Fraction(1))

    def psi_frames(self, i: Loading, k: int):
        """Frames crossing strands ``k, k+1`` to the left of every ghost between them.

        Returns ``(frames, crossed)`` where ``crossed`` is the loading reached
        just after the crossing, before canonicalization.
        """
        n = len(i)
        if not 0 <= k < n - 1:
            raise AlgebraError("non-adjacent strands")
        x = list(i.positions)
        delta = self._scale(i) / 8
        for _ in range(40):
            g = list(x)
            g[k + 1] = x[k] + delta
            h = list(g)
            h[k] = x[k] + 2 * delta
            t = list(h)
            t[k] = x[k + 1] - delta
            crossed = Loading.of(zip(t, i.labels))
            if is_generic(self.q, crossed):
                return [x, g, h, t], crossed
            delta /= 2
        raise AlgebraError("could not place the crossing generically")

    def _finish(self, labels, frames, cur: Loading) -> Tuple[list, Loading]:
        tgt = self.canonical(cur)
        if tgt == cur:
            return frames, tgt
        # identity a sits at position rank r in cur; send it to the matching tgt slot
        order = sorted(range(len(labels)), key=lambda a: frames[-1][a])
        match = like_matching(cur, tgt)
        end = [None] * len(labels)
        for r, a in enumerate(order):
            end[a] = tgt.positions[match[r]]
        return frames + [end], tgt

    def psi_diagram(self, i: Loading, k: int):
        frames, crossed = self.psi_frames(i, k)
        frames, tgt = self._finish(i.labels, frames, crossed)
        return frames, tgt

    def psi(self, i: Loading, k: int) -> WklrElement:
        self.check_generic(i)
        frames, tgt = self.psi_diagram(i, k)
        return self.diagram(i.labels, frames, i, tgt)

    def straight_line(self, src: Loading, tgt: Loading) -> WklrElement:
        self.check_generic(src)
        self.check_generic(tgt)
        if sorted(src.labels) != sorted(tgt.labels):
            raise AlgebraError("unloadings differ")
        pi = like_matching(src, tgt)
        return self.diagram(src.labels, self.path_frames(src, tgt, pi), src, tgt)

    # ------------------------------------------------------------ products
    def multiply(self, a: WklrElement, b: WklrElement):
        if a.src != b.tgt:
            return ZERO_MISMATCH
        return self.straighten(self.to_operator(a) * self.to_operator(b), b.src, a.tgt)

    def product(self, *xs: WklrElement):
        out = xs[0]
        for x in xs[1:]:
            out = self.multiply(out, x)
            if out is ZERO_MISMATCH:
                return out
        return out

    def star(self, a: WklrElement) -> WklrElement:
        """Reflection through a horizontal line; ``b_pi`` reflects to ``b_{pi^-1}``."""
        n = a.n
        op = Skew.zero(n)
        for pi, p in a.coeffs:
            inv = perm_inverse(pi)
            op = op + Skew.mult(p) * self.wire_b(inv, a.tgt, a.src)
        return self.straighten(op, a.tgt, a.src)

    # ------------------------------------------------------------ grading
    def frac_degree(self, f: DiffFrac, weights: Sequence[int]):
        degs = f.num.weighted_degrees(weights)
        if len(degs) != 1:
            return NOT_HOMOGENEOUS
        den = sum(weights[a] for a, _ in f.den)
        return degs.pop() - den

    def basis_degree(self, pi: Perm, src: Loading, tgt: Loading) -> int:
        d = self.frac_degree(self.leading(pi, src, tgt), self.var_weights(tgt))
        if d is NOT_HOMOGENEOUS:
            raise AlgebraError("inhomogeneous basis element")
        return d

    def degree(self, a: WklrElement):
        if a.is_zero():
            return NOT_HOMOGENEOUS
        w = self.var_weights(a.src)
        degs = set()
        for pi, p in a.coeffs:
            bd = self.basis_degree(pi, a.src, a.tgt)
            degs |= {bd + d for d in p.weighted_degrees(w)}
        return degs.pop() if len(degs) == 1 else NOT_HOMOGENEOUS

    def graded_dim(self, src: Loading, tgt: Loading, cutoff: int) -> List[Tuple[int, int]]:
        perms = self.basis_perms(src, tgt)
        if not perms:
            return [(d, 0) for d in range(0, cutoff + 1)]
        bdeg = {p: self.basis_degree(p, src, tgt) for p in perms}
        lo = min(0, min(bdeg.values()))
        w = self.var_weights(src)
        out = []
        for d in range(lo, cutoff + 1):
            tot = 0
            for p in perms:
                m = d - bdeg[p]
                if m >= 0:
                    tot += sum(1 for _ in all_exponents(len(w), w, m))
            out.append((d, tot))
        return out

    def graded_basis(self, src: Loading, tgt: Loading, degree: int) -> List[Tuple[Perm, Tuple[int, ...]]]:
        """``(pi, exponent)`` pairs spanning the given degree."""
        out = []
        w = self.var_weights(src)
        for p in self.basis_perms(src, tgt):
            m = degree - self.basis_degree(p, src, tgt)
            if m >= 0:
                out += [(p, e) for e in all_exponents(len(w), w, m)]
        return out

    # ------------------------------------------------------------ interpolation
    def interp_operator(self, q_end: Quiver, src: Loading, tgt: Loading, log=None) -> Skew:
        """Operator for moving from ``src`` (current weights) to ``tgt`` (weights of ``q_end``)."""
        if len(q_end.edges) != len(self.q.edges):
            raise AlgebraError("weightings belong to different quivers")
        for e, f in zip(self.q.edges, q_end.edges):
            if (e.tail, e.head, e.q) != (f.tail, f.head, f.q):
                raise AlgebraError("weightings belong to different quivers")
        if not is_generic(self.q, src) or not is_generic(q_end, tgt):
            raise LoadingError("endpoints must be generic for their weightings")
        pi = like_matching(src, tgt)
        w0 = tuple(e.weight for e in self.q.edges)
        w1 = tuple(e.weight for e in q_end.edges)
        try:
            return self.frames_operator(src.labels, self.path_frames(src, tgt, pi), [w0, w1], log)
        except DiagramError as exc:
            raise AlgebraError(f"degenerate interpolation: {exc}") from exc
