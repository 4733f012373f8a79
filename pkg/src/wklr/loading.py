"""Loadings, ghosts, equivalence signatures and chamber enumeration."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .quiver import Quiver

LEFT, SAME, RIGHT = -1, 0, 1
DEFAULT_MAX_POINTS = 8


class LoadingError(ValueError):
    pass


class SizeError(RuntimeError):
    """Instance exceeds a configured enumeration bound."""


def max_points() -> int:
    try:
        return int(os.environ.get("WKLR_MAX_POINTS", DEFAULT_MAX_POINTS))
    except ValueError:
        return DEFAULT_MAX_POINTS


@dataclass(frozen=True)
class Loading:
    positions: Tuple[Fraction, ...]
    labels: Tuple[int, ...]

    def __post_init__(self):
        if len(self.positions) != len(self.labels):
            raise LoadingError("positions and labels differ in length")
        if any(a >= b for a, b in zip(self.positions, self.positions[1:])):
            raise LoadingError("positions must be strictly increasing")

    @classmethod
    def of(cls, points: Iterable[Tuple[object, int]]) -> "Loading":
        pts = sorted((Fraction(x), int(v)) for x, v in points)
        if any(a[0] == b[0] for a, b in zip(pts, pts[1:])):
            raise LoadingError("two points share a position")
        return cls(tuple(p for p, _ in pts), tuple(v for _, v in pts))

    @classmethod
    def empty(cls) -> "Loading":
        return cls((), ())

    def __len__(self):
        return len(self.labels)

    @property
    def points(self) -> List[Tuple[Fraction, int]]:
        return list(zip(self.positions, self.labels))

    def nu(self, n: int) -> Tuple[int, ...]:
        v = [0] * n
        for i in self.labels:
            v[i] += 1
        return tuple(v)

    def translate(self, dx) -> "Loading":
        dx = Fraction(dx)
        return Loading(tuple(x + dx for x in self.positions), self.labels)

    def normalized(self) -> "Loading":
        return self.translate(-self.positions[0]) if self.labels else self

    def diameter(self) -> Fraction:
        return self.positions[-1] - self.positions[0] if self.labels else Fraction(0)

    def label_index(self) -> List[int]:
        """For each point, its rank among points of the same label."""
        seen: Dict[int, int] = {}
        out = []
        for v in self.labels:
            out.append(seen.get(v, 0))
            seen[v] = seen.get(v, 0) + 1
        return out

    def by_label(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for k, v in enumerate(self.labels):
            out.setdefault(v, []).append(k)
        return out

    def __str__(self):
        return "(" + ", ".join(f"{v}@{x}" for x, v in self.points) + ")"


def ghosts(q: Quiver, i: Loading) -> List[Tuple[Fraction, int, int]]:
    """``(position, edge index, owner point index)`` for every ghost."""
    out = []
    for k, (x, v) in enumerate(i.points):
        for e_idx, e in enumerate(q.edges):
            if e.head == v:
                out.append((x + e.weight, e_idx, k))
    return sorted(out)


def _is_zero_loop(e) -> bool:
    return e.is_loop and e.weight == 0


def is_generic(q: Quiver, i: Loading) -> bool:
    pos = i.positions
    for e in q.edges:
        for a, va in enumerate(i.labels):
            if va != e.tail:
                continue
            for b, vb in enumerate(i.labels):
                if vb != e.head or (a == b and _is_zero_loop(e)):
                    continue
                if pos[a] == pos[b] + e.weight:
                    return False
    seen: Dict[Fraction, Fraction] = {}
    for x, e_idx, _ in ghosts(q, i):
        w = q.edges[e_idx].weight
        if x in seen and seen[x] != w:
            return False
        seen.setdefault(x, w)
    return True


Signature = Tuple[Tuple[Tuple[int, int, int], int], ...]


def signature_raw(q: Quiver, i: Loading) -> Signature:
    by = i.by_label()
    pos = i.positions
    out = []
    for e_idx, e in enumerate(q.edges):
        tails = by.get(e.tail, [])
        heads = by.get(e.head, [])
        for m, a in enumerate(tails):
            for n_, b in enumerate(heads):
                if a == b and _is_zero_loop(e):
                    s = SAME
                else:
                    g = pos[b] + e.weight
                    if g == pos[a]:
                        raise LoadingError("non-generic loading")
                    s = LEFT if g < pos[a] else RIGHT
                out.append(((e_idx, m, n_), s))
    return tuple(out)


def signature(q: Quiver, i: Loading) -> Signature:
    if not is_generic(q, i):
        raise LoadingError("non-generic loading")
    return signature_raw(q, i)


def equivalent(q: Quiver, i: Loading, j: Loading) -> bool:
    """Same dimension vector and same signature (the unloading may differ)."""
    n = q.vertex_count
    return i.nu(n) == j.nu(n) and signature(q, i) == signature(q, j)


def separation_constant(q: Quiver, *loadings: Loading) -> Fraction:
    diam = max((l.diameter() for l in loadings), default=Fraction(0))
    return 1 + q.max_abs_weight() + diam


def _extent(q: Quiver, i: Loading) -> Tuple[Fraction, Fraction]:
    xs = list(i.positions) + [g for g, _, _ in ghosts(q, i)]
    return min(xs), max(xs)


def compose(q: Quiver, i: Loading, j: Loading, s=None) -> Loading:
    """``i o j``: ``j`` placed to the right of ``i`` with a gap larger than ``s``."""
    if not len(j):
        return i
    if not len(i):
        return j
    s = separation_constant(q, i, j) if s is None else Fraction(s)
    _, right = _extent(q, i)
    left, _ = _extent(q, j)
    shift = right - left + s + 1
    jt = j.translate(shift)
    return Loading(i.positions + jt.positions, i.labels + jt.labels)


def well_separated(q: Quiver, word: Sequence[int], s=None) -> Loading:
    s = separation_constant(q) if s is None else Fraction(s)
    return Loading(tuple(Fraction(k) * s for k in range(len(word))), tuple(word))


def shift_weights(q: Quiver, eta: Sequence) -> Quiver:
    """The cohomologous weighting matching a move of each ``v``-strand by ``eta[v]``.

    A ghost travels with its owner (a head strand) but the relation it
    mediates is with tail strands, so the offset changes by
    ``eta[tail] - eta[head]``.
    """
    return q.with_weights([e.weight + Fraction(eta[e.tail]) - Fraction(eta[e.head]) for e in q.edges])


def shift_loading(i: Loading, eta: Sequence) -> Loading:
    return Loading.of((x + Fraction(eta[v]), v) for x, v in i.points)


def shift_eta(q: Quiver, i: Loading, eta: Sequence) -> Tuple[Quiver, Loading]:
    q2 = shift_weights(q, eta)
    try:
        j = shift_loading(i, eta)
    except LoadingError as exc:
        raise LoadingError("result non-generic: points collide after the shift") from exc
    if is_generic(q, i) and not is_generic(q2, j):
        raise LoadingError("result non-generic")
    return q2, j


def tree_potential(q: Quiver) -> List[Fraction]:
    """``eta`` with ``eta[t] - eta[h] = -weight`` on every edge; raises if not a forest."""
    n = q.vertex_count
    eta: List[Optional[Fraction]] = [None] * n
    adj: Dict[int, List[Tuple[int, Fraction]]] = {v: [] for v in range(n)}
    for e in q.edges:
        if e.is_loop:
            if e.weight:
                raise LoadingError("loop with nonzero weight cannot be shifted away")
            continue
        # eta[t] - eta[h] = -w
        adj[e.tail].append((e.head, e.weight))
        adj[e.head].append((e.tail, -e.weight))
    for root in range(n):
        if eta[root] is not None:
            continue
        eta[root] = Fraction(0)
        stack = [root]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                # from eta[u] - eta[v] = -w (u tail) or the mirrored relation
                val = eta[u] + w
                if eta[v] is None:
                    eta[v] = val
                    stack.append(v)
                elif eta[v] != val:
                    raise LoadingError("weighting is not exact on a cycle")
    return [x if x is not None else Fraction(0) for x in eta]


# --------------------------------------------------------------- chambers

@dataclass(frozen=True)
class Hyperplane:
    """``x[a] - x[b] = c`` in the point-variable coordinates."""

    key: Tuple[int, int, int]
    a: int
    b: int
    c: Fraction


def _variables(nu: Sequence[int]):
    labels = []
    for v, k in enumerate(nu):
        labels += [v] * k
    offs = {}
    idx = 0
    for v, k in enumerate(nu):
        offs[v] = list(range(idx, idx + k))
        idx += k
    return labels, offs


def arrangement(q: Quiver, nu: Sequence[int]):
    """Order constraints and the edge hyperplanes for dimension vector ``nu``."""
    labels, offs = _variables(nu)
    order = []  # (a, b) meaning x[a] < x[b]
    for v, vs in offs.items():
        order += list(zip(vs, vs[1:]))
    hyps = []
    for e_idx, e in enumerate(q.edges):
        for m, a in enumerate(offs.get(e.tail, [])):
            for n_, b in enumerate(offs.get(e.head, [])):
                if a == b:
                    continue
                hyps.append(Hyperplane((e_idx, m, n_), a, b, e.weight))
    return labels, order, hyps


def _feasible(nvar: int, cons, margin: Fraction) -> Optional[List[Fraction]]:
    """Solve ``x[u] - x[v] <= w - margin`` for all ``(u, v, w)`` by Bellman-Ford."""
    dist = [Fraction(0)] * nvar
    edges = [(v, u, w - margin) for u, v, w in cons]
    for _ in range(nvar + 1):
        changed = False
        for v, u, w in edges:
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            return dist
    return None


def strictly_feasible(nvar: int, cons) -> bool:
    """Whether ``x[u] - x[v] < w`` is solvable: every cycle must have positive weight."""
    return _solve_strict(nvar, cons) is not None


def _solve_strict(nvar: int, cons) -> Optional[List[Fraction]]:
    if not cons:
        return [Fraction(0)] * nvar
    # infinitesimal margin: lexicographic weights (w, -1)
    dist = [(Fraction(0), 0)] * nvar
    edges = [(v, u, w) for u, v, w in cons]
    for _ in range(nvar + 1):
        changed = False
        for v, u, w in edges:
            cand = (dist[v][0] + w, dist[v][1] - 1)
            if cand < dist[u]:
                dist[u] = cand
                changed = True
        if not changed:
            break
    else:
        return None
    # pick a concrete epsilon
    eps = Fraction(1)
    for u, v, w in cons:
        da = dist[u][0] - dist[v][0]
        db = dist[u][1] - dist[v][1]
        if da < w:
            eps = min(eps, (w - da) / (abs(db) + 2))
    return [a + b * eps for a, b in dist]


def _constraints(order, hyps, signs) -> list:
    cons = [(a, b, Fraction(0)) for a, b in order]
    for h, s in zip(hyps, signs):
        if s == LEFT:  # ghost of b left of a: x[a] - x[b] > c
            cons.append((h.b, h.a, -h.c))
        else:
            cons.append((h.a, h.b, h.c))
    return cons


def _nice_point(nvar: int, cons) -> List[Fraction]:
    """A point with slack: the largest margin from 1, 1/2, 1/4, ... that works."""
    margin = Fraction(1)
    for _ in range(64):
        sol = _feasible(nvar, cons, margin)
        if sol is not None:
            return sol
        margin /= 2
    sol = _solve_strict(nvar, cons)
    if sol is None:
        raise LoadingError("empty chamber")
    return sol


@dataclass(frozen=True)
class ChamberSet:
    nu: Tuple[int, ...]
    representatives: Tuple[Loading, ...]
    signatures: Tuple[Signature, ...]

    def __len__(self):
        return len(self.representatives)

    def index_of(self, sig: Signature) -> int:
        return self.signatures.index(sig)


def _check_size(nu):
    total = sum(nu)
    if total > max_points():
        raise SizeError(f"instance too large: {total} points exceeds bound {max_points()}")


def enumerate_chambers(q: Quiver, nu: Sequence[int]) -> ChamberSet:
    return _enumerate_cached(q, tuple(nu), max_points())


@lru_cache(maxsize=256)
def _enumerate_cached(q: Quiver, nu: Tuple[int, ...], _bound: int) -> ChamberSet:
    _check_size(nu)
    labels, order, hyps = arrangement(q, nu)
    nvar = len(labels)
    regions: List[Tuple[int, ...]] = [()]
    for k in range(len(hyps)):
        nxt = []
        for reg in regions:
            for s in (LEFT, RIGHT):
                signs = reg + (s,)
                if strictly_feasible(nvar, _constraints(order, hyps[: k + 1], signs)):
                    nxt.append(signs)
        regions = nxt
    reps = []
    for signs in regions:
        cons = _constraints(order, hyps, signs)
        reps.append(_representative(q, labels, cons, nvar))
    sigs = [signature(q, r) for r in reps]
    pairs = sorted(zip(sigs, reps), key=lambda t: t[0])
    return ChamberSet(tuple(nu), tuple(p[1] for p in pairs), tuple(p[0] for p in pairs))


def _representative(q: Quiver, labels, cons, nvar) -> Loading:
    x = _nice_point(nvar, cons)
    # slack of the point: perturbations smaller than half of it keep the chamber
    slack = min((w - (x[u] - x[v]) for u, v, w in cons), default=Fraction(1))
    slack = min(slack, Fraction(1))
    for attempt in range(200):
        step = slack / (2 * (nvar + 1) * (attempt + 1))
        y = x if attempt == 0 else [xi + step * k for k, xi in enumerate(x)]
        if len(set(y)) < nvar:
            continue
        ld = Loading.of(zip(y, labels)).normalized()
        if is_generic(q, ld):
            return ld
    raise LoadingError("could not find a generic representative")


def chamber_of(q: Quiver, i: Loading) -> Tuple[ChamberSet, int]:
    cs = enumerate_chambers(q, i.nu(q.vertex_count))
    return cs, cs.index_of(signature(q, i))


def canonical_rep(q: Quiver, i: Loading) -> Loading:
    cs, k = chamber_of(q, i)
    return cs.representatives[k]


# ------------------------------------------------------------- the oracle

def _fm_feasible(nvar: int, ineqs) -> bool:
    """Fourier-Motzkin test for ``sum coef*x < or <= rhs`` systems.

    ``ineqs`` holds ``(coefs dict, rhs, strict)``.
    """
    rows = [(dict(c), Fraction(r), s) for c, r, s in ineqs]
    for var in range(nvar):
        pos, neg, rest = [], [], []
        for c, r, s in rows:
            a = c.get(var, 0)
            if a > 0:
                pos.append((c, r, s, a))
            elif a < 0:
                neg.append((c, r, s, a))
            else:
                rest.append((c, r, s))
        for cp, rp, sp, ap in pos:
            for cn, rn, sn, an in neg:
                # (cp/ap) + (cn/-an) eliminates var
                c = {}
                for k, v in cp.items():
                    c[k] = c.get(k, 0) + v / ap
                for k, v in cn.items():
                    c[k] = c.get(k, 0) + v / (-an)
                c = {k: v for k, v in c.items() if v and k != var}
                rest.append((c, rp / ap + rn / (-an), sp or sn))
        rows = _dedupe(rest)
    for c, r, s in rows:
        if (s and not r > 0) or (not s and r < 0):
            return False
    return True


def _dedupe(rows):
    best: Dict[tuple, Tuple[Fraction, bool]] = {}
    for c, r, s in rows:
        key = tuple(sorted(c.items()))
        if key not in best or r < best[key][0] or (r == best[key][0] and s):
            best[key] = (r, s)
    return [(dict(k), r, s) for k, (r, s) in best.items()]


def oracle_chamber_count(q: Quiver, nu: Sequence[int]) -> int:
    """Depth-first sign-vector search with Fourier-Motzkin feasibility."""
    labels, order, hyps = arrangement(q, nu)
    nvar = len(labels)
    base = [({a: Fraction(1), b: Fraction(-1)}, Fraction(0), True) for a, b in order]

    def rows_for(signs):
        out = list(base)
        for h, s in zip(hyps, signs):
            if s == LEFT:  # x[a] - x[b] > c
                out.append(({h.a: Fraction(-1), h.b: Fraction(1)}, -h.c, True))
            else:
                out.append(({h.a: Fraction(1), h.b: Fraction(-1)}, h.c, True))
        return out

    count = 0
    stack: List[Tuple[int, ...]] = [()]
    while stack:
        signs = stack.pop()
        if not _fm_feasible(nvar, rows_for(signs)):
            continue
        if len(signs) == len(hyps):
            count += 1
        else:
            stack.append(signs + (RIGHT,))
            stack.append(signs + (LEFT,))
    return count
