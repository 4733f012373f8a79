"""Local relations checked as exact operator identities.

Each instance builds the two sides of a relation as piecewise-linear
diagrams starting at a chamber representative and compares their
operators, after subtracting the expected correction term.

Sign convention: like-labelled crossings act by ``(s - 1)/(y_k - y_{k+1})``
(or ``P (s - 1)`` with a weight-zero loop).  Relations involving an odd
number of like crossings therefore carry the opposite sign to the one
obtained with the other common choice of divided difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product as iproduct
from typing import Callable, List, Optional, Sequence, Tuple

from .algebra import WklrAlgebra
from .diagrams import DiagramError, diagram_operator
from .loading import Loading, enumerate_chambers, ghosts, well_separated
from .polyops import Poly, Skew, divide_linear
from .quiver import Quiver, eval_q, loop_p


@dataclass
class Instance:
    relation: str
    loading: str
    where: Tuple[int, ...]
    ok: bool
    detail: str = ""

    def to_dict(self):
        return {"relation": self.relation, "loading": self.loading, "where": list(self.where),
                "ok": self.ok, "detail": self.detail}


@dataclass
class RelationReport:
    instances: List[Instance] = field(default_factory=list)

    @property
    def failures(self) -> List[Instance]:
        return [x for x in self.instances if not x.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, relation: Optional[str] = None) -> int:
        return sum(1 for x in self.instances if relation is None or x.relation == relation)

    def merge(self, other: "RelationReport"):
        self.instances += other.instances


def dimension_vectors(n_vertices: int, max_points: int):
    for nu in iproduct(range(max_points + 1), repeat=n_vertices):
        if 0 < sum(nu) <= max_points:
            yield nu


def q_pair(q: Quiver, i: int, j: int, u: Poly, v: Poly) -> Poly:
    """``Q_ij(u, v)``: product over glued edges between ``i`` and ``j``, head variable first."""
    out = Poly.const(u.n, 1)
    for e in q.edges:
        if e.weight != 0 or e.is_loop:
            continue
        if e.head == i and e.tail == j:
            out = out * eval_q(e.q, u, v)
        elif e.head == j and e.tail == i:
            out = out * eval_q(e.q, v, u)
    return out


class _Checker:
    def __init__(self, q: Quiver, i: Loading, alg: WklrAlgebra):
        self.q = q
        self.i = i
        self.alg = alg
        self.n = len(i)
        self.x = list(i.positions)
        self.labels = i.labels
        self.report = RelationReport()
        self.base = alg._scale(i) / 8

    def op(self, frames, log=None):
        return diagram_operator(self.q, self.labels, frames, log=log)

    def y(self, k) -> Skew:
        return Skew.mult(Poly.var(self.n, k))

    def mult(self, p: Poly) -> Skew:
        return Skew.mult(p)

    def record(self, name, where, lhs: Skew, rhs: Skew):
        ok = lhs == rhs
        detail = "" if ok else f"difference {lhs - rhs}"
        self.report.instances.append(Instance(name, str(self.i), tuple(where), ok, detail))

    def attempt(self, build: Callable[[Fraction], None]):
        d = self.base
        for _ in range(4):
            try:
                build(d)
                return
            except DiagramError:
                d /= 2

    # -- (1) dots slide through crossings ---------------------------------
    def dot_slides(self):
        for k in range(self.n - 1):
            self.attempt(lambda d, k=k: self._dot_slide(k, d))

    def _frames_left(self, k, d):
        x = self.x
        g = list(x)
        g[k + 1] = x[k] + d
        h = list(g)
        h[k] = x[k] + 2 * d
        t = list(h)
        t[k] = x[k + 1] - d
        return [list(x), g, h, t]

    def _frames_right(self, k, d):
        x = self.x
        g = list(x)
        g[k] = x[k + 1] - 2 * d
        h = list(g)
        h[k + 1] = x[k + 1] - 3 * d
        t = list(h)
        t[k + 1] = x[k] + d
        t[k] = x[k + 1] - d
        return [list(x), g, h, t]

    def _dot_slide(self, k, d):
        frames = self._frames_left(k, d)
        D, order = self.op(frames)
        top = {a: order.index(a) for a in range(self.n)}
        like = self.labels[k] == self.labels[k + 1]
        if like:
            x = self.x
            smooth = [list(x), frames[1], list(frames[1]), list(frames[3])]
            smooth[2][k + 1] = x[k + 1] - d
            smooth[3][k], smooth[3][k + 1] = x[k] + d, x[k + 1] - d
            S, _ = self.op(smooth)
            loop = self.q.weight_zero_loop(self.labels[k])
            if loop is not None:
                S = S * self.mult(eval_q(loop.q, Poly.var(self.n, k), Poly.var(self.n, k + 1)))
        else:
            S = Skew.zero(self.n)
        for a in range(self.n):
            lhs = D * self.y(a) - self.y(top[a]) * D
            if a == k + 1:
                rhs = S
            elif a == k:
                rhs = -S
            else:
                rhs = Skew.zero(self.n)
            self.record("dot-slide", (k, a), lhs, rhs)

    # -- (2) strand/ghost bigons ---------------------------------------------
    def ghost_bigons(self):
        for g_pos, e_idx, owner in ghosts(self.q, self.i):
            e = self.q.edges[e_idx]
            if e.is_loop and e.weight == 0:
                continue
            for a in range(self.n):
                if a == owner or self.labels[a] != e.tail:
                    continue
                self.attempt(lambda d, a=a, g=g_pos, e_idx=e_idx, owner=owner:
                             self._ghost_bigon(a, g, e_idx, owner, d))

    def _ghost_bigon(self, a, g, e_idx, owner, d):
        x = self.x
        mid = list(x)
        mid[a] = g + d if x[a] < g else g - d
        if sorted(mid) != [mid[b] for b in range(self.n)]:
            return  # would pass another strand
        frames = [list(x), mid, list(x)]
        log = []
        D, _ = self.op(frames, log)
        forward = [ev for seg, ev in log if seg == 0]
        if len(forward) != 1:
            return
        ev = forward[0]
        if (ev.kind, ev.strand, ev.other, ev.edge) != ("ghost", a, owner, e_idx):
            return
        e = self.q.edges[e_idx]
        rhs = self.mult(eval_q(e.q, Poly.var(self.n, owner), Poly.var(self.n, a)))
        self.record("ghost-bigon", (a, owner, e_idx), D, rhs)

    # -- (3) strand/strand bigons --------------------------------------------
    def strand_bigons(self):
        for k in range(self.n - 1):
            self.attempt(lambda d, k=k: self._strand_bigon(k, d))

    def _strand_bigon(self, k, d):
        x = self.x
        f = self._frames_left(k, d)
        g, h = f[1], f[2]
        D, _ = self.op([list(x), g, h, g, list(x)])
        yk, yk1 = Poly.var(self.n, k), Poly.var(self.n, k + 1)
        if self.labels[k] != self.labels[k + 1]:
            sep, _ = self.op([list(x), g, list(x)])
            rhs = sep * self.mult(q_pair(self.q, self.labels[k], self.labels[k + 1], yk, yk1))
        else:
            loop = self.q.weight_zero_loop(self.labels[k])
            if loop is None:
                rhs = Skew.zero(self.n)
            else:
                swapped = list(x)
                swapped[k], swapped[k + 1] = x[k + 1], x[k]
                single, _ = self.op([list(x), g, h, swapped])
                rhs = single * self.mult(eval_q(loop_p(loop), yk, yk1) * (-2))
        self.record("strand-bigon", (k,), D, rhs)

    # -- (4) triple points ---------------------------------------------------
    def ghost_triples(self):
        for k in range(self.n - 1):
            self.attempt(lambda d, k=k: self._ghost_triple(k, d))

    def _ghost_triple(self, k, d):
        """Crossing of strands k, k+1 drawn left versus right of everything between them."""
        x = self.x
        log_l, log_r = [], []
        L, _ = self.op(self._frames_left(k, d), log_l)
        R, _ = self.op(self._frames_right(k, d), log_r)
        evs = [ev for _, ev in log_l + log_r if ev.kind == "ghost"]
        like = self.labels[k] == self.labels[k + 1]
        zero = Skew.zero(self.n)
        if not evs:
            self.record("triple-point", (k,), L - R, zero)
            return
        pair = {k, k + 1}
        if any((ev.strand in pair) == (ev.other in pair) for ev in evs):
            return
        thirds = {ev.other if ev.strand in pair else ev.strand for ev in evs}
        kinds = {ev.strand in pair for ev in evs}
        if len(thirds) != 1 or len(kinds) != 1 or len({ev.edge for ev in evs}) != 1:
            return
        if not like:
            self.record("triple-point", (k,), L - R, zero)
            return
        ev = evs[0]
        e = self.q.edges[ev.edge]
        yk, yk1 = Poly.var(self.n, k), Poly.var(self.n, k + 1)
        if ev.strand in pair:
            c = Poly.var(self.n, ev.other)
            num = eval_q(e.q, c, yk) - eval_q(e.q, c, yk1)
            name = "ghost-through-crossing"
        else:
            c = Poly.var(self.n, ev.strand)
            num = eval_q(e.q, yk, c) - eval_q(e.q, yk1, c)
            name = "strand-through-ghost-crossing"
        term = divide_linear(num, k, k + 1)
        undone = [list(x), list(x)]
        undone[1][k], undone[1][k + 1] = x[k] + d, x[k + 1] - d
        U, _ = self.op(undone)
        self.record(name, (k, ev.strand, ev.other), L - R, U * self.mult(term))

    def strand_triples(self):
        for k in range(self.n - 2):
            self.attempt(lambda d, k=k: self._strand_triple(k, d))

    def _window(self, k, d, swaps):
        """Squeeze strands k..k+2 next to strand k, apply slot swaps, spread out again."""
        x = self.x
        slots = [x[k] + r * d for r in range(3)]
        cur = list(x)
        for r in range(3):
            cur[k + r] = slots[r]
        frames = [list(x), list(cur)]
        at = [k, k + 1, k + 2]  # strand identity in each slot
        for r in swaps:
            a, b = at[r], at[r + 1]
            cur[a], cur[b] = cur[b], cur[a]
            at[r], at[r + 1] = b, a
            frames.append(list(cur))
        for r in range(3):
            cur[at[r]] = x[k + r]
        frames.append(list(cur))
        return self.op(frames)[0]

    def _strand_triple(self, k, d):
        lab = self.labels[k:k + 3]
        lhs = self._window(k, d, [0, 1, 0]) - self._window(k, d, [1, 0, 1])
        n = self.n
        y = [Poly.var(n, k + r) for r in range(3)]
        if lab[0] == lab[1] == lab[2]:
            loop = self.q.weight_zero_loop(lab[0])
            if loop is None:
                rhs = Skew.zero(n)
            else:
                p = loop_p(loop)

                def P(a, b):
                    return eval_q(p, y[a], y[b])

                c0 = P(0, 1) * P(1, 2) + P(0, 2) * P(1, 0) - P(0, 2) * P(1, 2)
                c1 = P(0, 1) * P(1, 2) + P(0, 2) * P(2, 1) - P(0, 2) * P(0, 1)
                rhs = self.mult(c0) * self._window(k, d, [0]) - self.mult(c1) * self._window(k, d, [1])
            name = "braid-like"
        elif lab[0] == lab[2]:
            i, j = lab[0], lab[1]
            num = q_pair(self.q, i, j, y[0], y[1]) - q_pair(self.q, i, j, y[2], y[1])
            corr = -divide_linear(num, k, k + 2)
            rhs = self.mult(corr) * self._window(k, d, [])
            name = "braid-iji"
        else:
            rhs = Skew.zero(n)
            name = "braid"
        self.record(name, (k,), lhs, rhs)

    def run(self) -> RelationReport:
        self.dot_slides()
        self.ghost_bigons()
        self.strand_bigons()
        self.ghost_triples()
        self.strand_triples()
        return self.report


def check_loading(q: Quiver, i: Loading, alg: Optional[WklrAlgebra] = None) -> RelationReport:
    return _Checker(q, i, alg or WklrAlgebra(q)).run()


def check_relation_suite(q: Quiver, max_points: int = 3, nus: Optional[Sequence] = None) -> RelationReport:
    """Every constructible local relation on chamber representatives with at most ``max_points`` strands."""
    report = RelationReport()
    alg = WklrAlgebra(q)
    for nu in (nus if nus is not None else dimension_vectors(q.vertex_count, max_points)):
        for rep in enumerate_chambers(q, tuple(nu)).representatives:
            report.merge(check_loading(q, rep, alg))
    return report


# ------------------------------------------------------ KLR presentation

def klr_check(q: Quiver, words: Sequence[Sequence[int]]) -> RelationReport:
    """The unweighted KLR relations among ``psi``/``y`` on well-separated loadings.

    Meant for weightings that vanish identically, where well-separated
    loadings recover the usual KLR idempotents.
    """
    report = RelationReport()
    words = [tuple(w) for w in words]
    objects = {}
    for w in words:
        for p in set(permutations(w)):
            objects[p] = well_separated(q, p)
    alg = WklrAlgebra(q, objects.values())

    def rec(name, w, where, lhs, rhs):
        ok = lhs.is_zero() if rhs is None else lhs == rhs
        report.instances.append(Instance(name, str(objects[w]), tuple(where), ok,
                                         "" if ok else f"{lhs} != {rhs}"))

    for w in words:
        i = objects[w]
        n = len(w)
        e = alg.idempotent(i)
        for k in range(n - 1):
            psi = alg.psi(i, k)
            j = psi.tgt
            like = w[k] == w[k + 1]
            for a in range(n):
                b = a if a not in (k, k + 1) else (2 * k + 1 - a)
                lhs = alg.multiply(psi, alg.dot(i, a)) - alg.multiply(alg.dot(j, b), psi)
                if like and a == k + 1:
                    rhs = e
                elif like and a == k:
                    rhs = -e
                else:
                    rhs = None
                rec("klr-dot", w, (k, a), lhs, rhs)
            sq = alg.multiply(alg.psi(j, k), psi)
            if like:
                rhs = None
            else:
                yk, yk1 = Poly.var(n, k), Poly.var(n, k + 1)
                rhs = alg.mult(i, q_pair(q, w[k], w[k + 1], yk, yk1))
            rec("klr-square", w, (k,), sq, rhs)
        for k in range(n - 2):
            def chain(order):
                cur, out = i, None
                for m in order:
                    g = alg.psi(cur, m)
                    out = g if out is None else alg.multiply(g, out)
                    cur = g.tgt
                return out
            lhs = chain([k, k + 1, k]) - chain([k + 1, k, k + 1])
            if w[k] == w[k + 2] != w[k + 1]:
                y = [Poly.var(n, k + r) for r in range(3)]
                num = q_pair(q, w[k], w[k + 1], y[0], y[1]) - q_pair(q, w[k], w[k + 1], y[2], y[1])
                rhs = alg.mult(i, -divide_linear(num, k, k + 2))
            else:
                rhs = None
            rec("klr-braid", w, (k,), lhs, rhs)
        for k in range(n - 1):
            for l in range(k + 2, n - 1):
                a1 = alg.psi(i, k)
                a2 = alg.psi(a1.tgt, l)
                b1 = alg.psi(i, l)
                b2 = alg.psi(b1.tgt, k)
                rec("klr-far", w, (k, l), alg.multiply(a2, a1), alg.multiply(b2, b1))
    return report
