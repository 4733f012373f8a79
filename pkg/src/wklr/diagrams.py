"""Piecewise-linear diagrams and their operators in the polynomial representation.

A diagram is a list of frames; each frame gives the position of every
strand (indexed by its position in the bottom loading).  Between frames the
strands move linearly, and so do the ghosts, whose offsets may also be
interpolated between two weightings.  Crossings become operator factors:

* a strand moving from left to right of a ghost of edge ``e`` owned by
  strand ``k`` multiplies by ``Q_e(y_k, y_j)``; the reverse move is the identity;
* unlike strands crossing apply the transposition;
* like strands crossing apply the divided difference, or ``P(s - 1)``
  when the label carries a weight-zero loop.

Simultaneous crossings are ordered so each swap is between neighbours in
the combined order of strands and ghosts, which is always realizable by a
small perturbation of the picture.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .polyops import DiffFrac, Poly, Skew, demazure, perm_identity, transposition
from .quiver import Quiver, eval_q, loop_p


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    time: Fraction
    kind: str  # "cross" (strand-strand) or "ghost"
    strand: int
    other: int  # the other strand, or the ghost's owner
    edge: Optional[int] = None
    left_to_right: bool = True


def _lin(p0, p1, t):
    return p0 + (p1 - p0) * t


def _objects(q: Quiver, labels, w0, w1):
    objs = [("s", a, None) for a in range(len(labels))]
    glued = []
    for e_idx, e in enumerate(q.edges):
        zero_both = w0[e_idx] == 0 and w1[e_idx] == 0
        if e.is_loop and (w0[e_idx] == 0) != (w1[e_idx] == 0):
            raise DiagramError("a loop weight cannot pass through zero")
        if zero_both:
            if not e.is_loop:
                glued.append(e_idx)
            continue
        for b, v in enumerate(labels):
            if v == e.head:
                objs.append(("g", b, e_idx))
    return objs, glued


def segment_events(q: Quiver, labels, p0, p1, w0, w1, strand_order: List[int], log=None):
    """Factors for one linear segment, in time order, updating ``strand_order``."""
    objs, glued = _objects(q, labels, w0, w1)

    def pos(o, t):
        kind, b, e = o
        x = _lin(p0[b], p1[b], t)
        if kind == "g":
            x += _lin(w0[e], w1[e], t)
        return x

    def interacting(o1, o2):
        (k1, a1, e1), (k2, a2, e2) = o1, o2
        if k1 == "s" and k2 == "s":
            return True
        if k1 == "s" and k2 == "g":
            return labels[a1] == q.edges[e2].tail and a1 != a2
        if k1 == "g" and k2 == "s":
            return labels[a2] == q.edges[e1].tail and a1 != a2
        return False

    n_obj = len(objs)
    start = [(pos(o, 0), pos(o, 1) - pos(o, 0), k) for k, o in enumerate(objs)]
    order = [k for *_, k in sorted(start)]
    events = []
    for x in range(n_obj):
        for y in range(x + 1, n_obj):
            ox, oy = objs[x], objs[y]
            d0 = pos(ox, 0) - pos(oy, 0)
            d1 = pos(ox, 1) - pos(oy, 1)
            inter = interacting(ox, oy)
            if inter and (d0 == 0 or d1 == 0):
                raise DiagramError("strand meets a strand or interacting ghost at a frame")
            # parallel, same side, or merely touching at a frame: no swap
            if d0 == d1 or d0 == 0 or d1 == 0 or (d0 > 0) == (d1 > 0):
                continue
            t = d0 / (d0 - d1)
            events.append((t, x, y))
    events.sort()
    factors = []
    i = 0
    while i < len(events):
        j = i
        while j < len(events) and events[j][0] == events[i][0]:
            j += 1
        group = {(min(x, y), max(x, y)) for _, x, y in events[i:j]}
        while group:
            done = None
            for idx in range(len(order) - 1):
                pr = (min(order[idx], order[idx + 1]), max(order[idx], order[idx + 1]))
                if pr in group:
                    done = idx
                    break
            if done is None:
                raise DiagramError("could not resolve simultaneous crossings")
            left, right = order[done], order[done + 1]
            group.discard((min(left, right), max(left, right)))
            order[done], order[done + 1] = right, left
            f = _factor(q, labels, objs[left], objs[right], glued, strand_order)
            if log is not None and interacting(objs[left], objs[right]):
                (kl, al, el), (kr, ar, er) = objs[left], objs[right]
                if kl == "s" and kr == "s":
                    log.append(Event(events[i][0], "cross", al, ar))
                elif kl == "s":
                    log.append(Event(events[i][0], "ghost", al, ar, er, True))
                else:
                    log.append(Event(events[i][0], "ghost", ar, al, el, False))
            if f is not None:
                factors.append(f)
        i = j
    return factors


def _factor(q: Quiver, labels, left, right, glued, strand_order: List[int]):
    """Operator for ``left`` and ``right`` swapping (``left`` starts on the left)."""
    n = len(labels)
    kl, al, el = left
    kr, ar, er = right
    if kl == "s" and kr == "s":
        j = strand_order.index(al)
        if strand_order[j + 1] != ar:
            raise DiagramError("crossing strands are not adjacent")
        strand_order[j], strand_order[j + 1] = ar, al
        yj, yk = Poly.var(n, j), Poly.var(n, j + 1)
        if labels[al] == labels[ar]:
            loop = q.weight_zero_loop(labels[al])
            if loop is None:
                return demazure(j, n)
            p = eval_q(loop_p(loop), yj, yk)
            return Skew.mult(p) * (Skew.perm(transposition(j, n)) - Skew.identity(n))
        mult = Poly.const(n, 1)
        for e_idx in glued:
            e = q.edges[e_idx]
            if labels[al] == e.tail and labels[ar] == e.head:
                # the left strand passes its neighbour's ghost left to right
                mult = mult * eval_q(e.q, yk, yj)
        op = Skew.perm(transposition(j, n))
        return op if mult == 1 else op * Skew.mult(mult)
    if kl == "s" and kr == "g":
        e = q.edges[er]
        if labels[al] == e.tail and al != ar:
            ja, jb = strand_order.index(al), strand_order.index(ar)
            return Skew.mult(eval_q(e.q, Poly.var(n, jb), Poly.var(n, ja)))
    return None


def diagram_operator(q: Quiver, labels: Sequence[int], frames: Sequence[Sequence], weights=None,
                     log=None) -> Tuple[Skew, List[int]]:
    """Operator of a diagram, and the final left-to-right order of strand identities.

    ``frames[0]`` must list the strands left to right.
    """
    n = len(labels)
    if weights is None:
        w = tuple(e.weight for e in q.edges)
        weights = [w] * len(frames)
    if list(frames[0]) != sorted(frames[0]):
        raise DiagramError("first frame must be sorted")
    order = list(range(n))
    op = Skew.identity(n)
    for k in range(len(frames) - 1):
        p0 = [Fraction(x) for x in frames[k]]
        p1 = [Fraction(x) for x in frames[k + 1]]
        seg_log = [] if log is not None else None
        for f in segment_events(q, labels, p0, p1, weights[k], weights[k + 1], order, seg_log):
            op = f * op
        if log is not None:
            log.extend((k, ev) for ev in seg_log)
    final = sorted(range(n), key=lambda a: frames[-1][a])
    if final != order:
        raise DiagramError("strand order bookkeeping mismatch")
    return op, order


def identity_op(n: int) -> Skew:
    return Skew(n, {perm_identity(n): DiffFrac.from_poly(Poly.const(n, 1))})
