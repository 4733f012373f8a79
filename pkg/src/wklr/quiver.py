"""Weighted quivers with multiplicities and Q-polynomials."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .polyops import Poly, divide_linear

DimVector = Tuple[int, ...]


class QuiverError(ValueError):
    pass


def edge_poly(coeffs: Dict[Tuple[int, int], object]) -> Poly:
    """Two-variable polynomial ``Q(u, v)``; ``u`` is variable 0 (head), ``v`` variable 1 (tail)."""
    return Poly(2, {tuple(k): c for k, c in coeffs.items()})


def swap_uv(q: Poly) -> Poly:
    return q.permute((1, 0))


def eval_q(q: Poly, u: Poly, v: Poly) -> Poly:
    """Evaluate ``Q(u, v)`` at polynomials of a larger ring."""
    out = Poly.zero(u.n)
    for (a, b), c in q.terms.items():
        out = out + (u ** a) * (v ** b) * c
    return out


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    c: int
    cbar: int
    weight: Fraction
    q: Poly

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def reversed(self) -> "Edge":
        return Edge(self.head, self.tail, self.cbar, self.c, -self.weight, swap_uv(self.q))


@dataclass(frozen=True)
class Quiver:
    symmetrizers: Tuple[int, ...]
    edges: Tuple[Edge, ...] = ()
    cb_vertex: Optional[int] = None
    names: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def vertex_count(self) -> int:
        return len(self.symmetrizers)

    def d(self, i: int) -> int:
        return self.symmetrizers[i]

    def with_edges(self, edges) -> "Quiver":
        return replace(self, edges=tuple(edges))

    def with_weights(self, weights: Sequence) -> "Quiver":
        return self.with_edges(replace(e, weight=Fraction(w)) for e, w in zip(self.edges, weights))

    def weight_zero_loop(self, i: int) -> Optional[Edge]:
        for e in self.edges:
            if e.is_loop and e.tail == i and e.weight == 0:
                return e
        return None

    def edges_by_head(self, i: int) -> List[Tuple[int, Edge]]:
        return [(k, e) for k, e in enumerate(self.edges) if e.head == i]

    def max_abs_weight(self) -> Fraction:
        return sum((abs(e.weight) for e in self.edges), Fraction(0))


def make_quiver(symmetrizers, edges, cb_vertex=None) -> Quiver:
    """Build from ``(tail, head, c, cbar, weight, {(a, b): coeff})`` tuples."""
    es = []
    for t, h, c, cb, w, q in edges:
        es.append(Edge(t, h, c, cb, Fraction(w), q if isinstance(q, Poly) else edge_poly(q)))
    return Quiver(tuple(symmetrizers), tuple(es), cb_vertex)


def validate(q: Quiver, check_dagger: bool = True) -> List[str]:
    """All violated standing assumptions, as human-readable diagnostics."""
    diags = []
    n = q.vertex_count
    if any(d <= 0 for d in q.symmetrizers):
        diags.append("symmetrizers must be positive")
    for k, e in enumerate(q.edges):
        tag = f"edge {k} ({e.tail}->{e.head})"
        if not (0 <= e.tail < n and 0 <= e.head < n):
            diags.append(f"{tag}: vertex out of range")
            continue
        if e.c <= 0 or e.cbar <= 0:
            diags.append(f"{tag}: multiplicities must be positive")
            continue
        dh, dt = q.d(e.head), q.d(e.tail)
        if dh * e.c != dt * e.cbar:
            diags.append(f"{tag}: not symmetrizable")
        target = dh * e.c
        if any(a * dh + b * dt != target for (a, b) in e.q.terms):
            diags.append(f"{tag}: Q not homogeneous of degree d_head*c")
        if not e.q.terms.get((e.c, 0)) or not e.q.terms.get((0, e.cbar)):
            diags.append(f"{tag}: pure monomial coefficient is zero")
        if e.is_loop and e.weight == 0:
            p = divide_linear(e.q, 0, 1)
            if p is None:
                diags.append(f"{tag}: loop polynomial not divisible by (u-v)")
            elif swap_uv(p) != p:
                diags.append(f"{tag}: loop quotient P not symmetric")
    if check_dagger:
        diags += dagger_violations(q)
    return diags


def _parallel_key(e: Edge):
    """Orientation-independent key: parallel edges (after reversal) share it."""
    if (e.tail, e.head, e.weight) <= (e.head, e.tail, -e.weight):
        return (e.tail, e.head, e.weight)
    return (e.head, e.tail, -e.weight)


def dagger_violations(q: Quiver) -> List[str]:
    seen: Dict[tuple, int] = {}
    out = []
    for k, e in enumerate(q.edges):
        key = _parallel_key(e)
        if key in seen:
            j = seen[key]
            f = q.edges[j]
            if (f.tail, f.head) == (e.tail, e.head) and not e.is_loop:
                out.append(f"edges {j} and {k}: parallel edges with equal weight")
            elif e.is_loop and f.weight == e.weight:
                out.append(f"edges {j} and {k}: parallel loops with equal weight")
            else:
                out.append(f"edges {j} and {k}: cyclic bigon with opposite weights")
        else:
            seen[key] = k
    return out


def merge_parallel(q: Quiver) -> Quiver:
    """Merge edges with matching weight (after reversal) into single edges."""
    merged: Dict[tuple, Edge] = {}
    order = []
    for e in q.edges:
        key = _parallel_key(e)
        if key not in merged:
            merged[key] = e
            order.append(key)
            continue
        base = merged[key]
        other = e
        if (e.tail, e.head, e.weight) != (base.tail, base.head, base.weight):
            other = e.reversed()
        merged[key] = Edge(base.tail, base.head, base.c + other.c, base.cbar + other.cbar,
                           base.weight, base.q * other.q)
    out = q.with_edges(merged[k] for k in order)
    left = dagger_violations(out)
    if left:
        raise QuiverError("cyclic bigon with opposite weights: " + "; ".join(left))
    return out


def reverse_edge(q: Quiver, k: int) -> Quiver:
    es = list(q.edges)
    es[k] = es[k].reversed()
    return q.with_edges(es)


def loop_p(e: Edge) -> Poly:
    """``P_e = Q_e / (u - v)`` for a weight-zero loop."""
    if not (e.is_loop and e.weight == 0):
        raise QuiverError("not a weight-zero loop")
    p = divide_linear(e.q, 0, 1)
    if p is None:
        raise QuiverError("not divisible by (u-v)")
    if swap_uv(p) != p:
        raise QuiverError("loop quotient P is not symmetric")
    return p


def _basis_dot(q: Quiver, i: int, j: int) -> int:
    val = 2 * q.d(i) if i == j else 0
    for e in q.edges:
        if e.head == i and e.tail == j:
            val -= q.d(i) * e.c
        if e.tail == i and e.head == j:
            val -= q.d(i) * e.cbar
    return val


def _basis_bracket(q: Quiver, j: int, i: int) -> int:
    """``<alpha_j, alpha_i>``."""
    val = q.d(i) if i == j else 0
    for e in q.edges:
        if e.tail == j and e.head == i:
            val -= q.d(i) * e.c
    return val


def pairing_dot(q: Quiver, mu: Sequence[int], nu: Sequence[int]) -> int:
    n = q.vertex_count
    return sum(mu[i] * nu[j] * _basis_dot(q, i, j) for i in range(n) for j in range(n) if mu[i] and nu[j])


def pairing_bracket(q: Quiver, mu: Sequence[int], nu: Sequence[int]) -> int:
    n = q.vertex_count
    return sum(mu[j] * nu[i] * _basis_bracket(q, j, i) for i in range(n) for j in range(n) if mu[j] and nu[i])


def crawley_boevey(q: Quiver, targets: Sequence[Tuple[int, object]]) -> Quiver:
    """Append a flagged vertex with one weighted edge into each listed target."""
    if q.cb_vertex is not None:
        raise QuiverError("quiver already has a Crawley-Boevey vertex")
    z = q.vertex_count
    es = list(q.edges)
    for i, w in targets:
        if not 0 <= i < z:
            raise QuiverError(f"target {i} is not a vertex")
        di = q.d(i)
        # u is the head (old vertex) variable; for d_i = 1 this is u - v with c = cbar = 1
        es.append(Edge(z, i, 1, di, Fraction(w), edge_poly({(1, 0): 1, (0, di): -1})))
    out = Quiver(q.symmetrizers + (1,), tuple(es), z)
    return merge_parallel(out)


def dim_vector(q: Quiver, labels: Sequence[int]) -> DimVector:
    v = [0] * q.vertex_count
    for i in labels:
        v[i] += 1
    return tuple(v)


# ----------------------------------------------------------- serialization

def _fmt_frac(x: Fraction) -> str:
    return str(Fraction(x))


def quiver_to_dict(q: Quiver) -> dict:
    edges = sorted(q.edges, key=lambda e: (e.tail, e.head, e.weight))
    out = {
        "vertices": q.vertex_count,
        "symmetrizers": list(q.symmetrizers),
        "edges": [
            {
                "tail": e.tail,
                "head": e.head,
                "c": e.c,
                "cbar": e.cbar,
                "weight": _fmt_frac(e.weight),
                "Q": [[a, b, _fmt_frac(c)] for (a, b), c in sorted(e.q.terms.items())],
            }
            for e in edges
        ],
    }
    if q.cb_vertex is not None:
        out["cb_vertex"] = q.cb_vertex
    return out


def quiver_from_dict(doc: dict) -> Quiver:
    try:
        n = int(doc["vertices"])
        sym = tuple(int(x) for x in doc.get("symmetrizers", [1] * n))
        if len(sym) != n:
            raise QuiverError("symmetrizers length does not match vertex count")
        edges = []
        for ed in doc.get("edges", []):
            q = edge_poly({(int(a), int(b)): Fraction(str(c)) for a, b, c in ed["Q"]})
            edges.append(Edge(int(ed["tail"]), int(ed["head"]), int(ed.get("c", 1)),
                              int(ed.get("cbar", ed.get("c", 1))), Fraction(str(ed.get("weight", "0"))), q))
        cb = doc.get("cb_vertex")
        return Quiver(sym, tuple(edges), None if cb is None else int(cb))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, QuiverError):
            raise
        raise QuiverError(f"malformed quiver document: {exc}") from exc


def dumps(q: Quiver) -> str:
    return json.dumps(quiver_to_dict(q), indent=2, sort_keys=True)


def loads(text: str) -> Quiver:
    return quiver_from_dict(json.loads(text))


# ------------------------------------------------------------- test quivers

def _lin(a=1, b=-1):
    return {(1, 0): a, (0, 1): b}


def a1() -> Quiver:
    return Quiver((1,))


def a2(weight=0) -> Quiver:
    return make_quiver((1, 1), [(0, 1, 1, 1, weight, _lin())])


def a3(w1=0, w2=0) -> Quiver:
    return make_quiver((1, 1, 1), [(0, 1, 1, 1, w1, _lin()), (1, 2, 1, 1, w2, _lin())])


def kronecker(w1=1, w2=-1) -> Quiver:
    return make_quiver((1, 1), [(0, 1, 1, 1, w1, _lin()), (0, 1, 1, 1, w2, _lin())])


def jordan(weight=0, q=None) -> Quiver:
    return make_quiver((1,), [(0, 0, 1, 1, weight, q or _lin())])


def canonical(q: Quiver) -> Quiver:
    """Edges in serialization order, so equal quivers compare equal."""
    return q.with_edges(sorted(q.edges, key=lambda e: (e.tail, e.head, e.weight)))
