from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wklr.algebra import WklrElement, like_matching
from wklr.loading import SizeError, enumerate_chambers, well_separated
from wklr.polyops import Poly
from wklr.quiver import Quiver, a2, crawley_boevey, kronecker
from wklr.steady import (EQUAL_ARG, GREATER, LESS, Charge, ChargeError, SteadyComputation,
                         _coord_key, _rank_rows, cb_preset, compare_c, coordinates, reduced_generators,
                         steadied_graded_dim, table_csv, unsteady_generators,
                         unsteady_idempotents)

CB = crawley_boevey(Quiver((1,)), [(0, 10), (0, 10)])


# ------------------------------------------------------------ charges

def test_imaginary_beats_real():
    c = Charge.of([(0, 1), (1, 0)])
    assert compare_c(c, (1, 0), (0, 1)) == GREATER
    assert compare_c(c, (0, 1), (1, 0)) == LESS
    assert compare_c(c, (1, 1), (1, 1)) == EQUAL_ARG


def test_equal_charges_are_collinear():
    c = Charge.of([(1, 1), (1, 1)])
    assert compare_c(c, (1, 0), (0, 1)) == EQUAL_ARG
    assert compare_c(c, (2, 1), (0, 3)) == EQUAL_ARG


def test_charge_validation():
    with pytest.raises(ChargeError):
        Charge.of([(1, -1)])
    with pytest.raises(ChargeError):
        Charge.of([(-1, 0)])
    with pytest.raises(ChargeError):
        compare_c(Charge.of([(0, 1)]), (0,), (1,))


def test_charge_parsing():
    assert Charge.parse("-1/1, 1:2/3") == Charge.of([(-1, 1), (Fraction(1, 2), 3)])
    with pytest.raises(ChargeError):
        Charge.parse("1")


def test_cb_preset():
    assert cb_preset(CB) == Charge.of([(-1, 1), (1, 1)])
    with pytest.raises(ChargeError):
        cb_preset(a2())


half_plane = st.one_of(
    st.tuples(st.fractions(-5, 5, max_denominator=4), st.fractions(Fraction(1, 4), 5, max_denominator=4)),
    st.tuples(st.fractions(Fraction(1, 4), 5, max_denominator=4), st.just(Fraction(0))),
)
vectors = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(any)


@given(st.lists(half_plane, min_size=3, max_size=3), vectors, vectors, st.fractions(Fraction(1, 10), 10))
def test_comparison_ignores_positive_scaling(vals, mu, nu, t):
    c = Charge.of(vals)
    scaled = Charge.of([(a * t, b * t) for a, b in vals])
    assert compare_c(c, mu, nu) == compare_c(scaled, mu, nu) == -compare_c(c, nu, mu)


@given(st.lists(half_plane, min_size=3, max_size=3), vectors, vectors, vectors)
def test_strict_comparison_is_transitive(vals, a, b, c_):
    c = Charge.of(vals)
    if compare_c(c, a, b) == GREATER and compare_c(c, b, c_) == GREATER:
        assert compare_c(c, a, c_) == GREATER


# ------------------------------------------------------------ unsteady idempotents

def test_single_point_is_never_unsteady():
    assert unsteady_idempotents(a2(), (1, 0), Charge.of([(0, 1), (1, 0)])) == []


def test_cb_loading_with_the_old_strand_left_is_unsteady():
    (u,) = unsteady_idempotents(CB, (1, 1), cb_preset(CB))
    # the CB strand sits right of the ghost of the old strand, as in the far-separated 0 then CB loading
    assert u.labels == (0, 1) and u.positions[1] - u.positions[0] > 10
    ws = well_separated(CB, (0, 1))
    assert ws.positions[1] - ws.positions[0] > 10


def test_collinear_charge_has_no_unsteady_idempotents():
    assert unsteady_idempotents(kronecker(), (1, 1), Charge.of([(1, 1), (2, 2)])) == []


# ------------------------------------------------------------ ideals and quotients

def test_empty_ideal_gives_the_algebra():
    comp = SteadyComputation(kronecker(), (1, 1))
    table = comp.quotient_table([], 4)
    for si, s in enumerate(comp.objects):
        for ti, t in enumerate(comp.objects):
            for d, n in comp.alg.graded_dim(s, t, 4):
                assert table[(si, ti, d)] == n


def test_idempotent_generates_itself_in_degree_zero():
    comp = SteadyComputation(kronecker(), (1, 1))
    i = comp.objects[0]
    span = comp.ideal_span([comp.alg.idempotent(i)], i, i, 0)
    assert len(span) == 1


def test_unsteady_idempotents_vanish_in_the_quotient():
    comp, table = steadied_graded_dim(CB, (1, 1), cb_preset(CB), 10)
    (u,) = unsteady_idempotents(CB, (1, 1), cb_preset(CB))
    k = comp.index(u)
    assert all(v == 0 for (s, t, _), v in table.items() if k in (s, t))


def test_cb_quotients():
    comp, table = steadied_graded_dim(CB, (1, 1), cb_preset(CB), 10)
    k = comp.index(enumerate_chambers(CB, (1, 1)).representatives[1])
    assert [table[(k, k, d)] for d in range(11)] == [1, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2]
    comp, table = steadied_graded_dim(CB, (1, 1), cb_preset(CB), 10, reduced=True)
    assert [table[(k, k, d)] for d in range(11)] == [1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]


def test_quotients_shrink_as_generators_are_added():
    comp = SteadyComputation(CB, (1, 1))
    c = cb_preset(CB)
    g1 = unsteady_generators(comp, c)
    g2 = g1 + reduced_generators(CB, (1, 1), comp.alg)
    t0, t1, t2 = (comp.quotient_table(g, 6) for g in ([], g1, g2))
    assert all(t0[k] >= t1[k] >= t2[k] for k in t0)


@pytest.mark.parametrize("q,nu,c", [
    (CB, (1, 1), cb_preset(CB)),
    (kronecker(), (1, 1), Charge.of([(0, 1), (1, 0)])),
    (kronecker(), (1, 1), Charge.of([(1, 0), (0, 1)])),
])
def test_quotient_tables_are_star_symmetric(q, nu, c):
    # ghost crossings carry their whole degree in one direction, so star shifts
    # degrees by the difference of the two straight-line degrees
    comp, table = steadied_graded_dim(q, nu, c, 10)
    alg, objs = comp.alg, comp.objects
    for si, s in enumerate(objs):
        for ti, t in enumerate(objs):
            shift = alg.basis_degree(like_matching(t, s), t, s) - alg.basis_degree(like_matching(s, t), s, t)
            for d in range(-2, 10 - max(shift, 0) + 1):
                assert table.get((si, ti, d), 0) == table.get((ti, si, d + shift), 0)


def element_from(src, tgt, row, n):
    coeffs = {}
    for (pi, exp), c in row.items():
        coeffs[pi] = coeffs.get(pi, Poly.zero(n)) + Poly.monomial(exp) * c
    return WklrElement.build(src, tgt, coeffs)


def test_ideal_is_closed_under_dots():
    comp = SteadyComputation(kronecker(), (1, 1))
    c = Charge.of([(0, 1), (1, 0)])
    gens = unsteady_generators(comp, c)
    assert gens
    for s in comp.objects:
        for t in comp.objects:
            span = comp.ideal_span(gens, s, t, 2)
            up = comp.ideal_span(gens, s, t, 4)
            for row in span:
                x = element_from(s, t, row, 2)
                for k in range(2):
                    for y in (comp.alg.multiply(comp.alg.dot(t, k), x), comp.alg.multiply(x, comp.alg.dot(s, k))):
                        assert len(_extend(up, coordinates(y))) == len(up)


def _extend(span, row):
    return _rank_rows(list(span) + [row], _coord_key)


# ------------------------------------------------------------ reduced generators

def test_reduced_generators_need_one_cb_strand():
    with pytest.raises(ChargeError):
        reduced_generators(a2(), (1, 1))
    with pytest.raises(ChargeError):
        reduced_generators(CB, (1, 2))
    with pytest.raises(ChargeError):
        reduced_generators(CB, (1, 0))
    gens = reduced_generators(CB, (1, 1))
    assert len(gens) == len(enumerate_chambers(CB, (1, 1)))


def test_size_bound(monkeypatch):
    monkeypatch.setenv("WKLR_MAX_POINTS", "1")
    with pytest.raises(SizeError):
        SteadyComputation(CB, (1, 1))


def test_table_csv():
    assert table_csv({(0, 1, 2): 3, (0, 0, 0): 1}) == "src_index,tgt_index,degree,dim\n0,0,0,1\n0,1,2,3\n"
