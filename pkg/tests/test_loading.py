from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import zaslavsky_chambers
from wklr.loading import (RIGHT, Loading, LoadingError, SizeError, compose,
                          enumerate_chambers, equivalent, ghosts, is_generic,
                          oracle_chamber_count, separation_constant, shift_eta, shift_loading,
                          shift_weights, signature, tree_potential, well_separated)
from wklr.quiver import a1, a2, a3, jordan, kronecker

F = Fraction


def L(*pts):
    return Loading.of([(F(x), v) for v, x in pts])


# ------------------------------------------------------------ genericity

def test_generic_a2_example():
    assert is_generic(a2(), L((0, 0), (1, 1)))


def test_coinciding_points_are_rejected():
    with pytest.raises(LoadingError):
        L((0, 1), (1, 1))


def test_ghost_on_a_strand_is_not_generic():
    assert not is_generic(a2(-1), L((0, 0), (1, 1)))


def test_ghost_positions_follow_the_head():
    (g,) = ghosts(a2(F(1, 2)), L((0, 0), (1, 3)))
    assert g == (F(7, 2), 0, 1)


def test_weight_zero_loop_coincidences_are_allowed():
    assert is_generic(jordan(0), L((0, 0), (0, 1)))


# ------------------------------------------------------------ signatures

def test_kronecker_far_right_head_point():
    sig = dict(signature(kronecker(), L((0, 0), (1, 5))))
    assert set(sig.values()) == {RIGHT}


def test_single_point_has_empty_signature():
    assert signature(a2(), L((0, 0))) == ()


@given(st.fractions(min_value=-20, max_value=20, max_denominator=7))
def test_signature_is_translation_invariant(dx):
    i = L((0, 0), (1, F(1, 2)), (1, 3))
    assert signature(kronecker(), i) == signature(kronecker(), i.translate(dx))


def test_non_generic_signature_raises():
    with pytest.raises(LoadingError):
        signature(a2(-1), L((0, 0), (1, 1)))


def test_equivalence_ignores_the_unloading_order():
    # x0 - 1 < x1 < x0 + 1: the middle chamber contains loadings with either order
    q = kronecker()
    assert equivalent(q, L((0, 0), (1, F(1, 2))), L((1, 0), (0, F(1, 2))))
    assert not equivalent(q, L((0, 0), (1, 2)), L((0, 0), (1, F(1, 2))))


# ------------------------------------------------------------ chambers

def test_kronecker_has_three_chambers():
    assert len(enumerate_chambers(kronecker(), (1, 1))) == 3


def test_a2_has_two_chambers():
    assert len(enumerate_chambers(a2(), (1, 1))) == 2


def test_no_walls_gives_one_chamber():
    assert len(enumerate_chambers(a1(), (2,))) == 1


def test_chamber_representatives_are_generic_and_distinct():
    cs = enumerate_chambers(kronecker(), (2, 1))
    assert all(is_generic(kronecker(), r) for r in cs.representatives)
    assert len(set(cs.signatures)) == len(cs)
    assert all(r.positions[0] == 0 for r in cs.representatives)


def test_every_loading_lands_in_exactly_one_chamber():
    q = kronecker()
    cs = enumerate_chambers(q, (1, 1))
    grid = [F(k, 3) for k in range(-9, 10)]
    for x in grid:
        i = L((0, 0), (1, x)) if x else None
        if i is None or not is_generic(q, i):
            continue
        hits = [r for r in cs.representatives if equivalent(q, r, i)]
        assert len(hits) == 1


def test_size_bound(monkeypatch):
    monkeypatch.setenv("WKLR_MAX_POINTS", "3")
    with pytest.raises(SizeError):
        enumerate_chambers(a2(), (2, 2))


SMALL = [
    (a1(), [(1,), (2,), (3,)]),
    (a2(0), [(1, 1), (2, 1), (2, 2)]),
    (a2(-1), [(1, 1), (2, 1), (2, 2)]),
    (kronecker(), [(1, 1), (2, 1), (1, 2), (2, 2)]),
    (a3(), [(1, 1, 1), (2, 1, 1)]),
    (jordan(0), [(2,), (3,)]),
    (jordan(1), [(2,), (3,), (4,)]),
]


@pytest.mark.parametrize("q,nus", SMALL)
def test_chamber_counts_match_zaslavsky(q, nus):
    for nu in nus:
        assert len(enumerate_chambers(q, nu)) == zaslavsky_chambers(q, nu)


def test_jordan_loop_of_weight_one_gives_catalan_numbers():
    assert [len(enumerate_chambers(jordan(1), (n,))) for n in range(1, 6)] == [1, 2, 5, 14, 42]


@pytest.mark.parametrize("q,nu", [(kronecker(), (2, 2)), (a3(), (1, 2, 1)), (jordan(1), (4,))])
def test_sign_vector_oracle_agrees(q, nu):
    assert len(enumerate_chambers(q, nu)) == oracle_chamber_count(q, nu)


# ------------------------------------------------------------ composition

def test_compose_units():
    i = L((0, 0), (1, 1))
    assert compose(a2(), i, Loading.empty()) == i
    assert compose(a2(), Loading.empty(), i) == i


def test_compose_places_the_second_loading_beyond_the_gap():
    out = compose(a2(), L((0, 0)), L((1, 0)), s=2)
    assert out.labels == (0, 1) and out.positions[0] == 0 and out.positions[1] > 2
    ((_, sign),) = signature(a2(), out)
    assert sign == RIGHT


@given(st.sampled_from([a2(0), a2(-1), kronecker()]), st.integers(0, 2), st.integers(0, 2))
def test_compose_restricts_to_the_factors(q, a, b):
    reps = enumerate_chambers(q, (1, 1)).representatives
    i, j = reps[a % len(reps)], reps[b % len(reps)]
    ij = compose(q, i, j)
    assert is_generic(q, ij)
    left = Loading(ij.positions[:2], ij.labels[:2])
    right = Loading(ij.positions[2:], ij.labels[2:])
    assert signature(q, left) == signature(q, i)
    assert signature(q, right) == signature(q, j)


def test_well_separated_loadings():
    q = a2()
    s = separation_constant(q)
    assert well_separated(q, (0, 1)) == Loading((F(0), s), (0, 1))
    assert well_separated(q, ()) == Loading.empty()
    k = kronecker()
    i = well_separated(k, (0, 1))
    assert i.positions[1] - 1 > i.positions[0]


# ------------------------------------------------------------ cohomologous shifts

def test_zero_shift_is_the_identity():
    i = L((0, 0), (1, 2))
    assert shift_eta(a2(-1), i, (0, 0)) == (a2(-1), i)


def test_shift_removes_the_a2_weight():
    q2, j = shift_eta(a2(-1), L((0, 0), (1, F(1, 2))), (0, -1))
    assert q2.edges[0].weight == 0
    for nu in [(1, 1), (2, 1), (2, 2)]:
        assert len(enumerate_chambers(q2, nu)) == len(enumerate_chambers(a2(-1), nu))


def test_tree_weights_can_be_shifted_to_zero():
    q = a3(F(5, 2), -3)
    eta = tree_potential(q)
    assert all(e.weight == 0 for e in shift_weights(q, eta).edges)


def test_cycles_cannot_be_shifted_to_zero():
    with pytest.raises(LoadingError):
        tree_potential(kronecker())


@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=2, max_size=2))
def test_shift_preserves_chambers_and_signatures(eta):
    q = kronecker()
    q2 = shift_weights(q, eta)
    for nu in [(1, 1), (2, 1)]:
        cs = enumerate_chambers(q, nu)
        assert len(enumerate_chambers(q2, nu)) == len(cs)
        for r in cs.representatives:
            try:
                j = shift_loading(r, eta)
            except LoadingError:
                continue
            assert is_generic(q2, j)
            assert signature(q2, j) == signature(q, r)


def test_chamber_counts_up_to_four_points_by_brute_force():
    # every sign pattern realised on a fine grid appears among the chambers
    q = a2(-1)
    cs = enumerate_chambers(q, (1, 2))
    grid = [F(k, 2) for k in range(-8, 9)]
    found = set()
    for x, y in product(grid, grid):
        if x == y or 0 in (x, y):
            continue
        i = Loading.of([(0, 0), (x, 1), (y, 1)])
        if is_generic(q, i):
            found.add(signature(q, i))
    assert found == set(cs.signatures)
