import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_count_flags
from wklr.hall import (FqRep, HallError, QSqrt, check_hq_algebra_map, count_flags, enumerate_reps,
                       func_y, hall_comult, hall_mult, split_rep, subreps, u_dim, unit)
from wklr.loading import Loading, SizeError, enumerate_chambers
from wklr.quiver import a2, a3, kronecker, make_quiver

F = Fraction


def L(*pts):
    return Loading.of([(F(x), v) for v, x in pts])


def v(p, k=1):
    return QSqrt.power(p, k)


ONE_TWO = L((0, 0), (1, 5))
TWO_ONE = L((1, 0), (0, 5))


# ------------------------------------------------------------ sqrt(q) arithmetic

def test_sqrt_squares_to_q():
    assert v(3) * v(3) == 3
    assert v(2, -2) == F(1, 2)
    assert v(2, -1) == QSqrt(2, F(0), F(1, 2))


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_powers_add(a, b):
    assert v(5, a) * v(5, b) == v(5, a + b)


def test_field_mismatch():
    with pytest.raises(HallError):
        v(2) + v(3)


# ------------------------------------------------------------ representations

def test_representation_counts():
    assert len(enumerate_reps(a2(), (1, 1), 2)) == 2
    assert len(enumerate_reps(a2(), (1, 0), 2)) == 1
    assert len(enumerate_reps(kronecker(), (1, 1), 3)) == 9


def test_representation_bound(monkeypatch):
    monkeypatch.setenv("WKLR_MAX_REPS", "8")
    with pytest.raises(SizeError):
        enumerate_reps(kronecker(), (2, 1), 2)


def test_non_unit_symmetrizers_are_rejected():
    q = make_quiver((1, 2), [(0, 1, 1, 2, 0, {(1, 0): 1, (0, 2): -1})])
    with pytest.raises(HallError):
        enumerate_reps(q, (1, 1), 2)


def rep(p, nu, *mats):
    return FqRep(p, nu, tuple(tuple(tuple(r) for r in m) for m in mats))


def test_flag_counts_on_a2():
    zero, nonzero = rep(2, (1, 1), [[0]]), rep(2, (1, 1), [[1]])
    assert count_flags(a2(), ONE_TWO, zero) == 1
    assert count_flags(a2(), ONE_TWO, nonzero) == 0
    assert count_flags(a2(), TWO_ONE, zero) == 1
    assert count_flags(a2(), TWO_ONE, nonzero) == 1


def test_u_dim_examples():
    assert u_dim(a2(), ONE_TWO) == -2
    assert u_dim(a2(), TWO_ONE) == -1
    assert u_dim(a2(), L((0, 0))) == -1


CASES = [
    (a2(), L((0, 0), (0, 1), (1, F(1, 2)))),
    (a2(-1), L((1, 0), (0, F(1, 2)), (0, 3))),
    (kronecker(), L((0, 0), (1, F(1, 2)), (1, 3))),
    (kronecker(), L((1, 0), (0, F(1, 2)), (1, F(3, 4)))),
    (a3(), L((1, 0), (0, 1), (2, 2), (1, 3))),
]


@pytest.mark.parametrize("q,i", CASES)
def test_flag_counts_match_brute_force(q, i):
    nu = i.nu(q.vertex_count)
    for r in enumerate_reps(q, nu, 2):
        assert count_flags(q, i, r) == brute_count_flags(q, i.positions, i.labels, nu, r.mats, 2)


def random_gl(n, p, rng):
    while True:
        m = sympy.Matrix(n, n, lambda *_: rng.randrange(p))
        if m.det() % p:
            return m


def act(q, r, gs, p):
    mats = []
    for e, m in zip(q.edges, r.mats):
        a = sympy.Matrix(r.nu[e.head], r.nu[e.tail], lambda i, j: m[i][j]) if m else None
        if a is None or 0 in a.shape:
            mats.append(m)
            continue
        b = (gs[e.head] * a * gs[e.tail].inv_mod(p)).applyfunc(lambda x: x % p)
        mats.append(tuple(tuple(int(b[i, j]) for j in range(b.shape[1])) for i in range(b.shape[0])))
    return FqRep(p, r.nu, tuple(mats))


@pytest.mark.parametrize("q,i", CASES[:4])
def test_trace_functions_are_group_invariant(q, i):
    rng = random.Random(7)
    p = 2
    f = func_y(q, i, p)
    reps = enumerate_reps(q, f.nu, p)
    for _ in range(50):
        gs = [random_gl(n, p, rng) if n else None for n in f.nu]
        r = rng.choice(reps)
        assert f(act(q, r, gs, p)) == f(r)


# ------------------------------------------------------------ trace functions

def test_a2_worked_values():
    f = func_y(a2(), ONE_TWO, 2)
    zero, nonzero = rep(2, (1, 1), [[0]]), rep(2, (1, 1), [[1]])
    assert f(zero) == F(1, 2) and f(nonzero) == 0
    g = func_y(a2(), TWO_ONE, 2)
    assert g(zero) == g(nonzero) == v(2, -1)


def test_csv_output():
    f = func_y(a2(), ONE_TWO, 2)
    assert f.to_csv(enumerate_reps(a2(), (1, 1), 2)) == "rep,a,b\n00,1/2,0\n01,0,0\n"


# ------------------------------------------------------------ Hall product

def single(q, vtx, p):
    return func_y(q, L((vtx, 0)), p)


def test_product_of_single_strands_on_a2():
    f, g = single(a2(), 0, 2), single(a2(), 1, 2)
    fg = hall_mult(a2(), f, g)
    assert fg.nu == (1, 1)
    assert fg(rep(2, (1, 1), [[0]])) == F(1, 2)
    assert fg(rep(2, (1, 1), [[1]])) == 0


@pytest.mark.parametrize("q", [a2(), kronecker()])
def test_unit(q):
    f = single(q, 0, 3)
    assert hall_mult(q, f, unit(q, 3)) == f == hall_mult(q, unit(q, 3), f)


def test_field_mismatch_in_product():
    with pytest.raises(HallError):
        hall_mult(a2(), single(a2(), 0, 2), single(a2(), 1, 3))


@pytest.mark.parametrize("q,word", [(a2(), (0, 1, 0)), (a2(), (1, 0, 1)), (kronecker(), (0, 1, 1)),
                                    (kronecker(), (1, 0, 0))])
def test_product_is_associative(q, word):
    f, g, h = (single(q, w, 2) for w in word)
    assert hall_mult(q, hall_mult(q, f, g), h) == hall_mult(q, f, hall_mult(q, g, h))


def test_split_rep_of_the_zero_submodule():
    m = rep(3, (1, 1), [[2]])
    (sub,) = list(subreps(a2(), m, (0, 1)))
    n, qr = split_rep(a2(), m, sub)
    assert n.nu == (0, 1) and qr.nu == (1, 0)
    assert list(subreps(a2(), m, (1, 0))) == []


def gaussian(n, k, p):
    num = den = 1
    for j in range(k):
        num *= p ** (n - j) - 1
        den *= p ** (j + 1) - 1
    return num // den


@pytest.mark.parametrize("n,k,p", [(2, 1, 2), (3, 1, 3), (3, 2, 2), (4, 2, 2)])
def test_subrepresentations_of_the_zero_rep_are_grassmannians(n, k, p):
    q = make_quiver((1,), [])
    assert len(list(subreps(q, FqRep(p, (n,), ()), (k,)))) == gaussian(n, k, p)


# ------------------------------------------------------------ algebra map

@pytest.mark.parametrize("q", [a2(), a2(-1), kronecker()])
@pytest.mark.parametrize("p", [2, 3])
def test_single_strands_map_to_the_product(q, p):
    for a, b in product(range(2), repeat=2):
        assert check_hq_algebra_map(q, L((a, 0)), L((b, 0)), p).ok


def test_empty_factor_passes():
    assert check_hq_algebra_map(a2(), ONE_TWO, Loading.empty(), 2).ok


def test_every_kronecker_chamber_of_a_composite():
    q = kronecker()
    for i in enumerate_chambers(q, (1, 1)).representatives:
        assert check_hq_algebra_map(q, i, L((0, 0)), 2).ok
        assert check_hq_algebra_map(q, L((1, 0)), i, 2).ok


def test_wrong_twist_is_detected():
    assert not check_hq_algebra_map(a2(), L((1, 0)), L((0, 0)), 2, twist_sign=1).ok


def test_check_table_lists_every_point():
    chk = check_hq_algebra_map(a2(), L((0, 0)), L((1, 0)), 2)
    assert [r for r, _, _ in chk.rows] == ["00", "01"]
    assert chk.table().splitlines()[0] == "rep\tlhs\trhs"


# ------------------------------------------------------------ coproduct (experimental)

def test_coproduct_with_empty_quotient_is_the_function():
    q = kronecker()
    f = func_y(q, L((0, 0), (1, F(1, 2))), 3)
    d = hall_comult(q, f, (1, 1), (0, 0))
    for r in enumerate_reps(q, (1, 1), 3):
        assert d.get((r.key(), b""), QSqrt(3)) == f(r)


def test_coproduct_of_the_unit():
    q = a2()
    assert hall_comult(q, unit(q, 2), (0, 0), (0, 0)) == {(b"", b""): QSqrt(2, F(1))}


def test_coproduct_rejects_bad_splits():
    with pytest.raises(HallError):
        hall_comult(a2(), single(a2(), 0, 2), (0, 1), (0, 0))


def test_coproduct_calibration_values():
    # recorded values of the experimental normalization at p = 2
    q = a2()
    f, g = single(q, 0, 2), single(q, 1, 2)
    fg, gf = hall_mult(q, f, g), hall_mult(q, g, f)
    key = (b"", b"")
    assert hall_comult(q, fg, (1, 0), (0, 1))[key] == F(1, 4)
    assert hall_comult(q, fg, (0, 1), (1, 0))[key] == v(2) * F(1, 4)
    assert hall_comult(q, gf, (1, 0), (0, 1))[key] == v(2) * F(1, 4)
    assert hall_comult(q, gf, (0, 1), (1, 0))[key] == 1
