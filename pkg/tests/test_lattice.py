from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dptangle import lattice
import oracles

small = st.integers(-9, 9)
vec = st.tuples(small, small)
vecs = st.lists(vec, min_size=0, max_size=5)


def content(vs):
    g = 0
    for x, y in vs:
        g = gcd(g, gcd(x, y))
    return g


def test_hnf_shapes():
    assert lattice.hnf_basis([]) == ()
    assert lattice.hnf_basis([(0, 0)]) == ()
    assert lattice.hnf_basis([(-2, -4)]) == ((2, 4),)
    assert lattice.hnf_basis([(0, -3)]) == ((0, 3),)
    assert lattice.hnf_basis([(1, 0), (0, 1)]) == ((1, 0), (0, 1))
    assert lattice.hnf_basis([(2, 1), (0, 3)]) == ((2, 1), (0, 3))
    assert lattice.hnf_basis([(2, 4), (1, 2)]) == ((1, 2),)


@given(vecs)
def test_hnf_basis_is_canonical(vs):
    basis = lattice.hnf_basis(vs)
    assert lattice.hnf_basis(basis) == basis
    assert lattice.hnf_basis(list(reversed(vs))) == basis
    assert lattice.hnf_basis([(-x, -y) for x, y in vs]) == basis
    if len(basis) == 2:
        (a, b), (z, d) = basis
        assert a > 0 and z == 0 and d > 0 and 0 <= b < d


@given(vecs)
def test_rank_matches_determinantal_divisors(vs):
    basis = lattice.hnf_basis(vs)
    order = oracles.quotient_order(vs)
    if order is not None:
        assert lattice.rank(basis) == 2
        assert lattice.index(basis) == order
    elif content(vs):
        assert lattice.rank(basis) == 1
        # the single generator carries the gcd of all coordinates
        assert content(basis) == content(vs)
    else:
        assert basis == ()


@given(vecs, vec)
def test_membership_agrees_with_index_growth(vs, v):
    basis = lattice.hnf_basis(vs)
    inside = lattice.contains(basis, v)
    if len(basis) == 2:
        assert inside == (oracles.quotient_order([*vs, v]) == oracles.quotient_order(vs))
    elif len(basis) == 1:
        (a, b), = basis
        collinear = a * v[1] - b * v[0] == 0
        assert inside == (collinear and content([v]) % content(basis) == 0)
    else:
        assert inside == (tuple(v) == (0, 0))


@given(vecs, vec)
def test_reduce_mod_is_a_representative(vs, v):
    basis = lattice.hnf_basis(vs)
    r = lattice.reduce_mod(v, basis)
    assert lattice.contains(basis, (v[0] - r[0], v[1] - r[1]))
    assert lattice.reduce_mod(r, basis) == r


def test_normalize_and_primitive():
    assert lattice.normalize_sign((-1, 2)) == (1, -2)
    assert lattice.normalize_sign((0, -3)) == (0, 3)
    assert lattice.normalize_sign((2, -1)) == (2, -1)
    assert lattice.primitive((4, -6)) == (2, -3)
    assert lattice.primitive((0, 0)) == (0, 0)


@given(vec)
def test_normalize_sign_identifies_negatives(v):
    assert lattice.normalize_sign(v) == lattice.normalize_sign((-v[0], -v[1]))
    assert lattice.normalize_sign(lattice.normalize_sign(v)) == lattice.normalize_sign(v)


def test_matrix_helpers():
    m = lattice.as_matrix([2, 1, 1, 1])
    assert m == ((2, 1), (1, 1))
    assert lattice.det(m) == 1
    assert lattice.apply(m, (1, 0)) == (2, 1)
    assert lattice.columns(m) == ((2, 1), (1, 1))
    inv = lattice.inverse_unimodular(m)
    assert lattice.matmul(m, inv) == ((1, 0), (0, 1))
    assert lattice.solve_exact(((2, 0), (0, 3)), (4, -3)) == (2, -1)
    with pytest.raises(ValueError):
        lattice.solve_exact(((2, 0), (0, 3)), (1, 0))
    with pytest.raises(ValueError):
        lattice.inverse_unimodular(((2, 0), (0, 1)))


@pytest.mark.parametrize("n", range(1, 9))
def test_sublattice_matrices_enumerate_each_sublattice_once(n):
    mats = lattice.sublattice_matrices(n)
    assert len(mats) == sum(k for k in range(1, n + 1) if n % k == 0)
    assert sorted(mats) == sorted(oracles.hermite_matrices(n))
    lattices = {lattice.hnf_basis(lattice.columns(m)) for m in mats}
    assert len(lattices) == len(mats)
    assert all(lattice.index(b) == n for b in lattices)


@settings(max_examples=50)
@given(st.integers(1, 6), st.data())
def test_index_of_sublattice(n, data):
    m = data.draw(st.sampled_from(lattice.sublattice_matrices(n)))
    assert oracles.quotient_order(lattice.columns(m)) == n
