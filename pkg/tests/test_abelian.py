import random

import pytest
from hypothesis import given, settings, strategies as st

from schurlab.abelian import (
    AbelianStructure,
    IntMatrix,
    PresentedAbelian,
    coinvariants,
    diagonal,
    elementary_divisors,
    hnf,
    kernel_basis,
    lattice_equal,
    smith_normal_form,
    structure_of_presented,
    subgroup_from_mult,
    subquotient_structure,
    wedge_presentation,
    wedge_square,
)


def matmul(X, Y):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*Y)] for row in X]


def det(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(n))


def S(*orders):
    return AbelianStructure.from_orders(orders)


# -- Smith normal form

@pytest.mark.parametrize("M, diag_expected", [
    ([[2, 4], [6, 8]], [2, 4]),
    ([[0, 0], [0, 0]], [0, 0]),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
])
def test_snf_frozen(M, diag_expected):
    Sm, U, V = smith_normal_form(M)
    assert diagonal(Sm) == diag_expected
    assert matmul(matmul(U, M), V) == Sm
    assert abs(det(U)) == 1 and abs(det(V)) == 1


small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(small_matrix, st.randoms(use_true_random=False))
def test_snf_invariant_under_unimodular_change(M, rnd):
    d0 = [d for d in diagonal(smith_normal_form(M)[0])]
    M2 = [row[:] for row in M]
    for _ in range(6):
        i, j = rnd.randrange(len(M2)), rnd.randrange(len(M2))
        if i != j:
            k = rnd.randint(-3, 3)
            M2[i] = [a + k * b for a, b in zip(M2[i], M2[j])]
        rnd.shuffle(M2)
    Sm, U, V = smith_normal_form(M2)
    assert diagonal(Sm) == d0
    assert matmul(matmul(U, M2), V) == Sm
    ds = [d for d in d0 if d]
    assert all(b % a == 0 for a, b in zip(ds, ds[1:]))


# -- kernels

def test_kernel_examples():
    assert [abs(x) for x in kernel_basis([[1, 1]])[0]] == [1, 1]
    assert kernel_basis([[2]]) == []
    K = kernel_basis([[1, 2, 3]])
    assert len(K) == 2
    assert all(sum(a * b for a, b in zip([1, 2, 3], v)) == 0 for v in K)
    assert lattice_equal(K, [[2, -1, 0], [3, 0, -1]], 3)


@settings(max_examples=60, deadline=None)
@given(small_matrix)
def test_kernel_is_saturated(M):
    ncols = len(M[0])
    K = kernel_basis(M)
    for v in K:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
    rank = len(elementary_divisors(M, ncols))
    assert len(K) == ncols - rank
    if K:
        # saturated: Z^n / K is torsion free
        assert all(d == 1 for d in elementary_divisors(K, ncols))


# -- presented groups

def test_structure_of_presented_examples():
    assert structure_of_presented(PresentedAbelian(1, [[5]])) == S(5)
    assert structure_of_presented(PresentedAbelian(2, [[2, 0], [0, 2]])) == S(2, 2)
    redundant = [[6, 0], [0, 4], [6, 4], [12, 8], [0, 0]]
    assert structure_of_presented(PresentedAbelian(2, redundant)) == AbelianStructure((2, 12))
    assert structure_of_presented(PresentedAbelian(3, [[1, 1, 0]])) == AbelianStructure((), 2)


def test_presented_row_order_irrelevant():
    rows = [[4, 2, 0], [0, 6, 3], [2, 0, 8]]
    a = structure_of_presented(PresentedAbelian(3, rows))
    b = structure_of_presented(PresentedAbelian(3, rows[::-1]))
    c = structure_of_presented(PresentedAbelian(3, IntMatrix.from_dense(rows, 3)))
    assert a == b == c


def test_abelian_structure_canonical():
    assert S(6, 4) == AbelianStructure((2, 12))
    assert str(S(2, 12, 0)) == "Z/2 + Z/12 + Z"
    assert str(AbelianStructure()) == "0"
    assert S(4, 2).elementary_divisors() == [2, 4]
    assert S(6).is_cyclic() and not S(2, 2).is_cyclic()
    assert S(3, 9).is_p_group(3) and not S(6).is_p_group(3)
    assert S(2, 3).tensor(S(4)) == S(2)
    assert AbelianStructure.from_json(S(2, 12, 0).to_json()) == S(2, 12, 0)
    with pytest.raises(ValueError):
        AbelianStructure((4, 6))


# -- multiplicative groups

def test_subgroup_from_mult_units():
    units4 = [1, 3]
    assert subgroup_from_mult(units4, lambda a, b: a * b % 4, 1).structure == S(2)
    u16 = [x for x in range(16) if x % 2]
    dec = subgroup_from_mult(u16, lambda a, b: a * b % 16, 1)
    assert dec.structure == S(2, 4)
    assert subgroup_from_mult([0], lambda a, b: 0, 0).structure.is_trivial()


def test_subgroup_from_mult_generators_realize():
    n = 63
    units = [x for x in range(1, n) if __import__("math").gcd(x, n) == 1]
    dec = subgroup_from_mult(units, lambda a, b: a * b % n, 1)
    assert dec.structure.order == len(units)
    span = {1}
    for g, d in zip(dec.generators, dec.structure.invariant_factors):
        assert pow(g, d, n) == 1
        span = {s * pow(g, e, n) % n for s in span for e in range(d)}
    assert span == set(units)


def test_subgroup_from_mult_rejects_non_closed():
    with pytest.raises(ValueError):
        subgroup_from_mult([1, 2], lambda a, b: a * b % 5, 1)


# -- wedge and coinvariants

def test_wedge_square_examples():
    assert wedge_square(S(7)).is_trivial()
    assert wedge_square(S(2, 2, 2)) == S(2, 2, 2)
    assert wedge_square(S(4, 2)) == S(2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 8, 9, 5, 25]), min_size=1, max_size=4))
def test_wedge_closed_form_matches_presentation(orders):
    _, P = wedge_presentation(orders)
    assert structure_of_presented(P) == wedge_square(AbelianStructure.from_orders(orders))


def test_coinvariants():
    P = PresentedAbelian(2, [[4, 0], [0, 4]])
    assert coinvariants(P, []) == S(4, 4)
    swap = [[0, 1], [1, 0]]
    assert coinvariants(P, [swap]) == S(4)
    minus = [[-1, 0], [0, -1]]
    assert coinvariants(P, [minus]) == S(2, 2)
    with pytest.raises(ValueError):
        coinvariants(PresentedAbelian(2, [[2, 0], [0, 4]]), [swap])


def test_subquotient_and_hnf():
    H = hnf([[2, 4], [0, 6]], 2)
    assert lattice_equal(H, [[2, 4], [0, 6]], 2)
    assert subquotient_structure([[1, 0]], [[4, 0], [0, 3]], 2) == S(4)
