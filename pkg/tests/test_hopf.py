import pytest

from schurlab.abelian import AbelianStructure
from schurlab.hopf import (
    ResourceRefusal,
    abelianization,
    check_size,
    exponent_sums,
    fox_jacobian,
    h1_bar_oracle,
    h2_bar_oracle,
    schur_multiplier,
)
from schurlab.matgroup import (
    abelian_group,
    alternating_group,
    cyclic_group,
    dihedral_group,
    enumerate_sl2,
    quaternion_group,
    subgroup_B,
    symmetric_group,
)
from schurlab.presentation import certify_presentation
from schurlab.ring_core import make_finite_field, make_quasi_galois, make_zmod


def S(*orders):
    return AbelianStructure.from_orders(orders)


SMALL = [
    (cyclic_group(6), S()),
    (abelian_group([2, 2]), S(2)),
    (abelian_group([2, 2, 2]), S(2, 2, 2)),
    (abelian_group([3, 3]), S(3)),
    (symmetric_group(3), S()),
    (quaternion_group(), S()),
    (dihedral_group(4), S(2)),
    (dihedral_group(6), S(2)),
    (alternating_group(4), S(2)),
    (symmetric_group(4), S(2)),
    (enumerate_sl2(make_finite_field(3, 1)), S()),
]


@pytest.mark.parametrize("G, h2", SMALL, ids=lambda x: getattr(x, "label", None))
def test_hopf_frozen_and_bar_oracle(G, h2):
    res = schur_multiplier(G)
    assert res.h2 == h2
    assert h2_bar_oracle(G) == h2
    assert res.h1 == h1_bar_oracle(G)


@pytest.mark.parametrize("A, h1, h2", [
    (make_finite_field(2, 2), S(), S(2)),
    (make_zmod(2, 2), S(4), S(2)),
    (make_finite_field(5, 1), S(), S()),
    (make_zmod(3, 2), S(3), S()),
    (make_finite_field(3, 2), S(), S(3)),
    (make_quasi_galois(2, 1, 2), S(2, 2), S(2, 2)),
    (make_quasi_galois(3, 1, 2), S(3), S()),
], ids=lambda x: getattr(x, "label", None))
def test_sl2_multipliers(A, h1, h2):
    res = schur_multiplier(enumerate_sl2(A))
    assert res.h1 == h1 and res.h2 == h2


def test_fox_jacobian_shape_and_chain_condition():
    G = symmetric_group(3)
    P = certify_presentation(G)
    F = fox_jacobian(P, G)
    assert F.d2.nrows == G.order * P.n_gens and F.d2.ncols == G.order * len(P.relators)
    d1 = F.d1(G).to_dense()
    d2 = F.d2.to_dense()
    prod_ = [[sum(d1[i][k] * d2[k][j] for k in range(len(d2))) for j in range(len(d2[0]))] for i in range(len(d1))]
    assert all(v == 0 for row in prod_ for v in row)
    assert exponent_sums(P) == [list(r) for r in F.N.to_dense()]


def test_presentation_independence():
    G = enumerate_sl2(make_finite_field(2, 2))
    a = schur_multiplier(G, certify_presentation(G)).h2
    b = schur_multiplier(G, certify_presentation(G, strategy="prefix")).h2
    gens = list(G.generators) + [G.mul(G.generators[0], G.generators[1])]
    H = G.with_generators(gens[::-1])
    c = schur_multiplier(H).h2
    assert a == b == c == S(2)


def test_borel_multipliers():
    assert schur_multiplier(subgroup_B(make_finite_field(3, 2))).h2 == S(3)
    assert schur_multiplier(subgroup_B(make_quasi_galois(3, 1, 2))).h2 == S(3, 3)


def test_uncertified_presentation_rejected():
    from schurlab.presentation import Presentation
    G = cyclic_group(4)
    with pytest.raises(ValueError):
        schur_multiplier(G, Presentation(1, [(1, 1, 1, 1)]))


def test_resource_refusal():
    with pytest.raises(ResourceRefusal):
        check_size(24576)
    with pytest.raises(ResourceRefusal):
        check_size(6000)
    check_size(6000, tier2=True)
    with pytest.raises(ResourceRefusal):
        h2_bar_oracle(cyclic_group(30))


def test_abelianization_cross_check():
    assert abelianization(enumerate_sl2(make_zmod(2, 2))) == S(4)
