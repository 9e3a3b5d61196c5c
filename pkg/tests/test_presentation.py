import pytest

from schurlab.matgroup import cyclic_group, dihedral_group, enumerate_sl2, symmetric_group
from schurlab.presentation import (
    CosetOverflow,
    Presentation,
    PresentationError,
    certify_presentation,
    cyclic_reduce,
    evaluate_word,
    free_reduce,
    harvest_relators,
    invert_word,
    relators_hold,
    text_to_word,
    todd_coxeter,
    word_to_text,
)
from schurlab.ring_core import make_finite_field, make_zmod


def test_word_operations():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert invert_word((1, -2, 3)) == (-3, 2, -1)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    w = (1, 2, -1, -2)
    assert text_to_word(word_to_text(w)) == w


@pytest.mark.parametrize("rels, order", [
    ([(1, 1, 1, 1, 1)], 5),
    ([(1, 1, 1), (2, 2), (1, 2, 1, 2)], 6),                    # S3
    ([(1, 1, 1, 1), (1, 1, -2, -2), (1, 2, 1, -2)], 8),        # Q8
    ([(1, 1), (2, 2, 2), (1, 2) * 5], 60),                      # A5
])
def test_todd_coxeter_known(rels, order):
    n = max(abs(x) for r in rels for x in r)
    assert todd_coxeter(n, rels) == order


def test_todd_coxeter_subgroup_index():
    rels = [(1, 1), (2, 2, 2), (1, 2) * 5]
    assert todd_coxeter(2, rels, [(2,)]) == 20


def test_todd_coxeter_overflow():
    with pytest.raises(CosetOverflow):
        todd_coxeter(2, [(1, 1), (2, 2, 2), (1, 2) * 7], max_cosets=200)


def test_cyclic_certifies_with_one_relator():
    P = certify_presentation(cyclic_group(7))
    assert P.certified and P.relators == [(1,) * 7]


@pytest.mark.parametrize("G", [
    symmetric_group(4), dihedral_group(6), enumerate_sl2(make_finite_field(5, 1)),
    enumerate_sl2(make_zmod(3, 2)),
], ids=lambda G: G.label)
def test_certified_presentations(G):
    P = certify_presentation(G)
    assert P.certified and P.group_order_certified == G.order
    assert relators_hold(G, P.relators)
    assert todd_coxeter(P.n_gens, P.relators) == G.order
    for r in P.relators:
        assert evaluate_word(G, r) == G.identity


def test_prefix_strategy():
    G = enumerate_sl2(make_finite_field(5, 1))
    P = certify_presentation(G, strategy="prefix")
    assert P.certified and todd_coxeter(P.n_gens, P.relators) == 120


def test_harvest_sorted_and_valid():
    G = symmetric_group(3)
    rels = harvest_relators(G)
    assert rels and relators_hold(G, rels)
    assert [len(r) for r in rels] == sorted(len(r) for r in rels)


def test_bad_relator_rejected():
    with pytest.raises(PresentationError):
        certify_presentation(cyclic_group(5), relators=[(1, 1, 1)])


def test_text_roundtrip():
    P = Presentation(2, [(1, 1), (1, -2, 1, 2)])
    Q = Presentation.from_text(P.to_text())
    assert Q.relators == P.relators and Q.n_gens == 2
