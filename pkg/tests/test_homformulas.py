import pytest

from schurlab.abelian import AbelianStructure
from schurlab.homformulas import (
    H2Prediction,
    h1_sl2_formula,
    h2_B_formula,
    h2_sl2_predict,
    kunneth_combine,
    verdict,
)
from schurlab.ring_core import (
    make_finite_field,
    make_galois_ring,
    make_gilmer_f,
    make_quasi_galois,
    make_truncated_multivariate,
    make_zmod,
    product,
)


def S(*orders):
    return AbelianStructure.from_orders(orders)


def test_h1_formula():
    assert h1_sl2_formula(make_zmod(2, 2)) == S(4)
    assert h1_sl2_formula(make_finite_field(2, 2)).is_trivial()
    assert h1_sl2_formula(make_quasi_galois(2, 1, 3)) == S(2, 2)
    assert h1_sl2_formula(make_zmod(3, 3)) == S(3)
    assert h1_sl2_formula(make_finite_field(7, 1)).is_trivial()


@pytest.mark.parametrize("A, expected, branch", [
    (make_finite_field(7, 1), S(), "unit_wedge"),
    (make_finite_field(3, 2), S(3), "wedge_plus_coinvariants"),
    (make_quasi_galois(5, 1, 2), S(5), "wedge_plus_coinvariants"),
    (make_finite_field(11, 1), S(), "unit_wedge"),
    (make_zmod(3, 2), S(), "residue_three_cyclic"),
    (make_quasi_galois(3, 1, 2), S(3, 3), "residue_three_cyclic"),
    (make_truncated_multivariate(7, 1, 2), S(7), "unit_wedge"),
], ids=lambda x: getattr(x, "label", None))
def test_borel_formula(A, expected, branch):
    b = h2_B_formula(A)
    assert b.structure == expected and b.branch == branch


def test_borel_formula_branches_agree_where_both_apply():
    for A in (make_finite_field(7, 1), make_finite_field(11, 1), make_zmod(7, 2),
              make_truncated_multivariate(7, 1, 2), make_galois_ring(7, 2, 1)):
        b = h2_B_formula(A)
        assert b.structure == b.alternates["wedge_plus_coinvariants"]


def test_borel_formula_not_applicable():
    assert not h2_B_formula(make_quasi_galois(2, 1, 2)).valid
    assert not h2_B_formula(make_truncated_multivariate(3, 1, 2)).valid


@pytest.mark.parametrize("A, expected, kind", [
    (make_finite_field(3, 2), S(3), "exact"),
    (make_finite_field(2, 2), S(2), "exact"),
    (make_finite_field(13, 1), S(), "exact"),
    (make_quasi_galois(7, 1, 3), S(), "exact"),
    (make_gilmer_f(), S(2, 2, 2), "exact"),
    (make_zmod(2, 2), S(2), "exact"),
    (make_zmod(3, 3), S(), "exact"),
    (make_quasi_galois(2, 1, 2), S(2, 2), "exact"),
    (make_quasi_galois(5, 1, 2), S(5), "exact"),
    (make_quasi_galois(2, 1, 3), S(2, 2, 2), "exact"),
    (make_truncated_multivariate(7, 1, 2), S(7), "exact"),
    (make_galois_ring(7, 2, 2), S(), "exact"),
    (make_quasi_galois(3, 1, 3), S(3), "reported"),
    (make_quasi_galois(2, 1, 5), S(2, 2, 2, 2, 2), "reported"),
    (make_quasi_galois(2, 1, 6), S(2, 2, 2, 2, 2, 2), "conjecture"),
    (make_zmod(2, 3), S(2), "conjecture"),
    (make_galois_ring(3, 2, 2), S(3), "conjecture"),
], ids=lambda x: getattr(x, "label", None))
def test_sl2_predictions(A, expected, kind):
    pred = h2_sl2_predict(A)
    assert pred.kind == kind and pred.structure == expected
    assert pred.provenance


def test_sl2_prediction_excluded_residue_fields():
    assert h2_sl2_predict(make_truncated_multivariate(3, 1, 2)).kind == "not_covered"
    assert h2_sl2_predict(make_quasi_galois(3, 2, 2)).kind == "not_covered"


def test_pir_constraint():
    from schurlab.ring_core import make_pir
    A = make_pir(7, 2, 1, [7, 0], 1)
    pred = h2_sl2_predict(A)
    assert pred.kind == "constraint" and pred.constraint == "cyclic 7-group"
    assert verdict(S(7), pred)["verdict"] == "match"
    assert verdict(S(7, 7), pred)["verdict"] == "mismatch"
    assert h2_sl2_predict(A, e=2, r=0).kind == "exact"


@pytest.mark.parametrize("A, B, expected", [
    (make_finite_field(2, 1), make_finite_field(2, 1), S(2)),
    (make_finite_field(3, 1), make_finite_field(3, 1), S(3)),
    (make_finite_field(2, 2), make_finite_field(5, 1), S(2)),
    (make_finite_field(2, 1), make_finite_field(3, 1), S()),
    (make_zmod(2, 2), make_quasi_galois(2, 1, 2), S(2, 2, 2, 2, 2)),
])
def test_kunneth(A, B, expected):
    from schurlab.homformulas import cyclic_units_table
    h2A, h2B = cyclic_units_table(A).structure, cyclic_units_table(B).structure
    assert kunneth_combine(A, B, h2A, h2B) == expected
    assert h2_sl2_predict(product(A, B)).structure == expected


def test_verdicts():
    exact = H2Prediction(S(2), "x")
    assert verdict(S(2), exact)["verdict"] == "match"
    assert verdict(S(4), exact)["verdict"] == "mismatch"
    conj = H2Prediction(S(2), "y", "conjecture")
    assert verdict(S(4), conj) == {"verdict": "conjecture", "agrees": False}
    assert verdict(None, exact)["verdict"] == "not_covered"
