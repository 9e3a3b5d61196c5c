"""
Closed-form homology statements for SL_2 and its Borel subgroup over finite local
rings, and a dispatcher that turns them into predictions for H_2(SL_2(A), Z).

Every prediction carries a provenance tag and a kind:

    exact       a proved closed form whose hypotheses were checked
    reported    a value found by machine computation elsewhere, without proof
    constraint  only a qualitative statement (e.g. "cyclic p-group") is available
    conjecture  a pattern the literature asks about; never treated as a claim
    not_covered nothing applies
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import (
    AbelianStructure,
    hnf,
    subquotient_structure,
    wedge_presentation,
    wedge_square,
    coinvariants,
)
from .ktheory import k2_predict, normalized_family
from .ring_core import (
    FiniteRing,
    RingError,
    analyze_local,
    quotient_by_m_power,
    unit_group,
)

UNIT_WEDGE_EXCLUDED = frozenset({2, 3, 4, 5, 8, 9, 16})
K2_ISO_EXCLUDED = frozenset({3, 5, 9})


@dataclass
class H2Prediction:
    structure: AbelianStructure | None
    provenance: str
    kind: str = "exact"
    constraint: str = ""
    conditions: dict = field(default_factory=dict)
    note: str = ""

    @property
    def comparable(self) -> bool:
        return self.kind in ("exact", "reported", "constraint")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "provenance": self.provenance,
            "structure": None if self.structure is None else str(self.structure),
            "invariant_factors": None if self.structure is None else list(self.structure.invariant_factors),
            "constraint": self.constraint,
            "conditions": {k: v for k, v in self.conditions.items()},
            "note": self.note,
        }


def _not_covered(reason: str) -> H2Prediction:
    return H2Prediction(None, "none", "not_covered", note=reason)


def _orders(*ds) -> AbelianStructure:
    return AbelianStructure.from_orders(ds)


def _require_local(A: FiniteRing):
    la = analyze_local(A)
    if not la.is_local:
        raise RingError(f"{A.label} is not local")
    return la


# ----------------------------------------------------------------------------
# H_1

def h1_sl2_formula(A: FiniteRing) -> AbelianStructure:
    """Abelianization of SL_2(A): A/m^2 if |k| = 2, A/m if |k| = 3, else 0."""
    q = _require_local(A).residue_order
    if q == 2:
        return quotient_by_m_power(A, 2)
    if q == 3:
        return quotient_by_m_power(A, 1)
    return AbelianStructure()


# ----------------------------------------------------------------------------
# H_2 of the Borel subgroup

@dataclass
class BorelPrediction:
    structure: AbelianStructure | None
    branch: str                     # unit_wedge | wedge_plus_coinvariants | residue_three_cyclic | not_applicable
    alternates: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.structure is not None


def _modulus_rows(A: FiniteRing) -> list[list[int]]:
    out = []
    for i, e in enumerate(A.additive_type):
        r = [0] * A.rank
        r[i] = e
        out.append(r)
    return out


def _element_lattice(A: FiniteRing, elems) -> list[list[int]]:
    return hnf([list(A.decode(x)) for x in elems] + _modulus_rows(A), A.rank)


def wedge_coinvariants(A: FiniteRing, square_action: bool = True) -> AbelianStructure:
    """(A ^ A) coinvariants under the units, acting by x -> a^2 x (or a x)."""
    orders = list(A.additive_type)
    pairs, P = wedge_presentation(orders)
    if not pairs:
        return AbelianStructure()
    index = {pr: k for k, pr in enumerate(pairs)}
    basis = A.basis()
    actions = []
    for g in unit_group(A).generators:
        s = A.mul(g, g) if square_action else g
        images = [A.decode(A.mul(s, b)) for b in basis]
        M = [[0] * len(pairs) for _ in pairs]
        for col, (i, j) in enumerate(pairs):
            u, v = images[i], images[j]
            for a, ua in enumerate(u):
                if not ua:
                    continue
                for b, vb in enumerate(v):
                    if not vb or a == b:
                        continue
                    if a < b:
                        M[index[(a, b)]][col] += ua * vb
                    else:
                        M[index[(b, a)]][col] -= ua * vb
        actions.append(M)
    return coinvariants(P, actions)


def cyclic_twisted_h1(A: FiniteRing) -> AbelianStructure:
    """H_1(A^x, A) for cyclic A^x acting by squares: A^{A^x} / (sum of a^2) A."""
    U = unit_group(A)
    if not U.structure.is_cyclic():
        raise RingError("unit group is not cyclic")
    g = U.generators[0] if U.generators else A.one
    s = A.mul(g, g)
    shift = A.sub(s, A.one)
    fixed = [x for x in A.elements() if A.mul(shift, x) == A.zero]
    norm = A.zero
    for a in U.units:
        norm = A.add(norm, A.mul(a, a))
    image = {A.mul(norm, x) for x in A.elements()}
    return subquotient_structure(_element_lattice(A, fixed),
                                 [list(A.decode(x)) for x in image] + _modulus_rows(A), A.rank)


def h2_B_formula(A: FiniteRing) -> BorelPrediction:
    la = _require_local(A)
    q = la.residue_order
    U = unit_group(A)
    out = BorelPrediction(None, "not_applicable")
    if q > 3:
        split = wedge_square(U.one_plus_m_structure) + wedge_coinvariants(A)
        out.alternates["wedge_plus_coinvariants"] = split
    if q not in UNIT_WEDGE_EXCLUDED:
        out.structure = wedge_square(U.structure)
        out.branch = "unit_wedge"
        return out
    if q > 3:
        out.structure = out.alternates["wedge_plus_coinvariants"]
        out.branch = "wedge_plus_coinvariants"
        return out
    if q == 3 and U.structure.is_cyclic():
        out.structure = wedge_coinvariants(A) + cyclic_twisted_h1(A)
        out.branch = "residue_three_cyclic"
    return out


# ----------------------------------------------------------------------------
# H_2 of SL_2

def _is_gilmer(A: FiniteRing) -> bool:
    fam = A.family or ()
    if fam[:1] == ("gilmer_f",):
        return True
    if fam[:1] == ("pir",):
        _, p, l, m, coeffs, t = fam
        return (p, l, m, t) == (2, 2, 1, 1) and len(coeffs) == 2
    return False


def cyclic_units_table(A: FiniteRing) -> H2Prediction | None:
    """The rings with cyclic unit group."""
    if _is_gilmer(A):
        return H2Prediction(_orders(2, 2, 2), "cyclic_units_gilmer")
    fam = normalized_family(A)
    kind = fam[0]
    if kind == "field":
        q = fam[1] ** fam[2]
        s = {4: _orders(2), 9: _orders(3)}.get(q, AbelianStructure())
        return H2Prediction(s, "cyclic_units_finite_field", conditions={"q": q})
    if kind == "galois" and fam[3] == 1:
        p, l = fam[1], fam[2]
        if p != 2:
            return H2Prediction(AbelianStructure(), "cyclic_units_zmod_odd", conditions={"p": p, "l": l})
        if l == 2:
            return H2Prediction(_orders(2), "cyclic_units_z4")
        return None
    if kind == "quasi_galois" and fam[2] == 1:
        p, n = fam[1], fam[3]
        if n == 2:
            s = {2: _orders(2, 2), 5: _orders(5)}.get(p, AbelianStructure())
            return H2Prediction(s, "cyclic_units_dual_numbers", conditions={"p": p})
        if p == 2 and n == 3:
            return H2Prediction(_orders(2, 2, 2), "cyclic_units_f2_cubic")
    return None


def h2_sl2_predict(A: FiniteRing, e: int | None = None, r: int | None = None) -> H2Prediction:
    """Expected H_2(SL_2(A), Z), with provenance.

    Order of dispatch: cyclic-unit-group table, the quasi-Galois / truncated /
    Galois vanishing results, the K_2 isomorphism with k2_predict, the cyclic p-group
    constraint for principal ideal rings, then reported values and conjectures.
    """
    fam = normalized_family(A)
    if fam[0] == "product":
        return _predict_product(A)
    la = analyze_local(A)
    if not la.is_local:
        return _not_covered("ring is neither local nor a recognized product")
    hit = cyclic_units_table(A)
    if hit is not None:
        return hit
    p, q = la.residue_char, la.residue_order
    main_applies = p != 2 and q not in K2_ISO_EXCLUDED
    cond = {"residue_char": p, "q": q}
    kind = fam[0]
    if main_applies:
        if kind == "quasi_galois":
            return H2Prediction(AbelianStructure(), "truncated_polynomial_vanishing", conditions=cond)
        if kind == "truncated":
            k2 = k2_predict(A)
            return H2Prediction(k2.structure, "truncated_multivariate_h2", conditions=cond)
        if kind == "galois":
            return H2Prediction(AbelianStructure(), "galois_ring_vanishing", conditions=cond)
        k2 = k2_predict(A, e, r)
        if k2.covered:
            return H2Prediction(k2.structure, "h2_equals_k2+" + k2.provenance,
                                conditions={**cond, **k2.conditions})
        if kind == "pir" or la.is_principal_ideal:
            return H2Prediction(None, "pir_cyclic_p_group", "constraint",
                                constraint=f"cyclic {p}-group", conditions=cond)
    if kind == "quasi_galois" and fam[1:3] == (3, 1) and fam[3] == 3:
        return H2Prediction(_orders(3), "reported_f3_cubic", "reported")
    if kind == "quasi_galois" and fam[1:3] == (2, 1):
        n = fam[3]
        s = AbelianStructure.from_orders([2] * n)
        if n <= 5:
            return H2Prediction(s, "reported_f2_truncated", "reported", conditions={"n": n})
        return H2Prediction(s, "conjecture_f2_truncated", "conjecture", conditions={"n": n})
    if kind == "galois":
        return _galois_conjecture(fam)
    return _not_covered(f"no closed form applies to {A.label}")


def _galois_conjecture(fam) -> H2Prediction:
    _, p, l, m = fam
    if p == 2 and m == 1 and l >= 2:
        s = _orders(2)
    elif p == 2 and m == 2:
        s = _orders(2)
    elif p == 3 and m == 2:
        s = _orders(3)
    else:
        s = AbelianStructure()
    return H2Prediction(s, "conjecture_galois_ring", "conjecture", conditions={"p": p, "l": l, "m": m})


def kunneth_combine(A: FiniteRing, B: FiniteRing, h2A: AbelianStructure, h2B: AbelianStructure,
                    abelianizations: tuple | None = None) -> AbelianStructure:
    """H_2(SL_2(A x B)) from the factors: H_2 sum plus the tensor of abelianizations."""
    if abelianizations is None:
        abelianizations = (h1_sl2_formula(A), h1_sl2_formula(B))
    h1A, h1B = abelianizations
    return h2A + h2B + h1A.tensor(h1B)


def _predict_product(A: FiniteRing) -> H2Prediction:
    factors = [C for C, _, _ in A.components]
    preds = [h2_sl2_predict(C) for C in factors]
    bad = [x for x in preds if x.kind not in ("exact", "reported")]
    if bad:
        return _not_covered("a factor has no exact prediction")
    total = AbelianStructure()
    h1s = [h1_sl2_formula(C) for C in factors]
    for x in preds:
        total = total + x.structure
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            total = total + h1s[i].tensor(h1s[j])
    kind = "reported" if any(x.kind == "reported" for x in preds) else "exact"
    return H2Prediction(total, "kunneth+" + "+".join(x.provenance for x in preds), kind,
                        conditions={"factors": len(factors)})


# ----------------------------------------------------------------------------
# verdicts

def verdict(computed: AbelianStructure | None, pred: H2Prediction) -> dict:
    out = {"verdict": "not_covered", "agrees": None}
    if computed is None or pred.kind == "not_covered":
        return out
    if pred.kind == "constraint":
        ok = computed.is_cyclic() and computed.is_p_group(pred.conditions["residue_char"])
        out.update(verdict="match" if ok else "mismatch", agrees=ok)
        return out
    ok = computed == pred.structure
    if pred.kind == "conjecture":
        out.update(verdict="conjecture", agrees=ok)
    else:
        out.update(verdict="match" if ok else "mismatch", agrees=ok)
    return out
