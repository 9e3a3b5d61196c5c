"""
Closed-form predictions for K-groups of finite rings.

Each prediction records the result it comes from and the conditions under which
that result applies, so reports can show exactly which claim was tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor

from .abelian import AbelianStructure, is_prime
from .ring_core import FiniteRing


@dataclass(frozen=True)
class DennisSteinParams:
    p: int
    e: int
    r: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1 or self.r < 0 or self.n < 1:
            raise ValueError("need e >= 1, r >= 0, n >= 1")


@dataclass
class K2Prediction:
    structure: AbelianStructure | None
    provenance: str
    kind: str = "exact"                 # exact | not_covered
    conditions: dict = field(default_factory=dict)
    note: str = ""

    @property
    def covered(self) -> bool:
        return self.kind == "exact"


def not_covered(reason: str) -> K2Prediction:
    return K2Prediction(None, "none", "not_covered", {}, reason)


def kn_finite_field(q: int, n: int) -> AbelianStructure:
    """K_n(F_q): Z for n = 0, 0 for even n > 0, Z/(q^i - 1) for n = 2i - 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return AbelianStructure((), 1)
    if n % 2 == 0:
        return AbelianStructure()
    i = (n + 1) // 2
    return AbelianStructure.from_orders([q ** i - 1])


def dennis_stein_t(P: DennisSteinParams) -> int:
    """t_n = floor(n/e - 1/(p-1)), exactly."""
    return floor(Fraction(P.n, P.e) - Fraction(1, P.p - 1))


def k2_dennis_stein(P: DennisSteinParams) -> K2Prediction:
    t = dennis_stein_t(P)
    if t <= 0:
        s = AbelianStructure()
    elif t < P.r:
        s = AbelianStructure.from_orders([P.p ** t])
    else:
        s = AbelianStructure.from_orders([P.p ** P.r])
    return K2Prediction(s, "dennis_stein", conditions={"p": P.p, "e": P.e, "r": P.r, "n": P.n, "t_n": t})


def k2_quasi_galois(p: int, r: int, n: int) -> K2Prediction:
    """F_{p^r}[X]/(X^n) has trivial K_2."""
    return K2Prediction(AbelianStructure(), "truncated_polynomial_k2", conditions={"q": p ** r, "n": n})


def k2_galois_ring(p: int, l: int, m: int) -> K2Prediction:
    s = AbelianStructure((2,)) if p == 2 and l >= 2 else AbelianStructure()
    return K2Prediction(s, "galois_ring_k2", conditions={"p": p, "l": l, "m": m})


def k2_truncated_multivariate(q: int, m: int) -> K2Prediction:
    """F_q[X_1..X_m]/(X_1..X_m)^2: F_q to the power binom(m, 2)."""
    p = min(d for d in range(2, q + 1) if q % d == 0)
    r = 0
    while p ** r < q:
        r += 1
    copies = r * comb(m, 2)
    return K2Prediction(AbelianStructure.from_orders([p] * copies), "truncated_multivariate_k2",
                        conditions={"q": q, "m": m})


def k2_predict(A: FiniteRing, e: int | None = None, r: int | None = None) -> K2Prediction:
    """Route a named-family ring to its closed form.

    Eisenstein PIRs of characteristic p^l with l >= 2 need the ramification index
    e and the p-primary roots of unity exponent r of the local field model; they
    are not derivable from the ring table and must be passed in.
    """
    fam = normalized_family(A)
    kind = fam[0]
    if kind == "field":
        _, p, rr = fam
        return K2Prediction(kn_finite_field(p ** rr, 2), "quillen_finite_field",
                            conditions={"q": p ** rr})
    if kind == "galois":
        _, p, l, m = fam
        if m == 1 and p != 2:
            pred = k2_dennis_stein(DennisSteinParams(p, 1, 0, l))
            pred.provenance = "dennis_stein_unramified"
            return pred
        return k2_galois_ring(p, l, m)
    if kind == "quasi_galois":
        _, p, rr, n = fam
        return k2_quasi_galois(p, rr, n)
    if kind == "truncated":
        _, p, rr, m = fam
        return k2_truncated_multivariate(p ** rr, m)
    if kind == "pir":
        _, p, l, m, nil = fam
        if e is None or r is None:
            return not_covered("Eisenstein ring: ramification data (e, r) must be supplied")
        pred = k2_dennis_stein(DennisSteinParams(p, e, r, nil))
        pred.conditions["supplied_by_caller"] = True
        return pred
    if kind == "product":
        parts = [k2_predict(C) for C in A._product_factors]
        if all(x.covered for x in parts):
            s = AbelianStructure()
            for x in parts:
                s = s + x.structure
            return K2Prediction(s, "product_additivity", conditions={"factors": len(parts)})
        return not_covered("a factor of the product is not covered")
    return not_covered(f"no closed form for {A.label}")


def normalized_family(A: FiniteRing) -> tuple:
    """Canonical description of a named-family ring.

    ("field", p, r), ("galois", p, l, m) with l >= 2, ("quasi_galois", p, r, n)
    with n >= 2, ("truncated", p, r, m) with m >= 2, ("pir", p, l, m, nilpotency)
    for Eisenstein rings with l >= 2, ("product",), or ("unknown",).
    """
    fam = A.family
    if fam is None:
        return ("unknown",)
    tag = fam[0]
    if tag == "zmod":
        _, p, l = fam
        return ("field", p, 1) if l == 1 else ("galois", p, l, 1)
    if tag == "field":
        return ("field", fam[1], fam[2])
    if tag == "galois":
        _, p, l, m = fam
        return ("field", p, m) if l == 1 else ("galois", p, l, m)
    if tag == "quasi_galois":
        _, p, r, n = fam
        return ("field", p, r) if n == 1 else ("quasi_galois", p, r, n)
    if tag == "truncated":
        _, p, r, m = fam
        return ("quasi_galois", p, r, 2) if m == 1 else ("truncated", p, r, m)
    if tag in ("pir", "gilmer_f"):
        from .ring_core import analyze_local
        if tag == "gilmer_f":
            p, l, m, coeffs = 2, 2, 1, (2, 0)
        else:
            _, p, l, m, coeffs, _t = fam
        la = analyze_local(A)
        if not coeffs:
            return ("field", p, m) if l == 1 else ("galois", p, l, m)
        if l == 1:
            return ("field", p, m) if la.nilpotency == 1 else ("quasi_galois", p, m, la.nilpotency)
        if A.order == p ** (l * m):
            # a degree-one Eisenstein extension adds nothing new: it is GR(p^l, m)
            if la.nilpotency == l and la.is_principal_ideal and A.characteristic == p ** l:
                return ("galois", p, l, m)
        return ("pir", p, l, m, la.nilpotency)
    if tag == "product":
        return ("product",)
    return ("unknown",)
