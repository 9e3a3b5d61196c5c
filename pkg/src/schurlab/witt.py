"""
Presented modules over the group ring Z[G_A] of the square class group.

Elements of Z[G_A] are integer vectors indexed by the square class
representatives.  A module presented on symbols [x] with Z[G_A] coefficients is
flattened: symbol i with class c becomes coordinate i * |G_A| + c.  Every
relation is entered together with all of its G_A-translates, so the flattened
relation lattice is the submodule generated by the relators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import (
    AbelianStructure,
    PresentedAbelian,
    elementary_divisors,
    structure_of_presented,
    subquotient_structure,
)
from .ring_core import FiniteRing, RingError, analyze_local, units, witt_sets

RP1_MAX_W = 400


class WittError(RuntimeError):
    pass


class GroupRingGA:
    """Z[G_A] with basis the square classes; class 0 is <1>."""

    def __init__(self, A: FiniteRing):
        self.ring = A
        self.data = witt_sets(A)
        self.reps = self.data.square_classes
        self.rank = len(self.reps)
        cls = self.data.class_of
        self.mult = [[cls[A.mul(a, b)] for b in self.reps] for a in self.reps]

    def cls(self, a: int) -> int:
        return self.data.class_of[a]

    def basis(self, c: int) -> list[int]:
        v = [0] * self.rank
        v[c] = 1
        return v

    def bracket(self, a: int) -> list[int]:
        """<a>."""
        return self.basis(self.cls(a))

    def pfister(self, a: int) -> list[int]:
        """<<a>> = <a> - 1."""
        v = self.bracket(a)
        v[0] -= 1
        return v

    def mul(self, u: list[int], v: list[int]) -> list[int]:
        out = [0] * self.rank
        for i, x in enumerate(u):
            if x:
                row = self.mult[i]
                for j, y in enumerate(v):
                    if y:
                        out[row[j]] += x * y
        return out

    def translate(self, c: int, v: list[int]) -> list[int]:
        return self.mul(self.basis(c), v)

    def augmentation(self, v: list[int]) -> int:
        return sum(v)


@dataclass
class PresentedGAModule:
    labels: list                    # generator symbols (ring elements or formal names)
    n_classes: int
    relations: list[list[int]] = field(default_factory=list)   # flattened rows
    valid: bool = True
    note: str = ""

    @property
    def n_flat(self) -> int:
        return len(self.labels) * self.n_classes

    def flat_index(self, gen: int, cls: int) -> int:
        return gen * self.n_classes + cls

    def structure(self) -> AbelianStructure:
        return structure_of_presented(PresentedAbelian(self.n_flat, self.relations))


def _require_local(A: FiniteRing):
    if not analyze_local(A).is_local:
        raise RingError(f"{A.label} is not local")


# ----------------------------------------------------------------------------
# Grothendieck-Witt group

@dataclass
class GWResult:
    module: PresentedGAModule
    gw: AbelianStructure
    fundamental_ideal: AbelianStructure
    fundamental_ideal_sq: AbelianStructure
    valid: bool


def grothendieck_witt(A: FiniteRing) -> GWResult:
    """Z[G_A] modulo the ideal generated by <<a>><<1-a>>, a in W_A, with I and I^2."""
    _require_local(A)
    R = GroupRingGA(A)
    k = R.rank
    rels = []
    for a in R.data.W:
        r = R.mul(R.pfister(a), R.pfister(A.sub(A.one, a)))
        for c in range(k):
            t = R.translate(c, r)
            if any(t):
                rels.append(t)
    q = analyze_local(A).residue_order
    valid = q >= 3
    M = PresentedGAModule(["1"], k, rels, valid, "" if valid else "residue field below 3: barred object only")
    ideal = [R.pfister(a) for a in R.reps]
    ideal_sq = [R.mul(R.pfister(a), R.pfister(b)) for a in R.reps for b in R.reps]
    return GWResult(M, M.structure(),
                    subquotient_structure(ideal, rels, k),
                    subquotient_structure(ideal_sq, rels, k), valid)


# ----------------------------------------------------------------------------
# refined scissors congruence module

def five_term_terms(A: FiniteRing, x: int, y: int):
    """(coefficient unit, symbol, sign) triples of the relator for the pair (x, y)."""
    one = A.one
    inv = A.inverse
    xi, yi = inv(x), inv(y)
    t1 = A.mul(y, xi)
    c4 = A.sub(xi, one)
    t4 = A.mul(A.sub(one, xi), inv(A.sub(one, yi)))
    c5 = A.sub(one, x)
    t5 = A.mul(A.sub(one, x), inv(A.sub(one, y)))
    return [(one, x, 1), (one, y, -1), (x, t1, 1), (c4, t4, -1), (c5, t5, 1)]


def rp_presented(A: FiniteRing) -> PresentedGAModule:
    _require_local(A)
    R = GroupRingGA(A)
    W = R.data.W
    pos = {x: i for i, x in enumerate(W)}
    k = R.rank
    Wset = set(W)
    rows = []
    for x in W:
        xi = A.inverse(x)
        for y in W:
            if A.mul(y, xi) not in Wset:
                continue
            base = [0] * (len(W) * k)
            for coeff, sym, sign in five_term_terms(A, x, y):
                if sym not in Wset:
                    raise WittError(f"relator symbol {sym} outside W for pair ({x}, {y})")
                base[pos[sym] * k + R.cls(coeff)] += sign
            for c in range(k):
                row = [0] * len(base)
                for idx, v in enumerate(base):
                    if v:
                        g, cl = divmod(idx, k)
                        row[g * k + R.mult[c][cl]] += v
                if any(row):
                    rows.append(row)
    q = analyze_local(A).residue_order
    valid = q > 4
    return PresentedGAModule(list(W), k, rows, valid,
                             "" if valid else "residue field of order <= 4: barred object, unverified")


def lambda_matrix(A: FiniteRing, M: PresentedGAModule | None = None) -> list[list[int]]:
    """Flattened lambda: rows indexed by square classes, columns by (symbol, class).

    [x] -> -<<x>><<1-x>>; every relator must map to zero.
    """
    if M is None:
        M = rp_presented(A)
    R = GroupRingGA(A)
    k = R.rank
    cols = []
    for x in M.labels:
        img = [-v for v in R.mul(R.pfister(x), R.pfister(A.sub(A.one, x)))]
        for c in range(k):
            cols.append(R.translate(c, img))
    L = [[cols[j][i] for j in range(len(cols))] for i in range(k)]
    for row in M.relations:
        out = [sum(L[i][j] * row[j] for j in range(len(row)) if row[j]) for i in range(k)]
        if any(out):
            raise WittError("a relator has nonzero image under lambda")
    return L


def _rank(rows, ncols):
    rows = [r for r in rows if any(r)]
    return len(elementary_divisors(rows, ncols)) if rows else 0


def rp1(A: FiniteRing) -> AbelianStructure:
    """ker(lambda) / relations.

    Z^n / R contains ker(lambda)/R with quotient im(lambda), which is free, so
    ker(lambda)/R is Z^n/R with rank(lambda) free summands removed.
    """
    _require_local(A)
    W = witt_sets(A).W
    if len(W) > RP1_MAX_W:
        raise WittError(f"|W| = {len(W)} exceeds {RP1_MAX_W}")
    M = rp_presented(A)
    L = lambda_matrix(A, M)
    whole = M.structure()
    r = _rank(L, M.n_flat)
    if whole.free_rank < r:
        raise WittError("relation lattice is not contained in ker(lambda)")
    return AbelianStructure(whole.invariant_factors, whole.free_rank - r)


def rp1_via_kernel(A: FiniteRing) -> AbelianStructure:
    """ker(lambda)/R computed directly as a subquotient of an explicit kernel basis."""
    from .abelian import kernel_basis, hnf_coordinates, hnf
    M = rp_presented(A)
    L = lambda_matrix(A, M)
    K = hnf(kernel_basis(L), M.n_flat)
    coords = [hnf_coordinates(K, row) for row in M.relations]
    return structure_of_presented(PresentedAbelian(len(K), coords))


def rp1_generator_check(A: FiniteRing) -> bool:
    """Do the G_A-translates of (<t>+1)[x] (x in V), [y] (y in W minus V), [z]-[z0]
    (z in V), together with the relations, span exactly ker(lambda)?"""
    _require_local(A)
    la = analyze_local(A)
    if la.residue_char == 2 or la.residue_order < 5:
        raise WittError("generator check needs odd residue characteristic and |k| >= 5")
    M = rp_presented(A)
    L = lambda_matrix(A, M)
    R = GroupRingGA(A)
    k = R.rank
    data = R.data
    pos = {x: i for i, x in enumerate(M.labels)}
    n = M.n_flat
    Vset = set(data.V)
    gens = []

    def vec(terms):
        v = [0] * n
        for sym, cl, c in terms:
            v[pos[sym] * k + cl] += c
        return v

    t_cls = 1  # the nontrivial class
    for x in data.V:
        gens.append(vec([(x, 0, 1), (x, t_cls, 1)]))
    for y in data.W:
        if y not in Vset:
            gens.append(vec([(y, 0, 1)]))
    if data.V:
        z0 = data.V[0]
        for z in data.V[1:]:
            gens.append(vec([(z, 0, 1), (z0, 0, -1)]))
    spans = []
    for g in gens:
        for c in range(k):
            row = [0] * n
            for idx, v in enumerate(g):
                if v:
                    s, cl = divmod(idx, k)
                    row[s * k + R.mult[c][cl]] += v
            spans.append(row)
    # everything listed must lie in ker(lambda)
    for row in spans:
        if any(sum(L[i][j] * row[j] for j in range(n) if row[j]) for i in range(k)):
            return False
    lattice = spans + M.relations
    divs = elementary_divisors(lattice, n)
    rank_ker = n - _rank(L, n)
    # equal to the saturated ker(lambda) iff same rank and no torsion in Z^n / lattice
    return len(divs) == rank_ker and all(d == 1 for d in divs)
