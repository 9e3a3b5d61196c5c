"""
Integral H_1 and H_2 of a finite group from a certified presentation.

The Fox Jacobian of the presentation, realized through the regular
representation, is the boundary map d2 of the Cayley complex: columns are the
translates g.r_j of the relators, rows are the edges (g, s).  With N the
relator exponent-sum matrix and eps the map sending a face (g, j) to e_j,

    H_2(G) = ker(N) / eps(ker d2)

(Hopf).  ker(d2) is found by sparse column elimination on unit pivots in the
d2 rows, with the eps coordinates carried along and never used as pivots.

A normalized bar complex gives an independent answer for tiny groups.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .abelian import (
    AbelianStructure,
    IntMatrix,
    PresentedAbelian,
    eliminate_unit_pivots,
    elementary_divisors,
    kernel_basis,
    structure_of_presented,
)
from .matgroup import FiniteGroup
from .presentation import Presentation, certify_presentation, evaluate_word

TIER1_MAX_ORDER = 5000
TIER2_MAX_ORDER = 20000
BAR_ORACLE_MAX_ORDER = 24


class ResourceRefusal(RuntimeError):
    """A computation was declined because it is above the configured size limits."""


@dataclass
class FoxData:
    d2: IntMatrix            # rows g*n + s, columns g*m + j
    N: IntMatrix             # m x n exponent sums
    n_gens: int
    n_rels: int
    group_order: int

    def epsilon(self, column: int) -> int:
        """Relator coordinate hit by the augmentation of a face column."""
        return column % self.n_rels

    def d1(self, G: FiniteGroup) -> IntMatrix:
        """Edge (g, s) -> (g s) - g, as a |G| x |G| n matrix."""
        n = self.n_gens
        T = G.gen_tables()
        M = IntMatrix(G.order, G.order * n)
        for g in range(G.order):
            for s in range(n):
                M.add(T[s][g], g * n + s, 1)
                M.add(g, g * n + s, -1)
        return M


@dataclass
class SchurResult:
    h1: AbelianStructure
    h2: AbelianStructure
    presentation: Presentation | None
    timings: dict = field(default_factory=dict)
    method: str = "hopf"
    group_order: int = 0


def fox_columns(G: FiniteGroup, P: Presentation) -> list[dict[int, int]]:
    """Sparse columns of d2: the column for (g, j) is the cellular boundary of the
    j-th relator read from vertex g."""
    n = P.n_gens
    m = len(P.relators)
    T, Ti = G.gen_tables(), G.inv_tables()
    cols: list[dict[int, int]] = [None] * (G.order * m)
    for j, r in enumerate(P.relators):
        for g in range(G.order):
            cur = g
            col: dict[int, int] = {}
            for x in r:
                if x > 0:
                    e = cur * n + x - 1
                    v = col.get(e, 0) + 1
                    cur = T[x - 1][cur]
                else:
                    cur = Ti[-x - 1][cur]
                    e = cur * n + (-x - 1)
                    v = col.get(e, 0) - 1
                if v:
                    col[e] = v
                else:
                    del col[e]
            if cur != g:
                raise ValueError("relator does not close up in the group")
            cols[g * m + j] = col
    return cols


def exponent_sums(P: Presentation) -> list[list[int]]:
    out = []
    for r in P.relators:
        row = [0] * P.n_gens
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        out.append(row)
    return out


def fox_jacobian(P: Presentation, G: FiniteGroup) -> FoxData:
    if not P.certified or P.group_order_certified != G.order:
        raise ValueError("presentation is not certified for this group")
    cols = fox_columns(G, P)
    m = len(P.relators)
    d2 = IntMatrix(G.order * P.n_gens, G.order * m)
    for c, col in enumerate(cols):
        for r, v in col.items():
            d2.entries.setdefault(r, {})[c] = v
    Nrows = exponent_sums(P)
    N = IntMatrix.from_dense(Nrows, P.n_gens) if Nrows else IntMatrix(0, P.n_gens)
    return FoxData(d2, N, P.n_gens, m, G.order)


def epsilon_image_of_kernel(G: FiniteGroup, P: Presentation) -> list[list[int]]:
    """Generators (in Z^m) of eps(ker d2)."""
    n = P.n_gens
    m = len(P.relators)
    cols = fox_columns(G, P)
    n_edges = G.order * n
    # eps coordinates live after the edge rows and are never pivots
    for c, col in enumerate(cols):
        col[n_edges + c % m] = 1
    protected = frozenset(range(n_edges, n_edges + m))
    _, rest = eliminate_unit_pivots(cols, protected)
    out: list[list[int]] = []
    residual: list[dict[int, int]] = []
    for v in rest:
        if all(k in protected for k in v):
            out.append([v.get(n_edges + j, 0) for j in range(m)])
        else:
            residual.append(v)
    if residual:
        rows = sorted({k for v in residual for k in v if k not in protected})
        pos = {r: i for i, r in enumerate(rows)}
        A = [[0] * len(residual) for _ in rows]
        for c, v in enumerate(residual):
            for k, x in v.items():
                if k not in protected:
                    A[pos[k]][c] = x
        for kv in kernel_basis(A):
            img = [0] * m
            for c, coef in enumerate(kv):
                if coef:
                    for j in range(m):
                        img[j] += coef * residual[c].get(n_edges + j, 0)
            out.append(img)
    return out


def _rank(rows: list[list[int]], ncols: int) -> int:
    return len(elementary_divisors(rows, ncols)) if rows else 0


def h2_from_presentation(G: FiniteGroup, P: Presentation) -> AbelianStructure:
    m = len(P.relators)
    L = epsilon_image_of_kernel(G, P)
    divs = elementary_divisors(L, m) if L else []
    rank_L = len(divs)
    Nrows = exponent_sums(P)
    rank_N = _rank(Nrows, P.n_gens)
    if rank_L != m - rank_N:
        raise ArithmeticError(
            f"eps(ker d2) has rank {rank_L}, expected rank ker N = {m - rank_N}")
    # L sits inside the saturated lattice ker N, so ker N / L is the torsion of Z^m / L
    return AbelianStructure.from_orders(d for d in divs if d > 1)


def h1_from_presentation(P: Presentation) -> AbelianStructure:
    return structure_of_presented(PresentedAbelian(P.n_gens, exponent_sums(P)))


def check_size(order: int, max_order: int = TIER1_MAX_ORDER, tier2: bool = False) -> None:
    limit = max_order
    if tier2:
        limit = max(limit, TIER2_MAX_ORDER)
    limit = min(limit, TIER2_MAX_ORDER) if not tier2 else limit
    if order > limit:
        raise ResourceRefusal(f"group order {order} exceeds the limit {limit}"
                              + ("" if tier2 else " (Tier 2 not enabled)"))


def schur_multiplier(G: FiniteGroup, presentation: Presentation | None = None,
                     max_order: int = TIER1_MAX_ORDER, tier2: bool = False) -> SchurResult:
    check_size(G.order, max_order, tier2)
    t0 = time.perf_counter()
    P = presentation or certify_presentation(G)
    if not P.certified or P.group_order_certified != G.order:
        raise ValueError("presentation is not certified for this group")
    t1 = time.perf_counter()
    h1 = h1_from_presentation(P)
    h2 = h2_from_presentation(G, P)
    t2 = time.perf_counter()
    return SchurResult(h1, h2, P, {"presentation": t1 - t0, "homology": t2 - t1}, "hopf", G.order)


def abelianization(G: FiniteGroup, presentation: Presentation | None = None,
                   cross_check_limit: int = 2000) -> AbelianStructure:
    P = presentation or certify_presentation(G)
    h1 = h1_from_presentation(P)
    if G.order <= cross_check_limit:
        comm = commutator_subgroup(G)
        if h1.order * len(comm) != G.order:
            raise ArithmeticError("abelianization disagrees with the commutator subgroup")
    return h1


def commutator_subgroup(G: FiniteGroup) -> set[int]:
    """Normal closure of the commutators of the generators."""
    gens = G.generators
    inv = G.inverse
    C = {G.mul(G.mul(inv(a), inv(b)), G.mul(a, b)) for a in gens for b in gens}
    C.discard(G.identity)
    cl = list(C)
    while True:
        sub = {G.identity}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for c in cl:
                    y = G.mul(x, c)
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
        new = []
        for c in cl:
            for g in gens:
                for h in (g, inv(g)):
                    y = G.mul(G.mul(inv(h), c), h)
                    if y not in sub:
                        new.append(y)
        if not new:
            return sub
        cl.extend(dict.fromkeys(new))


def h2_bar_oracle(G: FiniteGroup, max_order: int = BAR_ORACLE_MAX_ORDER) -> AbelianStructure:
    """H_2 from the normalized bar complex: the torsion of coker(d3)."""
    n = G.order
    if n > max_order:
        raise ResourceRefusal(f"bar oracle limited to order {max_order}, got {n}")
    e = G.identity
    nonid = [g for g in range(n) if g != e]
    k = len(nonid)
    if k == 0:
        return AbelianStructure()
    pos = {g: i for i, g in enumerate(nonid)}
    mul = [[G.mul(a, b) for b in range(n)] for a in range(n)]

    def cell(a, b):
        if a == e or b == e:
            return None
        return pos[a] * k + pos[b]

    cols = []
    for g in nonid:
        for h in nonid:
            gh = mul[g][h]
            for l in nonid:
                col: dict[int, int] = {}
                hl = mul[h][l]
                for (a, b), s in (((h, l), 1), ((gh, l), -1), ((g, hl), 1), ((g, h), -1)):
                    c = cell(a, b)
                    if c is not None:
                        v = col.get(c, 0) + s
                        if v:
                            col[c] = v
                        else:
                            del col[c]
                if col:
                    cols.append(col)
    divs = elementary_divisors(cols, k * k)
    return AbelianStructure.from_orders(d for d in divs if d > 1)


def h1_bar_oracle(G: FiniteGroup) -> AbelianStructure:
    """G/[G,G] as an abelian group, via the multiplication law restricted to cosets."""
    from .abelian import subgroup_from_mult
    comm = commutator_subgroup(G)
    cosets: dict[int, frozenset] = {}
    reps = []
    for g in range(G.order):
        if g in cosets:
            continue
        c = frozenset(G.mul(g, x) for x in comm)
        for y in c:
            cosets[y] = c
        reps.append(c)
    rep_of = {c: min(c) for c in reps}
    op = lambda a, b: rep_of[cosets[G.mul(a, b)]]
    dec = subgroup_from_mult([rep_of[c] for c in reps], op, rep_of[cosets[G.identity]])
    return dec.structure
