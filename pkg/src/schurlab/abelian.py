"""
Exact integer linear algebra for finitely generated abelian groups.

Smith normal form (with transforms), Hermite normal form, integer kernels,
presented abelian groups, structure recovery of finite abelian groups given
by a multiplication law, exterior squares and coinvariants.

Everything is done over Python integers; there is no floating point anywhere.
Matrices are plain lists of rows unless an :class:`IntMatrix` is passed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Callable, Hashable, Iterable, Sequence


# ----------------------------------------------------------------------------
# small number theory helpers

def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _sym_div(a: int, b: int) -> int:
    """Quotient q minimising |a - q*b| (b != 0)."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


# ----------------------------------------------------------------------------
# data types

class IntMatrix:
    """Sparse integer matrix; ``entries`` maps row -> {col: value}, no zeros stored."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[int, dict[int, int]] = {}
        if entries:
            for (i, j), v in entries.items():
                self.add(i, j, v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        M = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    M.entries.setdefault(i, {})[j] = v
        return M

    def add(self, i: int, j: int, v: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        if not v:
            return
        row = self.entries.setdefault(i, {})
        w = row.get(j, 0) + v
        if w:
            row[j] = w
        else:
            del row[j]
            if not row:
                del self.entries[i]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries.get(i, {}).get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.entries.values())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.entries.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.ncols)]
        for i, row in self.entries.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "IntMatrix":
        T = IntMatrix(self.ncols, self.nrows)
        for i, row in self.entries.items():
            for j, v in row.items():
                T.entries.setdefault(j, {})[i] = v
        return T

    def mul_vec(self, v: Sequence[int]) -> list[int]:
        out = [0] * self.nrows
        for i, row in self.entries.items():
            out[i] = sum(x * v[j] for j, x in row.items())
        return out

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.entries) == (other.nrows, other.ncols, other.entries)

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _dense(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.to_dense()
    return [list(r) for r in M]


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant-factor description d1 | d2 | ... | dk (all >= 2) plus a free rank."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2: {fs}")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"not a divisibility chain: {fs}")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "AbelianStructure":
        """Canonical form of a direct sum of cyclic groups Z/n (n=0 means Z)."""
        free = 0
        primary: dict[int, list[int]] = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free += 1
            elif n > 1:
                for p, e in factorize(n).items():
                    primary.setdefault(p, []).append(p ** e)
        k = max((len(v) for v in primary.values()), default=0)
        factors = [1] * k
        for powers in primary.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[k - 1 - i] *= q
        return cls(tuple(f for f in factors if f > 1), free)

    @classmethod
    def trivial(cls) -> "AbelianStructure":
        return cls()

    @property
    def order(self) -> int | None:
        """Order of the group, None if infinite."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) + self.free_rank <= 1

    def rank(self) -> int:
        """Minimal number of generators."""
        return len(self.invariant_factors) + self.free_rank

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def elementary_divisors(self) -> list[int]:
        out = []
        for d in self.invariant_factors:
            out.extend(p ** e for p, e in sorted(factorize(d).items()))
        return sorted(out)

    def primes(self) -> set[int]:
        return {p for d in self.invariant_factors for p in factorize(d)}

    def is_p_group(self, p: int) -> bool:
        return self.is_finite() and self.primes() <= {p}

    def p_part(self, p: int) -> "AbelianStructure":
        return AbelianStructure.from_orders(q for q in self.elementary_divisors() if q % p == 0)

    def __add__(self, other: "AbelianStructure") -> "AbelianStructure":
        return AbelianStructure.from_orders(
            list(self.invariant_factors) + list(other.invariant_factors)
            + [0] * (self.free_rank + other.free_rank))

    def tensor(self, other: "AbelianStructure") -> "AbelianStructure":
        a = list(self.invariant_factors) + [0] * self.free_rank
        b = list(other.invariant_factors) + [0] * other.free_rank
        return AbelianStructure.from_orders(gcd(x, y) for x in a for y in b)

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, d: dict) -> "AbelianStructure":
        return cls(tuple(d["invariant_factors"]), d.get("free_rank", 0))

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass
class PresentedAbelian:
    """Abelian group on ``n_generators`` generators modulo the rows of ``relations``."""

    n_generators: int
    relations: list[list[int]] = field(default_factory=list)

    def structure(self) -> AbelianStructure:
        return structure_of_presented(self)


# ----------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (S, U, V) with U*M*V == S diagonal, diagonal a divisibility chain.

    U and V are unimodular.  Zeros on the diagonal come last.
    """
    A = _dense(M)
    m = len(A)
    n = len(A[0]) if m else (M.ncols if isinstance(M, IntMatrix) else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            rd, rs = A[dst], A[src]
            for k in range(n):
                if rs[k]:
                    rd[k] -= q * rs[k]
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                if row[src]:
                    row[dst] -= q * row[src]
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, _sym_div(A[i][t], p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, _sym_div(A[t][j], p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover of row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def diagonal(S: list[list[int]]) -> list[int]:
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def _structure_from_diagonal(diag: Iterable[int], n_generators: int) -> AbelianStructure:
    diag = [abs(d) for d in diag if d]
    free = n_generators - len(diag)
    return AbelianStructure(tuple(d for d in diag if d > 1), free)


# ----------------------------------------------------------------------------
# echelon / Hermite forms

def _echelon(rows: list[list[int]], npiv: int) -> list[list[int]]:
    """Row-echelon form over Z using gcd row operations on the first ``npiv`` columns.

    Rows may be longer than npiv; the tail is carried along (transform tracking).
    Returns the list of rows; pivot rows first in pivot-column order, then the
    rows whose first npiv entries vanished.
    """
    rows = [list(r) for r in rows]
    out: list[list[int]] = []
    for c in range(npiv):
        nz = [r for r in rows if r[c]]
        if not nz:
            continue
        rows = [r for r in rows if not r[c]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[c]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[c] // piv[c]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[c]:
                    rest.append(r)
                else:
                    rows.append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[c] < 0:
            piv = [-a for a in piv]
        out.append(piv)
    return out + rows


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    ech = [r for r in _echelon(rows, ncols) if any(r)]
    pivots = []
    for r in ech:
        pivots.append(next(j for j, v in enumerate(r) if v))
    for i, r in enumerate(ech):
        c = pivots[i]
        for k in range(i):
            q = ech[k][c] // r[c]
            if q:
                ech[k] = [a - q * b for a, b in zip(ech[k], r)]
    return ech


def lattice_contains(basis_hnf: list[list[int]], v: Sequence[int]) -> bool:
    v = list(v)
    for r in basis_hnf:
        c = next(j for j, x in enumerate(r) if x)
        if v[c] % r[c]:
            return False
        q = v[c] // r[c]
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    return not any(v)


def lattice_equal(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int) -> bool:
    return hnf(A, ncols) == hnf(B, ncols)


def kernel_basis(M) -> list[list[int]]:
    """Basis of the integer lattice {v : M v = 0}."""
    A = _dense(M)
    if isinstance(M, IntMatrix):
        ncols = M.ncols
    else:
        ncols = len(A[0]) if A else 0
    nrows = len(A)
    # rows of [M^T | I]; rows whose M^T part dies carry kernel vectors
    aug = [[A[i][j] for i in range(nrows)] + [int(k == j) for k in range(ncols)]
           for j in range(ncols)]
    ech = _echelon(aug, nrows)
    return [r[nrows:] for r in ech if not any(r[:nrows])]


def solve_in_lattice(basis: list[list[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coefficients c with sum c_i basis_i == v, or None."""
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    n = len(basis[0])
    # kernel of [basis; -v]^T with last coordinate 1
    M = [[basis[i][j] for i in range(k)] + [-v[j]] for j in range(n)]
    ker = kernel_basis(M)
    if not ker:
        return None
    last = [w[k] for w in ker]
    g = 0
    for x in last:
        g = gcd(g, x)
    if g != 1:
        return None
    # combine kernel vectors to make the last coordinate 1
    coeffs = _bezout_vector(last)
    sol = [sum(c * w[i] for c, w in zip(coeffs, ker)) for i in range(k)]
    return sol


def _bezout_vector(xs: list[int]) -> list[int]:
    """Coefficients c with sum c_i x_i == gcd(xs)."""
    coeffs = [0] * len(xs)
    g = 0
    for i, x in enumerate(xs):
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            coeffs = [0] * len(xs)
            coeffs[i] = 1 if x > 0 else -1
            continue
        g2, s, t = xgcd(g, x)
        coeffs = [s * c for c in coeffs]
        coeffs[i] += t
        g = g2
    return coeffs


# ----------------------------------------------------------------------------
# presented abelian groups

def structure_of_presented(P: PresentedAbelian) -> AbelianStructure:
    n = P.n_generators
    relations = P.relations.to_dense() if isinstance(P.relations, IntMatrix) else P.relations
    rels = [list(r) for r in relations if any(r)]
    for r in rels:
        if len(r) != n:
            raise ValueError("relation length does not match generator count")
    if n == 0:
        return AbelianStructure()
    if not rels:
        return AbelianStructure((), n)
    return _structure_from_diagonal(elementary_divisors(rels, n), n)


def elementary_divisors(rows, ncols: int) -> list[int]:
    """Nonzero SNF diagonal of the lattice spanned by the sparse or dense ``rows``.

    Unit pivots are eliminated sparsely first; whatever is left goes through the
    dense Smith normal form.
    """
    vecs = []
    for r in rows:
        if isinstance(r, dict):
            d = {j: v for j, v in r.items() if v}
        else:
            d = {j: v for j, v in enumerate(r) if v}
        if d:
            vecs.append(d)
    units, rest = eliminate_unit_pivots(vecs)
    if not rest:
        return [1] * units
    cols = sorted({j for r in rest for j in r})
    pos = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for j, v in r.items():
            dense[i][pos[j]] = v
    # the dense core is usually tiny; reduce it to a square HNF first
    core = hnf(dense, len(cols))
    S, _, _ = smith_normal_form(core)
    return [1] * units + [d for d in diagonal(S) if d]


def eliminate_unit_pivots(vecs: list[dict[int, int]], protected: frozenset = frozenset()):
    """Tietze-style elimination of +-1 pivots in a list of sparse relation vectors.

    Each pivot (vector v, coordinate c with v[c] = +-1) removes coordinate c from
    every other vector and then drops v; the quotient Z^n / <vecs> is unchanged up
    to isomorphism.  Coordinates in ``protected`` are never used as pivots.
    Returns (number of pivots used, surviving vectors).
    Pivot choice is Markowitz-like: cheapest (len(v)-1)*(count(c)-1) first.
    """
    vecs = {i: v for i, v in enumerate(vecs)}
    occ: dict[int, set[int]] = {}
    for i, v in vecs.items():
        for c in v:
            occ.setdefault(c, set()).add(i)
    heap = []

    def push(i):
        v = vecs.get(i)
        if not v:
            return
        best = None
        for c, x in v.items():
            if (x == 1 or x == -1) and c not in protected:
                cost = (len(v) - 1) * (len(occ[c]) - 1)
                if best is None or cost < best[0]:
                    best = (cost, c)
        if best is not None:
            heapq.heappush(heap, (best[0], len(v), i, best[1]))

    for i in list(vecs):
        push(i)
    used = 0
    while heap:
        cost, ln, i, c = heapq.heappop(heap)
        v = vecs.get(i)
        if v is None or c not in v or v[c] not in (1, -1):
            continue
        cur = (len(v) - 1) * (len(occ[c]) - 1)
        if cur != cost or len(v) != ln:
            push(i)
            continue
        s = v[c]
        others = [k for k in occ[c] if k != i]
        for k in others:
            w = vecs[k]
            q = w[c] * s  # w - q*v kills coordinate c
            for col, x in v.items():
                nv = w.get(col, 0) - q * x
                if nv:
                    if col not in w:
                        occ[col].add(k)
                    w[col] = nv
                elif col in w:
                    del w[col]
                    occ[col].discard(k)
            if not w:
                del vecs[k]
        for col in v:
            occ[col].discard(i)
        del vecs[i]
        used += 1
        for k in others:
            if k in vecs:
                push(k)
    return used, list(vecs.values())


# ----------------------------------------------------------------------------
# finite abelian groups from a multiplication law

@dataclass
class AbelianDecomposition:
    structure: AbelianStructure
    generators: list  # one element per invariant factor, in order
    identity: Hashable = None


def subgroup_from_mult(elements: Sequence[Hashable], op: Callable, identity=None) -> AbelianDecomposition:
    """Structure of the finite abelian group (elements, op), with realizing generators.

    Greedy generator selection; each new generator g contributes the relation
    j*e_g - (exponents of g^j in the span so far), j minimal.  The relation
    lattice is triangular with determinant |G|, hence complete; its SNF gives
    the invariant factors and the column transform gives the generators.
    """
    elements = list(elements)
    universe = set(elements)
    if len(universe) != len(elements):
        raise ValueError("duplicate elements")
    if not elements:
        raise ValueError("empty group")
    if identity is None:
        for e in elements:
            if op(e, e) == e:
                identity = e
                break
        else:
            raise ValueError("no identity element found")
    span: dict = {identity: ()}
    gens: list = []
    rels: list[list[int]] = []
    for g in elements:
        if g in span:
            continue
        k = len(gens)
        # smallest j with g^j in span
        j, x = 1, g
        while x not in span:
            if x not in universe:
                raise ValueError("set is not closed under the operation")
            x = op(x, g)
            j += 1
        base = span[x]
        rel = [-c for c in base] + [0] * (k - len(base)) + [j]
        rels.append(rel)
        new = {}
        for h, vec in span.items():
            vec = tuple(vec) + (0,) * (k - len(vec))
            y = h
            for a in range(j):
                if a:
                    y = op(y, g)
                    if y not in universe:
                        raise ValueError("set is not closed under the operation")
                new[y] = vec + (a,)
        span = new
        gens.append(g)
    if len(span) != len(universe):
        raise ValueError("set is not closed under the operation")
    k = len(gens)
    if k == 0:
        return AbelianDecomposition(AbelianStructure(), [], identity)
    R = [r + [0] * (k - len(r)) for r in rels]
    S, U, V = smith_normal_form(R)
    d = diagonal(S)
    Vinv = _unimodular_inverse(V)
    orders = [_element_order(op, g, identity) for g in gens]
    out_gens = []
    factors = []
    for i, di in enumerate(d):
        if abs(di) <= 1:
            continue
        # row i of V^-1 is the exponent vector of the i-th cyclic generator
        elem = identity
        for c, g, o in zip(Vinv[i], gens, orders):
            elem = _pow_op(op, g, c % o, elem)
        out_gens.append(elem)
        factors.append(abs(di))
    return AbelianDecomposition(AbelianStructure(tuple(factors)), out_gens, identity)


def _element_order(op, g, identity) -> int:
    n, x = 1, g
    while x != identity:
        x = op(x, g)
        n += 1
    return n


def _pow_op(op, g, e, acc):
    base = g
    while e:
        if e & 1:
            acc = op(acc, base)
        e >>= 1
        if e:
            base = op(base, base)
    return acc


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    aug = [list(V[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    # Gauss-Jordan over Z: V is unimodular so unit pivots always exist after gcd steps
    ech = _echelon(aug, n)
    ech = ech[:n]
    for i in range(n - 1, -1, -1):
        if ech[i][i] != 1:
            raise ValueError("matrix is not unimodular")
        for k in range(i):
            q = ech[k][i]
            if q:
                ech[k] = [a - q * b for a, b in zip(ech[k], ech[i])]
    return [r[n:] for r in ech]


# ----------------------------------------------------------------------------
# exterior square and coinvariants

def wedge_square(S: AbelianStructure) -> AbelianStructure:
    """Exterior square of a finite abelian group: sum over i<j of Z/gcd(d_i, d_j)."""
    if not S.is_finite():
        raise ValueError("wedge_square needs a finite group")
    d = S.invariant_factors
    return AbelianStructure.from_orders(gcd(d[i], d[j]) for i in range(len(d)) for j in range(i + 1, len(d)))


def wedge_presentation(orders: Sequence[int]) -> tuple[list[tuple[int, int]], PresentedAbelian]:
    """Presentation of the exterior square of sum Z/orders[i] on symbols e_i ^ e_j (i<j)."""
    pairs = [(i, j) for i in range(len(orders)) for j in range(i + 1, len(orders))]
    rels = []
    for k, (i, j) in enumerate(pairs):
        for o in (orders[i], orders[j]):
            r = [0] * len(pairs)
            r[k] = o
            rels.append(r)
    return pairs, PresentedAbelian(len(pairs), rels)


def coinvariants(P: PresentedAbelian, actions: Sequence) -> AbelianStructure:
    """Coinvariants of a presented Z[G]-module: quotient by (g-1)v for all generators v.

    Each action is an n x n integer matrix acting on column vectors (column j is the
    image of generator j).  It must preserve the relation lattice.
    """
    n = P.n_generators
    relations = P.relations.to_dense() if isinstance(P.relations, IntMatrix) else [list(r) for r in P.relations]
    rel_hnf = hnf(relations, n) if relations else []
    rels = [list(r) for r in relations]
    for g in actions:
        G = _dense(g)
        if len(G) != n or any(len(row) != n for row in G):
            raise ValueError("action matrix has wrong size")
        for r in relations:
            img = [sum(G[i][j] * r[j] for j in range(n)) for i in range(n)]
            if not lattice_contains(rel_hnf, img):
                raise ValueError("action does not preserve the relation lattice")
        for j in range(n):
            col = [G[i][j] - int(i == j) for i in range(n)]
            if any(col):
                rels.append(col)
    return structure_of_presented(PresentedAbelian(n, rels))


def hnf_coordinates(basis_hnf: list[list[int]], v: Sequence[int]) -> list[int]:
    """Coefficients of v in an HNF basis; ValueError if v is not in the lattice."""
    v = list(v)
    out = []
    for r in basis_hnf:
        c = next(j for j, x in enumerate(r) if x)
        if v[c] % r[c]:
            raise ValueError("vector is not in the lattice")
        q = v[c] // r[c]
        out.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    if any(v):
        raise ValueError("vector is not in the lattice")
    return out


def subquotient_structure(sub_rows: Sequence[Sequence[int]], rel_rows: Sequence[Sequence[int]],
                          ncols: int) -> AbelianStructure:
    """Structure of (S + R) / R for lattices S, R in Z^ncols given by spanning rows."""
    rel_rows = [list(r) for r in rel_rows if any(r)]
    B = hnf(list(sub_rows) + rel_rows, ncols)
    if not B:
        return AbelianStructure()
    coords = [hnf_coordinates(B, r) for r in rel_rows]
    return structure_of_presented(PresentedAbelian(len(B), coords))
