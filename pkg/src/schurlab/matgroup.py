"""
Concrete finite groups: SL_2(A) and its subgroups B, T, N, the quotient PSL_2,
direct products, and a few small abstract groups used as test material.

A FiniteGroup stores an indexed element list, a multiplication oracle on
elements, and distinguished generators.  Right-multiplication tables for the
generators and their inverses are built once by a BFS closure; they are what
the presentation and homology code consume.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Hashable, Sequence

from .ring_core import FiniteRing, analyze_local, unit_group, witt_sets, units


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group closed from generators under a multiplication oracle."""

    def __init__(self, elements: list, mul: Callable, generators: list[int], identity: int = 0,
                 label: str = "G", inv: Callable | None = None):
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        if len(self.index) != len(elements):
            raise GroupError("duplicate group elements")
        self._mul = mul
        self._inv = inv
        self.generators = list(generators)
        self.identity = identity
        self.label = label
        self._tables = None
        self._inverse = None

    @classmethod
    def closure(cls, gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                label: str = "G", limit: int | None = None, inv: Callable | None = None) -> "FiniteGroup":
        """BFS closure of ``gens`` under right multiplication, starting at the identity."""
        elements = [identity]
        index = {identity: 0}
        q = deque([identity])
        while q:
            x = q.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    q.append(y)
                    if limit is not None and len(elements) > limit:
                        raise GroupError(f"closure exceeds {limit} elements")
        G = cls(elements, mul, [index[g] for g in gens], 0, label, inv)
        return G

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.index[self._mul(self.elements[i], self.elements[j])]

    def inverse(self, i: int) -> int:
        if self._inverse is None:
            self._build_inverses()
        return self._inverse[i]

    def _build_inverses(self):
        n = self.order
        inv = [None] * n
        if self._inv is not None:
            for i, e in enumerate(self.elements):
                inv[i] = self.index[self._inv(e)]
        else:
            # walk the BFS tree: inverse(x*s) = s^-1 * inverse(x)
            T = self.gen_tables()
            ng = len(self.generators)
            sinv = [self._gen_inverse(s) for s in range(ng)]
            inv[self.identity] = self.identity
            q = deque([self.identity])
            while q:
                x = q.popleft()
                for s in range(ng):
                    y = T[s][x]
                    if inv[y] is None:
                        inv[y] = self.mul(sinv[s], inv[x])
                        q.append(y)
            if any(v is None for v in inv):
                raise GroupError("generators do not generate the group")
        self._inverse = inv

    def _gen_inverse(self, s: int) -> int:
        g = self.generators[s]
        x = g
        prev = self.identity
        while x != self.identity:
            prev = x
            x = self.mul(x, g)
        return prev

    def gen_tables(self) -> list[list[int]]:
        """T[s][x] = index of x * g_s."""
        if self._tables is None:
            els = self.elements
            idx = self.index
            m = self._mul
            self._tables = [[idx[m(e, els[g])] for e in els] for g in self.generators]
        return self._tables

    def inv_tables(self) -> list[list[int]]:
        """Ti[s][x] = index of x * g_s^-1."""
        if getattr(self, "_itables", None) is None:
            out = []
            for T in self.gen_tables():
                inv = [0] * self.order
                for x, y in enumerate(T):
                    inv[y] = x
                out.append(inv)
            self._itables = out
        return self._itables

    def element_order(self, i: int) -> int:
        n, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            n += 1
        return n

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    def check_axioms(self, samples: int = 200, seed: int = 0) -> None:
        import random
        rng = random.Random(seed)
        n = self.order
        for _ in range(samples):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise GroupError("associativity fails")
            if self.mul(a, self.identity) != a or self.mul(self.identity, a) != a:
                raise GroupError("identity law fails")
            if self.mul(a, self.inverse(a)) != self.identity:
                raise GroupError("inverse law fails")

    def commutator_subgroup_order(self) -> int:
        """Order of [G, G] by closure of all commutators of pairs (small groups only)."""
        n = self.order
        comms = set()
        gens = range(n)
        for a in gens:
            ia = self.inverse(a)
            for b in gens:
                comms.add(self.mul(self.mul(ia, self.inverse(b)), self.mul(a, b)))
        sub = {self.identity}
        frontier = [self.identity]
        cl = list(comms)
        while frontier:
            nxt = []
            for x in frontier:
                for c in cl:
                    y = self.mul(x, c)
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(sub)

    def with_generators(self, gens: Sequence[int], label: str | None = None) -> "FiniteGroup":
        """Same group, different distinguished generators (must generate)."""
        H = FiniteGroup(self.elements, self._mul, list(gens), self.identity, label or self.label, self._inv)
        seen = {self.identity}
        q = deque([self.identity])
        T = H.gen_tables()
        while q:
            x = q.popleft()
            for t in T:
                if t[x] not in seen:
                    seen.add(t[x])
                    q.append(t[x])
        if len(seen) != self.order:
            raise GroupError("the given elements do not generate the group")
        return H

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order}, gens={len(self.generators)})"


# ----------------------------------------------------------------------------
# 2x2 matrices over a finite ring

def mat_mul(A: FiniteRing, x, y):
    a, b, c, d = x
    e, f, g, h = y
    mul, add = A.mul, A.add
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def mat_det(A: FiniteRing, x) -> int:
    a, b, c, d = x
    return A.sub(A.mul(a, d), A.mul(b, c))


def mat_inv_sl2(A: FiniteRing, x):
    a, b, c, d = x
    return (d, A.neg(b), A.neg(c), a)


def e12(A: FiniteRing, b: int):
    return (A.one, b, A.zero, A.one)


def e21(A: FiniteRing, b: int):
    return (A.one, A.zero, b, A.one)


def diag(A: FiniteRing, t: int):
    return (t, A.zero, A.zero, A.inverse(t))


def sl2_order_formula(A: FiniteRing) -> int:
    la = analyze_local(A)
    if not la.is_local:
        raise GroupError("order formula needs a local ring")
    q = la.residue_order
    n = A.order
    return n ** 3 * (q * q - 1) // (q * q)


def det_one_filter(A: FiniteRing) -> list[tuple]:
    els = A.elements()
    return [m for m in itertools.product(els, repeat=4) if mat_det(A, m) == A.one]


def enumerate_sl2(A: FiniteRing, limit: int | None = None) -> FiniteGroup:
    """SL_2(A) as the closure of elementary matrices.

    Distinguished generators: E12(1), E21(1) when they generate; otherwise
    E12(b), E21(b) over the additive basis of A are appended one at a time.
    For non-local rings the closure is checked against the determinant filter.
    """
    mul = lambda x, y: mat_mul(A, x, y)
    inv = lambda x: mat_inv_sl2(A, x)
    I = (A.one, A.zero, A.zero, A.one)
    la = analyze_local(A)
    if la.is_local:
        target = sl2_order_formula(A)
    else:
        if A.order ** 4 > 10 ** 7:
            raise GroupError("determinant filter too large")
        target = len(det_one_filter(A))
    if limit is not None and target > limit:
        raise GroupError(f"|SL2({A.label})| = {target} exceeds the limit {limit}")
    candidates = [e12(A, A.one), e21(A, A.one)]
    extra = []
    for b in A.basis():
        if b != A.one:
            extra.append(e12(A, b))
            extra.append(e21(A, b))
    gens = list(candidates)
    G = FiniteGroup.closure(gens, mul, I, label=f"SL2({A.label})", inv=inv)
    for x in extra:
        if G.order == target:
            break
        gens.append(x)
        G = FiniteGroup.closure(gens, mul, I, label=f"SL2({A.label})", inv=inv)
    if G.order != target:
        raise GroupError(f"elementary closure has order {G.order}, expected {target}")
    G.ring = A
    return G


def subgroup_B(A: FiniteRing) -> FiniteGroup:
    """Upper triangular matrices (a b; 0 a^-1)."""
    mul = lambda x, y: mat_mul(A, x, y)
    inv = lambda x: mat_inv_sl2(A, x)
    ug = unit_group(A)
    gens = [diag(A, t) for t in ug.generators] + [e12(A, b) for b in A.basis()]
    I = (A.one, A.zero, A.zero, A.one)
    G = FiniteGroup.closure(gens, mul, I, label=f"B({A.label})", inv=inv)
    if G.order != A.order * len(ug.units):
        raise GroupError("B(A) has the wrong order")
    G.ring = A
    return G


def subgroup_T(A: FiniteRing) -> FiniteGroup:
    mul = lambda x, y: mat_mul(A, x, y)
    ug = unit_group(A)
    I = (A.one, A.zero, A.zero, A.one)
    gens = [diag(A, t) for t in ug.generators] or [I]
    G = FiniteGroup.closure(gens, mul, I, label=f"T({A.label})", inv=lambda x: mat_inv_sl2(A, x))
    G.ring = A
    return G


def subgroup_N(A: FiniteRing) -> FiniteGroup:
    mul = lambda x, y: mat_mul(A, x, y)
    I = (A.one, A.zero, A.zero, A.one)
    gens = [e12(A, b) for b in A.basis()]
    G = FiniteGroup.closure(gens, mul, I, label=f"N({A.label})", inv=lambda x: mat_inv_sl2(A, x))
    G.ring = A
    return G


def psl2(G: FiniteGroup, A: FiniteRing) -> FiniteGroup:
    """SL_2(A) modulo the scalars b*I with b^2 = 1."""
    mu2 = [b for b in units(A) if A.mul(b, b) == A.one]
    scal = [(b, A.zero, A.zero, b) for b in mu2]

    def canon(x):
        return min(mat_mul(A, s, x) for s in scal)

    mul = lambda x, y: canon(mat_mul(A, x, y))
    I = canon((A.one, A.zero, A.zero, A.one))
    gens = [canon(G.elements[g]) for g in G.generators]
    H = FiniteGroup.closure(gens, mul, I, label=f"PSL2({A.label})",
                            inv=lambda x: canon(mat_inv_sl2(A, x)))
    if H.order * len(mu2) != G.order:
        raise GroupError("PSL2 order mismatch")
    H.ring = A
    return H


def direct_product_group(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    eg, eh = G.identity, H.identity

    def mul(x, y):
        return (G.mul(x[0], y[0]), H.mul(x[1], y[1]))

    def inv(x):
        return (G.inverse(x[0]), H.inverse(x[1]))

    gens = [(g, eh) for g in G.generators] + [(eg, h) for h in H.generators]
    return FiniteGroup.closure(gens, mul, (eg, eh), label=f"{G.label}x{H.label}", inv=inv)


def reduction_to_residue(G: FiniteGroup, A: FiniteRing):
    """Return SL_2(k) and the map index -> index of the coordinatewise reduction."""
    from .ring_core import residue_map
    k, proj = residue_map(A)
    K = enumerate_sl2(k)
    return K, (lambda i: K.index[tuple(proj(v) for v in G.elements[i])])


# ----------------------------------------------------------------------------
# small abstract groups (permutations and cyclic products)

def perm_mul(x, y):
    """Apply x then y (right action)."""
    return tuple(y[i] for i in x)


def perm_inv(x):
    out = [0] * len(x)
    for i, v in enumerate(x):
        out[v] = i
    return tuple(out)


def permutation_group(gens: Sequence[Sequence[int]], label: str = "G") -> FiniteGroup:
    n = len(gens[0])
    return FiniteGroup.closure([tuple(g) for g in gens], perm_mul, tuple(range(n)), label=label, inv=perm_inv)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.closure([1 % n], lambda a, b: (a + b) % n, 0, label=f"C{n}", inv=lambda a: (-a) % n)


def abelian_group(orders: Sequence[int]) -> FiniteGroup:
    orders = tuple(orders)
    k = len(orders)

    def mul(a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, orders))

    gens = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    return FiniteGroup.closure(gens, mul, (0,) * k, label="x".join(f"C{o}" for o in orders),
                               inv=lambda a: tuple((-x) % o for x, o in zip(a, orders)))


def symmetric_group(n: int) -> FiniteGroup:
    if n < 2:
        return permutation_group([tuple(range(max(n, 1)))], label=f"S{n}")
    t = list(range(n))
    t[0], t[1] = 1, 0
    c = list(range(1, n)) + [0]
    return permutation_group([t, c], label=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    gens = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
        gens.append(p)
    return permutation_group(gens, label=f"A{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    r = [(i + 1) % n for i in range(n)]
    s = [(-i) % n for i in range(n)]
    return permutation_group([r, s], label=f"D{2 * n}")


def quaternion_group() -> FiniteGroup:
    # unit quaternions +-1, +-i, +-j, +-k encoded as (sign, unit) with unit in 1,i,j,k
    table = {("1", u): (1, u) for u in "1ijk"}
    table.update({(u, "1"): (1, u) for u in "1ijk"})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return FiniteGroup.closure([(1, "i"), (1, "j")], mul, (1, "1"), label="Q8")
