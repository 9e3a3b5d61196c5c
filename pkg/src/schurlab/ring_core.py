"""
Finite commutative rings as structure constants over an additive basis.

Every ring is stored the same way: an additive type (e_1, ..., e_k) saying
that (A, +) is the direct sum of the cyclic groups Z/e_i, a k x k table of
coordinate vectors giving the products of basis elements, and the coordinate
vector of 1.  Elements are handled as integers 0 <= x < |A| through a
mixed-radix encoding of their coordinates (coordinate 0 is the fastest digit).

Named constructors (Z/p^l, finite fields, Galois rings, F_q[X]/(X^n),
truncated multivariate rings, Eisenstein PIRs, products) all compile down to
this form and record their construction parameters in ``family``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

from .abelian import (
    AbelianStructure,
    factorize,
    hnf,
    is_prime,
    lattice_contains,
    smith_normal_form,
    subgroup_from_mult,
    _unimodular_inverse,
)

TABLE_LIMIT = 256        # full add/mul tables up to this order
COORD_CACHE_LIMIT = 1 << 17
EXHAUSTIVE_LIMIT = 10 ** 4


class RingError(ValueError):
    pass


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n == p**k, or None."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


@dataclass(frozen=True)
class RingElement:
    """Coordinates of a ring element, each reduced modulo its additive order."""

    ring: "FiniteRing" = field(repr=False, compare=False)
    coords: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.ring.encode(self.coords)

    def __add__(self, other):
        return self.ring.element(self.ring.add_coords(self.coords, other.coords))

    def __sub__(self, other):
        return self.ring.element(self.ring.add_coords(self.coords, self.ring.neg_coords(other.coords)))

    def __neg__(self):
        return self.ring.element(self.ring.neg_coords(self.coords))

    def __mul__(self, other):
        return self.ring.element(self.ring.mul_coords(self.coords, other.coords))

    def __eq__(self, other):
        return isinstance(other, RingElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)


class FiniteRing:
    """Finite commutative unital ring given by structure constants."""

    def __init__(self, additive_type: Sequence[int], struct_consts, one: Sequence[int],
                 label: str = "A", family: tuple | None = None, local_hint: dict | None = None,
                 components: list | None = None):
        self.additive_type = tuple(int(e) for e in additive_type)
        if any(e < 2 for e in self.additive_type):
            raise RingError(f"additive orders must be >= 2: {self.additive_type}")
        k = len(self.additive_type)
        self.rank = k
        self.struct_consts = tuple(
            tuple(tuple(int(v) % e for v, e in zip(struct_consts[i][j], self.additive_type))
                  for j in range(k)) for i in range(k))
        self.one_coords = tuple(int(v) % e for v, e in zip(one, self.additive_type))
        self.label = label
        self.family = family
        self.local_hint = local_hint
        self.components = components
        self.order = prod(self.additive_type)
        self._weights = []
        w = 1
        for e in self.additive_type:
            self._weights.append(w)
            w *= e
        # sparse structure constants: (i, j) -> [(t, v), ...]
        self._sc = [[[(t, v) for t, v in enumerate(self.struct_consts[i][j]) if v]
                     for j in range(k)] for i in range(k)]
        self._coords = None
        if self.order <= COORD_CACHE_LIMIT:
            self._coords = [self._decode(x) for x in range(self.order)]
        self._add_t = self._mul_t = None
        self.zero = 0
        self.one = self.encode(self.one_coords)
        if self.order <= TABLE_LIMIT:
            self._build_tables()
        self._cache: dict = {}

    # -- encoding

    def encode(self, coords: Sequence[int]) -> int:
        return sum((c % e) * w for c, e, w in zip(coords, self.additive_type, self._weights))

    def _decode(self, x: int) -> tuple[int, ...]:
        out = []
        for e in self.additive_type:
            x, r = divmod(x, e)
            out.append(r)
        return tuple(out)

    def decode(self, x: int) -> tuple[int, ...]:
        if self._coords is not None:
            return self._coords[x]
        return self._decode(x)

    def element(self, coords: Sequence[int]) -> RingElement:
        return RingElement(self, tuple(c % e for c, e in zip(coords, self.additive_type)))

    def elements(self) -> range:
        return range(self.order)

    def basis(self) -> list[int]:
        """Additive basis elements b_i as integers."""
        return list(self._weights)

    # -- coordinate arithmetic

    def add_coords(self, a, b):
        return tuple((x + y) % e for x, y, e in zip(a, b, self.additive_type))

    def neg_coords(self, a):
        return tuple((-x) % e for x, e in zip(a, self.additive_type))

    def scale_coords(self, n: int, a):
        return tuple((n * x) % e for x, e in zip(a, self.additive_type))

    def mul_coords(self, a, b):
        res = [0] * self.rank
        sc = self._sc
        for i, ai in enumerate(a):
            if ai:
                row = sc[i]
                for j, bj in enumerate(b):
                    if bj:
                        c = ai * bj
                        for t, v in row[j]:
                            res[t] += c * v
        return tuple(r % e for r, e in zip(res, self.additive_type))

    # -- integer arithmetic

    def _build_tables(self):
        n = self.order
        co = self._coords
        self._add_t = [[self.encode(self.add_coords(co[a], co[b])) for b in range(n)] for a in range(n)]
        self._mul_t = [[self.encode(self.mul_coords(co[a], co[b])) for b in range(n)] for a in range(n)]
        self._neg_t = [self.encode(self.neg_coords(co[a])) for a in range(n)]

    def add(self, a: int, b: int) -> int:
        if self._add_t is not None:
            return self._add_t[a][b]
        return self.encode(self.add_coords(self.decode(a), self.decode(b)))

    def neg(self, a: int) -> int:
        if self._add_t is not None:
            return self._neg_t[a]
        return self.encode(self.neg_coords(self.decode(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_t is not None:
            return self._mul_t[a][b]
        return self.encode(self.mul_coords(self.decode(a), self.decode(b)))

    def from_int(self, n: int) -> int:
        return self.encode(self.scale_coords(n, self.one_coords))

    def power(self, a: int, n: int) -> int:
        if n < 0:
            return self.power(self.inverse(a), -n)
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def additive_order(self, a: int) -> int:
        o = 1
        for c, e in zip(self.decode(a), self.additive_type):
            if c:
                oc = e // _gcd(c, e)
                o = o * oc // _gcd(o, oc)
        return o

    @cached_property
    def characteristic(self) -> int:
        return self.additive_order(self.one)

    # -- units

    def is_unit(self, a: int) -> bool:
        if self.components is not None:
            return all(R.is_unit(R.encode(self.decode(a)[lo:hi])) for R, lo, hi in self.components)
        la = analyze_local(self)
        if la.is_local:
            return not self.in_maximal_ideal(a)
        return self._inverse_search(a) is not None

    def _inverse_search(self, a: int):
        for y in range(self.order):
            if self.mul(a, y) == self.one:
                return y
        return None

    def inverse(self, a: int) -> int:
        inv = self._cache.setdefault("inv", {})
        if a in inv:
            return inv[a]
        if self.components is not None:
            coords = self.decode(a)
            parts = []
            for R, lo, hi in self.components:
                parts.extend(R.decode(R.inverse(R.encode(coords[lo:hi]))))
            y = self.encode(parts)
        else:
            la = analyze_local(self)
            if la.is_local:
                if self.in_maximal_ideal(a):
                    raise RingError("element is not a unit")
                y = self.power(a, unit_group_order(self) - 1)
            else:
                y = self._inverse_search(a)
                if y is None:
                    raise RingError("element is not a unit")
        if self.mul(a, y) != self.one:
            raise RingError("inverse computation failed")
        inv[a] = y
        return y

    def in_maximal_ideal(self, a: int) -> bool:
        la = analyze_local(self)
        if not la.is_local:
            raise RingError(f"{self.label} is not local")
        return lattice_contains(self._cache["m_hnf"], self.decode(a))

    # -- ideals

    def ideal_lattice(self, gens: Iterable[int]) -> list[list[int]]:
        """HNF basis (in coordinate space, including the modulus relations) of the ideal."""
        rows = [[e if i == j else 0 for j in range(self.rank)] for i, e in enumerate(self.additive_type)]
        for g in gens:
            gc = self.decode(g)
            for b in self.basis():
                rows.append(list(self.mul_coords(gc, self.decode(b))))
        return hnf(rows, self.rank)

    def lattice_order(self, lat: list[list[int]]) -> int:
        """Number of ring elements in the subgroup given by a full-rank HNF lattice."""
        det = prod(r[next(j for j, v in enumerate(r) if v)] for r in lat)
        return self.order // det

    def lattice_elements(self, lat: list[list[int]]) -> list[int]:
        return [x for x in range(self.order) if lattice_contains(lat, self.decode(x))]

    def lattice_generators(self, lat: list[list[int]]) -> list[int]:
        return [self.encode(r) for r in lat if any(v % e for v, e in zip(r, self.additive_type))]

    def product_lattice(self, lat1, lat2) -> list[list[int]]:
        """HNF of the additive span of products I*J."""
        rows = [[e if i == j else 0 for j in range(self.rank)] for i, e in enumerate(self.additive_type)]
        g1 = self.lattice_generators(lat1)
        g2 = self.lattice_generators(lat2)
        for a in g1:
            for b in g2:
                rows.append(list(self.decode(self.mul(a, b))))
        return hnf(rows, self.rank)

    # -- checks

    def check_axioms(self, samples: int | None = None, seed: int = 0) -> None:
        """Commutativity, associativity, distributivity and unit law.

        On basis triples this is exhaustive (everything is multilinear); with
        ``samples`` random element triples are also tested.
        """
        B = self.basis()
        for a in B:
            if self.mul(self.one, a) != a:
                raise RingError("1 is not a multiplicative identity")
            for b in B:
                ab = self.mul(a, b)
                if ab != self.mul(b, a):
                    raise RingError("multiplication is not commutative")
                # the table must respect the additive orders
                e = self.additive_order(a)
                if self.additive_order(ab) and e % self.additive_order(ab):
                    raise RingError("structure constants are incompatible with additive orders")
                for c in B:
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        raise RingError("multiplication is not associative")
        if samples:
            rng = random.Random(seed)
            for _ in range(samples):
                a, b, c = (rng.randrange(self.order) for _ in range(3))
                if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                    raise RingError("distributivity fails")
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise RingError("associativity fails")

    def __repr__(self):
        return f"FiniteRing({self.label}, order={self.order})"

    def cache_key(self) -> str:
        return repr((self.family, self.additive_type, self.struct_consts, self.one_coords))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ----------------------------------------------------------------------------
# generic constructions

def make_zmod(p: int, l: int) -> FiniteRing:
    if not is_prime(p):
        raise RingError(f"{p} is not prime")
    if l < 1:
        raise RingError("exponent must be positive")
    n = p ** l
    return FiniteRing((n,), [[(1,)]], (1,), label=f"Z/{n}", family=("zmod", p, l),
                      local_hint={"m_gens_coords": [(p,)], "q": p})


def free_algebra_over(R: FiniteRing, s: int, table, label: str, **kw) -> FiniteRing:
    """Free R-module with basis e_0 = 1, e_1, ..., e_{s-1} and products
    e_a * e_b = sum_c table[a][b][c] * e_c with coefficients given as R-integers.
    """
    k = R.rank
    n = s * k
    atype = [R.additive_type[i] for _ in range(s) for i in range(k)]
    sc = [[None] * n for _ in range(n)]
    Rb = R.basis()
    for a in range(s):
        for b in range(s):
            coeff = table[a][b]
            for i in range(k):
                for j in range(k):
                    prod_ij = R.mul(Rb[i], Rb[j])
                    vec = [0] * n
                    for c in range(s):
                        if coeff[c]:
                            coords = R.decode(R.mul(prod_ij, coeff[c]))
                            for t in range(k):
                                vec[c * k + t] += coords[t]
                    sc[a * k + i][b * k + j] = vec
    one = list(R.one_coords) + [0] * (n - k)
    return FiniteRing(atype, sc, one, label=label, **kw)


def poly_mul(R: FiniteRing, f: Sequence[int], g: Sequence[int]) -> list[int]:
    out = [R.zero] * (len(f) + len(g) - 1 if f and g else 0)
    for i, a in enumerate(f):
        if a == R.zero:
            continue
        for j, b in enumerate(g):
            if b != R.zero:
                out[i + j] = R.add(out[i + j], R.mul(a, b))
    return out


def poly_rem_monic(R: FiniteRing, f: Sequence[int], g: Sequence[int]) -> list[int]:
    """Remainder of f modulo the monic polynomial g (coefficient lists, low degree first)."""
    f = list(f)
    s = len(g) - 1
    if g[-1] != R.one:
        raise RingError("modulus must be monic")
    for d in range(len(f) - 1, s - 1, -1):
        c = f[d]
        if c != R.zero:
            for j in range(s + 1):
                f[d - s + j] = R.sub(f[d - s + j], R.mul(c, g[j]))
    return (f[:s] + [R.zero] * s)[:s]


def polynomial_extension(R: FiniteRing, g: Sequence[int], label: str, **kw) -> FiniteRing:
    """R[X]/(g) for g monic of degree s >= 1 (coefficients low degree first, as R-integers)."""
    s = len(g) - 1
    if s < 1:
        raise RingError("extension polynomial must have positive degree")
    table = []
    for a in range(s):
        row = []
        for b in range(s):
            mono = [R.zero] * (a + b) + [R.one]
            row.append(poly_rem_monic(R, mono, g))
        table.append(row)
    return free_algebra_over(R, s, table, label, **kw)


def _primary_split(d: int) -> list[tuple[int, int]]:
    """Z/d = sum of Z/q for its prime powers q; returns (q, multiplier d/q)."""
    return [(p ** e, d // p ** e) for p, e in sorted(factorize(d).items())]


def quotient_ring(A: FiniteRing, ideal_gens: Iterable[int], label: str, **kw) -> FiniteRing:
    """A/I for the ideal generated by ``ideal_gens``, rebased on a fresh additive basis."""
    lat = A.ideal_lattice(ideal_gens)
    S, U, V = smith_normal_form(lat)
    Vinv = _unimodular_inverse(V)
    diag = [S[i][i] for i in range(A.rank)]
    # coordinate map x -> (x V)_j mod d_j; basis element j of the quotient is row j of V^-1
    new_basis = []  # (order, coordinates of the basis element in A)
    proj_cols = []  # (column of V, modulus, multiplier inverse info)
    for j, d in enumerate(diag):
        if d == 1:
            continue
        for q, mult in _primary_split(d):
            new_basis.append((q, [mult * v for v in Vinv[j]]))
            proj_cols.append((j, q, d, mult))
    if not new_basis:
        raise RingError("quotient is the zero ring")

    def project(coords):
        out = []
        for j, q, d, mult in proj_cols:
            y = sum(c * V[i][j] for i, c in enumerate(coords)) % d
            # y mod d lives in Z/d; its Z/q component in the basis (mult * b_j) is y * mult^-1 mod q
            out.append(y * pow(mult, -1, q) % q if mult % q else y % q)
        return out

    atype = [q for q, _ in new_basis]
    n = len(atype)
    sc = [[None] * n for _ in range(n)]
    elems = [A.encode([c % e for c, e in zip(v, A.additive_type)]) for _, v in new_basis]
    for i in range(n):
        for j in range(n):
            sc[i][j] = project(A.decode(A.mul(elems[i], elems[j])))
    one = project(A.one_coords)
    Q = FiniteRing(atype, sc, one, label=label, **kw)
    Q._cache["projection"] = (A, project)
    return Q


def project_to_quotient(Q: FiniteRing, a: int) -> int:
    A, project = Q._cache["projection"]
    return Q.encode(project(A.decode(a)))


# ----------------------------------------------------------------------------
# named families

def _polys_fp(p: int, deg: int):
    """Monic polynomials of the given degree over F_p, lexicographic in (c_{d-1}, ..., c_0)."""
    for tup in itertools.product(range(p), repeat=deg):
        yield list(reversed(tup)) + [1]


def _poly_rem_fp(f, g, p):
    f = [c % p for c in f]
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    for d in range(len(f) - 1, dg - 1, -1):
        c = f[d] * inv % p
        if c:
            for j in range(dg + 1):
                f[d - dg + j] = (f[d - dg + j] - c * g[j]) % p
    return f[:dg]


def is_irreducible_fp(f: Sequence[int], p: int) -> bool:
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _polys_fp(p, d):
            if not any(_poly_rem_fp(f, g, p)):
                return False
    return True


def conway_free_irreducible(p: int, r: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree r over F_p (low degree first)."""
    for f in _polys_fp(p, r):
        if is_irreducible_fp(f, p):
            return f
    raise RingError("no irreducible polynomial found")  # pragma: no cover


def make_finite_field(p: int, r: int) -> FiniteRing:
    if not is_prime(p):
        raise RingError(f"{p} is not prime")
    if r < 1:
        raise RingError("degree must be positive")
    q = p ** r
    if r == 1:
        R = make_zmod(p, 1)
        R.label = f"F({p})"
        R.family = ("field", p, r)
        R.local_hint = {"m_gens_coords": [], "q": p}
        return R
    f = conway_free_irreducible(p, r)
    base = make_zmod(p, 1)
    return polynomial_extension(base, [base.from_int(c) for c in f], label=f"F({q})",
                                family=("field", p, r), local_hint={"m_gens_coords": [], "q": q})


def make_galois_ring(p: int, l: int, m: int) -> FiniteRing:
    if not is_prime(p):
        raise RingError(f"{p} is not prime")
    if l < 1 or m < 1:
        raise RingError("GR parameters must be positive")
    if m == 1:
        R = make_zmod(p, l)
        R.label = f"GR({p ** l},1)"
        R.family = ("galois", p, l, 1)
        return R
    f = conway_free_irreducible(p, m)
    base = make_zmod(p, l)
    hint = {"m_gens_coords": [(p,) + (0,) * (m - 1)], "q": p ** m}
    return polynomial_extension(base, [base.from_int(c) for c in f], label=f"GR({p ** l},{m})",
                                family=("galois", p, l, m), local_hint=hint)


def make_quasi_galois(p: int, r: int, n: int) -> FiniteRing:
    """F_{p^r}[X]/(X^n)."""
    if n < 1:
        raise RingError("n must be positive")
    F = make_finite_field(p, r)
    q = p ** r
    if n == 1:
        F.label = f"QG({q},1)"
        F.family = ("quasi_galois", p, r, 1)
        return F
    g = [F.zero] * n + [F.one]
    k = F.rank
    xc = [0] * (n * k)
    xc[k] = 1  # X = 1 * e_1
    hint = {"m_gens_coords": [tuple(xc)], "q": q}
    return polynomial_extension(F, g, label=f"QG({q},{n})", family=("quasi_galois", p, r, n),
                                local_hint=hint)


def make_truncated_multivariate(p: int, r: int, m: int) -> FiniteRing:
    """F_{p^r}[X_1..X_m]/(X_1..X_m)^2."""
    if m < 1:
        raise RingError("m must be positive")
    F = make_finite_field(p, r)
    q = p ** r
    s = m + 1
    table = []
    for a in range(s):
        row = []
        for b in range(s):
            coeff = [F.zero] * s
            if a == 0:
                coeff[b] = F.one
            elif b == 0:
                coeff[a] = F.one
            row.append(coeff)
        table.append(row)
    k = F.rank
    gens = []
    for i in range(1, s):
        v = [0] * (s * k)
        v[i * k] = 1
        gens.append(tuple(v))
    return free_algebra_over(F, s, table, label=f"TM({q},{m})", family=("truncated", p, r, m),
                             local_hint={"m_gens_coords": gens, "q": q})


def make_pir(p: int, l: int, m: int, eisenstein_coeffs: Sequence, t: int) -> FiniteRing:
    """GR(p^l, m)[X]/(g(X), p^(l-1) X^t) with g = X^s + c_{s-1} X^{s-1} + ... + c_0 Eisenstein.

    ``eisenstein_coeffs`` lists c_0, ..., c_{s-1}; each is an integer (a constant
    of Z/p^l) or a coordinate tuple of length m in the Galois ring.
    """
    G = make_galois_ring(p, l, m)
    coeffs = []
    for c in eisenstein_coeffs:
        if isinstance(c, int):
            coeffs.append(G.from_int(c))
        else:
            c = tuple(c)
            if len(c) != G.rank:
                raise RingError("coefficient tuple has the wrong length")
            coeffs.append(G.encode(c))
    s = len(coeffs)
    if s == 0:
        # the empty extension: nothing is adjoined, the ring is GR(p^l, m)
        R = make_galois_ring(p, l, m)
        R.label = f"PIR({p},{l},{m};;{t})"
        R.family = ("pir", p, l, m, (), t)
        return R
    if t < 1:
        raise RingError("t must be positive")
    pA = G.ideal_lattice([G.from_int(p)])
    p2A = G.ideal_lattice([G.from_int(p * p)])
    for c in coeffs:
        if not lattice_contains(pA, G.decode(c)):
            raise RingError("not Eisenstein: a lower coefficient is not divisible by p")
    if l >= 2 and lattice_contains(p2A, G.decode(coeffs[0])):
        raise RingError("not Eisenstein: constant term is divisible by p^2")
    ext = polynomial_extension(G, coeffs + [G.one], label="tmp")
    k = G.rank
    # p^(l-1) X^t inside the extension
    xt = [G.zero] * (t + 1)
    xt[t] = G.from_int(p ** (l - 1))
    red = poly_rem_monic(G, xt, coeffs + [G.one]) if t >= s else xt[:s] + [G.zero] * (s - t - 1)
    red = (red + [G.zero] * s)[:s]
    coords = []
    for c in red:
        coords.extend(G.decode(c))
    rel = ext.encode(coords)
    label = f"PIR({p},{l},{m};{','.join(str(c) for c in eisenstein_coeffs)};{t})"
    fam = ("pir", p, l, m, tuple(tuple(c) if not isinstance(c, int) else c for c in eisenstein_coeffs), t)
    Q = quotient_ring(ext, [rel], label=label, family=fam)
    # maximal ideal is (X)
    xc = [0] * ext.rank
    if s >= 2:
        xc[k] = 1
        x = ext.encode(xc)
    else:
        x = ext.neg(ext.encode(list(G.decode(coeffs[0])) + [0] * (ext.rank - k)))
    Q.local_hint = {"m_gens_coords": [Q.decode(project_to_quotient(Q, x))], "q": p ** m}
    Q._cache.clear()
    return Q


def make_gilmer_f() -> FiniteRing:
    """Z[X]/(4, 2X, X^2 - 2)."""
    R = make_pir(2, 2, 1, [2, 0], 1)
    R.label = "GILMER_F"
    R.family = ("gilmer_f",)
    return R


def product(A: FiniteRing, B: FiniteRing) -> FiniteRing:
    if A.order == 1 or B.order == 1:
        raise RingError("product with the zero ring")
    ka, kb = A.rank, B.rank
    n = ka + kb
    sc = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(ka):
        for j in range(ka):
            sc[i][j][:ka] = A.struct_consts[i][j]
    for i in range(kb):
        for j in range(kb):
            sc[ka + i][ka + j][ka:] = B.struct_consts[i][j]
    comps = []
    for R, lo in ((A, 0), (B, ka)):
        if R.components is not None:
            comps.extend((C, lo + a, lo + b) for C, a, b in R.components)
        else:
            comps.append((R, lo, lo + R.rank))
    P = FiniteRing(A.additive_type + B.additive_type, sc, A.one_coords + B.one_coords,
                   label=f"{A.label}*{B.label}", family=("product", A.family, B.family),
                   components=comps)
    P._product_factors = [C for C, _, _ in comps]
    return P


# ----------------------------------------------------------------------------
# local structure

@dataclass(frozen=True)
class LocalAnalysis:
    is_local: bool
    maximal_ideal: tuple[int, ...] = ()
    residue_order: int = 0
    residue_char: int = 0
    char: int = 0
    nilpotency: int = 0
    is_principal_ideal: bool = False
    method: str = ""


def _nilradical(A: FiniteRing) -> list[int]:
    c = 1
    while (1 << c) < A.order.bit_length() + 1:
        c += 1
    out = []
    for x in A.elements():
        y = x
        for _ in range(c):
            y = A.mul(y, y)
        if y == A.zero:
            out.append(x)
    return out


def exhaustive_local_test(A: FiniteRing) -> tuple[bool, list[int], int]:
    """Locality from scratch: nilradical N, q = |A/N|; local iff q is a prime power
    and x^(q-1) - 1 is nilpotent for every x outside N (then every non-nilpotent is a
    unit, so the non-units are exactly N, which is additively closed).
    """
    if A.order > EXHAUSTIVE_LIMIT:
        raise RingError("ring too large for the exhaustive locality test")
    N = _nilradical(A)
    Nset = set(N)
    q, r = divmod(A.order, len(N))
    if r or prime_power(q) is None:
        return False, N, q
    for x in A.elements():
        if x in Nset:
            continue
        if A.sub(A.power(x, q - 1), A.one) not in Nset:
            return False, N, q
    return True, N, q


def analyze_local(A: FiniteRing) -> LocalAnalysis:
    if "local" in A._cache:
        return A._cache["local"]
    if A.components is not None and len(A.components) > 1:
        la = LocalAnalysis(False, char=A.characteristic, method="product")
        A._cache["local"] = la
        return la
    if A.local_hint is not None:
        gens = [A.encode(c) for c in A.local_hint["m_gens_coords"]]
        lat = A.ideal_lattice(gens)
        q = A.local_hint["q"]
        method = "analytic"
    else:
        ok, N, q = exhaustive_local_test(A)
        if not ok:
            la = LocalAnalysis(False, char=A.characteristic, method="exhaustive")
            A._cache["local"] = la
            return la
        lat = A.ideal_lattice(N)
        method = "exhaustive"
    A._cache["m_hnf"] = lat
    m_size = A.lattice_order(lat)
    if m_size * q != A.order:
        raise RingError("maximal ideal size inconsistent with residue field")
    # powers of m
    powers = [lat]
    cur = lat
    while A.lattice_order(cur) > 1:
        cur = A.product_lattice(cur, lat)
        powers.append(cur)
        if len(powers) > A.order.bit_length() + 1:
            raise RingError("maximal ideal is not nilpotent")
    A._cache["m_powers"] = powers
    nil = len(powers) if m_size > 1 else 1
    m2_size = A.lattice_order(powers[1]) if len(powers) > 1 else 1
    principal = m_size // m2_size <= q
    p = prime_power(q)[0]
    elems = tuple(A.lattice_elements(lat)) if A.order <= EXHAUSTIVE_LIMIT else ()
    la = LocalAnalysis(True, elems, q, p, A.characteristic, nil, principal, method)
    A._cache["local"] = la
    return la


def maximal_ideal_power_order(A: FiniteRing, i: int) -> int:
    """|m^i| (i >= 0)."""
    analyze_local(A)
    if i == 0:
        return A.order
    powers = A._cache["m_powers"]
    if i - 1 < len(powers):
        return A.lattice_order(powers[i - 1])
    return 1


def unit_group_order(A: FiniteRing) -> int:
    la = analyze_local(A)
    if la.is_local:
        return A.order - A.order // la.residue_order
    return len(units(A))


def units(A: FiniteRing) -> list[int]:
    if "units" not in A._cache:
        if A.components is not None:
            parts = [[R.decode(u) for u in units(R)] for R, _, _ in A.components]
            A._cache["units"] = sorted(A.encode(sum(cs, ())) for cs in itertools.product(*parts))
        else:
            A._cache["units"] = [x for x in A.elements() if A.is_unit(x)]
    return A._cache["units"]


@dataclass
class UnitGroupData:
    units: list[int]
    structure: AbelianStructure
    generators: list[int]
    one_plus_m_structure: AbelianStructure | None
    cyclic_part_gen: int | None


def _element_order(A: FiniteRing, x: int, bound: int) -> int:
    y, n = x, 1
    while y != A.one:
        y = A.mul(y, x)
        n += 1
        if n > bound:
            raise RingError("element order exceeds the group order")
    return n


def unit_group(A: FiniteRing) -> UnitGroupData:
    if "unit_group" in A._cache:
        return A._cache["unit_group"]
    la = analyze_local(A)
    U = units(A)
    if not la.is_local:
        dec = subgroup_from_mult(U, A.mul, A.one)
        data = UnitGroupData(U, dec.structure, dec.generators, None, None)
        A._cache["unit_group"] = data
        return data
    q = la.residue_order
    one_plus_m = [A.add(A.one, x) for x in la.maximal_ideal]
    dec = subgroup_from_mult(one_plus_m, A.mul, A.one)
    P = len(one_plus_m)
    t = None
    qf = factorize(q - 1) if q > 2 else {}
    for x in U:
        y = A.power(x, P)
        if q == 2 or all(A.power(y, (q - 1) // r) != A.one for r in qf):
            t = y
            break
    if t is None:
        raise RingError("no element of order q-1 found")
    factors = list(dec.structure.invariant_factors)
    gens = list(dec.generators)
    if q > 2:
        if factors:
            factors[-1] *= q - 1
            gens[-1] = A.mul(gens[-1], t)
        else:
            factors = [q - 1]
            gens = [t]
    structure = AbelianStructure(tuple(factors))
    if structure.order != len(U):
        raise RingError("unit group order mismatch")
    data = UnitGroupData(U, structure, gens, dec.structure, t)
    A._cache["unit_group"] = data
    return data


def residue_map(A: FiniteRing):
    """Residue field k = A/m as a ring together with the projection (on integers)."""
    if "residue" not in A._cache:
        la = analyze_local(A)
        gens = A.lattice_generators(A._cache["m_hnf"])
        k = quotient_ring(A, gens, label=f"k({A.label})", local_hint={"m_gens_coords": [], "q": la.residue_order})
        A._cache["residue"] = k
    k = A._cache["residue"]
    return k, (lambda a: project_to_quotient(k, a))


# ----------------------------------------------------------------------------
# square classes

@dataclass
class WittData:
    square_classes: list[int]
    mu2: list[int]
    W: list[int]
    V: list[int]
    class_of: dict = field(repr=False, default_factory=dict)

    def class_index(self, x: int) -> int:
        return self.class_of[x]


def witt_sets(A: FiniteRing) -> WittData:
    if "witt" in A._cache:
        return A._cache["witt"]
    la = analyze_local(A)
    if not la.is_local:
        raise RingError("witt_sets requires a local ring")
    U = units(A)
    Uset = set(U)
    squares = sorted({A.mul(u, u) for u in U})
    sqset = set(squares)
    class_of: dict[int, int] = {}
    reps: list[int] = []
    for u in U:
        if u in class_of:
            continue
        idx = len(reps)
        rep = u
        for s in squares:
            class_of[A.mul(u, s)] = idx
        reps.append(rep)
    # put the class of 1 first (it is, since 1 is the smallest unit index? not always)
    one_idx = class_of[A.one]
    if one_idx != 0:
        reps[0], reps[one_idx] = reps[one_idx], reps[0]
        for x, c in class_of.items():
            if c == 0:
                class_of[x] = one_idx
            elif c == one_idx:
                class_of[x] = 0
    mu2 = [b for b in U if A.mul(b, b) == A.one]
    W = [a for a in U if A.sub(A.one, a) in Uset]
    V = [x for x in W if x not in sqset and A.sub(A.one, x) not in sqset]
    data = WittData(reps, mu2, W, V, class_of)
    A._cache["witt"] = data
    return data


def coinvariants_of_A(A: FiniteRing) -> AbelianStructure:
    """A / (ideal generated by a^2 - 1, a a unit), as an abelian group."""
    U = units(A)
    gens = {A.sub(A.mul(a, a), A.one) for a in U}
    lat = A.ideal_lattice(gens)
    d = [r[next(j for j, v in enumerate(r) if v)] for r in lat]
    S, _, _ = smith_normal_form(lat)
    return AbelianStructure.from_orders([S[i][i] for i in range(len(lat))])


def additive_structure(A: FiniteRing) -> AbelianStructure:
    return AbelianStructure.from_orders(A.additive_type)


def quotient_by_m_power(A: FiniteRing, i: int) -> AbelianStructure:
    """(A/m^i, +)."""
    analyze_local(A)
    if i == 0:
        return AbelianStructure()
    powers = A._cache["m_powers"]
    if i - 1 >= len(powers):
        return additive_structure(A)
    S, _, _ = smith_normal_form(powers[i - 1])
    return AbelianStructure.from_orders([S[j][j] for j in range(len(S))])


# ----------------------------------------------------------------------------
# isomorphism by search

def _signature(A: FiniteRing, x: int) -> tuple:
    out = [A.additive_order(x)]
    y = x
    for _ in range(4):
        y = A.mul(y, x)
        out.append(A.additive_order(y))
        out.append(y == x)
    return tuple(out)


def _ring_closure(A: FiniteRing, gens: list[int]):
    """Monomials in gens reachable from 1: {element: word} (words as tuples of gen indices)."""
    seen = {A.one: ()}
    frontier = [A.one]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = A.mul(x, g)
                if y not in seen:
                    seen[y] = seen[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    return seen


def _additive_span_size(A: FiniteRing, elems) -> int:
    rows = [[e if i == j else 0 for j in range(A.rank)] for i, e in enumerate(A.additive_type)]
    rows += [list(A.decode(x)) for x in elems]
    return A.lattice_order(hnf(rows, A.rank))


def find_isomorphism(A: FiniteRing, B: FiniteRing, limit: int = 256) -> dict | None:
    """Ring isomorphism A -> B as a dict on elements, or None.  Only for |A| <= limit."""
    if A.order != B.order:
        return None
    if A.order > limit:
        raise RingError("isomorphism search limited to small rings")
    if sorted(AbelianStructure.from_orders(A.additive_type).elementary_divisors()) != \
            sorted(AbelianStructure.from_orders(B.additive_type).elementary_divisors()):
        return None
    # ring generators of A chosen greedily from its additive basis
    gens: list[int] = []
    for b in A.basis():
        mons = _ring_closure(A, gens)
        if _additive_span_size(A, mons) == A.order:
            break
        if _additive_span_size(A, list(mons) + [b]) > _additive_span_size(A, mons):
            gens.append(b)
    sigA = [_signature(A, g) for g in gens]
    sigB: dict[tuple, list[int]] = {}
    for y in B.elements():
        sigB.setdefault(_signature(B, y), []).append(y)
    cands = [sigB.get(s, []) for s in sigA]
    monsA = _ring_closure(A, gens)
    for images in itertools.product(*cands):
        phi = _extend(A, B, gens, list(images), monsA)
        if phi is not None:
            return phi
    return None


def _extend(A, B, gens, images, monsA):
    mon_img = {}
    for x, word in monsA.items():
        y = B.one
        for i in word:
            y = B.mul(y, images[i])
        mon_img[x] = y
    # consistency of monomials under multiplication by generators
    for x, y in mon_img.items():
        for i, g in enumerate(gens):
            if mon_img.get(A.mul(x, g)) != B.mul(y, images[i]):
                return None
    phi = {A.zero: B.zero}
    frontier = [A.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for m, my in mon_img.items():
                z = A.add(x, m)
                w = B.add(phi[x], my)
                if z in phi:
                    if phi[z] != w:
                        return None
                else:
                    phi[z] = w
                    nxt.append(z)
        frontier = nxt
    if len(phi) != A.order or len(set(phi.values())) != B.order:
        return None
    for a in A.basis():
        for b in A.basis():
            if phi[A.mul(a, b)] != B.mul(phi[a], phi[b]):
                return None
    return phi


def rings_isomorphic(A: FiniteRing, B: FiniteRing) -> bool:
    return find_isomorphism(A, B) is not None
