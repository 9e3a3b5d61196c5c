"""
Finite presentations of concrete finite groups.

Words are tuples of nonzero integers: +s is generator s (1-based), -s its
inverse.  Relators are harvested from the non-tree edges of a BFS spanning tree
of the Cayley graph, and a prefix of them is certified by Todd-Coxeter coset
enumeration over the trivial subgroup: an index equal to |G| proves that the
presented group (which surjects onto G) is G itself.
"""

from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .matgroup import FiniteGroup, GroupError

DEFAULT_RELATOR_BUDGET = 64
DEFAULT_CAP_FACTOR = 20

Word = tuple[int, ...]


class PresentationError(RuntimeError):
    pass


class CosetOverflow(RuntimeError):
    """Coset enumeration exceeded its cap; says nothing about the group."""


# ----------------------------------------------------------------------------
# words

def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return tuple(w[i:j])


def _letter_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


def word_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


def canonical_relator(w: Sequence[int]) -> Word:
    """Minimal representative under rotation and inversion of a cyclically reduced word."""
    w = cyclic_reduce(w)
    if not w:
        return w
    best = None
    for v in (w, invert_word(w)):
        for i in range(len(v)):
            r = v[i:] + v[:i]
            k = word_key(r)
            if best is None or k < best[0]:
                best = (k, r)
    return best[1]


def word_to_text(w: Sequence[int]) -> str:
    letters = string.ascii_lowercase
    out = []
    for x in w:
        c = letters[abs(x) - 1]
        out.append(c if x > 0 else c.upper())
    return "".join(out)


def text_to_word(s: str) -> Word:
    out = []
    for c in s.strip():
        if c.islower():
            out.append(ord(c) - ord("a") + 1)
        elif c.isupper():
            out.append(-(ord(c) - ord("A") + 1))
        elif c in " \t*":
            continue
        else:
            raise PresentationError(f"bad letter {c!r} in relator {s!r}")
    return tuple(out)


def evaluate_word(G: FiniteGroup, w: Sequence[int], start: int | None = None) -> int:
    T, Ti = G.gen_tables(), G.inv_tables()
    x = G.identity if start is None else start
    for a in w:
        x = T[a - 1][x] if a > 0 else Ti[-a - 1][x]
    return x


# ----------------------------------------------------------------------------
# presentations

@dataclass
class Presentation:
    n_gens: int
    relators: list[Word] = field(default_factory=list)
    certified: bool = False
    group_order_certified: int = 0

    def to_text(self) -> str:
        return "\n".join(word_to_text(r) for r in self.relators) + "\n"

    @classmethod
    def from_text(cls, text: str, n_gens: int | None = None) -> "Presentation":
        rels = [text_to_word(line) for line in text.splitlines() if line.strip()]
        if n_gens is None:
            n_gens = max((abs(x) for r in rels for x in r), default=0)
        return cls(n_gens, rels)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


@dataclass
class CayleyData:
    words: list[Word]
    parent: list[int]
    tree_edges: list[tuple[int, int]]        # (u, signed letter) that discovered a new vertex
    non_tree_edges: list[tuple[int, int]]    # (u, s) with s > 0 and the edge u -> u*s not in the tree


def cayley_bfs(G: FiniteGroup) -> CayleyData:
    """Shortest word for every element; letters tried in the order +1, -1, +2, -2, ..."""
    n = len(G.generators)
    T, Ti = G.gen_tables(), G.inv_tables()
    N = G.order
    words: list[Word | None] = [None] * N
    parent = [-1] * N
    via = [0] * N
    words[G.identity] = ()
    tree = []
    q = deque([G.identity])
    while q:
        u = q.popleft()
        for s in range(1, n + 1):
            for letter, tab in ((s, T[s - 1]), (-s, Ti[s - 1])):
                v = tab[u]
                if words[v] is None:
                    words[v] = words[u] + (letter,)
                    parent[v] = u
                    via[v] = letter
                    tree.append((u, letter))
                    q.append(v)
    if any(w is None for w in words):
        raise GroupError("generators do not generate the group")
    non_tree = []
    for u in range(N):
        for s in range(1, n + 1):
            v = T[s - 1][u]
            if (parent[v] == u and via[v] == s) or (parent[u] == v and via[u] == -s):
                continue
            non_tree.append((u, s))
    return CayleyData(words, parent, tree, non_tree)


def harvest_relators(G: FiniteGroup, cayley: CayleyData | None = None) -> list[Word]:
    """Distinct canonical relators word(u) s word(us)^-1, shortest first."""
    if cayley is None:
        cayley = cayley_bfs(G)
    T = G.gen_tables()
    words = cayley.words
    seen = set()
    for u, s in cayley.non_tree_edges:
        v = T[s - 1][u]
        r = canonical_relator(words[u] + (s,) + invert_word(words[v]))
        if r:
            seen.add(r)
    return sorted(seen, key=word_key)


def relators_hold(G: FiniteGroup, relators: Sequence[Word]) -> bool:
    return all(evaluate_word(G, r) == G.identity for r in relators)


# ----------------------------------------------------------------------------
# Todd-Coxeter (HLT with coincidence processing)

def todd_coxeter(n_gens: int, relators: Sequence[Word], subgroup_words: Sequence[Word] = (),
                 max_cosets: int = 100000) -> int:
    """Index of the subgroup generated by ``subgroup_words`` in <gens | relators>.

    Raises CosetOverflow when more than ``max_cosets`` cosets are alive at once.
    """
    ncol = 2 * n_gens
    rels = [[_letter_key(x) for x in r] for r in relators if r]
    subs = [[_letter_key(x) for x in w] for w in subgroup_words if w]
    table: list[list[int]] = [[-1] for _ in range(ncol)]
    p = [0]
    live = [1]  # boxed counter of live cosets

    def define(a: int, x: int) -> int:
        b = len(p)
        if live[0] >= max_cosets:
            raise CosetOverflow(f"more than {max_cosets} cosets")
        p.append(b)
        for col in table:
            col.append(-1)
        live[0] += 1
        table[x][a] = b
        table[x ^ 1][b] = a
        return b

    def rep(k: int) -> int:
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def merge(k: int, l: int, queue: list) -> None:
        a, b = rep(k), rep(l)
        if a != b:
            if a > b:
                a, b = b, a
            p[b] = a
            live[0] -= 1
            queue.append(b)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncol):
                d = table[x][g]
                if d < 0:
                    continue
                xi = x ^ 1
                table[xi][d] = -1
                mu, nu = rep(g), rep(d)
                if table[x][mu] >= 0:
                    merge(nu, table[x][mu], queue)
                elif table[xi][nu] >= 0:
                    merge(mu, table[xi][nu], queue)
                else:
                    table[x][mu] = nu
                    table[xi][nu] = mu

    def scan_and_fill(a: int, w: list[int]) -> None:
        f = b = a
        i, j = 0, len(w) - 1
        while True:
            while i <= j:
                nxt = table[w[i]][f]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != a:
                    coincidence(f, a)
                return
            while j >= i:
                nxt = table[w[j] ^ 1][b]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[w[i]][f] = b
                table[w[i] ^ 1][b] = f
                return
            define(f, w[i])

    for w in subs:
        scan_and_fill(0, w)
    a = 0
    while a < len(p):
        if p[a] == a:
            for w in rels:
                scan_and_fill(a, w)
                if p[a] != a:
                    break
            if p[a] == a:
                for x in range(ncol):
                    if table[x][a] < 0:
                        define(a, x)
        a += 1
    return sum(1 for i in range(len(p)) if p[i] == i)


# ----------------------------------------------------------------------------
# certification

def _certifies(n: int, rels: Sequence[Word], order: int, cap: int) -> bool:
    try:
        return todd_coxeter(n, rels, (), cap) == order
    except CosetOverflow:
        return False


def select_by_filling(G: FiniteGroup, candidates: Sequence[Word], cayley: CayleyData) -> tuple[list[Word], bool]:
    """Greedy relator selection on the Cayley complex.

    Tree edges start out filled.  Each accepted relator is attached at every
    vertex; whenever an attached cycle has a single unfilled edge, traversed
    once, that edge is a consequence of the cycle and becomes filled.  A candidate
    is kept only if it fills something new.  Returns (kept relators, all filled).
    When every edge is filled the Cayley complex is simply connected, so the
    kept relators present G.
    """
    n = len(G.generators)
    N = G.order
    T, Ti = G.gen_tables(), G.inv_tables()
    filled = bytearray(N * n)
    for u, letter in cayley.tree_edges:
        if letter > 0:
            filled[u * n + letter - 1] = 1
        else:
            filled[Ti[-letter - 1][u] * n + (-letter - 1)] = 1
    remaining = N * n - sum(filled)
    cycles: list[dict[int, int]] = []
    unfilled_count: list[int] = []
    occurs: dict[int, list[int]] = {}
    kept: list[Word] = []

    def cycle_edges(w, g):
        cur = g
        out: dict[int, int] = {}
        for x in w:
            if x > 0:
                e = cur * n + x - 1
                out[e] = out.get(e, 0) + 1
                cur = T[x - 1][cur]
            else:
                cur = Ti[-x - 1][cur]
                e = cur * n + (-x - 1)
                out[e] = out.get(e, 0) - 1
        return out

    def fill_from(stack):
        nonlocal remaining
        newly = 0
        while stack:
            c = stack.pop()
            if unfilled_count[c] != 1:
                continue
            edge = next(e for e in cycles[c] if not filled[e])
            if abs(cycles[c][edge]) != 1:
                continue
            filled[edge] = 1
            remaining -= 1
            newly += 1
            for d in occurs.get(edge, ()):
                unfilled_count[d] -= 1
                if unfilled_count[d] == 1:
                    stack.append(d)
        return newly

    for w in candidates:
        if remaining == 0:
            break
        stack = []
        start = len(cycles)
        for g in range(N):
            edges = cycle_edges(w, g)
            live = [e for e in edges if not filled[e]]
            if not live:
                continue
            c = len(cycles)
            cycles.append({e: edges[e] for e in live})
            unfilled_count.append(len(live))
            for e in live:
                occurs.setdefault(e, []).append(c)
            if len(live) == 1:
                stack.append(c)
        if fill_from(stack):
            kept.append(w)
        else:
            # useless for now; forget its cycles (they may not be relied upon later)
            for c in range(start, len(cycles)):
                for e in cycles[c]:
                    lst = occurs.get(e)
                    if lst and lst[-1] == c:
                        lst.pop()
                    elif lst and c in lst:
                        lst.remove(c)
                unfilled_count[c] = -1
    return kept, remaining == 0


def certify_presentation(G: FiniteGroup, relators: Sequence[Word] | None = None,
                         budget: int = DEFAULT_RELATOR_BUDGET, cap_factor: int = DEFAULT_CAP_FACTOR,
                         strategy: str = "filling") -> Presentation:
    """Certified presentation of G from harvested (or given) relators.

    strategy "filling": relators are taken greedily in harvest order, skipping
    those that fill no new edge of the Cayley complex; "prefix": the shortest
    prefix of the candidate list, found by doubling and bisection.  Either way the
    result is accepted only after a completed coset enumeration of index |G|,
    with at most ``budget`` relators and ``cap_factor * |G|`` live cosets.
    """
    n = len(G.generators)
    cayley = None
    if relators is None:
        cayley = cayley_bfs(G)
        relators = harvest_relators(G, cayley)
    relators = list(relators)
    if not relators_hold(G, relators):
        raise PresentationError("a candidate relator does not hold in the group")
    order = G.order
    cap = cap_factor * order
    if n == 0 or order == 1:
        return Presentation(n, [(i,) for i in range(1, n + 1)], True, 1)
    if strategy == "filling":
        if cayley is None:
            cayley = cayley_bfs(G)
        chosen, complete = select_by_filling(G, relators, cayley)
        if len(chosen) > budget:
            raise PresentationError(
                f"{G.label} needs {len(chosen)} relators, above the budget of {budget}")
        if complete and _certifies(n, chosen, order, cap):
            return Presentation(n, chosen, True, order)
        # fall back: append the remaining candidates in order
        rest = [r for r in relators if r not in set(chosen)]
        pool = chosen + rest
        for k in range(len(chosen) + 1, min(len(pool), budget) + 1):
            if _certifies(n, pool[:k], order, cap):
                return Presentation(n, pool[:k], True, order)
        raise PresentationError(f"could not certify {G.label} within the relator budget")
    if strategy != "prefix":
        raise ValueError(f"unknown strategy {strategy!r}")
    pool = relators[:budget]
    lo, hi, k = 0, None, 1
    while True:
        k = min(k, len(pool))
        if _certifies(n, pool[:k], order, cap):
            hi = k
            break
        lo = k
        if k == len(pool):
            break
        k *= 2
    if hi is None:
        raise PresentationError(
            f"could not certify {G.label} with {len(pool)} relators (cap {cap} cosets)")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _certifies(n, pool[:mid], order, cap):
            hi = mid
        else:
            lo = mid
    return Presentation(n, pool[:hi], True, order)
