"""Backtrack searches over a stabilizer chain: conjugators and centralizers.

Both searches look for elements ``x`` with ``a ** x == b`` (``x^-1 a x = b``).
Such an ``x`` maps every cycle of ``a`` onto a cycle of ``b`` of the same
length, and is fixed on the whole cycle once the image of one of its points is
chosen.  The chain is therefore rebuilt with a base that starts with one point
per cycle of ``a``, and each branch forces a full cycle.  A branch is cut as
soon as a forced image cannot be reached by the remaining point stabilizer
(checked through orbit labels).
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterator, Optional

from .group import GroupError, PermGroup, _build
from .perm import Permutation, _conj, _cycle_type, _cycles, _is_identity, _mul, _sign

DEFAULT_CONJ_ENUM_THRESHOLD = 1 << 12


class SearchBudgetExceeded(RuntimeError):
    pass


def adapted_prefix(a: tuple) -> list[int]:
    """One base point per cycle of ``a``; scarce cycle lengths first."""
    cycles = _cycles(a, fixed=True)
    mult = Counter(len(c) for c in cycles)
    cycles.sort(key=lambda c: (len(c) * mult[len(c)], -len(c), c[0]))
    return [c[0] for c in cycles]


class _Matcher:
    """Forced-image bookkeeping for maps sending cycles of ``a`` to cycles of ``b``."""

    def __init__(self, a: tuple, b: tuple):
        n = len(a)
        self.n = n
        self.a_cyc = _cycles(a, fixed=True)
        self.b_cyc = _cycles(b, fixed=True)
        self.a_pos = [None] * n
        for cid, cyc in enumerate(self.a_cyc):
            for i, p in enumerate(cyc):
                self.a_pos[p] = (cid, i)
        self.b_pos = [None] * n
        for cid, cyc in enumerate(self.b_cyc):
            for i, p in enumerate(cyc):
                self.b_pos[p] = (cid, i)
        self.forced = [-1] * n
        self.b_used = [False] * len(self.b_cyc)
        self.a_done = [False] * len(self.a_cyc)
        self.forced_points: list[int] = []

    def can_force(self, p: int, gamma: int) -> bool:
        f = self.forced[p]
        if f >= 0:
            return f == gamma
        acid, _ = self.a_pos[p]
        bcid, _ = self.b_pos[gamma]
        return not self.b_used[bcid] and len(self.a_cyc[acid]) == len(self.b_cyc[bcid])

    def force(self, p: int, gamma: int) -> Optional[int]:
        """Force ``p -> gamma``; return an undo token, or -1 if already forced."""
        if self.forced[p] >= 0:
            return -1
        acid, i = self.a_pos[p]
        bcid, j = self.b_pos[gamma]
        A, B = self.a_cyc[acid], self.b_cyc[bcid]
        L = len(A)
        for k in range(L):
            q = A[(i + k) % L]
            self.forced[q] = B[(j + k) % L]
            self.forced_points.append(q)
        self.b_used[bcid] = True
        self.a_done[acid] = True
        return acid

    def undo(self, token: int) -> None:
        if token < 0:
            return
        A = self.a_cyc[token]
        first = A[0]
        bcid, _ = self.b_pos[self.forced[first]]
        self.b_used[bcid] = False
        self.a_done[token] = False
        for _ in range(len(A)):
            q = self.forced_points.pop()
            self.forced[q] = -1


class _Search:
    def __init__(self, G: PermGroup, a: tuple, b: tuple, budget: Optional[int] = None):
        self.G = G
        self.levels = G._levels
        self.k = len(self.levels)
        self.a = a
        self.b = b
        self.m = _Matcher(a, b)
        self.budget = budget
        self.nodes = 0

    def _feasible(self, depth: int, cinv: tuple) -> bool:
        lab = self.G.level_labels(depth)
        forced = self.m.forced
        for p in self.m.forced_points:
            if lab[p] != lab[cinv[forced[p]]]:
                return False
        return True

    def dfs(self, j: int, c: tuple, cinv: tuple) -> Optional[tuple]:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(self.nodes)
        if j == self.k:
            if _conj(self.a, c) == self.b:
                return c
            return None
        lv = self.levels[j]
        m = self.m
        bj = lv.point
        f = m.forced[bj]
        if f >= 0:
            cands = [cinv[f]] if cinv[f] in lv.trans else []
        else:
            cands = list(lv.trans)
        for delta in cands:
            gamma = c[delta]
            if not m.can_force(bj, gamma):
                continue
            tok = m.force(bj, gamma)
            u = lv.trans[delta]
            c2 = _mul(u, c)
            cinv2 = _mul(cinv, lv.inv[delta])
            if self._feasible(j + 1, cinv2):
                x = self.dfs(j + 1, c2, cinv2)
                if x is not None:
                    m.undo(tok)
                    return x
            m.undo(tok)
        return None


def _natural_conjugator(G: PermGroup, a: tuple, b: tuple) -> Optional[tuple]:
    """Conjugator inside the natural symmetric or alternating group."""
    if _cycle_type(a) != _cycle_type(b):
        return None
    n = len(a)
    ac = sorted(_cycles(a, fixed=True), key=len)
    bc = sorted(_cycles(b, fixed=True), key=len)
    x = [0] * n
    for A, B in zip(ac, bc):
        for p, q in zip(A, B):
            x[p] = q
    x = tuple(x)
    if G.natural == "S" or _sign(x) == 1:
        return x
    # need an odd element of the centralizer of a
    z = None
    for A in ac:
        if len(A) % 2 == 0:
            z = list(range(n))
            for i, p in enumerate(A):
                z[p] = A[(i + 1) % len(A)]
            break
    if z is None:
        for A, B in zip(ac, ac[1:]):
            if len(A) == len(B):
                z = list(range(n))
                for p, q in zip(A, B):
                    z[p], z[q] = q, p
                break
    if z is None:
        return None
    return _mul(tuple(z), x)


def find_conjugator(G: PermGroup, a: tuple, b: tuple, budget: Optional[int] = None) -> Optional[tuple]:
    """Some ``x`` in ``G`` with ``a ** x == b``, or None.  Raw tuples, no membership checks."""
    if _cycle_type(a) != _cycle_type(b):
        return None
    if a == b:
        return tuple(range(len(a)))
    if G.natural is not None:
        return _natural_conjugator(G, a, b)
    H = G.with_base(adapted_prefix(a))
    s = _Search(H, a, b, budget)
    ident = tuple(range(len(a)))
    return s.dfs(0, ident, ident)


def _generates_centralizer_trivially(G: PermGroup, a: tuple) -> bool:
    return all(_mul(a, g) == _mul(g, a) for g in G._gens)


def centralizer_data(G: PermGroup, a: tuple, budget: Optional[int] = None) -> tuple[list[tuple], int]:
    """Generators and order of ``C_G(a)`` by subgroup search down the chain."""
    if _is_identity(a) or _generates_centralizer_trivially(G, a):
        return list(G._gens), G.order
    H = G.with_base(adapted_prefix(a))
    levels = H._levels
    k = len(levels)
    found: list[tuple] = []
    order = 1
    nodes = 0
    for i in range(k - 1, -1, -1):
        lv = levels[i]
        bi = lv.point
        orb = set(H._orbit(bi, found))
        for delta in list(lv.trans):
            if delta in orb:
                continue
            s = _Search(H, a, a, None if budget is None else max(budget - nodes, 0))
            m = s.m
            ok = True
            for l in range(i):
                p = levels[l].point
                if not m.can_force(p, p):
                    ok = False
                    break
                m.force(p, p)
            if ok and m.can_force(bi, delta):
                m.force(bi, delta)
                c = lv.trans[delta]
                cinv = lv.inv[delta]
                x = s.dfs(i + 1, c, cinv) if s._feasible(i + 1, cinv) else None
            else:
                x = None
            nodes += s.nodes
            if x is not None:
                found.append(x)
                orb = set(H._orbit(bi, found))
        order *= len(orb)
    return found, order


def centralizer(G: PermGroup, g: Permutation) -> PermGroup:
    """The centralizer of ``g`` in ``G``."""
    G._check_degree(g)
    if not G._contains(g.images):
        raise GroupError("element is not in the group")
    gens, order = centralizer_data(G, g.images)
    C = _build(G.degree, gens, order_bound=order)
    if C.order != order:
        raise GroupError("centralizer order mismatch")
    return C


def iter_class(G: PermGroup, a: tuple, parents: Optional[dict] = None) -> Iterator[tuple]:
    """Breadth-first walk of the conjugacy class of ``a``.

    With ``parents`` given, record ``elem -> (previous elem, generator index)``.
    """
    gens = G._gens
    seen = {a}
    if parents is not None:
        parents[a] = None
    frontier = [a]
    yield a
    while frontier:
        nxt = []
        for e in frontier:
            for gi, g in enumerate(gens):
                f = _conj(e, g)
                if f not in seen:
                    seen.add(f)
                    if parents is not None:
                        parents[f] = (e, gi)
                    nxt.append(f)
                    yield f
        frontier = nxt


def enumerate_class(G: PermGroup, a: tuple, limit: Optional[int] = None) -> set[tuple]:
    out = set()
    for e in iter_class(G, a):
        out.add(e)
        if limit is not None and len(out) > limit:
            raise SearchBudgetExceeded(len(out))
    return out


def conjugator_from_parents(G: PermGroup, parents: dict, b: tuple) -> tuple:
    word = []
    e = b
    while parents[e] is not None:
        e, gi = parents[e]
        word.append(gi)
    x = tuple(range(G.degree))
    for gi in reversed(word):
        x = _mul(x, G._gens[gi])
    return x


def are_conjugate(
    G: PermGroup,
    a: Permutation,
    b: Permutation,
    *,
    threshold: int = DEFAULT_CONJ_ENUM_THRESHOLD,
) -> Optional[Permutation]:
    """Return ``x`` in ``G`` with ``x^-1 a x == b``, or None.

    Cycle types are compared first.  If ``|G| / order(a)`` (an upper bound on
    the class size) is at most ``threshold``, the class of ``a`` is enumerated
    with back-pointers; otherwise a backtrack search is run.
    """
    G._check_degree(a)
    G._check_degree(b)
    if not (G._contains(a.images) and G._contains(b.images)):
        raise GroupError("element is not in the group")
    ai, bi = a.images, b.images
    if _cycle_type(ai) != _cycle_type(bi):
        return None
    if G.natural is None and G.order // a.order() <= threshold:
        parents: dict = {}
        for e in iter_class(G, ai, parents):
            if e == bi:
                return Permutation(conjugator_from_parents(G, parents, bi), check=False)
        return None
    x = find_conjugator(G, ai, bi)
    return None if x is None else Permutation(x, check=False)


def natural_centralizer_order(ctype: tuple) -> int:
    """Order of the centralizer in the full symmetric group of an element with this cycle type."""
    return math.prod(L ** m * math.factorial(m) for L, m in Counter(ctype).items())
