"""Permutation groups backed by a base and strong generating set.

The stabilizer chain is built with a randomized Schreier-Sims pass followed by a
deterministic sweep over all Schreier generators, so the order reported by a
:class:`PermGroup` is exact.  When an exact order (or an upper bound such as the
order of an overgroup) is known in advance, reaching it certifies the chain and
the sweep is skipped.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .perm import (
    MAX_DEGREE,
    Permutation,
    PermutationError,
    _identity,
    _inv,
    _is_identity,
    _mul,
)

_MASK64 = (1 << 64) - 1


class GroupError(ValueError):
    pass


class RandomSource:
    """Seeded stream of random group elements.

    Elements are produced by product replacement with an accumulator (the
    "rattle" variant): the state is a list of ``SLOTS`` group elements that is
    mutated in place, and each step returns the running accumulator.  A fresh
    state is burned in for ``BURN_IN`` steps before its first output.  One state
    is kept per group, so a single source can serve several groups without the
    streams interfering.
    """

    SLOTS = 10
    BURN_IN = 60

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & _MASK64
        self.rand = random.Random(self.seed)
        self._states: dict = {}

    def spawn(self, index: int) -> "RandomSource":
        """Independent source derived from ``(seed, index)``."""
        digest = hashlib.blake2b(f"{self.seed}:{index}".encode(), digest_size=8).digest()
        return RandomSource(int.from_bytes(digest, "little"))

    def _state(self, key, gens: Sequence[tuple], degree: int) -> list:
        st = self._states.get(key)
        if st is None:
            ident = _identity(degree)
            pool = list(gens) or [ident]
            slots = [pool[i % len(pool)] for i in range(max(self.SLOTS, len(pool)))]
            st = [slots, ident]
            self._states[key] = st
            for _ in range(self.BURN_IN):
                self._step(st)
        return st

    def _step(self, st: list) -> tuple:
        slots = st[0]
        r = self.rand
        k = len(slots)
        i = r.randrange(k)
        j = r.randrange(k - 1) if k > 1 else 0
        if j >= i and k > 1:
            j += 1
        other = slots[j] if r.random() < 0.5 else _inv(slots[j])
        slots[i] = _mul(slots[i], other) if r.random() < 0.5 else _mul(other, slots[i])
        st[1] = _mul(st[1], slots[i])
        return st[1]

    def next_raw(self, key, gens: Sequence[tuple], degree: int) -> tuple:
        return self._step(self._state(key, gens, degree))


class _Level:
    __slots__ = ("point", "gens", "trans", "inv", "_labels")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[tuple] = []
        self.trans: dict[int, tuple] = {}
        self.inv: dict[int, tuple] = {}
        self._labels = None


class _Chain:
    """Mutable stabilizer chain used while building a group."""

    def __init__(self, n: int, base: Sequence[int]):
        self.n = n
        self.ident = _identity(n)
        self.levels: list[_Level] = []
        for b in base:
            self._new_level(b)

    def _new_level(self, b: int) -> None:
        lv = _Level(b)
        lv.trans[b] = self.ident
        lv.inv[b] = self.ident
        self.levels.append(lv)

    def order(self) -> int:
        return math.prod(len(lv.trans) for lv in self.levels)

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        levels = self.levels
        for i in range(start, len(levels)):
            lv = levels[i]
            u = lv.inv.get(g[lv.point])
            if u is None:
                return g, i
            g = _mul(g, u)
        return g, len(levels)

    def _extend(self, lv: _Level, h: tuple) -> None:
        lv.gens.append(h)
        trans, inv, gens = lv.trans, lv.inv, lv.gens
        queue = []
        for p, u in list(trans.items()):
            q = h[p]
            if q not in trans:
                w = _mul(u, h)
                trans[q] = w
                inv[q] = _inv(w)
                queue.append(q)
        while queue:
            nxt = []
            for p in queue:
                u = trans[p]
                for s in gens:
                    q = s[p]
                    if q not in trans:
                        w = _mul(u, s)
                        trans[q] = w
                        inv[q] = _inv(w)
                        nxt.append(q)
            queue = nxt

    def add_strong(self, h: tuple, depth: int) -> None:
        """Add ``h`` (fixing base points ``< depth``) to every level ``<= depth``."""
        if depth == len(self.levels):
            moved = next(i for i, x in enumerate(h) if i != x)
            self._new_level(moved)
        for lv in self.levels[:depth + 1]:
            self._extend(lv, h)


def _schreier_sims(
    n: int,
    gens: Sequence[tuple],
    draw: Callable[[], tuple],
    base: Sequence[int] = (),
    order_bound: Optional[int] = None,
    patience: int = 12,
) -> _Chain:
    ident = _identity(n)
    gens = list(dict.fromkeys(g for g in gens if g != ident))
    chain = _Chain(n, base)
    for g in gens:
        h, j = chain.sift(g)
        if h != ident:
            chain.add_strong(h, j)
    if order_bound is not None and chain.order() >= order_bound:
        return chain

    quiet = 0
    while quiet < patience:
        h, j = chain.sift(draw())
        if h == ident:
            quiet += 1
            continue
        quiet = 0
        chain.add_strong(h, j)
        if order_bound is not None and chain.order() >= order_bound:
            return chain

    # deterministic sweep over Schreier generators
    i = len(chain.levels) - 1
    while i >= 0:
        lv = chain.levels[i]
        restart = None
        for p in list(lv.trans):
            u = lv.trans[p]
            for s in lv.gens:
                q = s[p]
                sg = _mul(_mul(u, s), lv.inv[q])
                if sg == ident:
                    continue
                h, j = chain.sift(sg, i + 1)
                if h != ident:
                    chain.add_strong(h, j)
                    if order_bound is not None and chain.order() >= order_bound:
                        return chain
                    restart = j
                    break
            if restart is not None:
                break
        if restart is not None:
            i = restart
        else:
            i -= 1
    return chain


class PermGroup:
    """A permutation group with a verified stabilizer chain.

    Instances are immutable once built.  ``base`` and every point accepted or
    returned by public methods are 1-based.
    """

    def __init__(self, degree: int, generators: Sequence[tuple], chain: _Chain, name: Optional[str] = None):
        self.degree = degree
        self._gens = tuple(generators)
        self._chain = chain
        self._levels = chain.levels
        self._base = [lv.point for lv in chain.levels]
        self.order = chain.order()
        self.name = name
        self.factors: Optional[list[tuple[int, "PermGroup"]]] = None
        self._rebased: dict = {}
        self._labels: dict = {}
        nat = None
        if self.order == math.factorial(degree):
            nat = "S"
        elif degree >= 2 and 2 * self.order == math.factorial(degree):
            nat = "A"
        self.natural = nat

    # -- basic accessors --------------------------------------------------

    @property
    def generators(self) -> list[Permutation]:
        if not self._gens:
            return [Permutation.identity(self.degree)]
        return [Permutation(g, check=False) for g in self._gens]

    @property
    def base(self) -> list[int]:
        return [b + 1 for b in self._base]

    def strong_generators(self) -> list[tuple]:
        seen = dict.fromkeys(g for lv in self._levels for g in lv.gens)
        return list(seen)

    def transversal_sizes(self) -> list[int]:
        return [len(lv.trans) for lv in self._levels]

    def __repr__(self) -> str:
        label = self.name or f"<{len(self._gens)} generators>"
        return f"PermGroup({label}, degree={self.degree}, order={self.order})"

    def _check_degree(self, p: Permutation) -> None:
        if p.degree != self.degree:
            raise PermutationError(f"degree mismatch: group {self.degree}, element {p.degree}")

    # -- membership and elements ------------------------------------------

    def _contains(self, g: tuple) -> bool:
        h, j = self._chain.sift(g)
        return j == len(self._levels) and _is_identity(h)

    def contains(self, p: Permutation) -> bool:
        self._check_degree(p)
        return self._contains(p.images)

    __contains__ = contains

    def _element_from_base_images(self, images: Sequence[int]) -> Optional[tuple]:
        """Element with ``b_i -> images[i]`` along the chain base, or None."""
        c = self._chain.ident
        for lv, target in zip(self._levels, images):
            pre = _inv(c)[target] if c is not self._chain.ident else target
            u = lv.trans.get(pre)
            if u is None:
                return None
            c = _mul(u, c)
        return c

    def _random_uniform(self, rand: random.Random) -> tuple:
        c = self._chain.ident
        for lv in reversed(self._levels):
            if len(lv.trans) > 1:
                c = _mul(c, lv.trans[rand.choice(list(lv.trans))])
        return c

    def elements(self) -> Iterator[Permutation]:
        """Every element, by walking transversals.  Only for small groups."""
        trans = [list(lv.trans.values()) for lv in reversed(self._levels)]
        for combo in itertools.product(*trans):
            c = self._chain.ident
            for u in combo:
                c = _mul(c, u)
            yield Permutation(c, check=False)

    # -- orbits -----------------------------------------------------------

    def _orbit(self, point: int, gens: Optional[Iterable[tuple]] = None) -> list[int]:
        gens = list(self._gens if gens is None else gens)
        seen = {point}
        out = [point]
        for p in out:
            for g in gens:
                q = g[p]
                if q not in seen:
                    seen.add(q)
                    out.append(q)
        return out

    def orbit(self, point: int) -> set[int]:
        if not 1 <= point <= self.degree:
            raise GroupError(f"point {point} out of range 1..{self.degree}")
        return {x + 1 for x in self._orbit(point - 1)}

    def orbits(self) -> list[list[int]]:
        return [[x + 1 for x in o] for o in _orbit_partition(self.degree, self._gens)]

    def level_labels(self, depth: int) -> list[int]:
        """Orbit label of every point under the stabilizer of the first ``depth`` base points."""
        lab = self._labels.get(depth)
        if lab is None:
            gens = self._levels[depth].gens if depth < len(self._levels) else ()
            lab = [0] * self.degree
            for k, orb in enumerate(_orbit_partition(self.degree, gens)):
                for p in orb:
                    lab[p] = k
            self._labels[depth] = lab
        return lab

    def is_transitive(self) -> bool:
        return len(self._orbit(0)) == self.degree

    # -- derived groups ---------------------------------------------------

    def with_base(self, prefix: Sequence[int]) -> "PermGroup":
        """Same group, rebuilt with a chain whose base starts with ``prefix`` (0-based)."""
        prefix = tuple(prefix)
        if tuple(self._base[:len(prefix)]) == prefix:
            return self
        cached = self._rebased.get(prefix)
        if cached is not None:
            return cached
        rand = random.Random(hash(prefix) & _MASK64)
        gens = self.strong_generators() or list(self._gens)
        chain = _schreier_sims(self.degree, gens, lambda: self._random_uniform(rand),
                               base=prefix, order_bound=self.order)
        if chain.order() != self.order:
            raise GroupError("rebase failed to reproduce the group order")
        g = PermGroup(self.degree, self._gens, chain, self.name)
        g.factors = self.factors
        self._rebased[prefix] = g
        return g

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other._contains(g) for g in self._gens)


def _orbit_partition(n: int, gens: Iterable[tuple]) -> list[list[int]]:
    gens = list(gens)
    seen = bytearray(n)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        orb = [start]
        for p in orb:
            for g in gens:
                q = g[p]
                if not seen[q]:
                    seen[q] = 1
                    orb.append(q)
        out.append(orb)
    return out


def _build(
    degree: int,
    gens: Sequence[tuple],
    seed: int = 0,
    base: Sequence[int] = (),
    order_bound: Optional[int] = None,
    name: Optional[str] = None,
) -> PermGroup:
    rng = RandomSource(seed)
    key = object()
    nontrivial = [g for g in gens if not _is_identity(g)]
    chain = _schreier_sims(degree, nontrivial,
                           lambda: rng.next_raw(key, nontrivial, degree),
                           base=base, order_bound=order_bound)
    return PermGroup(degree, nontrivial, chain, name)


def group_from_generators(
    gens: Sequence[Permutation],
    seed: int = 0,
    *,
    name: Optional[str] = None,
    known_order: Optional[int] = None,
) -> PermGroup:
    """Build ``<gens>`` with a verified base and strong generating set.

    ``known_order``, if given, must be the exact order; it lets construction
    stop early and is checked against the result.
    """
    gens = list(gens)
    if not gens:
        raise GroupError("empty generator list")
    n = gens[0].degree
    if any(g.degree != n for g in gens):
        raise GroupError("generators have different degrees")
    if n > MAX_DEGREE:
        raise GroupError(f"degree {n} exceeds {MAX_DEGREE}")
    G = _build(n, [g.images for g in gens], seed, order_bound=known_order, name=name)
    if known_order is not None and G.order != known_order:
        raise GroupError(f"group order {G.order} differs from expected {known_order}")
    return G


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def random_element(G: PermGroup, rng: RandomSource) -> Permutation:
    return Permutation(rng.next_raw(G, G._gens, G.degree), check=False)


def orbit(G: PermGroup, point: int) -> set[int]:
    return G.orbit(point)
