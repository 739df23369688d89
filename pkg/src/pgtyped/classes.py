"""Conjugacy class tables, power maps, real and quasi-real classes, structure constants."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .group import GroupError, PermGroup, RandomSource
from .perm import Permutation, _conj, _cycle_type, _identity, _inv, _mul, _order, _power, _sign
from .search import (
    _natural_conjugator,
    centralizer_data,
    enumerate_class,
    find_conjugator,
    natural_centralizer_order,
)

log = logging.getLogger(__name__)

DEFAULT_CLASS_THRESHOLD = 1 << 20
DEFAULT_SAMPLE_BUDGET = 200_000


class ClassTableError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    element_order: int
    size: int
    centralizer_order: int
    name: str
    cycle_type: tuple


@dataclass(frozen=True)
class QuasiRealInfo:
    """A non-real class whose elements are conjugate to their ``j``-th power."""

    class_index: int
    j: int
    j_squared_moves: bool
    qualifying: tuple = ()


def class_letters(k: int) -> str:
    """0 -> A, 25 -> Z, 26 -> AA, ..."""
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(65 + r) + s
    return s


class ClassTable:
    """The conjugacy classes of a group, in naming order."""

    def __init__(self, group: PermGroup, classes: Sequence[ConjugacyClass], factor_tables=None):
        self.group = group
        self.classes = list(classes)
        self.factor_tables = factor_tables
        self._by_ctype: dict[tuple, list[int]] = {}
        for i, c in enumerate(self.classes):
            self._by_ctype.setdefault(c.cycle_type, []).append(i)
        self._by_name = {c.name: i for i, c in enumerate(self.classes)}
        self._power_maps: dict[int, list[int]] = {}
        self._elements: dict[int, frozenset] = {}
        self._centralizers: dict[int, list[tuple]] = {}
        if factor_tables is not None:
            self._product_index = {}
        total = sum(c.size for c in self.classes)
        if total != group.order:
            raise ClassTableError(f"class sizes sum to {total}, group order is {group.order}")

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i: int) -> ConjugacyClass:
        return self.classes[i]

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.classes]

    def index(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no class named {name!r}; known: {', '.join(self.names)}") from None

    def centralizer_gens(self, i: int) -> list[tuple]:
        gens = self._centralizers.get(i)
        if gens is None:
            gens, order = centralizer_data(self.group, self.classes[i].representative.images)
            assert order == self.classes[i].centralizer_order
            self._centralizers[i] = gens
        return gens

    def elements(self, i: int, threshold: int = DEFAULT_CLASS_THRESHOLD) -> frozenset:
        """All elements of class ``i`` as raw 0-based tuples (cached)."""
        els = self._elements.get(i)
        if els is None:
            if self.classes[i].size > threshold:
                raise ClassTableError(
                    f"class {self.classes[i].name} has {self.classes[i].size} elements, "
                    f"above the enumeration threshold {threshold}")
            els = frozenset(enumerate_class(self.group, self.classes[i].representative.images))
            assert len(els) == self.classes[i].size
            self._elements[i] = els
        return els

    def _class_of_raw(self, g: tuple) -> int:
        if self.factor_tables is not None:
            idx = []
            for (off, H), tab in self.factor_tables:
                comp = tuple(x - off for x in g[off:off + H.degree])
                idx.append(tab._class_of_raw(comp))
            return self._product_index[tuple(idx)]
        cands = self._by_ctype.get(_cycle_type(g))
        if not cands:
            raise ClassTableError("element matches no class cycle type")
        if len(cands) == 1:
            return cands[0]
        G = self.group
        for i in cands[:-1]:
            rep = self.classes[i].representative.images
            if G.natural is not None:
                if _natural_conjugator(G, rep, g) is not None:
                    return i
            elif find_conjugator(G, rep, g) is not None:
                return i
        return cands[-1]


def _partitions(n: int, maxpart: Optional[int] = None):
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _perm_from_partition(part: Sequence[int], n: int) -> tuple:
    img = list(range(n))
    start = 0
    for L in part:
        for i in range(L):
            img[start + i] = start + (i + 1) % L
        start += L
    return tuple(img)


def _natural_classes(G: PermGroup) -> list[tuple[tuple, int, int]]:
    n = G.degree
    fact = math.factorial(n)
    out = []
    for part in _partitions(n):
        rep = _perm_from_partition(part, n)
        cent = natural_centralizer_order(part)
        if G.natural == "S":
            out.append((rep, fact // cent, cent))
            continue
        if _sign(rep) != 1:
            continue
        split = n > 1 and len(set(part)) == len(part) and all(L % 2 for L in part)
        if split:
            tau = list(range(n))
            tau[0], tau[1] = 1, 0
            out.append((rep, fact // cent // 2, cent))
            out.append((_conj(rep, tuple(tau)), fact // cent // 2, cent))
        else:
            out.append((rep, fact // cent, cent // 2))
    return out


def _sampled_classes(G: PermGroup, rng: RandomSource, budget: int) -> list[tuple[tuple, int, int]]:
    n = G.degree
    found: list[tuple[tuple, int, int]] = []
    by_ctype: dict[tuple, list[int]] = {}
    total = 0

    def identify(g: tuple) -> Optional[int]:
        for i in by_ctype.get(_cycle_type(g), ()):
            if find_conjugator(G, found[i][0], g) is not None:
                return i
        return None

    def add(g: tuple) -> None:
        nonlocal total
        stack = [g]
        while stack:
            h = stack.pop()
            if identify(h) is not None:
                continue
            _, cent = centralizer_data(G, h)
            found.append((h, G.order // cent, cent))
            by_ctype.setdefault(_cycle_type(h), []).append(len(found) - 1)
            total += G.order // cent
            m = _order(h)
            for k in range(m - 1, 1, -1):
                stack.append(_power(h, k))

    add(_identity(n))
    draws = 0
    key = object()
    gens = G._gens
    while total < G.order:
        if draws >= budget:
            raise ClassTableError(
                f"sampling budget {budget} exhausted with {len(found)} classes "
                f"covering {total}/{G.order} elements")
        draws += 1
        g = rng.next_raw(key, gens, n)
        if identify(g) is None:
            add(g)
    if total != G.order:
        raise ClassTableError("class sizes overshoot the group order")
    log.debug("found %d classes after %d samples", len(found), draws)
    return found


def _name_classes(G: PermGroup, raw: list[tuple[tuple, int, int]], factor_tables=None) -> ClassTable:
    """Sort by (order, size, power fingerprint, cycle type, discovery) and assign names."""
    pre = [ConjugacyClass(Permutation(r, check=False), _order(r), s, c, "?", _cycle_type(r))
           for r, s, c in raw]
    tmp = ClassTable(G, pre, factor_tables)
    if factor_tables is not None:
        tmp._product_index = _product_index(factor_tables, len(pre))

    def fingerprint(i: int) -> tuple:
        c = pre[i]
        out = []
        for p in sorted(_prime_factors(c.element_order)):
            j = tmp._class_of_raw(_power(c.representative.images, p))
            out.append((p, pre[j].element_order, pre[j].size))
        return tuple(out)

    keys = [(c.element_order, c.size, fingerprint(i), c.cycle_type, i) for i, c in enumerate(pre)]
    order = sorted(range(len(pre)), key=keys.__getitem__)
    per_order: Counter = Counter()
    final = []
    for i in order:
        c = pre[i]
        name = f"{c.element_order}{class_letters(per_order[c.element_order])}"
        per_order[c.element_order] += 1
        final.append(ConjugacyClass(c.representative, c.element_order, c.size,
                                    c.centralizer_order, name, c.cycle_type))
    if factor_tables is not None:
        # re-key the product index to the final ordering
        inv = {old: new for new, old in enumerate(order)}
        table = ClassTable(G, final, factor_tables)
        table._product_index = {k: inv[v] for k, v in tmp._product_index.items()}
        return table
    return ClassTable(G, final)


def _product_index(factor_tables, count: int) -> dict:
    import itertools
    sizes = [len(t) for _, t in factor_tables]
    idx = {}
    for k, combo in enumerate(itertools.product(*(range(s) for s in sizes))):
        idx[combo] = k
    assert len(idx) == count
    return idx


def _prime_factors(m: int) -> set[int]:
    out = set()
    p = 2
    while p * p <= m:
        while m % p == 0:
            out.add(p)
            m //= p
        p += 1
    if m > 1:
        out.add(m)
    return out


def conjugacy_classes(
    G: PermGroup,
    rng: Optional[RandomSource] = None,
    *,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> ClassTable:
    """Complete class table of ``G``.

    Natural symmetric and alternating groups are handled by cycle types, direct
    products built by :func:`pgtyped.typed.direct_product` factor-wise, and any
    other group by random sampling closed under powers until the class sizes
    add up to ``|G|``.
    """
    if rng is None:
        rng = RandomSource(0)
    if G.factors is not None:
        import itertools
        ftabs = [((off, H), conjugacy_classes(H, rng.spawn(k), budget=budget))
                 for k, (off, H) in enumerate(G.factors)]
        raw = []
        for combo in itertools.product(*(list(t) for _, t in ftabs)):
            img = list(range(G.degree))
            for ((off, H), _), cls in zip(ftabs, combo):
                for i, x in enumerate(cls.representative.images):
                    img[off + i] = off + x
            raw.append((tuple(img), math.prod(c.size for c in combo),
                        math.prod(c.centralizer_order for c in combo)))
        return _name_classes(G, raw, ftabs)
    if G.natural is not None:
        return _name_classes(G, _natural_classes(G))
    return _name_classes(G, _sampled_classes(G, rng, budget))


def class_of(table: ClassTable, g: Permutation) -> int:
    G = table.group
    G._check_degree(g)
    if not G._contains(g.images):
        raise GroupError("element is not in the group")
    return table._class_of_raw(g.images)


def power_map(table: ClassTable, j: int) -> list[int]:
    pm = table._power_maps.get(j)
    if pm is None:
        pm = [table._class_of_raw(_power(c.representative.images, j)) for c in table.classes]
        table._power_maps[j] = pm
    return pm


def real_classes(table: ClassTable) -> set[int]:
    pm = power_map(table, -1)
    return {i for i, k in enumerate(pm) if k == i}


def quasi_real_classes(table: ClassTable) -> list[QuasiRealInfo]:
    """Quasi-real, non-real classes with the first qualifying ``j`` (ascending).

    ``qualifying`` lists every ``j`` in ``2 .. order-2`` with ``g**j`` conjugate
    to ``g``.  ``j_squared_moves`` is the element-level test ``g**(j*j) != g``.
    """
    real = real_classes(table)
    out = []
    for c, cls in enumerate(table.classes):
        if c in real:
            continue
        m = cls.element_order
        rep = cls.representative.images
        qual = []
        for j in range(2, m - 1):
            if math.gcd(j, m) != 1 or (j - 1) % m == 0:
                continue
            if table._class_of_raw(_power(rep, j)) == c:
                qual.append(j)
        if qual:
            j = qual[0]
            out.append(QuasiRealInfo(c, j, _power(rep, j * j) != rep, tuple(qual)))
    return out


def structure_constant(
    table: ClassTable,
    c1: int,
    c2: int,
    c3: int,
    *,
    threshold: int = DEFAULT_CLASS_THRESHOLD,
) -> int:
    """Number of pairs ``(a, b)`` in ``C1 x C2`` with ``a * b == g`` for a fixed ``g`` in ``C3``.

    This is the class multiplication coefficient in the usual argument order.
    The smaller of ``C1`` and ``C2`` is enumerated; its partner is looked up in
    the other class.
    """
    n = len(table)
    for c in (c1, c2, c3):
        if not 0 <= c < n:
            raise IndexError(f"class index {c} out of range")
    g = table.classes[c3].representative.images
    s1, s2 = table.classes[c1].size, table.classes[c2].size
    if min(s1, s2) > threshold:
        raise ClassTableError("both candidate classes exceed the enumeration threshold")
    # a * b = g  <=>  b = a^-1 * g  <=>  a = g * b^-1
    if s1 <= s2:
        enum_idx, other = c1, c2

        def partner(a):
            return _mul(_inv(a), g)
    else:
        enum_idx, other = c2, c1

        def partner(b):
            return _mul(g, _inv(b))
    enum_set = table.elements(enum_idx, threshold)
    if table.classes[other].size <= threshold:
        other_set = table.elements(other, threshold)
        return sum(1 for a in enum_set if partner(a) in other_set)
    return sum(1 for a in enum_set if table._class_of_raw(partner(a)) == other)
