"""Type-D tests for conjugacy classes.

A class is of type D when it contains ``r`` and ``s`` with
``(r*s)**2 != (s*r)**2`` that are not conjugate in ``H = <r, s>``.  Three
drivers are provided: an exhaustive scan of the class, a randomized search with
a fixed iteration budget, and a driver that first certifies ambient classes
through a list of subgroups and their class fusion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .classes import DEFAULT_CLASS_THRESHOLD, ClassTable, class_of, conjugacy_classes
from .group import (
    MAX_DEGREE,
    GroupError,
    PermGroup,
    RandomSource,
    _build,
    _orbit_partition,
    random_element,
)
from .perm import Permutation, PermutationError, _conj, _cycles, _mul
from .search import (
    SearchBudgetExceeded,
    adapted_prefix,
    conjugator_from_parents,
    enumerate_class,
    find_conjugator,
    iter_class,
)

log = logging.getLogger(__name__)


class TypeDError(RuntimeError):
    pass


class WitnessError(AssertionError):
    pass


@dataclass(frozen=True)
class TypeDWitness:
    r: Permutation
    s: Permutation
    subgroup_order: int
    conjugator: Optional[Permutation] = None  # x with s == r ** x, when known


@dataclass(frozen=True)
class TypeD:
    witness: TypeDWitness
    iterations: Optional[int] = None
    label = "TypeD"


@dataclass(frozen=True)
class NotTypeD:
    method: str = "exhaustive"
    label = "NotTypeD"


@dataclass(frozen=True)
class Unknown:
    iterations_used: int
    label = "Unknown"


TypeDVerdict = Union[TypeD, NotTypeD, Unknown]


@dataclass
class SearchConfig:
    iterations: int = 1000
    seed: int = 0
    threshold: int = DEFAULT_CLASS_THRESHOLD

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")


@dataclass
class FusionMap:
    subgroup: PermGroup
    entries: dict[int, int]


@dataclass
class MaximalResult:
    survivors: set[int]
    witnesses: dict[int, TypeDWitness] = field(default_factory=dict)
    sources: dict[int, str] = field(default_factory=dict)
    verdicts: dict[int, TypeDVerdict] = field(default_factory=dict)


# -- the pair test -----------------------------------------------------------

def _orbit_cycle_types_differ(n: int, r: tuple, s: tuple) -> bool:
    """Cheap non-conjugacy certificate: cycle types differ on some orbit of <r, s>."""
    for orb in _orbit_partition(n, (r, s)):
        if len(orb) == 1:
            continue
        members = set(orb)
        cr = sorted(len(c) for c in _cycles(r, fixed=True) if c[0] in members)
        cs = sorted(len(c) for c in _cycles(s, fixed=True) if c[0] in members)
        if cr != cs:
            return True
    return False


def _pair_raw(r: tuple, s: tuple, order_bound: Optional[int], seed: int) -> Optional[int]:
    """Order of ``<r, s>`` if ``(r, s)`` passes the test, else None.

    ``order_bound`` is the order of an overgroup in which ``r`` and ``s`` are
    already known to be conjugate; reaching it means ``H`` is that overgroup.
    """
    rs = _mul(r, s)
    sr = _mul(s, r)
    if _mul(rs, rs) == _mul(sr, sr):
        return None
    n = len(r)
    if _orbit_cycle_types_differ(n, r, s):
        return _build(n, (r, s), seed).order
    H = _build(n, (r, s), seed, base=adapted_prefix(r), order_bound=order_bound)
    if order_bound is not None and H.order == order_bound:
        return None
    if find_conjugator(H, r, s) is not None:
        return None
    return H.order


def check_pair(
    G: Optional[PermGroup],
    r: Permutation,
    s: Permutation,
    *,
    seed: int = 0,
) -> Optional[TypeDWitness]:
    """Witness if ``(r*s)**2 != (s*r)**2`` and ``r``, ``s`` are not conjugate in ``<r, s>``."""
    if r.degree != s.degree:
        raise PermutationError("degree mismatch")
    bound = None
    if G is not None:
        G._check_degree(r)
        if find_conjugator(G, r.images, s.images) is not None:
            bound = G.order
    order = _pair_raw(r.images, s.images, bound, seed)
    if order is None:
        return None
    return TypeDWitness(r, s, order)


# -- independent re-verification ----------------------------------------------

def _apply_then(p: list[int], q: list[int]) -> list[int]:
    return [q[p[i]] for i in range(len(p))]


def verify_witness(
    w: TypeDWitness,
    table: Optional[ClassTable] = None,
    c: Optional[int] = None,
    *,
    enum_cap: int = 200_000,
) -> None:
    """Re-check a witness without the search code; raise WitnessError on failure."""
    r, s = list(w.r.images), list(w.s.images)
    rs = _apply_then(r, s)
    sr = _apply_then(s, r)
    if _apply_then(rs, rs) == _apply_then(sr, sr):
        raise WitnessError("(rs)^2 == (sr)^2")
    H = _build(len(r), (w.r.images, w.s.images), seed=12345)
    if H.order != w.subgroup_order:
        raise WitnessError(f"<r,s> has order {H.order}, witness says {w.subgroup_order}")
    if not _orbit_cycle_types_differ(len(r), w.r.images, w.s.images):
        try:
            cls = enumerate_class(H, w.r.images, limit=enum_cap)
            conj = w.s.images in cls
        except SearchBudgetExceeded:
            plain = _build(len(r), (w.s.images, w.r.images), seed=99)
            conj = find_conjugator(plain, w.s.images, w.r.images) is not None
        if conj:
            raise WitnessError("r and s are conjugate in <r,s>")
    if w.conjugator is not None and w.r ** w.conjugator != w.s:
        raise WitnessError("recorded conjugator does not map r to s")
    if table is not None:
        G = table.group
        if not (G.contains(w.r) and G.contains(w.s)):
            raise WitnessError("witness elements are not in the group")
        if w.conjugator is not None and not G.contains(w.conjugator):
            raise WitnessError("conjugator is not in the group")
        if c is not None:
            if class_of(table, w.r) != c or class_of(table, w.s) != c:
                raise WitnessError("witness elements are not in the stated class")


# -- the three drivers -------------------------------------------------------

def typed_exhaustive(
    G: PermGroup,
    table: ClassTable,
    c: int,
    *,
    threshold: int = DEFAULT_CLASS_THRESHOLD,
    seed: int = 0,
) -> TypeDVerdict:
    """Scan the class with ``r`` fixed at the representative.

    Pairs ``(r, s)`` and ``(r, s**z)`` with ``z`` centralizing ``r`` are
    conjugate, so only one ``s`` per orbit of the centralizer is tested.
    """
    cls = table[c]
    if cls.size == 1:
        return NotTypeD()
    if cls.size > threshold:
        raise TypeDError(f"class {cls.name} has {cls.size} elements, above threshold {threshold}")
    r = cls.representative.images
    cent = table.centralizer_gens(c)
    covered = {r}
    parents: dict = {}
    for s in iter_class(G, r, parents):
        if s in covered:
            continue
        orb = [s]
        covered.add(s)
        for e in orb:
            for z in cent:
                f = _conj(e, z)
                if f not in covered:
                    covered.add(f)
                    orb.append(f)
        order = _pair_raw(r, s, G.order, seed)
        if order is not None:
            x = Permutation(conjugator_from_parents(G, parents, s), check=False)
            w = TypeDWitness(cls.representative, Permutation(s, check=False), order, x)
            verify_witness(w, table, c)
            return TypeD(w)
    return NotTypeD()


def typed_random(G: PermGroup, table: ClassTable, c: int, cfg: SearchConfig) -> TypeDVerdict:
    """Test ``(r, r**x)`` for ``cfg.iterations`` random ``x``; never concludes NotTypeD.

    The stream for class ``c`` is derived from ``(cfg.seed, c)`` so verdicts do
    not depend on the order in which classes are processed.
    """
    cls = table[c]
    r = cls.representative.images
    rng = RandomSource(cfg.seed).spawn(c)
    for i in range(cfg.iterations):
        x = random_element(G, rng)
        s = _conj(r, x.images)
        if s == r:
            continue
        order = _pair_raw(r, s, G.order, cfg.seed + i)
        if order is not None:
            w = TypeDWitness(cls.representative, Permutation(s, check=False), order, x)
            verify_witness(w, table, c)
            return TypeD(w, iterations=i + 1)
    return Unknown(cfg.iterations)


def classify_class(G: PermGroup, table: ClassTable, c: int, cfg: SearchConfig) -> TypeDVerdict:
    """Random search first; exhaustive fallback when the class fits the threshold."""
    if table[c].size == 1:
        return NotTypeD()
    v = typed_random(G, table, c, cfg)
    if isinstance(v, Unknown) and table[c].size <= cfg.threshold:
        v = typed_exhaustive(G, table, c, threshold=cfg.threshold, seed=cfg.seed)
    return v


def fusion_map(G: PermGroup, table_G: ClassTable, H: PermGroup, table_H: ClassTable) -> FusionMap:
    if H.degree != G.degree or not H.is_subgroup_of(G):
        raise GroupError("subgroup generators are not all in the group")
    entries = {i: class_of(table_G, cls.representative) for i, cls in enumerate(table_H)}
    return FusionMap(H, entries)


def typed_maximal(
    G: PermGroup,
    table: ClassTable,
    subgroups: Sequence[PermGroup],
    cfg: SearchConfig,
) -> MaximalResult:
    """Certify ambient classes through subgroups, then try the rest directly.

    A subgroup witness ``(r, s)`` certifies the ambient class of ``r`` as well,
    since ``s`` is conjugate to ``r`` in the subgroup and hence in ``G``.
    """
    S = {i for i, cls in enumerate(table) if cls.element_order > 1}
    res = MaximalResult(survivors=S)
    for k, M in enumerate(subgroups):
        if not S:
            break
        tab_M = conjugacy_classes(M, RandomSource(cfg.seed).spawn(1000 + k))
        fus = fusion_map(G, table, M, tab_M)
        for i, target in fus.entries.items():
            if target not in S:
                continue
            v = classify_class(M, tab_M, i, cfg)
            if isinstance(v, TypeD):
                verify_witness(v.witness, table, target)
                S.discard(target)
                res.witnesses[target] = v.witness
                res.sources[target] = M.name or f"subgroup {k}"
                res.verdicts[target] = v
                if not S:
                    break
    for j in sorted(S):
        v = classify_class(G, table, j, cfg)
        res.verdicts[j] = v
        if isinstance(v, TypeD):
            S.discard(j)
            res.witnesses[j] = v.witness
            res.sources[j] = G.name or "group"
    return res


def direct_product(G1: PermGroup, G2: PermGroup) -> PermGroup:
    """``G1 x G2`` acting on ``degree(G1) + degree(G2)`` points."""
    n1, n2 = G1.degree, G2.degree
    n = n1 + n2
    if n > MAX_DEGREE:
        raise GroupError(f"combined degree {n} exceeds {MAX_DEGREE}")
    gens = []
    for g in G1._gens:
        gens.append(tuple(g) + tuple(range(n1, n)))
    for g in G2._gens:
        gens.append(tuple(range(n1)) + tuple(n1 + x for x in g))
    order = G1.order * G2.order
    P = _build(n, gens, order_bound=order)
    if P.order != order:
        raise GroupError("direct product order mismatch")
    if G1.name and G2.name:
        P.name = f"{G1.name}x{G2.name}"
    P.factors = [(0, G1), (n1, G2)]
    return P
