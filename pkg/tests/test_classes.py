import dataclasses
import math
from collections import Counter

import pytest
from sympy import partition

from pgtyped import (
    ClassTable,
    RandomSource,
    catalog,
    class_of,
    conjugacy_classes,
    parse_perm,
    power_map,
    quasi_real_classes,
    random_element,
    real_classes,
    structure_constant,
)
from pgtyped.classes import class_letters

from conftest import SMALL, brute_classes, closure, small_group


def names(T, idx):
    return {T[i].name for i in idx}


def test_letters():
    assert [class_letters(k) for k in (0, 1, 25, 26, 27, 51, 52)] == ["A", "B", "Z", "AA", "AB", "AZ", "BA"]


@pytest.mark.parametrize("name", list(SMALL))
def test_classes_match_brute_force(name):
    G = small_group(name)
    T = conjugacy_classes(G)
    ref = brute_classes(closure(G.generators))
    assert sorted(c.size for c in T) == sorted(len(c) for c in ref)
    for c in T:
        assert c.size * c.centralizer_order == G.order
        assert c.representative.order() == c.element_order
        assert c.name.startswith(str(c.element_order))
    # representatives pairwise non-conjugate: each lands in a different brute class
    hits = [next(k for k, cls in enumerate(ref) if c.representative in cls) for c in T]
    assert len(set(hits)) == len(T)


def test_s3():
    S3 = catalog("S3")
    T = conjugacy_classes(S3)
    assert [c.size for c in T] == [1, 3, 2]
    assert T.names == ["1A", "2A", "3A"]


def test_table_counts():
    assert len(conjugacy_classes(catalog("L5(2)"))) == 27
    assert len(conjugacy_classes(catalog("S6(2)"))) == 30
    assert len(conjugacy_classes(catalog("M11"))) == 10


def test_m11_names(m11):
    T = conjugacy_classes(m11)
    assert T.names == ["1A", "2A", "3A", "4A", "5A", "6A", "8A", "8B", "11A", "11B"]
    assert [c.size for c in T] == [1, 165, 440, 990, 1584, 1320, 990, 990, 720, 720]


def _even_class_count(n):
    even = split = 0
    for part in _partitions(n):
        if sum(L - 1 for L in part) % 2 == 0:
            even += 1
            if len(set(part)) == len(part) and all(L % 2 for L in part):
                split += 1
    return even + split


def _partitions(n, m=None):
    m = n if m is None else m
    if n == 0:
        yield ()
        return
    for k in range(min(n, m), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@pytest.mark.parametrize("n", range(1, 13))
def test_natural_class_counts(n):
    assert len(conjugacy_classes(catalog(f"S{n}"))) == partition(n)
    if n >= 2:
        assert len(conjugacy_classes(catalog(f"A{n}"))) == _even_class_count(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_natural_tables_brute_force(n):
    for kind in "SA":
        G = catalog(f"{kind}{n}")
        T = conjugacy_classes(G)
        ref = brute_classes(set(G.elements()))
        assert sorted(c.size for c in T) == sorted(len(c) for c in ref)


def test_naming_deterministic():
    G = catalog("L5(2)")
    a = conjugacy_classes(G, RandomSource(5))
    b = conjugacy_classes(G, RandomSource(5))
    assert [(c.name, c.representative) for c in a] == [(c.name, c.representative) for c in b]
    c = conjugacy_classes(G, RandomSource(6))
    assert [(x.name, x.size) for x in a] == [(x.name, x.size) for x in c]


def test_sampling_budget_error():
    from pgtyped import ClassTableError
    with pytest.raises(ClassTableError, match="budget"):
        conjugacy_classes(catalog("M12"), budget=3)


def test_class_of(m11):
    T = conjugacy_classes(m11)
    assert T[class_of(T, parse_perm("()", 11))].name == "1A"
    rs = RandomSource(11)
    for _ in range(500):
        x = random_element(m11, rs)
        g = random_element(m11, rs)
        i = class_of(T, g)
        assert class_of(T, g ** x) == i
    A4 = catalog("A4")
    TA = conjugacy_classes(A4)
    assert class_of(TA, parse_perm("(1,2,3)", 4)) != class_of(TA, parse_perm("(1,3,2)", 4))


def test_class_of_rejects_outsiders(m11):
    from pgtyped import GroupError
    T = conjugacy_classes(m11)
    with pytest.raises(GroupError):
        class_of(T, parse_perm("(1,2)", 11))


def test_class_of_brute_force():
    for name in ("S5onpairs", "PSL27", "A4onpairs"):
        G = small_group(name)
        T = conjugacy_classes(G)
        for cls in brute_classes(closure(G.generators)):
            idx = {class_of(T, g) for g in cls}
            assert len(idx) == 1
            assert T[idx.pop()].size == len(cls)


def test_power_maps(m11):
    T = conjugacy_classes(m11)
    assert power_map(T, 1) == list(range(len(T)))
    for i, c in enumerate(T):
        assert power_map(T, c.element_order)[i] == 0
        for j in range(0, 2 * c.element_order + 1):
            assert power_map(T, j)[i] == power_map(T, j % c.element_order)[i]
    inv = power_map(T, -1)
    a, b = T.index("11A"), T.index("11B")
    assert inv[a] == b and inv[b] == a
    assert class_of(T, T[a].representative.inverse()) == b


def test_m11_inverse_swap_brute_force(m11):
    T = conjugacy_classes(m11)
    els = closure(m11.generators)
    g = T[T.index("11A")].representative
    assert not any(g ** x == g.inverse() for x in els)


def test_real_classes():
    S6_2 = conjugacy_classes(catalog("S6(2)"))
    assert real_classes(S6_2) == set(range(30))
    for n in range(2, 8):
        T = conjugacy_classes(catalog(f"S{n}"))
        assert real_classes(T) == set(range(len(T)))
    L = conjugacy_classes(catalog("L5(2)"))
    nonreal = names(L, set(range(len(L))) - real_classes(L))
    assert nonreal == {"7A", "7B", "14A", "14B", "15A", "15B", "21A", "21B",
                       "31A", "31B", "31C", "31D", "31E", "31F"}


def test_real_brute_force():
    for name in ("A5", "PSL27", "C6", "A4"):
        G = small_group(name)
        T = conjugacy_classes(G)
        els = closure(G.generators)
        for i in real_classes(T):
            g = T[i].representative
            assert any(g ** x == g.inverse() for x in els)
        for i in set(range(len(T))) - real_classes(T):
            g = T[i].representative
            assert not any(g ** x == g.inverse() for x in els)


def test_quasi_real_m11(m11):
    T = conjugacy_classes(m11)
    qr = quasi_real_classes(T)
    assert {T[q.class_index].name: q.j for q in qr} == {"8A": 3, "8B": 3, "11A": 3, "11B": 3}
    assert not names(T, {q.class_index for q in qr}) & names(T, real_classes(T))


def test_quasi_real_l5_2():
    T = conjugacy_classes(catalog("L5(2)"))
    qr = {T[q.class_index].name: q for q in quasi_real_classes(T)}
    j2 = {n for n, q in qr.items() if q.j == 2}
    assert j2 == {"7A", "7B", "15A", "15B", "21A", "21B", "31A", "31B", "31C", "31D", "31E", "31F"}
    assert {n for n, q in qr.items() if q.j == 9} == {"14A", "14B"}
    assert all(q.j_squared_moves for q in qr.values())
    assert names(T, real_classes(T)) | set(qr) == set(T.names)


def test_quasi_real_definition_brute_force():
    T = conjugacy_classes(catalog("L5(2)"))
    for q in quasi_real_classes(T):
        g = T[q.class_index].representative
        m = g.order()
        assert 2 <= q.j <= m - 2 and (q.j - 1) % m != 0
        assert class_of(T, g ** q.j) == q.class_index
        for j in range(2, q.j):
            assert class_of(T, g ** j) != q.class_index
        assert q.j in q.qualifying
        assert q.j_squared_moves == (g ** (q.j * q.j) != g)


def test_quasi_real_empty_for_s6_2():
    assert quasi_real_classes(conjugacy_classes(catalog("S6(2)"))) == []


def test_neither_real_nor_quasi_real_possible():
    # C7: x -> x^j fixes no non-identity class, so nothing is real or quasi-real
    T = conjugacy_classes(catalog("C7"))
    assert real_classes(T) == {0}
    assert quasi_real_classes(T) == []


def test_structure_constants_known_values():
    L = conjugacy_classes(catalog("L5(2)"))
    assert structure_constant(L, L.index("2A"), L.index("3A"), L.index("3A")) == 42
    S = conjugacy_classes(catalog("S6(2)"))
    assert structure_constant(S, S.index("2B"), S.index("3C"), S.index("3C")) == 27
    T = conjugacy_classes(catalog("S3"))
    assert structure_constant(T, 1, 1, 2) == 3


def _brute_constants(G, T):
    els = list(closure(G.generators))
    cls = {}
    for g in els:
        cls[g] = class_of(T, g)
    k = len(T)
    out = {}
    for c3 in range(k):
        z = T[c3].representative
        counts = Counter()
        for a in els:
            b = a.inverse() * z
            counts[(cls[a], cls[b])] += 1
        for c1 in range(k):
            for c2 in range(k):
                out[(c1, c2, c3)] = counts[(c1, c2)]
    return out


@pytest.mark.parametrize("name", ["S4", "A4", "S5", "A5", "D8", "PSL27", "S3xS3", "S5onpairs"])
def test_structure_constants_brute_force(name):
    G = small_group(name)
    T = conjugacy_classes(G)
    ref = _brute_constants(G, T)
    for key, val in ref.items():
        assert structure_constant(T, *key) == val, key


def test_structure_constants_brute_force_m11(m11):
    T = conjugacy_classes(m11)
    ref = _brute_constants(m11, T)
    for key, val in ref.items():
        assert structure_constant(T, *key) == val, key


def test_structure_constants_triple_loop_s4():
    # the literal definition: count pairs over G x G
    G = small_group("S4")
    T = conjugacy_classes(G)
    els = list(closure(G.generators))
    cls = {g: class_of(T, g) for g in els}
    for c1 in range(len(T)):
        for c2 in range(len(T)):
            for c3 in range(len(T)):
                z = T[c3].representative
                n = sum(1 for a in els for b in els if cls[a] == c1 and cls[b] == c2 and a * b == z)
                assert structure_constant(T, c1, c2, c3) == n


@pytest.mark.parametrize("name", ["S4", "S5", "A5"])
def test_structure_constant_sum_rule(name):
    T = conjugacy_classes(catalog(name))
    k = len(T)
    for c1 in range(k):
        for c3 in range(k):
            assert sum(structure_constant(T, c1, c2, c3) for c2 in range(k)) == T[c1].size


@pytest.mark.parametrize("name", ["S5", "M11"])
def test_structure_constant_representative_independence(name):
    G = catalog(name)
    T = conjugacy_classes(G)
    rs = RandomSource(77)
    k = len(T)
    for trial in range(20):
        c1, c2, c3 = (trial % k, (3 * trial + 1) % k, (7 * trial + 2) % k)
        base = structure_constant(T, c1, c2, c3)
        x = random_element(G, rs)
        moved = [dataclasses.replace(c, representative=c.representative ** x) if i == c3 else c
                 for i, c in enumerate(T)]
        T2 = ClassTable(G, moved)
        assert structure_constant(T2, c1, c2, c3) == base


def test_structure_constant_threshold():
    from pgtyped import ClassTableError
    T = conjugacy_classes(catalog("M11"))
    with pytest.raises(ClassTableError):
        structure_constant(T, 1, 2, 3, threshold=10)


def test_direct_product_table():
    G = catalog("S3xC2")
    T = conjugacy_classes(G)
    assert len(T) == 6 and sum(c.size for c in T) == 12
    ref = brute_classes(set(G.elements()))
    assert sorted(c.size for c in T) == sorted(len(c) for c in ref)
    for c in T:
        h, k = c.representative.images[:3], c.representative.images[3:]
        assert c.element_order == math.lcm(_order(h), _order(tuple(x - 3 for x in k)))
    # class_of goes through the factors
    for cls in ref:
        assert len({class_of(T, g) for g in cls}) == 1


def _order(img):
    from pgtyped import Permutation
    return Permutation(img).order()
