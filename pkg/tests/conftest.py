"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the stabilizer chain: they close
generator sets by breadth-first multiplication and compare plain image lists.
"""

import itertools
import random

import pytest

from pgtyped import Permutation, catalog, group_from_generators, parse_perm


def closure(gens):
    """All elements generated by ``gens`` (list of Permutation), by BFS."""
    n = gens[0].degree
    ident = tuple(range(n))
    raw = [g.images for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in raw:
                f = tuple(g[e[i]] for i in range(n))  # e then g
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return {Permutation(e) for e in seen}


def brute_classes(elements):
    """Partition a finite group (set of Permutation) into conjugacy classes."""
    left = set(elements)
    classes = []
    while left:
        a = next(iter(left))
        cls = {x.inverse() * a * x for x in elements}
        classes.append(cls)
        left -= cls
    return classes


def perms(degree, *texts):
    return [parse_perm(t, degree) for t in texts]


def on_pairs(gens):
    """The same abstract group acting on 2-subsets of the points."""
    n = gens[0].degree
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    index = {p: i for i, p in enumerate(pairs)}
    out = []
    for g in gens:
        img = [index[tuple(sorted((g(a), g(b))))] for a, b in pairs]
        out.append(Permutation(img))
    return out


SMALL = {
    "S4": (4, ["(1,2)", "(1,2,3,4)"]),
    "A4": (4, ["(1,2,3)", "(1,2)(3,4)"]),
    "D8": (4, ["(1,2,3,4)", "(1,3)"]),
    "S5": (5, ["(1,2)", "(1,2,3,4,5)"]),
    "A5": (5, ["(1,2,3)", "(1,2,3,4,5)"]),
    "C6": (6, ["(1,2,3,4,5,6)"]),
    "S3xS3": (6, ["(1,2)", "(1,2,3)", "(4,5)", "(4,5,6)"]),
    "PSL27": (7, ["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]),
    "A4onpairs": None,
    "S5onpairs": None,
}


def small_group(name):
    if name == "A4onpairs":
        return group_from_generators(on_pairs(perms(4, "(1,2,3)", "(1,2)(3,4)")), name=name)
    if name == "S5onpairs":
        return group_from_generators(on_pairs(perms(5, "(1,2)", "(1,2,3,4,5)")), name=name)
    deg, texts = SMALL[name]
    return group_from_generators(perms(deg, *texts), name=name)


@pytest.fixture(scope="session")
def m11():
    return catalog("M11")


@pytest.fixture
def rnd():
    return random.Random(20261016)
