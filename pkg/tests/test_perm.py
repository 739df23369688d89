import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation as SymPerm

from pgtyped import Permutation, PermutationError, compose, cycle_type, inverse, parse_perm


def test_parse_examples():
    assert parse_perm("(1,2,3)(4,5)", 5).images1() == [2, 3, 1, 5, 4]
    assert parse_perm("()", 4) == Permutation.identity(4)
    assert parse_perm(" (1, 2) ", 3).images1() == [2, 1, 3]


@pytest.mark.parametrize("text", ["(1,2", "1,2)", "(1,,2)", "(a,b)", "", "(1,2)x"])
def test_parse_malformed(text):
    with pytest.raises(PermutationError):
        parse_perm(text, 3)


def test_parse_repeat_and_range():
    with pytest.raises(PermutationError, match="repeat"):
        parse_perm("(1,2)(2,3)", 3)
    with pytest.raises(PermutationError, match="range"):
        parse_perm("(1,4)", 3)


def test_compose_left_to_right():
    a, b = parse_perm("(1,2)", 3), parse_perm("(2,3)", 3)
    assert compose(a, a).is_identity()
    assert compose(a, b) == parse_perm("(1,3,2)", 3)
    assert b * a == parse_perm("(1,2,3)", 3)
    for x in range(1, 4):
        assert (a * b)(x) == b(a(x))


def test_compose_degree_mismatch():
    with pytest.raises(PermutationError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_inverse_property():
    rng = random.Random(1)
    for _ in range(1000):
        img = list(range(8))
        rng.shuffle(img)
        p = Permutation(img)
        assert (p * inverse(p)).is_identity()
        assert (inverse(p) * p).is_identity()


def test_cycle_type_examples():
    assert cycle_type(parse_perm("(1,2,3)(4,5)", 6)) == {3: 1, 2: 1, 1: 1}
    assert cycle_type(Permutation.identity(4)) == {1: 4}


def test_cycle_type_conjugation_invariant():
    rng = random.Random(2)
    p = parse_perm("(1,2,3)(4,5)(6,7,8,9)", 10)
    for _ in range(1000):
        img = list(range(10))
        rng.shuffle(img)
        x = Permutation(img)
        assert (p ** x).cycle_type() == p.cycle_type()
        assert p ** x == x.inverse() * p * x


def test_str_roundtrip():
    p = parse_perm("(1,5,2)(3,4)", 7)
    assert str(p) == "(1,5,2)(3,4)"
    assert parse_perm(str(p), 7) == p
    assert str(Permutation.identity(3)) == "()"


def test_invalid_images():
    with pytest.raises(PermutationError):
        Permutation([0, 0, 1])
    with pytest.raises(PermutationError):
        Permutation.from_images1([1, 2, 4])


perm_images = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(n))))


@settings(max_examples=200, deadline=None)
@given(perm_images, st.data())
def test_against_sympy(img, data):
    q_img = data.draw(st.permutations(list(range(len(img)))))
    p, q = Permutation(img), Permutation(q_img)
    sp, sq = SymPerm(list(img)), SymPerm(list(q_img))
    # sympy also composes left to right: (p*q)(i) = q(p(i))
    assert list((p * q).images) == (sp * sq).array_form
    assert p.order() == sp.order()
    assert p.sign() == sp.signature()
    assert list(p.inverse().images) == (~sp).array_form
    assert list((p ** 5).images) == (sp ** 5).array_form
