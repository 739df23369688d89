"""Permutation arithmetic.

Points are 1-based in every user-facing surface (cycle notation, image lists,
files) and 0-based internally.  A permutation is stored as a tuple ``images``
with ``images[i]`` the image of internal point ``i``.

Products act left to right: ``(p * q)(x) = q(p(x))``, i.e. apply ``p`` first.
This matches the convention of GAP and most group-theory logs.  Conjugation
follows the same convention: ``a ** x`` is ``x^-1 * a * x``, which relabels the
cycles of ``a`` through ``x``.

The module-level helpers prefixed with an underscore work on raw tuples and are
what the group algorithms use in their inner loops.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Iterable, Sequence

MAX_DEGREE = 65535


class PermutationError(ValueError):
    pass


# -- raw tuple helpers -------------------------------------------------------

def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(q.__getitem__, p))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _conj(a: tuple, x: tuple) -> tuple:
    """Return ``x^-1 * a * x``."""
    out = [0] * len(a)
    for j, aj in enumerate(a):
        out[x[j]] = x[aj]
    return tuple(out)


def _identity(n: int) -> tuple:
    return tuple(range(n))


def _is_identity(p: tuple) -> bool:
    return all(i == x for i, x in enumerate(p))


def _cycles(p: tuple, *, fixed: bool = False) -> list[list[int]]:
    seen = bytearray(len(p))
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = 1
        j = p[i]
        while j != i:
            seen[j] = 1
            cyc.append(j)
            j = p[j]
        if fixed or len(cyc) > 1:
            out.append(cyc)
    return out


def _cycle_type(p: tuple) -> tuple:
    return tuple(sorted((len(c) for c in _cycles(p, fixed=True)), reverse=True))


def _order(p: tuple) -> int:
    return math.lcm(1, *(len(c) for c in _cycles(p)))


def _power(p: tuple, k: int) -> tuple:
    out = list(range(len(p)))
    for cyc in _cycles(p):
        m = len(cyc)
        s = k % m
        if s:
            for i, x in enumerate(cyc):
                out[x] = cyc[(i + s) % m]
    return tuple(out)


def _sign(p: tuple) -> int:
    return -1 if sum(len(c) - 1 for c in _cycles(p)) % 2 else 1


# -- public type -------------------------------------------------------------

class Permutation:
    """An immutable permutation of the points ``1..degree``."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int], *, check: bool = True):
        images = tuple(images)
        if check:
            n = len(images)
            if n < 1 or n > MAX_DEGREE:
                raise PermutationError(f"degree must be in 1..{MAX_DEGREE}, got {n}")
            if sorted(images) != list(range(n)):
                raise PermutationError("images do not form a bijection")
        self.images = images
        self._hash = None

    @classmethod
    def from_images1(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based images, ``images[i]`` being the image of ``i+1``."""
        return cls([x - 1 for x in images])

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= degree:
                    raise PermutationError(f"point {x} out of range 1..{degree}")
                if x in seen:
                    raise PermutationError(f"point {x} repeated")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b - 1
        return cls(img, check=False)

    @property
    def degree(self) -> int:
        return len(self.images)

    def images1(self) -> list[int]:
        return [x + 1 for x in self.images]

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def _same_degree(self, other: "Permutation") -> None:
        if len(self.images) != len(other.images):
            raise PermutationError(
                f"degree mismatch: {len(self.images)} vs {len(other.images)}")

    def __mul__(self, other: "Permutation") -> "Permutation":
        self._same_degree(other)
        return Permutation(_mul(self.images, other.images), check=False)

    def __pow__(self, k):
        if isinstance(k, Permutation):
            self._same_degree(k)
            return Permutation(_conj(self.images, k.images), check=False)
        return Permutation(_power(self.images, k), check=False)

    def inverse(self) -> "Permutation":
        return Permutation(_inv(self.images), check=False)

    def order(self) -> int:
        return _order(self.images)

    def cycle_type(self) -> tuple:
        return _cycle_type(self.images)

    def cycles(self) -> list[list[int]]:
        """Nontrivial cycles with 1-based points, each starting at its least point."""
        return [[x + 1 for x in c] for c in _cycles(self.images)]

    def sign(self) -> int:
        return _sign(self.images)

    def is_identity(self) -> bool:
        return _is_identity(self.images)

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self.images) if i != x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation('{self}', degree={self.degree})"


# -- operations ---------------------------------------------------------------

_CYCLE_TOKEN = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as ``"(1,2,3)(4,5)"`` or ``"()"``.

    Points are separated by commas or whitespace.  Cycles must be disjoint.
    """
    if not 1 <= degree <= MAX_DEGREE:
        raise PermutationError(f"degree must be in 1..{MAX_DEGREE}, got {degree}")
    s = text.strip()
    if not s:
        raise PermutationError("empty permutation string")
    if s.count("(") != s.count(")"):
        raise PermutationError(f"unbalanced parenthesis in {text!r}")
    pos = 0
    cycles = []
    for m in _CYCLE_TOKEN.finditer(s):
        if s[pos:m.start()].strip():
            raise PermutationError(f"malformed cycle notation {text!r}")
        pos = m.end()
        body = m.group(1).strip()
        if not body:
            continue
        parts = re.split(r"\s*,\s*|\s+", body)
        if not all(parts):
            raise PermutationError(f"empty entry in cycle ({body}) of {text!r}")
        try:
            cycles.append([int(t) for t in parts])
        except ValueError:
            raise PermutationError(f"non-integer point in {text!r}") from None
    if s[pos:].strip():
        raise PermutationError(f"malformed cycle notation {text!r}")
    return Permutation.from_cycles(cycles, degree)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: apply ``p``, then ``q``."""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def cycle_type(p: Permutation) -> Counter:
    """Multiset of cycle lengths, fixed points included."""
    return Counter(p.cycle_type())
