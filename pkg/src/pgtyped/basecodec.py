"""Bases of permutation groups and the base-image encoding of elements.

A base ``B`` is a point sequence fixed pointwise only by the identity, so an
element ``g`` is determined by the tuple ``(g(b) for b in B)``.  Encoding is
just that tuple; decoding walks the stabilizer chain of a group whose chain
base is ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .group import GroupError, PermGroup
from .perm import Permutation


class CodecError(ValueError):
    pass


@dataclass(frozen=True)
class EncodedElement:
    images: tuple[int, ...]  # 1-based images of the base points


def base_of(G: PermGroup) -> list[int]:
    """The chain base of ``G`` (1-based).  Valid, not necessarily minimal."""
    return G.base


def _check_points(G: PermGroup, B: Sequence[int]) -> list[int]:
    pts = []
    for b in B:
        if not 1 <= b <= G.degree:
            raise CodecError(f"point {b} out of range 1..{G.degree}")
        pts.append(b - 1)
    if len(set(pts)) != len(pts):
        raise CodecError("base points must be distinct")
    return pts


def _rebased(G: PermGroup, B: Sequence[int]) -> PermGroup:
    pts = _check_points(G, B)
    return G.with_base(pts)


def is_base(G: PermGroup, B: Sequence[int]) -> bool:
    """True iff only the identity of ``G`` fixes every point of ``B``.

    The chain is rebuilt with ``B`` as a base prefix; ``B`` is a base exactly
    when the levels belonging to ``B`` already account for all of ``|G|``.
    """
    pts = _check_points(G, B)
    if not pts:
        return G.order == 1
    H = G.with_base(pts)
    prod = 1
    for lv in H._levels[:len(pts)]:
        prod *= len(lv.trans)
    return prod == G.order


def encode(G: PermGroup, B: Sequence[int], g: Permutation) -> EncodedElement:
    G._check_degree(g)
    if not G._contains(g.images):
        raise GroupError("element is not in the group")
    _check_points(G, B)
    return EncodedElement(tuple(g(b) for b in B))


def decode(G: PermGroup, B: Sequence[int], e: EncodedElement | Sequence[int]) -> Permutation:
    """The unique element of ``G`` sending ``B[k]`` to ``e[k]``.

    Raises :class:`CodecError` when no element realizes the tuple.
    """
    images = tuple(e.images if isinstance(e, EncodedElement) else e)
    if len(images) != len(B):
        raise CodecError(f"tuple has {len(images)} entries, base has {len(B)}")
    if not is_base(G, B):
        raise CodecError("the given points are not a base of the group")
    if any(not 1 <= x <= G.degree for x in images):
        raise CodecError("image point out of range")
    if len(set(images)) != len(images):
        raise CodecError("repeated point in encoded tuple")
    H = _rebased(G, B)
    raw = H._element_from_base_images([x - 1 for x in images])
    if raw is None:
        raise CodecError("no group element realizes this tuple")
    return Permutation(raw, check=False)
