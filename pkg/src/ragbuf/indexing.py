"""Explicit index-convention bridging.

Mixing 0-based and 1-based access is a classic source of off-by-one bugs
when the same data crosses between ecosystems. Here the convention is an
explicit parameter, never ambient state: every accessor takes a
:class:`Convention` and the two bases are related by a plain shift.
Negative wrap-around is deliberately unsupported in either convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundsError
from .layout import ArrayNode, ListOffsetArray, PrimitiveArray, RecordArray, get_list, get_record

__all__ = ["Convention", "ZERO_BASED", "ONE_BASED", "first_index", "last_index", "get"]


@dataclass(frozen=True)
class Convention:
    """Whether the first valid index of a container is 0 or 1."""

    base: int

    def __post_init__(self):
        if self.base not in (0, 1):
            raise ValueError(f"base must be 0 or 1, got {self.base}")


ZERO_BASED = Convention(0)
ONE_BASED = Convention(1)


def first_index(node: ArrayNode, convention: Convention) -> int:
    """First valid index of ``node`` under the convention."""
    return convention.base


def last_index(node: ArrayNode, convention: Convention) -> int:
    """Last valid index: ``first_index + length - 1``."""
    return convention.base + node.length - 1


def get(node: ArrayNode, i: int, convention: Convention):
    """Element ``i`` under the convention.

    Equivalent to zero-based access at ``i - convention.base``. Returns a
    scalar for primitive nodes, a list slice for list-offset nodes, and a
    row view for records. Out-of-range indices raise :class:`BoundsError`
    reporting the element count and the attempted index.
    """
    base = convention.base
    if not base <= i < base + node.length:
        raise BoundsError(i, node.length, type(node).__name__, base=base)
    j = i - base
    if isinstance(node, PrimitiveArray):
        return node[j]
    if isinstance(node, ListOffsetArray):
        return get_list(node, j)
    if isinstance(node, RecordArray):
        return get_record(node, j)
    raise TypeError(f"not an ArrayNode: {type(node).__name__}")
