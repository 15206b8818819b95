"""Ragged columnar array nodes and element access.

Three node kinds form a closed set: :class:`PrimitiveArray` (flat typed
values), :class:`ListOffsetArray` (variable-length lists via cumulative
offsets), and :class:`RecordArray` (struct-of-arrays with named fields).
Nodes are immutable views over numpy buffers; slicing shares memory and
never copies bytes.

Value-level invariants (offset monotonicity, record length agreement) are
*not* enforced by the constructors: :func:`validate` walks a tree and
returns a diagnostic so that malformed data read from external buffers can
be inspected rather than lost in a constructor exception.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import BoundsError, FieldError, ValidationError

__all__ = [
    "PrimitiveArray",
    "ListOffsetArray",
    "RecordArray",
    "ArrayNode",
    "RecordView",
    "DTYPES",
    "length",
    "get_list",
    "get_field",
    "get_record",
    "to_list",
    "validate",
]

# Wire dtype tags; multi-byte widths are explicitly little-endian.
DTYPES: dict[str, np.dtype] = {
    "bool": np.dtype(np.bool_),
    "int8": np.dtype("i1"),
    "int16": np.dtype("<i2"),
    "int32": np.dtype("<i4"),
    "int64": np.dtype("<i8"),
    "uint8": np.dtype("u1"),
    "uint16": np.dtype("<u2"),
    "uint32": np.dtype("<u4"),
    "uint64": np.dtype("<u8"),
    "float32": np.dtype("<f4"),
    "float64": np.dtype("<f8"),
}

_TAG_OF_DTYPE = {dt: tag for tag, dt in DTYPES.items()}

_OFFSETS_DTYPE = DTYPES["int64"]


def _readonly(arr: np.ndarray) -> np.ndarray:
    view = arr.view()
    view.flags.writeable = False
    return view


def dtype_tag(dtype: np.dtype) -> str:
    """Map a numpy dtype to its wire tag, or raise TypeError."""
    tag = _TAG_OF_DTYPE.get(np.dtype(dtype))
    if tag is None:
        raise TypeError(f"unsupported element dtype {dtype!r}")
    return tag


class ArrayNode:
    """Base of the closed node set. ``kind`` is one of
    ``"primitive"``, ``"list-offset"``, ``"record"``."""

    kind: str
    length: int

    def to_list(self):
        return to_list(self)

    def __len__(self) -> int:
        return self.length


class PrimitiveArray(ArrayNode):
    """Flat array of fixed-width scalars backed by a single buffer."""

    kind = "primitive"

    def __init__(self, data, dtype=None):
        if isinstance(dtype, str):
            if dtype not in DTYPES:
                raise TypeError(f"unknown dtype tag {dtype!r}")
            dtype = DTYPES[dtype]
        if isinstance(data, np.ndarray):
            if data.ndim != 1:
                raise TypeError(f"data must be 1-D, got shape {data.shape}")
            if dtype is not None and data.dtype != np.dtype(dtype):
                raise TypeError(f"dtype mismatch: array is {data.dtype}, requested {dtype}")
            arr = data
        else:
            arr = np.asarray(list(data), dtype=dtype)
            if arr.ndim != 1:
                raise TypeError("data must be a flat sequence of scalars")
        self.dtype = dtype_tag(arr.dtype)
        self.data = _readonly(arr)
        self.length = int(arr.shape[0])

    def __getitem__(self, i: int):
        if not 0 <= i < self.length:
            raise BoundsError(i, self.length, "PrimitiveArray")
        return self.data[i].item()

    def __repr__(self) -> str:
        return f"PrimitiveArray({self.dtype}, length={self.length})"


class ListOffsetArray(ArrayNode):
    """Ragged lists: list ``i`` spans ``content[offsets[i]:offsets[i+1]]``."""

    kind = "list-offset"

    def __init__(self, offsets, content: ArrayNode):
        if isinstance(offsets, np.ndarray):
            if offsets.dtype != _OFFSETS_DTYPE:
                raise TypeError(f"offsets must be int64, got {offsets.dtype}")
            if offsets.ndim != 1:
                raise TypeError(f"offsets must be 1-D, got shape {offsets.shape}")
            arr = offsets
        else:
            arr = np.asarray(list(offsets), dtype=_OFFSETS_DTYPE)
        if arr.shape[0] < 1:
            raise TypeError("offsets needs at least one entry")
        if not isinstance(content, ArrayNode):
            raise TypeError(f"content must be an ArrayNode, got {type(content).__name__}")
        self.offsets = _readonly(arr)
        self.content = content
        self.length = int(arr.shape[0]) - 1

    def __getitem__(self, i: int) -> ArrayNode:
        return get_list(self, i)

    def __repr__(self) -> str:
        return f"ListOffsetArray(length={self.length}, content={self.content!r})"


class RecordArray(ArrayNode):
    """Struct-of-arrays: ordered named fields of equal length."""

    kind = "record"

    def __init__(self, fields, length: int | None = None):
        if isinstance(fields, Mapping):
            pairs = list(fields.items())
        else:
            pairs = [(name, node) for name, node in fields]
        for name, node in pairs:
            if not isinstance(name, str):
                raise TypeError(f"field name must be str, got {type(name).__name__}")
            if not isinstance(node, ArrayNode):
                raise TypeError(f"field {name!r} content must be an ArrayNode")
        if length is None:
            if not pairs:
                raise TypeError("length is required for a record with no fields")
            length = pairs[0][1].length
        self.fields = pairs
        self.length = int(length)

    @property
    def field_names(self) -> list[str]:
        return [name for name, _ in self.fields]

    def __getitem__(self, key):
        if isinstance(key, str):
            return get_field(self, key)
        return get_record(self, key)

    def __repr__(self) -> str:
        inner = ", ".join(f"{name}: {node!r}" for name, node in self.fields)
        return f"RecordArray({{{inner}}}, length={self.length})"


class RecordView(Mapping):
    """One row of a :class:`RecordArray`; reads through to the field buffers."""

    def __init__(self, record: RecordArray, index: int):
        self._record = record
        self._index = index

    def __getitem__(self, name: str):
        field = get_field(self._record, name)
        return _element(field, self._index)

    def __iter__(self) -> Iterator[str]:
        return iter(self._record.field_names)

    def __len__(self) -> int:
        return len(self._record.fields)

    def to_dict(self) -> dict:
        """Materialize the row as plain Python values."""
        out = {}
        for name in self:
            value = self[name]
            if isinstance(value, ArrayNode):
                value = to_list(value)
            elif isinstance(value, RecordView):
                value = value.to_dict()
            out[name] = value
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RecordView):
            return self.to_dict() == other.to_dict()
        if isinstance(other, Mapping):
            return self.to_dict() == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"RecordView({self.to_dict()!r})"


def _slice_node(node: ArrayNode, start: int, stop: int) -> ArrayNode:
    """Zero-copy view of ``node[start:stop]``; buffers are shared, never copied."""
    if isinstance(node, PrimitiveArray):
        return PrimitiveArray(node.data[start:stop])
    if isinstance(node, ListOffsetArray):
        return ListOffsetArray(node.offsets[start : stop + 1], node.content)
    fields = [(name, _slice_node(child, start, stop)) for name, child in node.fields]
    return RecordArray(fields, length=stop - start)


def _element(node: ArrayNode, i: int):
    """Element ``i`` of a node: a scalar, a list slice, or a row view."""
    if isinstance(node, PrimitiveArray):
        return node[i]
    if isinstance(node, ListOffsetArray):
        return get_list(node, i)
    return get_record(node, i)


def length(node: ArrayNode) -> int:
    """Declared length of the outermost node."""
    return node.length


def get_list(node: ListOffsetArray, i: int) -> ArrayNode:
    """List ``i`` as a view over the shared content buffers."""
    if not 0 <= i < node.length:
        raise BoundsError(i, node.length, "ListOffsetArray")
    start = int(node.offsets[i])
    stop = int(node.offsets[i + 1])
    return _slice_node(node.content, start, stop)


def get_field(node: RecordArray, name: str) -> ArrayNode:
    """Content of the named field, shared not copied."""
    for fname, child in node.fields:
        if fname == name:
            return child
    raise FieldError(name, node.field_names)


def get_record(node: RecordArray, i: int) -> RecordView:
    """Row ``i`` as a read-through view."""
    if not 0 <= i < node.length:
        raise BoundsError(i, node.length, "RecordArray")
    return RecordView(node, i)


def to_list(node: ArrayNode):
    """Deep materialization into plain numbers, lists, and dicts.

    This is the canonical equality witness used throughout the tests.
    """
    if isinstance(node, PrimitiveArray):
        return node.data.tolist()
    if isinstance(node, ListOffsetArray):
        return [to_list(get_list(node, i)) for i in range(node.length)]
    names = node.field_names
    columns = [to_list(child)[: node.length] for _, child in node.fields]
    return [dict(zip(names, row)) for row in zip(*columns)] if names else [{}] * node.length


def validate(node: ArrayNode, path: str = "root") -> ValidationError | None:
    """Check every structural invariant recursively.

    Returns ``None`` when the tree is valid, otherwise a
    :class:`ValidationError` naming the violated rule and the node path.
    """
    if isinstance(node, PrimitiveArray):
        return None
    if isinstance(node, ListOffsetArray):
        offsets = node.offsets
        if offsets.shape[0] != node.length + 1:
            return ValidationError(
                "offsets count", path,
                f"{offsets.shape[0]} offsets for length {node.length}",
            )
        if node.length >= 0 and offsets.shape[0] and int(offsets[0]) < 0:
            return ValidationError(
                "first offset non-negative", path, f"offsets[0] == {int(offsets[0])}"
            )
        if offsets.shape[0] > 1 and np.any(np.diff(offsets) < 0):
            bad = int(np.argmax(np.diff(offsets) < 0))
            return ValidationError(
                "monotonic offsets", path,
                f"offsets[{bad}] == {int(offsets[bad])} > offsets[{bad + 1}] == {int(offsets[bad + 1])}",
            )
        if int(offsets[-1]) > node.content.length:
            return ValidationError(
                "final offset within content", path,
                f"offsets[{node.length}] == {int(offsets[-1])} exceeds content length {node.content.length}",
            )
        return validate(node.content, path + ".content")
    if isinstance(node, RecordArray):
        seen = set()
        for name, child in node.fields:
            if not name:
                return ValidationError("record field names non-empty", path)
            if name in seen:
                return ValidationError("record field names unique", path, f"duplicate {name!r}")
            seen.add(name)
        for name, child in node.fields:
            if child.length != node.length:
                return ValidationError(
                    "record field lengths equal", path,
                    f"field {name!r} has length {child.length}, record declares {node.length}",
                )
        for name, child in node.fields:
            err = validate(child, f"{path}.{name}")
            if err is not None:
                return err
        return None
    return ValidationError("known node kind", path, f"got {type(node).__name__}")
