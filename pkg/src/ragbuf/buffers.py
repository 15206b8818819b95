"""Buffer-level interchange: decompose arrays into (form, length, named
buffers) and reassemble them without copying, plus an on-disk container.

Buffer naming is a pure function of the form-key assignment:
``<form_key>-offsets`` for list-offset nodes, ``<form_key>-data`` for
primitive nodes; record nodes contribute no buffer.

Every byte duplication inside the protocol must route through
:meth:`BufferSet.copy_bytes`, which advances the set's ``copy_counter``;
the round-trip tests assert the counter stays at zero.

The on-disk container is a plain directory::

    <dir>/form.json      emit_form output, UTF-8
    <dir>/length.txt     ASCII decimal + newline
    <dir>/buffers/<name> raw little-endian bytes, one file per buffer
"""

from __future__ import annotations

import threading
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from .errors import (
    FormatError,
    MissingBufferError,
    SizeError,
)
from .forms import Form, ListOffsetForm, PrimitiveForm, RecordForm, emit_form, form_of, parse_form
from .layout import (
    DTYPES,
    ArrayNode,
    ListOffsetArray,
    PrimitiveArray,
    RecordArray,
    validate,
)

__all__ = [
    "BufferSet",
    "Container",
    "buffer_names",
    "to_buffers",
    "from_buffers",
    "write_container",
    "read_container",
]

_OFFSETS_DTYPE = DTYPES["int64"]


def _as_bytes_view(data) -> np.ndarray:
    """Read-only 1-D uint8 view over ``data`` without copying."""
    if isinstance(data, np.ndarray):
        view = data.view(np.uint8)
    else:
        # bytes / bytearray / memoryview: frombuffer shares the memory
        view = np.frombuffer(data, dtype=np.uint8)
    if view.flags.writeable:
        view = view.view()
        view.flags.writeable = False
    return view


class BufferSet:
    """Named map of immutable byte buffers with a copy-instrumentation counter."""

    def __init__(self, entries: Mapping | None = None):
        self._entries: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()
        self.copy_counter = 0
        if entries:
            for name, data in entries.items():
                self.add(name, data)

    def add(self, name: str, data) -> None:
        if name in self._entries:
            raise ValueError(f"duplicate buffer name {name!r}")
        self._entries[name] = _as_bytes_view(data)

    def names(self) -> list[str]:
        return list(self._entries)

    def get(self, name: str) -> np.ndarray:
        try:
            return self._entries[name]
        except KeyError:
            raise MissingBufferError(name, self.names()) from None

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def nbytes(self, name: str) -> int:
        return int(self.get(name).nbytes)

    def total_bytes(self) -> int:
        return sum(int(e.nbytes) for e in self._entries.values())

    def copy_bytes(self, name: str) -> bytes:
        """Materialize a duplicated buffer; the only counted copy operation."""
        entry = self.get(name)
        with self._lock:
            self.copy_counter += int(entry.nbytes)
        return entry.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BufferSet):
            return NotImplemented
        if set(self._entries) != set(other._entries):
            return False
        return all(
            np.array_equal(self._entries[n], other._entries[n]) for n in self._entries
        )

    def __repr__(self) -> str:
        sizes = {name: int(e.nbytes) for name, e in self._entries.items()}
        return f"BufferSet({sizes}, copy_counter={self.copy_counter})"


class Container:
    """A decomposed array: schema, row count, and the named byte buffers."""

    def __init__(self, form: Form, length: int, buffers: BufferSet):
        self.form = form
        self.length = int(length)
        self.buffers = buffers

    def to_node(self) -> ArrayNode:
        """Reassemble the layout tree (views, no copies)."""
        return from_buffers(self.form, self.length, self.buffers)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Container):
            return NotImplemented
        return (
            self.form == other.form
            and self.length == other.length
            and self.buffers == other.buffers
        )

    def __repr__(self) -> str:
        return f"Container(length={self.length}, buffers={self.buffers!r})"


def buffer_names(form: Form) -> list[str]:
    """Buffer names referenced by a form, in pre-order."""
    names: list[str] = []

    def walk(f: Form) -> None:
        if isinstance(f, PrimitiveForm):
            names.append(f"{f.form_key}-data")
        elif isinstance(f, ListOffsetForm):
            names.append(f"{f.form_key}-offsets")
            walk(f.content)
        elif isinstance(f, RecordForm):
            for _, child in f.fields:
                walk(child)
    walk(form)
    return names


def to_buffers(node: ArrayNode, key_prefix: str = "node") -> Container:
    """Decompose a valid node into a container of views over its memory.

    No bytes move: every buffer aliases the node's existing arrays and the
    fresh container's ``copy_counter`` is zero.
    """
    form = form_of(node, key_prefix)
    buffers = BufferSet()

    def walk(n: ArrayNode, f: Form) -> None:
        if isinstance(n, PrimitiveArray):
            buffers.add(f"{f.form_key}-data", n.data)
        elif isinstance(n, ListOffsetArray):
            buffers.add(f"{f.form_key}-offsets", n.offsets)
            walk(n.content, f.content)
        elif isinstance(n, RecordArray):
            for (_, child), (_, child_form) in zip(n.fields, f.fields):
                walk(child, child_form)

    walk(node, form)
    return Container(form, node.length, buffers)


def _node_from(form: Form, length: int | None, buffers: BufferSet) -> ArrayNode:
    """Build one node. ``length`` is the declared element count, or ``None``
    for list-offset content, whose extent is the full capacity of its own
    buffers (so that offset overruns surface as validation errors, not size
    errors)."""
    if isinstance(form, PrimitiveForm):
        name = f"{form.form_key}-data"
        entry = buffers.get(name)
        width = DTYPES[form.dtype].itemsize
        if length is None:
            length = int(entry.nbytes) // width
        needed = length * width
        if int(entry.nbytes) < needed:
            raise SizeError(name, needed, int(entry.nbytes))
        return PrimitiveArray(entry[:needed].view(DTYPES[form.dtype]))
    if isinstance(form, ListOffsetForm):
        name = f"{form.form_key}-offsets"
        entry = buffers.get(name)
        width = _OFFSETS_DTYPE.itemsize
        if length is None:
            if int(entry.nbytes) < width:
                raise SizeError(name, width, int(entry.nbytes))
            length = int(entry.nbytes) // width - 1
        needed = (length + 1) * width
        if int(entry.nbytes) < needed:
            raise SizeError(name, needed, int(entry.nbytes))
        offsets = entry[:needed].view(_OFFSETS_DTYPE)
        content = _node_from(form.content, None, buffers)
        return ListOffsetArray(offsets, content)
    if isinstance(form, RecordForm):
        if length is None:
            lengths = []
            children = []
            for fname, child_form in form.fields:
                child = _node_from(child_form, None, buffers)
                children.append((fname, child))
                lengths.append(child.length)
            return RecordArray(children, length=min(lengths) if lengths else 0)
        children = [
            (fname, _node_from(child_form, length, buffers))
            for fname, child_form in form.fields
        ]
        return RecordArray(children, length=length)
    raise TypeError(f"not a Form: {type(form).__name__}")


def from_buffers(form: Form, length: int, buffers: BufferSet | Mapping) -> ArrayNode:
    """Reassemble an array that views ``buffers`` directly.

    Raises :class:`MissingBufferError` when the form references an absent
    name, :class:`SizeError` when a buffer cannot hold the declared count,
    and :class:`ValidationError` when the decoded offsets or record shapes
    violate the layout invariants.
    """
    if not isinstance(buffers, BufferSet):
        buffers = BufferSet(buffers)
    if length < 0:
        raise SizeError("<root>", 0, length)
    node = _node_from(form, int(length), buffers)
    err = validate(node)
    if err is not None:
        raise err
    return node


def write_container(container: Container, path) -> None:
    """Write the container directory format; surfaces OSError with paths."""
    root = Path(path)
    bufdir = root / "buffers"
    bufdir.mkdir(parents=True, exist_ok=True)
    (root / "form.json").write_text(emit_form(container.form), encoding="utf-8")
    (root / "length.txt").write_text(f"{container.length}\n", encoding="ascii")
    for name in buffer_names(container.form):
        entry = container.buffers.get(name)
        with open(bufdir / name, "wb") as f:
            f.write(memoryview(entry))


def read_container(path) -> Container:
    """Read a container directory back into memory.

    Only reads the bytes; call :meth:`Container.to_node` (or
    :func:`from_buffers`) to decode and validate the layout, so that
    corrupted containers can still be inspected.
    """
    root = Path(path)
    form_path = root / "form.json"
    length_path = root / "length.txt"
    if not form_path.is_file():
        raise FormatError(f"missing form.json in {root}")
    if not length_path.is_file():
        raise FormatError(f"missing length.txt in {root}")
    form = parse_form(form_path.read_text(encoding="utf-8"))
    raw_length = length_path.read_text(encoding="ascii", errors="replace").strip()
    try:
        length = int(raw_length, 10)
    except ValueError:
        raise FormatError(f"length.txt holds {raw_length!r}, not a decimal integer") from None
    if length < 0:
        raise FormatError(f"length.txt holds negative length {length}")
    buffers = BufferSet()
    bufdir = root / "buffers"
    for name in buffer_names(form):
        buf_path = bufdir / name
        if not buf_path.is_file():
            present = sorted(p.name for p in bufdir.iterdir()) if bufdir.is_dir() else []
            raise MissingBufferError(name, present)
        buffers.add(name, buf_path.read_bytes())
    return Container(form, length, buffers)
