"""Shared fixtures, generators, and independent reference readers.

``naive_to_list`` re-materializes a node tree using nothing but raw index
arithmetic over the underlying buffers, bypassing all slicing machinery in
the library; it is the brute-force oracle the layout operations are
checked against.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from ragbuf.layout import (
    DTYPES,
    ArrayNode,
    ListOffsetArray,
    PrimitiveArray,
    RecordArray,
)

DTYPE_TAGS = list(DTYPES)

INT_BOUNDS = {
    "int8": (-(2**7), 2**7 - 1),
    "int16": (-(2**15), 2**15 - 1),
    "int32": (-(2**31), 2**31 - 1),
    "int64": (-(2**63), 2**63 - 1),
    "uint8": (0, 2**8 - 1),
    "uint16": (0, 2**16 - 1),
    "uint32": (0, 2**32 - 1),
    "uint64": (0, 2**64 - 1),
}


# ---------------------------------------------------------------------------
# independent reference readers (raw buffer arithmetic, no node slicing)
# ---------------------------------------------------------------------------


def naive_range(node: ArrayNode, start: int, stop: int):
    if isinstance(node, PrimitiveArray):
        return [node.data[i].item() for i in range(start, stop)]
    if isinstance(node, ListOffsetArray):
        return [
            naive_range(node.content, int(node.offsets[i]), int(node.offsets[i + 1]))
            for i in range(start, stop)
        ]
    if isinstance(node, RecordArray):
        return [
            {name: naive_range(child, i, i + 1)[0] for name, child in node.fields}
            for i in range(start, stop)
        ]
    raise TypeError(type(node).__name__)


def naive_to_list(node: ArrayNode):
    return naive_range(node, 0, node.length)


def flat_sum(values) -> float:
    """Brute-force nested-loop sum over materialized lists."""
    total = 0.0
    for sub in values:
        for x in sub:
            total += x
    return total


# ---------------------------------------------------------------------------
# seeded random node builder (fast, used for the bulk acceptance loops)
# ---------------------------------------------------------------------------


def random_primitive(rng: np.random.Generator, length: int) -> PrimitiveArray:
    tag = DTYPE_TAGS[rng.integers(0, len(DTYPE_TAGS))]
    if tag == "bool":
        values = rng.integers(0, 2, size=length).astype(np.bool_)
    elif tag.startswith(("int", "uint")):
        lo, hi = INT_BOUNDS[tag]
        values = rng.integers(lo, hi, size=length, endpoint=True, dtype=np.int64 if lo < 0 else np.uint64)
        values = values.astype(DTYPES[tag])
    else:
        values = rng.uniform(-1e6, 1e6, size=length).astype(DTYPES[tag])
    return PrimitiveArray(values.astype(DTYPES[tag]))


def random_node(rng: np.random.Generator, depth: int, length: int | None = None) -> ArrayNode:
    """Random node with at most ``depth`` levels of nesting above primitives."""
    if length is None:
        length = int(rng.integers(0, 65))
    kind = rng.integers(0, 3) if depth > 0 else 0
    if kind == 0:
        return random_primitive(rng, length)
    if kind == 1:
        counts = rng.integers(0, 5, size=length)
        offsets = np.zeros(length + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        content = random_node(rng, depth - 1, int(offsets[-1]))
        return ListOffsetArray(offsets, content)
    nfields = int(rng.integers(1, 4))
    fields = [(f"f{i}", random_node(rng, depth - 1, length)) for i in range(nfields)]
    return RecordArray(fields, length=length)


# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------


def primitive_values(tag: str):
    if tag == "bool":
        return st.booleans()
    if tag in INT_BOUNDS:
        lo, hi = INT_BOUNDS[tag]
        return st.integers(min_value=lo, max_value=hi)
    width = 32 if tag == "float32" else 64
    return st.floats(allow_nan=False, allow_infinity=False, width=width)


@st.composite
def primitive_nodes(draw, length: int):
    tag = draw(st.sampled_from(DTYPE_TAGS))
    values = draw(st.lists(primitive_values(tag), min_size=length, max_size=length))
    return PrimitiveArray(np.asarray(values, dtype=DTYPES[tag]))


@st.composite
def nodes(draw, depth: int = 3, length: int | None = None, max_length: int = 8):
    """Arbitrary valid node trees, ``depth`` nesting levels at most."""
    if length is None:
        length = draw(st.integers(min_value=0, max_value=max_length))
    kinds = ["primitive"]
    if depth > 0:
        kinds += ["list-offset", "record"]
    kind = draw(st.sampled_from(kinds))
    if kind == "primitive":
        return draw(primitive_nodes(length))
    if kind == "list-offset":
        counts = draw(st.lists(st.integers(0, 4), min_size=length, max_size=length))
        offsets = np.zeros(length + 1, dtype=np.int64)
        np.cumsum(np.asarray(counts, dtype=np.int64), out=offsets[1:])
        content = draw(nodes(depth=depth - 1, length=int(offsets[-1])))
        return ListOffsetArray(offsets, content)
    nfields = draw(st.integers(1, 3))
    fields = [(f"f{i}", draw(nodes(depth=depth - 1, length=length))) for i in range(nfields)]
    return RecordArray(fields, length=length)


# ---------------------------------------------------------------------------
# worked-example fixtures
# ---------------------------------------------------------------------------


def example_events() -> RecordArray:
    """Three hand-built events: one kept (mass 100), one same-charge skip,
    one below the mass cut (mass 20)."""
    offsets = np.array([0, 2, 4, 6], dtype=np.int64)
    charge = PrimitiveArray(np.array([1, -1, 1, 1, 1, -1], dtype=np.int64))
    pt = PrimitiveArray(np.array([50.0, 50.0, 50.0, 50.0, 10.0, 10.0]))
    eta = PrimitiveArray(np.zeros(6))
    phi = PrimitiveArray(np.array([0.0, np.pi, 0.0, np.pi, 0.0, np.pi]))
    return RecordArray(
        [
            ("nMuon", PrimitiveArray(np.array([2, 2, 2], dtype=np.int64))),
            ("Muon_charge", ListOffsetArray(offsets, charge)),
            ("Muon_pt", ListOffsetArray(offsets, pt)),
            ("Muon_eta", ListOffsetArray(offsets, eta)),
            ("Muon_phi", ListOffsetArray(offsets, phi)),
        ]
    )


@pytest.fixture
def ragged_f64() -> ListOffsetArray:
    """[[1.1, 2.2, 3.3], [], [4.4, 5.5]]"""
    return ListOffsetArray([0, 3, 3, 5], PrimitiveArray([1.1, 2.2, 3.3, 4.4, 5.5]))


@pytest.fixture
def record_ab() -> RecordArray:
    """Five rows of {a: int64, b: float64}."""
    return RecordArray(
        {
            "a": PrimitiveArray([1, 2, 3, 4, 5]),
            "b": PrimitiveArray([1.1, 2.2, 3.3, 4.4, 5.5]),
        }
    )
