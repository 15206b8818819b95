import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragbuf.buffers import to_buffers
from ragbuf.errors import ValidationError
from ragbuf.kernels import (
    active_backend,
    check_event_batch,
    gen_events,
    invariant_mass,
    invariant_mass_rowwise,
    path_length,
)
from ragbuf.layout import (
    ListOffsetArray,
    PrimitiveArray,
    RecordArray,
    get_field,
    get_list,
    to_list,
    validate,
)

from conftest import example_events, flat_sum


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    if request.param == "numpy":
        monkeypatch.setenv("RAGBUF_NO_NUMBA", "1")
    else:
        monkeypatch.delenv("RAGBUF_NO_NUMBA", raising=False)
    assert active_backend() == request.param
    return request.param


@st.composite
def ragged_floats(draw, max_lists: int = 12):
    length = draw(st.integers(0, max_lists))
    counts = draw(st.lists(st.integers(0, 5), min_size=length, max_size=length))
    offsets = np.zeros(length + 1, dtype=np.int64)
    np.cumsum(np.asarray(counts, dtype=np.int64), out=offsets[1:])
    total = int(offsets[-1])
    values = draw(
        st.lists(st.floats(0.0, 1e6, allow_nan=False), min_size=total, max_size=total)
    )
    return ListOffsetArray(offsets, PrimitiveArray(np.asarray(values, dtype=np.float64)))


class TestPathLength:
    def test_worked_example(self, ragged_f64, backend):
        # oracle: brute-force nested loop over the materialized lists
        assert flat_sum(to_list(ragged_f64)) == 16.5
        assert path_length(ragged_f64) == pytest.approx(16.5, rel=1e-12)

    def test_empty(self, backend):
        empty = ListOffsetArray([0], PrimitiveArray([], dtype="float64"))
        assert path_length(empty) == 0.0

    def test_single_element(self, backend):
        single = ListOffsetArray([0, 1], PrimitiveArray([3.25]))
        assert path_length(single) == 3.25

    def test_sliced_window(self, backend):
        # a view whose offsets do not start at zero must only sum its window
        inner = ListOffsetArray([0, 2, 3, 5, 6], PrimitiveArray([1.0, 2.0, 4.0, 8.0, 16.0, 32.0]))
        outer = ListOffsetArray([0, 2, 4], inner)
        window = get_list(outer, 1)
        assert path_length(window) == flat_sum(to_list(window)) == 56.0

    def test_wrong_layout_rejected(self, record_ab, backend):
        with pytest.raises(ValidationError):
            path_length(record_ab)
        with pytest.raises(ValidationError):
            path_length(ListOffsetArray([0, 1], PrimitiveArray([1], dtype="int64")))

    def test_invalid_offsets_rejected(self, backend):
        bad = ListOffsetArray([0, 5, 3], PrimitiveArray([0.0] * 5))
        with pytest.raises(ValidationError):
            path_length(bad)

    @given(node=ragged_floats())
    @settings(max_examples=100, deadline=None)
    def test_matches_brute_force(self, node):
        expected = flat_sum(to_list(node))
        got = path_length(node)
        assert abs(got - expected) <= 1e-9 * max(abs(expected), 1e-30)


class TestInvariantMass:
    def test_kept_event_is_exactly_100(self, backend):
        events = example_events()
        masses = invariant_mass(events)
        assert to_list(masses) == [100.0]

    def test_same_charge_skipped(self, backend):
        offsets = np.array([0, 2], dtype=np.int64)
        events = RecordArray(
            [
                ("nMuon", PrimitiveArray(np.array([2], dtype=np.int64))),
                ("Muon_charge", ListOffsetArray(offsets, PrimitiveArray(np.array([1, 1], dtype=np.int64)))),
                ("Muon_pt", ListOffsetArray(offsets, PrimitiveArray(np.array([50.0, 50.0])))),
                ("Muon_eta", ListOffsetArray(offsets, PrimitiveArray(np.zeros(2)))),
                ("Muon_phi", ListOffsetArray(offsets, PrimitiveArray(np.array([0.0, np.pi])))),
            ]
        )
        assert to_list(invariant_mass(events)) == []

    def test_low_mass_cut(self, backend):
        offsets = np.array([0, 2], dtype=np.int64)
        events = RecordArray(
            [
                ("nMuon", PrimitiveArray(np.array([2], dtype=np.int64))),
                ("Muon_charge", ListOffsetArray(offsets, PrimitiveArray(np.array([1, -1], dtype=np.int64)))),
                ("Muon_pt", ListOffsetArray(offsets, PrimitiveArray(np.array([10.0, 10.0])))),
                ("Muon_eta", ListOffsetArray(offsets, PrimitiveArray(np.zeros(2)))),
                ("Muon_phi", ListOffsetArray(offsets, PrimitiveArray(np.array([0.0, np.pi])))),
            ]
        )
        # mass comes out at exactly 20, below the strict 70 cut
        assert to_list(invariant_mass(events)) == []
        assert to_list(invariant_mass_rowwise(events)) == []

    def test_empty_batch(self, backend):
        events = gen_events(0, seed=1)
        assert to_list(invariant_mass(events)) == []
        assert to_list(invariant_mass_rowwise(events)) == []

    def test_matches_rowwise_on_synthetic_batch(self, backend):
        events = gen_events(10_000, seed=7)
        columnar = invariant_mass(events).data
        rowwise = invariant_mass_rowwise(events).data
        assert columnar.shape == rowwise.shape
        np.testing.assert_allclose(columnar, rowwise, rtol=1e-12, atol=0.0)

    def test_outputs_finite_and_above_cut(self, backend):
        masses = invariant_mass(gen_events(5_000, seed=3)).data
        assert np.all(np.isfinite(masses))
        assert np.all(masses > 70.0)

    def test_pure_function(self, backend):
        events = gen_events(500, seed=11)
        before = {
            name: bytes(memoryview(buf))
            for name, buf in (
                ("nMuon", get_field(events, "nMuon").data),
                ("pt", get_field(events, "Muon_pt").content.data),
            )
        }
        first = invariant_mass(events).data
        second = invariant_mass(events).data
        assert np.array_equal(first, second)
        assert bytes(memoryview(get_field(events, "nMuon").data)) == before["nMuon"]
        assert bytes(memoryview(get_field(events, "Muon_pt").content.data)) == before["pt"]

    def test_output_follows_event_order(self, backend):
        events = gen_events(2_000, seed=5)
        masses = invariant_mass(events).data
        oracle = invariant_mass_rowwise(events).data
        # position-by-position comparison: order must match the oracle's
        np.testing.assert_allclose(masses, oracle, rtol=1e-12, atol=0.0)


class TestCheckEventBatch:
    def test_valid(self):
        assert check_event_batch(gen_events(100, seed=2)) is None

    def test_not_a_record(self, ragged_f64):
        err = check_event_batch(ragged_f64)
        assert err is not None and err.rule == "event batch is a record"

    def test_missing_field_is_named(self):
        events = gen_events(10, seed=2)
        stripped = RecordArray(
            [(n, c) for n, c in events.fields if n != "Muon_phi"], length=events.length
        )
        err = check_event_batch(stripped)
        assert err is not None
        assert "Muon_phi" in str(err)

    def test_wrong_dtype(self):
        events = gen_events(10, seed=2)
        fields = dict(events.fields)
        fields["nMuon"] = PrimitiveArray(np.zeros(10, dtype=np.float64))
        err = check_event_batch(RecordArray(fields))
        assert err is not None and err.rule == "event field dtype"

    def test_nmuon_disagrees_with_lists(self):
        events = gen_events(10, seed=2)
        fields = dict(events.fields)
        counts = get_field(events, "nMuon").data.copy()
        counts[0] += 1
        fields["nMuon"] = PrimitiveArray(counts)
        err = check_event_batch(RecordArray(fields))
        assert err is not None and err.rule == "muon list lengths match nMuon"

    def test_kernels_raise_on_bad_batch(self, ragged_f64):
        with pytest.raises(ValidationError):
            invariant_mass(ragged_f64)
        with pytest.raises(ValidationError):
            invariant_mass_rowwise(ragged_f64)


class TestGenEvents:
    def test_deterministic_byte_equal(self):
        a = to_buffers(gen_events(1_000, seed=42))
        b = to_buffers(gen_events(1_000, seed=42))
        assert a == b

    def test_different_seeds_differ(self):
        a = to_buffers(gen_events(1_000, seed=1))
        b = to_buffers(gen_events(1_000, seed=2))
        assert a != b

    def test_zero_events(self):
        events = gen_events(0, seed=9)
        assert events.length == 0
        assert validate(events) is None

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            gen_events(-1, seed=0)

    def test_batch_is_valid(self):
        events = gen_events(10_000, seed=13)
        assert validate(events) is None
        assert check_event_batch(events) is None

    def test_value_ranges(self):
        events = gen_events(10_000, seed=13)
        counts = get_field(events, "nMuon").data
        assert set(np.unique(counts)) <= {1, 2, 3}
        # 2 must be the most likely multiplicity
        _, freq = np.unique(counts, return_counts=True)
        assert np.argmax(freq) == 1
        pt = get_field(events, "Muon_pt").content.data
        assert np.all(pt > 0.0) and np.all(pt <= 120.0)
        eta = get_field(events, "Muon_eta").content.data
        assert np.all(np.abs(eta) <= 2.4)
        phi = get_field(events, "Muon_phi").content.data
        assert np.all(phi >= -math.pi) and np.all(phi < math.pi)
        charge = get_field(events, "Muon_charge").content.data
        assert set(np.unique(charge)) <= {-1, 1}
