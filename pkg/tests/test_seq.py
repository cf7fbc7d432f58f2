import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lethargy.seq import (
    IndexMap,
    InsufficientWindowError,
    NullSequence,
    SequenceError,
    TailModel,
    convex_majorant,
    lethargy_majorant,
    nonincreasing_rearrangement,
)

from conftest import random_nonincreasing


def check_majorant_postconditions(eps, h, xi):
    v, hv, x = eps.values, h.values, xi.values
    n = v.size
    assert np.all(x >= v - 1e-15), "domination fails"
    assert np.all(np.diff(x) <= 1e-15), "monotonicity fails"
    for i in range(n):
        if hv[i] < n:
            assert x[i] <= 2.0 * x[hv[i]] + 1e-15, f"doubling bound fails at {i}"


class TestLethargyMajorant:
    def test_identity_map_blocks(self):
        eps = NullSequence.geometric(0.5, 64)
        h = IndexMap.identity(64)
        xi = lethargy_majorant(eps, h)
        check_majorant_postconditions(eps, h, xi)
        # output is piecewise constant on blocks
        assert len(np.unique(xi.values)) < 64

    def test_harmonic_window_1024(self):
        n = 1024
        eps = NullSequence(1.0 / (np.arange(n) + 1.0))
        h = IndexMap.from_callable(lambda k: 2 * k + 1, n)
        xi = lethargy_majorant(eps, h)
        check_majorant_postconditions(eps, h, xi)

    def test_zero_sequence(self):
        eps = NullSequence(np.zeros(32))
        xi = lethargy_majorant(eps, IndexMap.identity(32))
        assert np.all(xi.values == 0.0)

    def test_insufficient_window(self):
        eps = NullSequence(np.array([1.0, 0.5, 0.25]))
        h = IndexMap(np.array([10, 11, 12]))
        with pytest.raises(InsufficientWindowError):
            lethargy_majorant(eps, h)

    def test_map_must_cover_window(self):
        eps = NullSequence(np.ones(8))
        with pytest.raises(SequenceError):
            lethargy_majorant(eps, IndexMap.identity(4))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_randomized_postconditions(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(8, 200))
        eps = NullSequence(random_nonincreasing(rng, n))
        jumps = rng.integers(0, 5, size=n)
        h = IndexMap(np.minimum(np.arange(n) + jumps, 4 * n))
        xi = lethargy_majorant(eps, h)
        check_majorant_postconditions(eps, h, xi)


class TestConvexMajorant:
    def test_geometric_is_fixed_point(self):
        eps = NullSequence.geometric(0.5, 40)
        out = convex_majorant(eps)
        assert np.array_equal(out.values, eps.values)

    def test_spike_becomes_convex_chain(self):
        vals = np.zeros(16)
        vals[0] = 1.0
        out = convex_majorant(NullSequence(vals))
        assert np.all(out.values >= vals)
        assert np.all(np.diff(out.values, 2) >= -1e-15)
        assert np.all(np.diff(out.values) <= 1e-15)

    def test_zero(self):
        out = convex_majorant(NullSequence(np.zeros(10)))
        assert np.all(out.values == 0.0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_postconditions_random(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 120))
        eps = NullSequence(random_nonincreasing(rng, n))
        out = convex_majorant(eps)
        assert np.all(out.values >= eps.values)
        assert np.all(np.diff(out.values) <= 1e-15)
        if n >= 3:
            assert np.all(np.diff(out.values, 2) >= -1e-15)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        eps = NullSequence(random_nonincreasing(rng, int(rng.integers(4, 80))))
        once = convex_majorant(eps)
        twice = convex_majorant(once)
        assert np.array_equal(once.values, twice.values)

    def test_minimal_from_the_right(self, rng):
        # each value is pinned by domination or by the convexity constraint
        # with its two right neighbors; lowering any entry breaks one of them
        eps = NullSequence(random_nonincreasing(rng, 50))
        out = convex_majorant(eps)
        ext = np.concatenate([out.values, np.zeros(2)])
        for j in range(50):
            pinned_by_input = ext[j] <= eps.values[j] + 1e-14
            pinned_by_chain = ext[j] <= 2 * ext[j + 1] - ext[j + 2] + 1e-14
            assert pinned_by_input or pinned_by_chain


class TestRearrangement:
    def test_basic(self):
        out = nonincreasing_rearrangement([0.5, 1.0, 0.25])
        assert np.array_equal(out.values, [1.0, 0.5, 0.25])

    def test_idempotent_on_sorted(self):
        vals = np.array([3.0, 2.0, 2.0, 0.5])
        out = nonincreasing_rearrangement(vals)
        assert np.array_equal(out.values, vals)

    def test_random_against_independent_sort(self, rng):
        vals = rng.uniform(0, 10, size=100)
        out = nonincreasing_rearrangement(vals)
        assert np.array_equal(out.values, np.sort(vals)[::-1])
        assert sorted(out.values) == sorted(vals)

    def test_negative_rejected(self):
        with pytest.raises(SequenceError):
            nonincreasing_rearrangement([1.0, -0.5])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=40))
    def test_multiset_bijection(self, vals):
        out = nonincreasing_rearrangement(vals)
        assert sorted(out.values) == sorted(vals)
        assert np.all(np.diff(out.values) <= 0)


class TestNullSequence:
    def test_monotonicity_enforced(self):
        with pytest.raises(SequenceError):
            NullSequence(np.array([1.0, 2.0]))

    def test_negative_rejected(self):
        with pytest.raises(SequenceError):
            NullSequence(np.array([1.0, -0.1]))

    def test_representation_noise_tolerated(self):
        v = np.array([1.0, 1.0 + 1e-14])
        NullSequence(v)  # within the relative tolerance

    def test_geometric_tail_extension(self):
        s = NullSequence(np.array([1.0, 0.5]), TailModel("geometric", 0.5))
        assert s.extended(1) == 0.5
        assert s.extended(3) == 0.125

    def test_tail_ratio_validation(self):
        with pytest.raises(SequenceError):
            TailModel("geometric", 1.5)
        with pytest.raises(SequenceError):
            TailModel("weird")

    def test_json_roundtrip(self):
        s = NullSequence(np.array([1.0, 0.25]), TailModel("geometric", 0.3))
        back = NullSequence.from_json(json.loads(json.dumps(s.to_json())))
        assert np.array_equal(back.values, s.values)
        assert back.tail == s.tail

    def test_csv_export(self, tmp_path):
        s = NullSequence(np.array([1.0, 0.5, 0.25]))
        path = tmp_path / "seq.csv"
        s.dump_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "n,value"
        assert len(lines) == 4


class TestIndexMap:
    def test_below_diagonal_rejected(self):
        with pytest.raises(SequenceError):
            IndexMap(np.array([0, 0, 1]))

    def test_call(self):
        h = IndexMap.from_callable(lambda n: 2 * n + 1, 4)
        assert h(3) == 7
