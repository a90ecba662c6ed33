"""Latency-CDF and success-product algebra tests."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urllc_sim.reliability import (
    DROP,
    LatencyCdf,
    ProtocolChain,
    StageModel,
    cdf_from_samples,
    chain_success,
    deadline_grid,
    merge,
    packet_success,
    reliability_at,
    wilson_interval,
)

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestSuccessProducts:
    def test_packet_success_examples(self):
        assert packet_success(StageModel(1, 1, 1)) == 1.0
        assert packet_success(StageModel(0.99, 0.99, 0.99)) == pytest.approx(
            0.970299, abs=1e-12
        )
        assert packet_success(StageModel(1, 0, 1)) == 0.0

    def test_chain_examples(self):
        assert chain_success(ProtocolChain([0.999])) == 0.999
        assert chain_success(ProtocolChain([0.999, 0.999, 0.999])) == pytest.approx(
            0.997002999, abs=1e-12
        )

    def test_append_multiplies(self):
        chain = ProtocolChain([0.95, 0.8])
        assert chain_success(chain.append(0.9)) == pytest.approx(
            chain_success(chain) * 0.9, rel=1e-15
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            StageModel(1.1, 0.5, 0.5)
        with pytest.raises(ValueError):
            ProtocolChain([])
        with pytest.raises(ValueError):
            ProtocolChain([0.5, -0.1])

    @given(st.lists(probs, min_size=1, max_size=8))
    def test_chain_bounded_by_min_and_commutative(self, steps):
        forward = chain_success(ProtocolChain(steps))
        backward = chain_success(ProtocolChain(list(reversed(steps))))
        assert forward == pytest.approx(backward, rel=1e-12, abs=1e-300)
        assert forward <= min(steps) + 1e-15

    @given(st.lists(probs, min_size=1, max_size=8), probs)
    def test_appending_never_increases(self, steps, extra):
        chain = ProtocolChain(steps)
        assert chain_success(chain.append(extra)) <= chain_success(chain) + 1e-15


class TestLatencyCdf:
    def test_counting_with_drop(self):
        cdf = cdf_from_samples([1e-3, 2e-3, DROP])
        assert reliability_at(cdf, 2e-3) == pytest.approx(2 / 3)
        assert reliability_at(cdf, math.inf) == pytest.approx(2 / 3)

    def test_all_drops(self):
        cdf = cdf_from_samples([DROP, DROP])
        assert reliability_at(cdf, math.inf) == 0.0
        assert cdf.drop_count == 2

    def test_no_drops_saturates_at_one(self):
        cdf = cdf_from_samples([3.0, 1.0, 2.0])
        assert reliability_at(cdf, 3.0) == 1.0

    def test_asymptote_equals_one_minus_drop_rate(self):
        cdf = cdf_from_samples([1.0, 2.0, 3.0, DROP])
        assert reliability_at(cdf, math.inf) == 1 - cdf.drop_count / cdf.total
        assert reliability_at(cdf, 2.0) == 0.5

    def test_below_min_sample(self):
        cdf = cdf_from_samples([1.0, 2.0])
        assert reliability_at(cdf, 0.5) == 0.0

    def test_closed_inequality(self):
        cdf = cdf_from_samples([1.0, 2.0])
        assert reliability_at(cdf, 1.0) == 0.5  # latency <= deadline counts

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cdf_from_samples([])

    def test_invalid_samples_rejected(self):
        with pytest.raises(ValueError):
            cdf_from_samples([-1.0])
        with pytest.raises(ValueError):
            cdf_from_samples([float("nan")])

    def test_inf_aliases_drop(self):
        cdf = cdf_from_samples([1.0, float("inf")])
        assert cdf.drop_count == 1

    @given(
        st.lists(
            st.one_of(st.floats(0, 10, allow_nan=False), st.none()),
            min_size=1,
            max_size=40,
        ),
        st.floats(0, 12, allow_nan=False),
    )
    def test_monotone_and_bounded(self, values, deadline):
        samples = [DROP if v is None else v for v in values]
        cdf = cdf_from_samples(samples)
        r1 = reliability_at(cdf, deadline)
        r2 = reliability_at(cdf, deadline + 1.0)
        asymptote = (cdf.total - cdf.drop_count) / cdf.total
        assert 0.0 <= r1 <= r2 <= asymptote
        # supremum reached exactly, as a count identity
        assert cdf.counts_at(math.inf) == (cdf.total - cdf.drop_count, cdf.total)
        assert reliability_at(cdf, math.inf) == asymptote


class TestMerge:
    @settings(max_examples=50)
    @given(
        st.lists(st.integers(0, 50), min_size=1, max_size=20),
        st.lists(st.integers(0, 50), min_size=1, max_size=20),
        st.integers(0, 3),
        st.integers(0, 3),
        st.integers(0, 55),
    )
    def test_merge_is_weighted_average_exactly(self, xs, ys, da, db, deadline):
        a = cdf_from_samples([float(v) for v in xs] + [DROP] * da)
        b = cdf_from_samples([float(v) for v in ys] + [DROP] * db)
        merged = merge(a, b)
        na, ta = a.counts_at(deadline)
        nb, tb = b.counts_at(deadline)
        nm, tm = merged.counts_at(deadline)
        # exact rational identity on counts
        assert Fraction(nm, tm) == (
            Fraction(ta, tm) * Fraction(na, ta) + Fraction(tb, tm) * Fraction(nb, tb)
        )


class TestWilson:
    def test_contains_point_estimate(self):
        lo, hi = wilson_interval(3, 1000)
        assert lo < 3 / 1000 < hi

    def test_extremes_stay_in_unit_interval(self):
        lo, hi = wilson_interval(0, 50)
        assert lo == 0.0 and 0 < hi < 1
        lo, hi = wilson_interval(50, 50)
        assert 0 < lo < 1 and hi == 1.0

    def test_known_value(self):
        # Wilson 95% for 8/10: centre (p + z^2/2n)/(1 + z^2/n)
        lo, hi = wilson_interval(8, 10, 0.95)
        assert lo == pytest.approx(0.4901, abs=2e-3)
        assert hi == pytest.approx(0.9433, abs=2e-3)


def test_deadline_grid_spans_samples():
    cdf = cdf_from_samples([1e-3, 5e-3, 2e-2])
    grid = deadline_grid(cdf, 10)
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(2e-2)
    assert len(grid) == 10
