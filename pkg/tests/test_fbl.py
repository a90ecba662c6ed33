"""Finite-blocklength engine tests, with brute-force and high-precision oracles."""

import math

import numpy as np
import pytest

from urllc_sim.fbl import (
    CodeSpec,
    DomainError,
    LinkSnr,
    awgn_capacity,
    awgn_dispersion,
    error_prob,
    max_coding_rate,
    min_blocklength,
    q_inv,
)

LOG2E_SQ = math.log2(math.e) ** 2

# Gaussian tail table, frozen from a 50-digit mpmath bisection of erfc.
Q_TABLE = [
    (1.0, 0.15865525393145705),
    (2.0, 0.022750131948179207),
    (3.0, 0.0013498980316300945),
    (4.0, 3.1671241833119921e-5),
    (5.0, 2.8665157187919391e-7),
    (6.0, 9.8658764503769814e-10),
]


class TestTypes:
    def test_snr_db_round_trip(self):
        for db in (-20.0, -3.0, 0.0, 7.5, 30.0):
            snr = LinkSnr.from_db(db)
            assert abs(snr.db - db) <= 1e-12 * max(1.0, abs(db))

    def test_snr_rejects_non_positive(self):
        with pytest.raises(DomainError):
            LinkSnr(0.0)
        with pytest.raises(DomainError):
            LinkSnr(-1.0)

    def test_code_spec_validation(self):
        CodeSpec(n=100, k_bits=32, epsilon=1e-5)
        with pytest.raises(DomainError):
            CodeSpec(n=0, k_bits=32, epsilon=1e-5)
        with pytest.raises(DomainError):
            CodeSpec(n=100, k_bits=0, epsilon=1e-5)
        with pytest.raises(DomainError):
            CodeSpec(n=100, k_bits=32, epsilon=1.0)


class TestCapacityDispersion:
    def test_capacity_known_points(self):
        assert awgn_capacity(1.0) == 1.0
        assert awgn_capacity(3.0) == 2.0
        assert awgn_capacity(1e-12) < 1e-11  # snr -> 0+ limit

    def test_capacity_domain(self):
        with pytest.raises(DomainError):
            awgn_capacity(0.0)
        with pytest.raises(DomainError):
            awgn_capacity(-0.5)

    def test_dispersion_known_points(self):
        assert awgn_dispersion(1.0) == pytest.approx(0.75 * LOG2E_SQ, rel=1e-14)
        assert awgn_dispersion(1e-9) < 1e-8  # snr -> 0 limit
        assert awgn_dispersion(1e9) == pytest.approx(LOG2E_SQ, rel=1e-8)

    def test_against_alternate_form(self):
        # independent algebraic form: V = (1 - 1/(1+s)^2) (log2 e)^2
        for snr in np.geomspace(1e-4, 1e4, 60):
            alt = (1.0 - 1.0 / (1.0 + snr) ** 2) * LOG2E_SQ
            assert awgn_dispersion(snr) == pytest.approx(alt, rel=1e-12)
            assert awgn_capacity(snr) == pytest.approx(
                math.log1p(snr) / math.log(2), rel=1e-12
            )


class TestQInv:
    def test_table(self):
        for x, eps in Q_TABLE:
            assert q_inv(eps) == pytest.approx(x, rel=1e-10)

    def test_median_is_zero(self):
        assert q_inv(0.5) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            q_inv(0.0)
        with pytest.raises(DomainError):
            q_inv(1.0)


class TestMaxCodingRate:
    def test_median_epsilon_is_capacity_plus_correction(self):
        for n in (1, 10, 1000, 10**6):
            for snr in (0.1, 1.0, 10.0):
                expected = awgn_capacity(snr) + math.log2(n) / (2 * n)
                assert max_coding_rate(n, 0.5, snr) == expected

    def test_large_blocklength_close_to_capacity(self):
        # frozen from the 50-digit oracle: R*(1e6, 1e-5, snr=1)
        rate = max_coding_rate(10**6, 1e-5, 1.0)
        assert rate == pytest.approx(0.99468136620905473, rel=1e-12)
        assert abs(rate - awgn_capacity(1.0)) < 0.01

    def test_doubling_blocklength_raises_rate(self):
        # holds wherever the rate is not floored to 0 and the dispersion
        # back-off dominates the log2(n)/(2n) correction (epsilon well
        # below 0.5); near epsilon = 0.5 the correction term can dominate
        # and the claim genuinely fails.
        for n in (512, 1024, 4096):
            for eps in (1e-6, 1e-3, 0.1):
                for snr in (0.25, 1.0, 8.0):
                    assert max_coding_rate(n, eps, snr) > 0
                    assert max_coding_rate(2 * n, eps, snr) > max_coding_rate(
                        n, eps, snr
                    )

    def test_monotone_on_grid(self):
        # strict monotonicity in n, snr, and epsilon on a 20^3 grid over
        # the URLLC-relevant region (see doubling test for the boundary)
        ns = np.unique(np.geomspace(512, 10**5, 20).astype(int))
        snrs = np.geomspace(0.25, 31.6, 20)
        epss = np.geomspace(1e-6, 0.1, 20)
        rates = np.array(
            [
                [[max_coding_rate(int(n), float(e), float(s)) for e in epss] for s in snrs]
                for n in ns
            ]
        )
        assert np.all(rates > 0)
        assert np.all(np.diff(rates, axis=0) > 0)  # n
        assert np.all(np.diff(rates, axis=1) > 0)  # snr
        assert np.all(np.diff(rates, axis=2) > 0)  # epsilon

    def test_capacity_limit(self):
        # 1e-3 band needs n ~ V (Qinv/1e-3)^2: 1e7 suffices only at low snr;
        # higher snr needs a larger blocklength for the same band.
        assert abs(max_coding_rate(10**7, 1e-5, 0.1) - awgn_capacity(0.1)) < 1e-3
        for snr in (1.0, 10.0):
            assert abs(max_coding_rate(10**8, 1e-5, snr) - awgn_capacity(snr)) < 1e-3

    def test_floor_at_zero(self):
        assert max_coding_rate(2, 1e-9, 0.01) == 0.0


class TestMinBlocklength:
    def test_single_use(self):
        assert min_blocklength(1, 0.5, 3.0) == 1

    def test_brute_force_scan(self):
        # exhaustive integer scan oracle
        k, eps, snr = 256, 1e-5, 1.0
        n = 1
        while n * max_coding_rate(n, eps, snr) < k:
            n += 1
        assert n == 352  # frozen
        assert min_blocklength(k, eps, snr) == n

    def test_joint_encoding_advantage(self):
        # encoding 2k bits takes fewer uses than two k-bit blocks
        assert min_blocklength(512, 1e-5, 1.0) == 643
        assert min_blocklength(512, 1e-5, 1.0) < 2 * min_blocklength(256, 1e-5, 1.0)

    def test_bracket_postcondition(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            k = int(rng.integers(1, 4096))
            eps = float(10 ** rng.uniform(-8, -0.3))
            snr = float(10 ** rng.uniform(-1, 1.5))
            n = min_blocklength(k, eps, snr)
            assert n * max_coding_rate(n, eps, snr) >= k
            if n > 1:
                assert (n - 1) * max_coding_rate(n - 1, eps, snr) < k


class TestErrorProb:
    def test_half_at_rate_plus_correction(self):
        # k/n exactly hits C + log2(n)/(2n): Q(0) = 0.5
        snr = 3.0  # C = 2
        n = 64
        k = int(n * awgn_capacity(snr) + math.log2(n) / 2)
        # construct snr so that C = k/n - log2(n)/(2n) exactly
        target_c = k / n - math.log2(n) / (2 * n)
        snr_exact = 2**target_c - 1
        assert error_prob(n, k, snr_exact) == pytest.approx(0.5, abs=1e-12)

    def test_overloaded_rate_fails(self):
        assert error_prob(100, 10_000, 1.0) > 1 - 1e-12

    def test_round_trip_consistency(self):
        # 100 random code specs: the found blocklength meets epsilon, and
        # one use fewer does not
        rng = np.random.default_rng(1234)
        for _ in range(100):
            k = int(rng.integers(1, 2048))
            eps = float(10 ** rng.uniform(-8, -0.1))
            snr = float(10 ** rng.uniform(-1, 1.5))
            n = min_blocklength(k, eps, snr)
            assert error_prob(n, k, snr) <= eps
            if n > 1:
                assert error_prob(n - 1, k, snr) > eps
