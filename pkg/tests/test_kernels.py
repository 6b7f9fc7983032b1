import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hhbounds.errors import DomainError
from hhbounds.kernels import (
    HolderPair,
    _k2_closed,
    _k2_series,
    _k3_closed,
    _k3_series,
    kernel_k2,
    kernel_k3,
    log_mean,
    prefactor,
)
from hhbounds.quadrature import integrate

# frozen from scipy.integrate.quad at epsabs=epsrel=1e-15
K3_AT_4 = 0.9747376501343904
K2_AT_4 = 0.8396792153097241

positive = st.floats(min_value=1e-100, max_value=1e100, allow_nan=False, allow_infinity=False)


class TestLogMean:
    @pytest.mark.parametrize("c", [1e-12, 0.3, 1.0, 7.5, 1e40])
    def test_equal_arguments(self, c):
        assert log_mean(c, c) == c

    def test_four_two(self):
        oracle = integrate(lambda t: 4.0**t * 2.0 ** (1 - t), 0, 1, 1e-13).value
        assert log_mean(4, 2) == pytest.approx(2 / math.log(2), rel=1e-15)
        assert log_mean(4, 2) == pytest.approx(oracle, rel=1e-12)
        assert log_mean(4, 2) == pytest.approx(2.8853901, abs=1e-7)

    def test_e_one(self):
        assert log_mean(math.e, 1.0) == pytest.approx(math.e - 1, rel=1e-15)

    def test_zero_is_limit(self):
        assert log_mean(0.0, 3.0) == 0.0
        assert log_mean(2.0, 0.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            log_mean(-1.0, 2.0)

    def test_near_equal_matches_series(self):
        v = 1.0
        u = 1.0 + 1e-9
        # L(1+e, 1) = 1 + e/2 - e^2/12 + ...
        e = u - v
        assert log_mean(u, v) == pytest.approx(1 + e / 2 - e * e / 12, rel=1e-15)

    @given(positive, positive)
    def test_symmetry(self, u, v):
        assert log_mean(u, v) == pytest.approx(log_mean(v, u), rel=1e-14)

    @given(positive, positive)
    def test_bracketing(self, u, v):
        assert min(u, v) <= log_mean(u, v) <= max(u, v)

    @given(st.floats(1e-50, 1e50), st.floats(1e-50, 1e50), st.floats(1e-50, 1e50))
    def test_homogeneity(self, u, v, s):
        assert log_mean(s * u, s * v) == pytest.approx(s * log_mean(u, v), rel=1e-13)

    @settings(max_examples=50)
    @given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
    def test_matches_quadrature(self, u, v):
        oracle = integrate(lambda t: u**t * v ** (1 - t), 0, 1, 1e-13).value
        assert log_mean(u, v) == pytest.approx(oracle, rel=1e-10)


class TestKernels:
    def test_k3_values(self):
        assert kernel_k3(1.0) == pytest.approx(1 / 3, rel=1e-15)
        assert kernel_k3(4.0) == pytest.approx(K3_AT_4, rel=1e-13)
        assert kernel_k3(math.e) == pytest.approx(math.e - 2, rel=1e-14)

    def test_k2_values(self):
        assert kernel_k2(1.0) == 0.5
        assert kernel_k2(4.0) == pytest.approx(K2_AT_4, rel=1e-13)
        assert kernel_k2(math.e) == pytest.approx(math.e - 2, rel=1e-14)

    def test_degenerate_zero(self):
        assert kernel_k3(0.0) == 0.0
        assert kernel_k2(0.0) == 0.0

    @pytest.mark.parametrize("kernel", [kernel_k2, kernel_k3])
    def test_negative_rejected(self, kernel):
        with pytest.raises(DomainError):
            kernel(-0.5)

    @pytest.mark.parametrize("k", np.geomspace(1e-3, 1e3, 50))
    def test_oracle_equivalence(self, k):
        k3 = integrate(lambda t: t * t * k**t, 0, 1, 1e-13).value
        k2 = integrate(lambda t: (1 - t) * k**t, 0, 1, 1e-13).value
        assert abs(kernel_k3(k) - k3) <= 1e-10 * max(1.0, kernel_k3(k))
        assert abs(kernel_k2(k) - k2) <= 1e-10 * max(1.0, kernel_k2(k))

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("shift", [1 + 1e-9, 1 - 1e-9])
    def test_branch_switch_continuity(self, sign, shift):
        lk = sign * 0.1 * shift
        assert _k3_series(lk) == pytest.approx(_k3_closed(lk), rel=1e-11)
        assert _k2_series(lk) == pytest.approx(_k2_closed(lk), rel=1e-11)

    @pytest.mark.parametrize("h", np.linspace(-3e-8, 3e-8, 13))
    def test_limit_within_slope_budget(self, h):
        # K3'(1) = 1/4, K2'(1) = 1/6: a 1e-8 budget allows |k - 1| up to about 4e-8
        assert abs(kernel_k3(1 + h) - 1 / 3) <= 1e-8
        assert abs(kernel_k2(1 + h) - 1 / 2) <= 1e-8

    @pytest.mark.parametrize("h", [-1e-6, -1e-7, 1e-7, 1e-6])
    def test_first_order_behaviour_at_one(self, h):
        assert kernel_k3(1 + h) == pytest.approx(1 / 3 + h / 4, abs=h * h)
        assert kernel_k2(1 + h) == pytest.approx(1 / 2 + h / 6, abs=h * h)

    @given(st.floats(1e-6, 1e6))
    def test_k3_range(self, k):
        assert 0 < kernel_k3(k) <= max(1 / 3, k)

    def test_monotone_in_k(self):
        ks = np.geomspace(1e-4, 1e4, 400)
        k3 = [kernel_k3(k) for k in ks]
        k2 = [kernel_k2(k) for k in ks]
        assert np.all(np.diff(k3) > 0)
        assert np.all(np.diff(k2) > 0)


class TestPrefactor:
    def test_examples(self):
        assert prefactor("holder_t2", HolderPair.holder(2)) == pytest.approx(5**-0.5, rel=1e-15)
        assert prefactor("pmean_t3", HolderPair.power_mean(1)) == 1.0
        assert prefactor("pmean_t5", HolderPair.power_mean(2)) == pytest.approx(2**-0.5, rel=1e-15)
        assert prefactor("holder_t1t4", HolderPair.holder(2)) == pytest.approx(3**-0.5, rel=1e-15)

    @pytest.mark.parametrize("p", np.linspace(1.01, 50, 40))
    def test_brackets(self, p):
        pair = HolderPair.holder(p)
        assert 1 / 3 < prefactor("holder_t2", pair) < 1
        assert prefactor("holder_t1t4", pair) < 1
        assert 0.5 < prefactor("pmean_t5", HolderPair.power_mean(pair.q)) <= 1

    def test_holder_kind_needs_p(self):
        with pytest.raises(DomainError):
            prefactor("holder_t2", HolderPair.power_mean(2))

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            prefactor("bogus", HolderPair.holder(2))


class TestHolderPair:
    def test_conjugates(self):
        pair = HolderPair.holder(3)
        assert pair.q == pytest.approx(1.5)
        assert pair.mode == "holder"
        assert HolderPair.holder_from_q(3).p == pytest.approx(1.5)

    @pytest.mark.parametrize("p,q", [(2, 3), (1, 1e300), (0.5, -1)])
    def test_invalid_holder(self, p, q):
        with pytest.raises(DomainError):
            HolderPair(p, q)

    def test_power_mean_needs_q_at_least_one(self):
        assert HolderPair.power_mean(1).mode == "power_mean"
        with pytest.raises(DomainError):
            HolderPair.power_mean(0.5)
