"""Special-function accuracy against independent quadrature/bisection oracles."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from gltshrink.errors import DomainError
from gltshrink.specfun import (
    Accuracy,
    exp_integral_e,
    exp_integral_e_scaled,
    lower_inc_gamma,
    normal_cdf,
    normal_quantile,
    student_t_cdf,
)


def expint_quadrature(s, x):
    """Defining integral int_1^inf exp(-x t) t^-s dt, adaptively."""
    val, _ = quad(lambda t: math.exp(-x * t) * t ** (-s), 1.0, np.inf,
                  epsabs=1e-300, epsrel=1e-12, limit=400)
    return val


def lower_gamma_quadrature(s, x):
    """Defining integral int_0^x t^(s-1) exp(-t) dt, adaptively."""
    val, _ = quad(lambda t: t ** (s - 1.0) * math.exp(-t), 0.0, x,
                  epsabs=1e-300, epsrel=1e-12, limit=400)
    return val


class TestExpIntegral:
    def test_value_at_one(self):
        # frozen from the quadrature oracle
        assert exp_integral_e(1.0, 1.0) == pytest.approx(0.21938393439552062, rel=1e-9)

    def test_small_x_limit(self):
        # lim_{x->0+} E_s(x) = 1/(s-1) for s > 1
        assert exp_integral_e(3.0, 1e-12) == pytest.approx(0.5, abs=1e-6)

    def test_two_sided_bound(self):
        # e^-x/(x+s) <= E_s(x) <= e^-x/(x+s-1) for s >= 1
        v = exp_integral_e(2.0, 10.0)
        assert math.exp(-10.0) / 12.0 <= v <= math.exp(-10.0) / 11.0

    @pytest.mark.parametrize("s", [1.0, 1.5, 2.0, 3.5])
    @pytest.mark.parametrize("x", [1e-6, 1e-3, 0.1, 0.999, 1.001, 2.0, 10.0, 50.0])
    def test_against_quadrature(self, s, x):
        oracle = expint_quadrature(s, x)
        assert exp_integral_e(s, x) == pytest.approx(oracle, rel=1e-8)

    def test_monotone_decreasing_in_x(self):
        for s in [1.0, 1.5, 2.0, 3.0]:
            grid = np.logspace(-4, 2, 40)
            vals = [exp_integral_e(s, x) for x in grid]
            assert np.all(np.diff(vals) < 0.0)

    def test_e1_log_bound_chain(self):
        # (1/2) log((x+2)/x) < e^x E_1(x) < log((x+1)/x)
        for x in np.logspace(-3, 3, 50):
            v = exp_integral_e_scaled(1.0, x)
            assert 0.5 * math.log((x + 2.0) / x) < v < math.log((x + 1.0) / x)

    def test_scaled_matches_plain(self):
        for s, x in [(1.0, 0.5), (2.5, 3.0), (1.0, 30.0)]:
            assert exp_integral_e_scaled(s, x) * math.exp(-x) == pytest.approx(
                exp_integral_e(s, x), rel=1e-12
            )

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            exp_integral_e(1.0, 0.0)
        with pytest.raises(DomainError):
            exp_integral_e(1.0, -2.0)


class TestLowerIncGamma:
    def test_shape_one_closed_form(self):
        assert lower_inc_gamma(1.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)

    def test_small_x_power_limit(self):
        # gamma(s, x) / x^s -> 1/s as x -> 0+
        s, x = 0.75, 1e-12
        assert lower_inc_gamma(s, x) / x**s == pytest.approx(1.0 / s, rel=1e-6)

    def test_against_quadrature(self):
        assert lower_inc_gamma(2.5, 3.7) == pytest.approx(
            lower_gamma_quadrature(2.5, 3.7), rel=1e-10
        )

    @pytest.mark.parametrize("s", [1.0, 1.5, 2.0, 3.5])
    @pytest.mark.parametrize("x", [1e-6, 0.01, 0.5, 2.0, 10.0, 50.0])
    def test_grid_against_quadrature(self, s, x):
        assert lower_inc_gamma(s, x) == pytest.approx(
            lower_gamma_quadrature(s, x), rel=1e-8
        )

    def test_partition_with_upper_tail(self):
        # gamma(s,x) + quadrature upper tail = Gamma(s)
        for s, x in [(1.5, 0.7), (3.0, 2.0), (2.2, 8.0)]:
            upper, _ = quad(lambda t: t ** (s - 1) * math.exp(-t), x, np.inf,
                            epsabs=1e-300, epsrel=1e-12, limit=300)
            assert lower_inc_gamma(s, x) + upper == pytest.approx(
                math.gamma(s), abs=1e-9
            )

    def test_monotone_with_limit(self):
        # strictly increasing until the value saturates at Gamma(s) in doubles
        xs = np.linspace(0.1, 30.0, 30)
        vals = [lower_inc_gamma(2.0, x) for x in xs]
        assert np.all(np.diff(vals) > 0.0)
        assert lower_inc_gamma(2.0, 60.0) == pytest.approx(math.gamma(2.0), rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            lower_inc_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            lower_inc_gamma(1.0, -1.0)


def _normal_quantile_bisect(p):
    """Independent reference: bisection on the erfc form of the normal CDF.

    The erfc form keeps full relative accuracy in the lower tail, which the
    1 + erf form cannot.
    """
    lo, hi = -10.0, 10.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(-mid / math.sqrt(2.0)) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestNormalStudent:
    def test_median_symmetry(self):
        assert normal_quantile(0.5) == 0.0
        assert student_t_cdf(0.0, 100.0) == 0.5

    def test_0975_against_bisection(self):
        assert normal_quantile(0.975) == pytest.approx(
            _normal_quantile_bisect(0.975), abs=1e-10
        )
        assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    @pytest.mark.parametrize("p", [1e-12, 1e-6, 0.3, 0.5, 0.9, 1 - 1e-6])
    def test_quantile_matches_bisection(self, p):
        assert normal_quantile(p) == pytest.approx(_normal_quantile_bisect(p), abs=1e-10)

    def test_quantile_cdf_roundtrip(self):
        # upper-tail p loses resolution once 1 - Phi(x) nears the double
        # spacing at 1.0, so x > ~5.7 is checked through the mirror identity
        for x in np.linspace(-8.0, 5.5, 28):
            assert normal_quantile(normal_cdf(x)) == pytest.approx(x, abs=1e-8)
        for x in np.linspace(5.5, 8.0, 6):
            assert -normal_quantile(normal_cdf(-x)) == pytest.approx(x, abs=1e-8)

    def test_t_cdf_against_quadrature(self):
        df = 100.0
        c = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))

        def pdf(u):
            return c * (1 + u * u / df) ** (-(df + 1) / 2)

        for t in [-40.0, -3.0, -1.0, 0.0, 0.7, 2.5, 40.0]:
            # integrate whichever tail is small so quad keeps full accuracy
            if t <= 0:
                oracle = quad(pdf, -np.inf, t, epsabs=1e-300, epsrel=1e-12)[0]
            else:
                oracle = 1.0 - quad(pdf, t, np.inf, epsabs=1e-300, epsrel=1e-12)[0]
            assert student_t_cdf(t, df) == pytest.approx(oracle, abs=1e-10)

    def test_domain_errors(self):
        for bad in [0.0, 1.0, -0.5]:
            with pytest.raises(DomainError):
                normal_quantile(bad)
        with pytest.raises(DomainError):
            student_t_cdf(1.0, 0.0)


class TestAccuracy:
    def test_invariants(self):
        with pytest.raises(DomainError):
            Accuracy(rel_tol=1e-3)
        with pytest.raises(DomainError):
            Accuracy(rel_tol=0.0)
        with pytest.raises(DomainError):
            Accuracy(max_terms=8)
        assert Accuracy().rel_tol == 1e-10
