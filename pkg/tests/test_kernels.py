import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opuc_lab.errors import DivergentSeriesError, PreconditionError
from opuc_lab.kernels import (H_estimates, Q_estimates, build_H_n, build_Q_n, build_h_n, fejer_multipliers,
                              frac_power_closed_form, frac_power_series, h_estimates, jackson_multipliers,
                              uniform_deviation)
from opuc_lab.trig import Grid, TrigSeries, eval_on_grid, series_from_samples


def fejer_closed_form(n, theta):
    """Independent closed form (2 pi n)^-1 (sin(n t/2) / sin(t/2))^2, limit handled by a tiny offset."""
    theta = np.where(np.abs(theta) < 1e-14, 1e-14, theta)
    return (np.sin(n * theta / 2) / np.sin(theta / 2)) ** 2 / (2 * np.pi * n)


def quadrature(f, N=1 << 14):
    th = -np.pi + 2 * np.pi * (np.arange(N) + 0.5) / N
    return th, 2 * np.pi / N, f(th)


# --- Fejer -----------------------------------------------------------------------


def test_fejer_order_three_against_quadrature():
    th, dth, K = quadrature(lambda t: fejer_closed_form(3, t))
    for j, expect in enumerate([1, 2 / 3, 1 / 3]):
        q = np.sum(K * np.cos(j * th)) * dth
        assert q == pytest.approx(expect, abs=1e-12)
    np.testing.assert_allclose(fejer_multipliers(3).m, [1, 2 / 3, 1 / 3], atol=1e-15)


def test_fejer_order_one_is_the_mean():
    assert fejer_multipliers(1).m.tolist() == [1.0]


@pytest.mark.parametrize("n", range(1, 65))
def test_fejer_unit_mass(n):
    th, dth, K = quadrature(lambda t: fejer_closed_form(n, t))
    assert np.sum(K) * dth == pytest.approx(1.0, abs=1e-12)
    assert fejer_multipliers(n).m[0] == 1.0


def test_fejer_rejects_order_zero():
    with pytest.raises(PreconditionError):
        fejer_multipliers(0)


# --- Jackson ---------------------------------------------------------------------


def test_jackson_normalizer_order_two():
    th, dth, K = quadrature(lambda t: fejer_closed_form(2, t) ** 2)
    integral = np.sum(K) * dth
    assert integral == pytest.approx(3 / (4 * np.pi), rel=1e-12)
    assert jackson_multipliers(2).normalizer == pytest.approx(4 * np.pi / 3, rel=1e-12)
    assert 1 / integral == pytest.approx(4 * np.pi / 3, rel=1e-12)


def test_jackson_multipliers_against_quadrature():
    n = 5
    jk = jackson_multipliers(n)
    th, dth, K = quadrature(lambda t: jk.normalizer * fejer_closed_form(n, t) ** 2)
    for j in range(2 * n):
        assert np.sum(K * np.cos(j * th)) * dth == pytest.approx(jk[j], abs=1e-12)


@pytest.mark.parametrize("n", range(1, 65))
def test_jackson_multipliers_monotone_in_unit_interval(n):
    m = jackson_multipliers(n).m
    assert m[0] == 1.0
    assert np.all((m >= 0) & (m <= 1))
    assert np.all(np.diff(m) <= 1e-15)


@pytest.mark.parametrize("n", range(2, 33))
def test_jackson_support(n):
    jk = jackson_multipliers(n)
    assert jk[2 * n - 1] == 0.0
    assert jk[2 * n - 2] > 0.0


def test_multiplier_action_is_coefficient_wise(rng):
    J = 10
    c = rng.standard_normal(2 * J + 1) + 1j * rng.standard_normal(2 * J + 1)
    c = (c + np.conj(c[::-1])) / 2
    s = TrigSeries(c)
    fm = fejer_multipliers(6)
    out = fm.apply(s)
    for j in range(-5, 6):
        assert out.coeff(j) == pytest.approx(s.coeff(j) * fm[j], abs=1e-15)


def test_smoothing_matches_quadrature_convolution():
    g = Grid(512)
    f = np.exp(np.cos(g.theta))  # smooth, spectrally decaying
    s = series_from_samples(f, 40)
    n = 7
    smooth = eval_on_grid(fejer_multipliers(n).apply(s), g).real
    K = fejer_closed_form(n, g.theta)
    conv = np.real(np.fft.ifft(np.fft.fft(f) * np.fft.fft(np.fft.ifftshift(K)))) * 2 * np.pi / g.N
    assert np.max(np.abs(smooth - conv)) < 1e-12


# --- fractional powers ------------------------------------------------------------


def test_frac_power_integer_exponents():
    np.testing.assert_array_equal(frac_power_series(1, 5).coeffs, [1, -1, 0, 0, 0])
    np.testing.assert_array_equal(frac_power_series(0, 4).coeffs, [1, 0, 0, 0])


def test_frac_power_at_minus_one():
    expect = (1 - cmath.exp(1j * math.pi)) ** 0.6  # Python uses the principal branch
    assert abs(expect - 2 ** 0.6) < 1e-15
    assert frac_power_closed_form(0.6, np.array([np.pi]))[0] == pytest.approx(1.5157165665103982, abs=1e-12)
    assert frac_power_closed_form(0.6, np.array([np.pi]))[0] == pytest.approx(expect, abs=1e-14)


def test_closed_form_is_principal_branch():
    th = np.linspace(-np.pi, np.pi, 401)
    th = th[th != 0]
    for a in (0.2, 0.6, -0.4):
        ref = np.array([(1 - cmath.exp(1j * t)) ** a for t in th])
        assert np.max(np.abs(frac_power_closed_form(a, th) - ref)) < 1e-13


def test_frac_power_divergent():
    with pytest.raises(DivergentSeriesError):
        frac_power_series(-1.0, 10)


def test_frac_power_recurrence_and_signs():
    b = frac_power_series(0.35, 200).coeffs
    k = np.arange(199)
    np.testing.assert_allclose(b[1:], b[:-1] * (k - 0.35) / (k + 1), rtol=1e-15)
    assert b[0] == 1 and np.all(b[1:] < 0)


def _partial_sum_closed_form(a, K):
    # sum_{k<K} b_k = prod_{k=1}^{K-1} (1 - a/k) = Gamma(K - a) / (Gamma(K) Gamma(1 - a))
    return math.exp(math.lgamma(K - a) - math.lgamma(K) - math.lgamma(1 - a))


@pytest.mark.parametrize("a", [0.2, 0.5, 0.6, 0.8])
def test_frac_power_partial_sums_match_gamma_closed_form(a):
    b = frac_power_series(a, 100_000).coeffs
    partial = np.cumsum(b)
    assert np.all(np.diff(partial) < 0)
    assert partial[-1] > 0
    assert partial[-1] == pytest.approx(_partial_sum_closed_form(a, 100_000), rel=1e-9)


@pytest.mark.parametrize("a", [0.6, 0.8])
def test_frac_power_partial_sums_small_at_large_truncation(a):
    assert np.sum(frac_power_series(a, 100_000).coeffs) < 1e-3


@pytest.mark.xfail(strict=True, reason="partial sum decays like K^-a / Gamma(1 - a): 1.8e-3 at a = 0.5, K = 1e5")
def test_frac_power_partial_sum_small_at_half():
    assert np.sum(frac_power_series(0.5, 100_000).coeffs) < 1e-3


@pytest.mark.parametrize("a", [0.2, 0.5, 0.6])
@pytest.mark.parametrize("K", [10_000, 100_000])
def test_partial_sum_error_follows_tail_law(a, K):
    th = np.linspace(-np.pi, np.pi, 257)
    th = th[np.abs(th) >= 0.5]
    err = np.max(np.abs(frac_power_series(a, K)(th) - frac_power_closed_form(a, th)))
    assert err < K ** (-1 - a)


def test_partial_sum_within_1e8_at_large_truncation():
    th = np.linspace(-np.pi, np.pi, 257)
    th = th[np.abs(th) >= 0.5]
    err = np.max(np.abs(frac_power_series(0.6, 100_000)(th) - frac_power_closed_form(0.6, th)))
    assert err < 1e-8


@pytest.mark.xfail(strict=True, reason="truncation error is about 0.54 K^(-1.6) = 2.2e-7 at K = 1e4; see decisions ledger")
def test_partial_sum_within_1e8_at_ten_thousand_terms():
    th = np.linspace(-np.pi, np.pi, 257)
    th = th[np.abs(th) >= 0.5]
    err = np.max(np.abs(frac_power_series(0.6, 10_000)(th) - frac_power_closed_form(0.6, th)))
    assert err < 1e-8


# --- smoothed auxiliary polynomials ----------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.0), st.integers(2, 300))
def test_h_at_one_is_two(eps, n):
    h = build_h_n(eps, n)
    assert h.coeffs[0] == 2.0
    assert h.degree() <= n - 1
    np.testing.assert_allclose(h.coeffs, 2 * frac_power_series(eps, n).coeffs * (1 - np.arange(n) / n), rtol=1e-15)


def test_h_imaginary_part_is_odd():
    g = Grid(4096)
    v = eval_on_grid(build_h_n(0.5, 256), g)
    assert np.max(np.abs(v.imag + v.imag[g.mirror()])) < 1e-12


def test_h_real_part_positive():
    v = eval_on_grid(build_h_n(0.5, 256), Grid(4096))
    assert v.real.min() > 0


@pytest.mark.parametrize("eps", [0.2, 0.5, 0.9])
def test_h_real_part_nonnegative_property(eps):
    for n in (16, 64, 300):
        assert eval_on_grid(build_h_n(eps, n), Grid.for_degree(n)).real.min() >= -1e-12


def test_H_basic_properties():
    for n in (16, 64, 512):
        H = build_H_n(0.8, n)
        assert H.coeffs[0] == 2.0
        assert H.degree() <= n - 2
        assert eval_on_grid(H, Grid.for_degree(n)).real.min() >= -1e-12


def test_H_converges_away_from_origin():
    devs = [uniform_deviation("H", 0.8, n, 0.5) for n in (128, 256, 512)]
    assert devs[0] > devs[1] > devs[2]


def test_h_converges_away_from_origin():
    devs = [uniform_deviation("h", 0.5, n, 0.5) for n in (128, 256, 512)]
    assert devs[0] > devs[1] > devs[2]
    ratios = [b / a for a, b in zip(devs, devs[1:])]
    assert all(1 / 6 <= r <= 1.5 for r in ratios)


def test_Q_value_at_origin_and_positivity():
    Q = build_Q_n(0.8, 256)
    assert Q.coeffs[0] == 1.0
    assert Q.degree() <= 255
    assert eval_on_grid(Q, Grid(4096)).real.min() > 0


def test_Q_growth_bands():
    e = Q_estimates(0.8, 256)
    assert 0.1 <= e["re_at_zero_scaled"] <= 10
    assert 0.1 <= e["re_outer"]["min"] and e["re_outer"]["max"] <= 10


def test_h_argument_scales_with_eps():
    vals = [h_estimates(eps, 1024)["arg_over_eps"] for eps in (0.2, 0.35, 0.5)]
    assert all(0.1 <= v <= 10 for v in vals)
    # |arg h| grows with eps
    args = [v * e for v, e in zip(vals, (0.2, 0.35, 0.5))]
    assert args[0] < args[1] < args[2]


@pytest.mark.parametrize("n", [256, 1024])
def test_h_real_envelope_band(n):
    assert h_estimates(0.5, n)["re_envelope"]["band"] < 25


def test_smoothed_ratio_deviation():
    assert h_estimates(0.5, 1024)["smoothed_ratio_dev_over_eps"] < 10


def test_H_estimates():
    e = H_estimates(0.8, 1024)
    assert e["odd_im_residual"] < 1e-12
    assert e["arg_margin_over_tau"] > 0
    for key in ("re_central", "abs_outer", "abs_inner"):
        assert math.isfinite(e[key]["band"])


def test_parameter_guards():
    with pytest.raises(PreconditionError):
        build_h_n(0.5, 1)
    with pytest.raises(PreconditionError):
        build_H_n(0.4, 16)
    with pytest.raises(PreconditionError):
        build_Q_n(1.0, 16)
