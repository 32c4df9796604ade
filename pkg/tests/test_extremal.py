import math

import numpy as np
import pytest

from opuc_lab.errors import PreconditionError
from opuc_lab.experiments import three_path_check
from opuc_lab.extremal import (_fr_roots, assemble_global_weight, build_large_deviation, build_small_deviation,
                               clip_weight, decop_splice_check, fejer_riesz, large_interval, small_interval,
                               weight_from_polynomial)
from opuc_lab.kernels import build_h_n, smoothed_real_series
from opuc_lab.opuc import MeasureSpec, localization_bound, orthonormal_polynomial, roots
from opuc_lab.trig import ComplexPoly, Grid, TrigSeries, eval_on_grid


def trig(c0, *pos):
    """Real trigonometric polynomial c0 + sum_j (c_j e^{ij t} + conj)."""
    J = len(pos)
    c = np.zeros(2 * J + 1, dtype=complex)
    c[J] = c0
    for j, v in enumerate(pos, start=1):
        c[J + j] = v
        c[J - j] = np.conj(v)
    return TrigSeries(c)


@pytest.fixture(scope="module")
def small16():
    return build_small_deviation(0.5, 16, splice_tail=4)


@pytest.fixture(scope="module")
def small64():
    return build_small_deviation(0.5, 64)


@pytest.fixture(scope="module")
def large64():
    return build_large_deviation(0.8, 64)


# --- spectral factorization ------------------------------------------------------------


def test_factor_of_five_plus_four_cosine():
    q = fejer_riesz(trig(5, 2), 2)
    np.testing.assert_allclose(q.coeffs, [2, 1], atol=1e-12)


def test_factor_of_constant():
    q = fejer_riesz(trig(7.0), 1)
    np.testing.assert_allclose(q.coeffs, [math.sqrt(7)], rtol=1e-15)


def test_factor_of_smoothed_real_part():
    n = 64
    t = smoothed_real_series(build_h_n(0.5, n), n)
    q = fejer_riesz(t, n)
    g = Grid(4096)
    tv = eval_on_grid(t, g).real
    assert np.max(np.abs(np.abs(eval_on_grid(q, g)) ** 2 - tv)) < 1e-9 * tv.max()
    assert np.min(np.abs(roots(q))) > 1 + 1e-9
    assert q.coeffs[0].real > 0 and q.coeffs[0].imag == 0


def test_root_reflection_path_agrees():
    t = trig(6, 2 + 1j, 0.5)
    a = fejer_riesz(t, 3)
    b = _fr_roots(t)
    np.testing.assert_allclose(a.coeffs, b.coeffs, atol=1e-10)


def test_factorization_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        fejer_riesz(trig(1, 1), 2)  # 1 + 2 cos vanishes
    with pytest.raises(PreconditionError):
        fejer_riesz(trig(5, 2), 1)  # degree too high for n


# --- small deviation ---------------------------------------------------------------------


def test_small_degree_is_exactly_2n(small64):
    assert small64.phi.degree() == 128
    assert small64.diagnostics["degree_phi"] == 128


def test_small_invariants(small64):
    d = small64.diagnostics
    assert d["zeros_in_disk"] == 0
    assert d["min_root_modulus_phi_star"] > 1
    assert d["normalization_residual"] < 1e-8
    assert d["factorization_residual"] < 1e-8
    assert d["central_factor_residual"] < 1e-8
    assert d["xi_modulus_residual"] < 1e-10
    assert abs(d["q_at_one"][1]) < 1e-12
    assert d["mean_re_F"] == pytest.approx(1.0, abs=1e-12)
    assert small64.weight.min > 0
    assert small64.weight.total_mass == pytest.approx(1.0, abs=1e-8)
    assert small64.value_at_one == pytest.approx(abs(small64.phi(1.0)), rel=1e-12)


def test_small_weight_uniformly_bounded():
    rep = build_small_deviation(0.5, 256)
    assert rep.deviation_stats["sigma_band"] < 100


def test_odd_n_rejected():
    with pytest.raises(PreconditionError):
        build_small_deviation(0.5, 63)
    with pytest.raises(PreconditionError):
        build_large_deviation(0.8, 33)


def test_interval_half_widths():
    assert small_interval(0.5) == pytest.approx(0.0625)
    assert large_interval(0.8) == pytest.approx(0.1 * 0.2 ** 2.5)


# --- large deviation ---------------------------------------------------------------------


def test_large_invariants(large64):
    d = large64.diagnostics
    assert d["normalization_residual"] < 1e-8
    assert d["factorization_residual"] < 1e-8
    assert d["xi_modulus_residual"] < 1e-10
    assert d["zeros_in_disk"] == 0
    assert large64.phi.degree() == 128
    assert d["beta_sq"] > 0 and math.isfinite(d["beta_sq_tau3"])
    band = large64.deviation_stats["upsilon_sigma_on_interval"]
    assert 0 < band["min"] <= band["max"] < math.inf


def test_large_beta_band_reported_across_n():
    vals = [build_large_deviation(0.8, n).diagnostics["beta_sq"] for n in (32, 64, 128)]
    assert all(0 < v < 0.2 ** -3 * 100 for v in vals)


# --- clipping -----------------------------------------------------------------------------


def test_clip_of_constant_is_one():
    g = Grid(64)
    w = clip_weight(MeasureSpec(np.full(64, 3.0), g), 0.5)
    assert np.all(w.samples == 1.0)


def test_clipped_shape(small64):
    w1 = small64.clipped.samples
    inside = np.abs(small64.weight.grid.theta) <= small64.interval
    assert np.all(w1[~inside] == 1.0)
    assert np.all(w1 >= 1.0) and w1[inside].min() == 1.0
    ratio = small64.weight.samples[inside] / small64.weight.samples[inside].min()
    np.testing.assert_allclose(w1[inside], ratio, rtol=1e-15)


def test_deviation_constant_is_reported(small64):
    c = (small64.deviation_stats["clipped"]["max"] - 1) / 0.5
    assert math.isfinite(c) and c >= 0


def test_localization_transfer_lower_bound(small64):
    sig = small64.weight
    g = sig.grid
    inside = np.abs(g.theta) <= small64.interval
    scaled = sig.scaled(1 / sig.samples[inside].min())
    n = 16
    r = localization_bound(scaled, small64.clipped, small64.interval, n)
    v_clip = abs(eval_on_grid(orthonormal_polynomial(small64.clipped, n), g)[g.index_of(0.0)])
    v_sig = abs(eval_on_grid(orthonormal_polynomial(scaled, n), g)[g.index_of(0.0)])
    assert v_clip >= v_sig / r.rhs


# --- splice check ----------------------------------------------------------------------------


def test_splice_trivial_case():
    g = Grid(64)
    w = weight_from_polynomial(ComplexPoly([1.0]), np.ones(64, dtype=complex), 0, g)
    np.testing.assert_allclose(w, 1 / (2 * np.pi), rtol=1e-15)
    sc = decop_splice_check(ComplexPoly([1.0]), lambda gr: np.ones(gr.N, dtype=complex), 0, tail=3, grid=g)
    assert max(sc["tail_residuals"]) < 1e-14 and sc["consistency"] < 1e-14


def test_splice_on_small_construction(small16):
    sc = small16.diagnostics["splice"]
    assert sc["head_residual"] < 1e-6
    assert sc["poly_residual"] < 1e-6
    assert max(sc["tail_residuals"]) < 1e-6
    assert small16.consistency < 1e-6


def test_splice_rejects_bad_normalization(small16):
    with pytest.raises(PreconditionError):
        decop_splice_check(small16.phi * 1.01, small16.F_values, 32)


def test_three_paths_agree():
    rep = build_small_deviation(0.5, 16)
    out = three_path_check(rep)
    assert out["levinson"] < 1e-6 and out["fixed_point"] < 1e-6


# --- global weight ------------------------------------------------------------------------------


def test_single_arc_reduces_to_clipped():
    g = Grid(4096)
    w, rows = assemble_global_weight("small", 0.5, [(0.0, 1.0)], [32], grid=g)
    ref = build_small_deviation(0.5, 16, grid=g).clipped
    np.testing.assert_array_equal(w.samples, ref.samples)
    assert rows[0]["holds"]


def test_two_arcs():
    g = Grid(4096)
    w, rows = assemble_global_weight("small", 0.5, [(-1.5, 0.8), (1.5, 0.8)], [32, 64], grid=g)
    assert w.min >= 1.0
    assert all(r["holds"] for r in rows)
    for r in rows:
        assert r["value_global"] >= r["transfer_constant"] * r["value_single"]


def test_overlapping_arcs_rejected():
    with pytest.raises(PreconditionError):
        assemble_global_weight("small", 0.5, [(0.0, 1.0), (0.3, 1.0)], [32, 32])
