"""Fejer/Jackson kernels, fractional powers of ``1 - z`` and the smoothed
auxiliary polynomials ``h_n``, ``H_n`` and ``Q_n``.

Kernels act on Fourier coefficients as multipliers: convolving a series with
a unit-mass kernel scales ``c_j`` by ``m[|j|]``.  No quadrature is involved,
so every auxiliary polynomial below is exact up to the rounding of the
binomial recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentSeriesError, PreconditionError
from .trig import ComplexPoly, Grid, TrigSeries, eval_on_grid, reciprocal_power_series


@dataclass(frozen=True, eq=False)
class MultiplierSeq:
    """Fourier multipliers ``m[|j|]`` of a unit-mass kernel of order ``order``."""

    m: np.ndarray
    order: int
    kind: str = "fejer"
    normalizer: float = 1.0  # c_n for Jackson, 1 for Fejer

    @property
    def support(self) -> int:
        return self.m.size - 1

    def __getitem__(self, j):
        j = abs(int(j))
        return float(self.m[j]) if j < self.m.size else 0.0

    def apply(self, s: TrigSeries) -> TrigSeries:
        """``s * kernel`` computed in coefficient space."""
        J = min(s.J, self.support)
        js = np.abs(np.arange(-J, J + 1))
        return TrigSeries(s.truncated(J).coeffs * self.m[js])

    def apply_one_sided(self, coeffs) -> np.ndarray:
        """Multiplier action on a power series; the result has ``support + 1`` terms."""
        c = np.asarray(coeffs)
        K = min(c.size, self.m.size)
        return c[:K] * self.m[:K]

    def kernel_values(self, theta) -> np.ndarray:
        """Kernel samples ``(2 pi)^{-1} sum_j m[|j|] e^{ij theta}``."""
        theta = np.asarray(theta, dtype=float)
        j = np.arange(1, self.m.size)
        return (1 + 2 * np.cos(np.outer(theta, j)) @ self.m[1:]) / (2 * np.pi)


def fejer_multipliers(n: int) -> MultiplierSeq:
    if n < 1:
        raise PreconditionError(f"Fejer kernel order must be >= 1, got {n}")
    m = 1.0 - np.arange(n) / n
    m.setflags(write=False)
    return MultiplierSeq(m, n, "fejer", 1.0)


def jackson_multipliers(n: int) -> MultiplierSeq:
    """Multipliers of ``c_n F_n^2`` from the self-convolution of the Fejer triangle."""
    if n < 1:
        raise PreconditionError(f"Jackson kernel order must be >= 1, got {n}")
    tri = 1.0 - np.abs(np.arange(-(n - 1), n)) / n
    auto = np.convolve(tri, tri)[2 * n - 2:]
    m = auto / auto[0]
    m.setflags(write=False)
    c_n = 2 * np.pi / auto[0]
    return MultiplierSeq(m, n, "jackson", float(c_n))


def fejer_kernel(n: int, theta) -> np.ndarray:
    """Closed form ``(2 pi n)^{-1} (sin(n theta/2) / sin(theta/2))^2``."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta / 2)
    out = np.empty_like(theta)
    small = np.abs(s) < 1e-12
    out[~small] = (np.sin(n * theta[~small] / 2) / s[~small]) ** 2
    out[small] = n * n
    return out / (2 * np.pi * n)


@dataclass(frozen=True, eq=False)
class FracPowerSeries:
    """Taylor coefficients ``b_k`` of ``(1 - z)^a``."""

    a: float
    coeffs: np.ndarray

    def __call__(self, theta) -> np.ndarray:
        """Partial sum at ``z = exp(i theta)``."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        acc = np.zeros_like(z)
        for b in self.coeffs[::-1]:
            acc = acc * z + b
        return acc

    def as_poly(self) -> ComplexPoly:
        return ComplexPoly(self.coeffs)


def frac_power_series(a: float, K: int) -> FracPowerSeries:
    """First ``K`` coefficients via ``b_{k+1} = b_k (k - a) / (k + 1)``."""
    if a <= -1:
        raise DivergentSeriesError(f"(1 - z)^a coefficients are not summable for a={a}")
    if K < 1:
        raise PreconditionError("need at least one coefficient")
    k = np.arange(K - 1, dtype=float)
    b = np.empty(K)
    b[0] = 1.0
    b[1:] = np.cumprod((k - a) / (k + 1))
    b.setflags(write=False)
    return FracPowerSeries(float(a), b)


def frac_power_closed_form(a: float, theta) -> np.ndarray:
    """Principal branch of ``(1 - e^{i theta})^a`` written through
    ``|2 sin(theta/2)|^a exp(-i a arctan(cot(theta/2)))``; undefined at 0."""
    theta = np.asarray(theta, dtype=float)
    nu = np.arctan2(np.cos(theta / 2), np.sin(theta / 2))
    nu = np.where(nu > np.pi / 2, nu - np.pi, nu)
    nu = np.where(nu < -np.pi / 2, nu + np.pi, nu)
    return np.abs(2 * np.sin(theta / 2)) ** a * np.exp(-1j * a * nu)


def build_h_n(eps: float, n: int) -> ComplexPoly:
    """``2 (1 - e^{i theta})^eps`` smoothed by the Fejer kernel of order ``n``."""
    if n < 2:
        raise PreconditionError(f"h_n needs n >= 2, got {n}")
    if not 0 < eps <= 1:
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    b = frac_power_series(eps, n).coeffs
    return ComplexPoly(2 * fejer_multipliers(n).apply_one_sided(b))


def build_H_n(alpha: float, n: int) -> ComplexPoly:
    """``2 (1 - e^{i theta})^alpha`` smoothed by the Jackson kernel of order ``n // 2``."""
    if n < 4:
        raise PreconditionError(f"H_n needs n >= 4, got {n}")
    if not 0.5 < alpha < 1:
        raise PreconditionError(f"alpha must lie in (1/2, 1), got {alpha}")
    jk = jackson_multipliers(n // 2)
    b = frac_power_series(alpha, jk.support + 1).coeffs
    return ComplexPoly(2 * jk.apply_one_sided(b))


def build_Q_n(alpha: float, n: int) -> ComplexPoly:
    """``(1 - z)^{-alpha/2}`` smoothed by the Fejer kernel of order ``n``."""
    if n < 2:
        raise PreconditionError(f"Q_n needs n >= 2, got {n}")
    if not 0.5 < alpha < 1:
        raise PreconditionError(f"alpha must lie in (1/2, 1), got {alpha}")
    b = frac_power_series(-alpha / 2, n).coeffs
    return ComplexPoly(fejer_multipliers(n).apply_one_sided(b))


def smoothed_real_part(h: ComplexPoly, n: int, grid: Grid):
    """Samples of ``Re(2/h)`` and of its Fejer smoothing ``Re(2/h) * F_n``.

    ``2/h`` is expanded as a power series (``h`` is zero-free in the closed
    disk), so the smoothing is exact multiplier arithmetic on its first
    ``n`` coefficients.
    """
    hv = eval_on_grid(h, grid)
    re_f = (2.0 / hv).real
    t = eval_on_grid(smoothed_real_series(h, n), grid).real
    return re_f, t


def smoothed_real_series(h: ComplexPoly, n: int) -> TrigSeries:
    """Series of ``Re(2/h) * F_n``, a real trigonometric polynomial of degree ``n - 1``."""
    f = reciprocal_power_series(h, n) * 2.0
    re = TrigSeries.real_part_of_power_series(f)
    return fejer_multipliers(n).apply(re)


# --- two-sided envelope diagnostics -------------------------------------------


def ratio_band(ratio) -> dict:
    """Smallest ``c >= 1`` with ``ratio`` inside ``[1/c, c]``, plus the raw range."""
    r = np.asarray(ratio, dtype=float)
    lo, hi = float(r.min()), float(r.max())
    c = max(hi, 1.0 / lo) if lo > 0 else math.inf
    return {"min": lo, "max": hi, "band": c}


def _grid_for(n: int, grid: Grid | None) -> Grid:
    return grid if grid is not None else Grid.for_degree(n)


def h_estimates(eps: float, n: int, grid: Grid | None = None) -> dict:
    """Argument, real-part and modulus envelopes of ``h_n`` plus the
    smoothed-ratio deviation of ``Re(2/h_n)`` under the Fejer kernel."""
    g = _grid_for(n, grid)
    h = build_h_n(eps, n)
    hv = eval_on_grid(h, g)
    th = np.abs(g.theta)
    env = n ** (-eps) + th ** eps
    out = {
        "eps": eps,
        "n": n,
        "min_re_h": float(hv.real.min()),
        "max_abs_arg": float(np.max(np.abs(np.angle(hv)))),
        "re_envelope": ratio_band(hv.real / env),
        "abs_envelope": ratio_band(np.abs(hv) / env),
    }
    out["arg_over_eps"] = out["max_abs_arg"] / eps
    re_f, t = smoothed_real_part(h, n, g)
    dev = np.abs(t / re_f - 1.0)
    out["smoothed_ratio_dev"] = float(dev.max())
    out["smoothed_ratio_dev_over_eps"] = float(dev.max() / eps)
    return out


def H_estimates(alpha: float, n: int, grid: Grid | None = None) -> dict:
    """Envelopes of the Jackson-smoothed ``H_n`` near and away from 0."""
    g = _grid_for(n, grid)
    tau = 1.0 - alpha
    H = build_H_n(alpha, n)
    Hv = eval_on_grid(H, g)
    th = np.abs(g.theta)
    mirror = g.mirror()
    central = th < tau ** 2
    outer = th > 1.0 / n
    inner = th < 1.0 / n
    max_arg = float(np.max(np.abs(np.angle(Hv))))
    return {
        "alpha": alpha,
        "tau": tau,
        "n": n,
        "min_re_H": float(Hv.real.min()),
        "odd_im_residual": float(np.max(np.abs(Hv.imag + Hv.imag[mirror]))),
        "re_central": ratio_band(Hv.real[central] / (tau * (n ** -alpha + th[central] ** alpha))),
        "abs_outer": ratio_band(np.abs(Hv[outer]) / th[outer] ** alpha),
        "abs_inner": ratio_band(np.abs(Hv[inner]) / (n ** tau * th[inner] + tau * n ** -alpha)),
        "max_abs_arg": max_arg,
        "arg_margin_over_tau": (np.pi / 2 - max_arg) / tau,
    }


def Q_estimates(alpha: float, n: int, grid: Grid | None = None) -> dict:
    """``Re Q_n`` against ``n^{alpha/2}`` at 0 and ``|theta|^{-alpha/2}`` away from it."""
    g = _grid_for(n, grid)
    Q = build_Q_n(alpha, n)
    Qv = eval_on_grid(Q, g)
    th = np.abs(g.theta)
    outer = th > 1.0 / n
    return {
        "alpha": alpha,
        "n": n,
        "min_re_Q": float(Qv.real.min()),
        "re_at_zero_scaled": float(Q(1.0).real / n ** (alpha / 2)),
        "re_outer": ratio_band(Qv.real[outer] * th[outer] ** (alpha / 2)),
        "abs_outer": ratio_band(np.abs(Qv[outer]) * th[outer] ** (alpha / 2)),
    }


def uniform_deviation(kind: str, param: float, n: int, delta: float,
                      grid: Grid | None = None) -> float:
    """``max_{|theta| >= delta} |P_n - 2 (1 - e^{i theta})^param|`` for
    ``kind`` = ``"h"`` (Fejer, order n) or ``"H"`` (Jackson, order n // 2)."""
    g = _grid_for(n, grid)
    p = build_h_n(param, n) if kind == "h" else build_H_n(param, n)
    mask = np.abs(g.theta) >= delta
    target = 2 * frac_power_closed_form(param, g.theta[mask])
    return float(np.max(np.abs(eval_on_grid(p, g)[mask] - target)))
