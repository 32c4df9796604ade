"""Band projections and the fixed-point route to monic orthogonal polynomials.

The monic ``Phi_n`` of ``w`` satisfies ``Phi_n = z^n + P_[0,n-1]((1 - kappa w) Phi_n)``
for any real ``kappa``; with ``0 < kappa w <= 1`` the right side is a
contraction and plain iteration converges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, PreconditionError
from .opuc import MeasureSpec, monic_polynomial
from .trig import ComplexPoly, TrigSeries, lp_norm, power_series_from_samples, samples_from_power_series


@dataclass(frozen=True)
class ProjectionSpec:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 > self.n2:
            raise PreconditionError(f"empty band [{self.n1}, {self.n2}]")


def project(f: TrigSeries, p: ProjectionSpec) -> TrigSeries:
    """Keep modes ``n1..n2`` of ``f``."""
    J = f.J
    j = np.arange(-J, J + 1)
    keep = (j >= p.n1) & (j <= p.n2)
    return TrigSeries(np.where(keep, f.coeffs, 0))


def _band_of_samples(values: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of modes ``0..n-1`` of grid samples."""
    return power_series_from_samples(values, n)


@dataclass
class FixedPointResult:
    poly: ComplexPoly
    iterations: int
    trace: list[float] = field(repr=False)
    residual: float
    kappa: float
    contractive: bool
    contraction_bound: float  # max |1 - kappa w|
    observed_rate: float

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "kappa": self.kappa,
            "contractive": self.contractive,
            "contraction_bound": self.contraction_bound,
            "observed_rate": self.observed_rate,
        }


def _observed_rate(trace: list[float]) -> float:
    """Median ratio of successive changes over the geometric stretch of the trace."""
    t = np.asarray(trace)
    t = t[t > 1e-14]
    if t.size < 3:
        return 0.0
    r = t[1:] / t[:-1]
    return float(np.median(r[len(r) // 2:]))


def monic_fixed_point(w: MeasureSpec, n: int, kappa: float | None = None,
                      tol: float = 1e-12, max_iter: int = 20000) -> FixedPointResult:
    """Iterate ``f <- z^n + P_[0,n-1]((1 - kappa w) f)`` from ``z^n``.

    Stops when the largest coefficient change falls below ``tol``.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    ws = w.samples
    N = w.grid.N
    if N < 2 * n + 2:
        raise PreconditionError(f"grid N={N} too small for degree {n}")
    if kappa is None:
        kappa = 1.0 / float(ws.max())
    mult = 1.0 - kappa * ws
    bound = float(np.max(np.abs(mult)))
    contractive = 0 < kappa * ws.max() <= 1 and bound < 1
    lower = np.zeros(n, dtype=np.complex128)
    full = np.zeros(n + 1, dtype=np.complex128)
    full[n] = 1.0
    trace: list[float] = []
    it = 0
    while True:
        full[:n] = lower
        vals = samples_from_power_series(full, N)
        new = _band_of_samples(mult * vals, n)
        change = float(np.max(np.abs(new - lower))) if n else 0.0
        lower = new
        it += 1
        trace.append(change)
        if change < tol:
            break
        if it >= max_iter:
            raise ConvergenceError(
                f"fixed point not reached in {max_iter} iterations "
                f"(last change {change:.3e}, max|1 - kappa w| = {bound:.6f})", trace)
    full[:n] = lower
    poly = ComplexPoly(full.copy())
    resid = float(np.max(np.abs(_band_of_samples(ws * samples_from_power_series(full, N), n)), initial=0.0))
    return FixedPointResult(poly, it, trace, resid, float(kappa), bool(contractive), bound,
                            _observed_rate(trace))


def l2_contraction_certificate(w: MeasureSpec, n: int, kappa: float | None = None,
                               trials: int = 50, seed: int = 0) -> dict:
    """Largest observed ``||P_[0,n-1]((1 - kappa w) f)||_2`` over random unit ``f`` of degree ``< n``."""
    ws = w.samples
    N = w.grid.N
    if kappa is None:
        kappa = 1.0 / float(ws.max())
    mult = 1.0 - kappa * ws
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c /= math.sqrt(2 * np.pi) * np.linalg.norm(c)  # unit L2(d theta)
        out = _band_of_samples(mult * samples_from_power_series(c, N), n)
        worst = max(worst, math.sqrt(2 * np.pi) * float(np.linalg.norm(out)))
    bound = float(np.max(np.abs(mult)))
    return {"max_amplification": worst, "bound": bound, "holds": worst <= bound + 1e-10}


# --- projection norm bounds and the admissible exponent ---------------------


def riesz_band_bound(p: float) -> float:
    """Bound ``2 / sin(pi / p)`` on the L^p norm of a band projection."""
    return 2.0 / math.sin(math.pi / p)


def band_projection_bound(p: float) -> float:
    """Best of the direct bound and its interpolation against ``||P||_2 = 1``.

    For ``p > 2`` and any ``q > p``, interpolation gives
    ``||P||_p <= (2 / sin(pi / q))^t`` with ``1/p = (1 - t)/2 + t/q``.
    """
    if p < 2:
        return band_projection_bound(p / (p - 1))
    if p == 2:
        return 1.0
    best = riesz_band_bound(p)
    for q in np.geomspace(p * (1 + 1e-6), max(64.0, 8 * p), 400):
        t = (0.5 - 1.0 / p) / (0.5 - 1.0 / q)
        best = min(best, riesz_band_bound(q) ** t)
    return best


def max_contraction_exponent(T: float) -> float:
    """Largest ``p >= 2`` with ``M(p) (1 - 1/T) < 1``, ``M`` from :func:`band_projection_bound`.

    On ``1 <= w <= T`` with ``kappa = 1/T`` the fixed-point map contracts in
    ``L^p`` for every smaller ``p``.
    """
    if T <= 1:
        return math.inf
    q = 1.0 - 1.0 / T
    g = lambda p: band_projection_bound(p) * q - 1.0
    lo, hi = 2.0, 4.0
    while g(hi) < 0:
        lo, hi = hi, 2 * hi
        if hi > 1e8:
            return math.inf
    return brentq(g, lo, hi, xtol=1e-10)


def p_norm_profile(w: MeasureSpec, n_list, p: float) -> list[dict]:
    """``||Phi_n||_p``, ``||Phi_n||_inf`` and the Nikolskii envelope per ``n``.

    The envelope is ``(n + 1)^{1/p} ||Phi_n||_{L^p(d theta / 2 pi)}``; the ratio of
    the sup norm to it is reported as the fitted constant.
    """
    rows = []
    for n in n_list:
        Phi = monic_polynomial(w, n)
        vals = samples_from_power_series(Phi.coeffs, w.grid.N)
        lp = lp_norm(vals, p)
        sup = float(np.max(np.abs(vals)))
        normalized = lp / (2 * np.pi) ** (1.0 / p)
        env = (n + 1) ** (1.0 / p) * normalized
        rows.append({"n": int(n), "p": p, "lp_norm": lp, "sup_norm": sup,
                     "nikolskii_envelope": env, "fitted_constant": sup / env})
    return rows
