"""Extremal weights whose orthonormal polynomials grow at ``z = 1``.

Both regimes follow one recipe.  Pick an analytic ``P`` with positive real
part and set ``F = 2 / P`` (a Caratheodory function with mean 1).  Factor the
Fejer-smoothed ``Re F`` as ``|q|^2`` with ``q`` zero-free in the closed disk,
put ``phi*_{2n} = c (q + q* + q P)`` with the star taken in degree ``2n`` and
``c`` fixing ``int |phi*|^-2 = 2 pi``, and read off the probability weight

    sigma' = 2 Re F / (pi |phi + phi* + F (phi* - phi)|^2),

whose first ``2n`` recursion coefficients are those of ``phi_{2n}`` and whose
tail coefficients are those of ``Re F d theta / 2 pi``.

Small deviation uses ``P = h_n`` and ``q`` from the factorization; large
deviation uses ``P = H_n`` and the explicit ``Q_n`` in place of ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConstructionError, PreconditionError
from .kernels import build_H_n, build_Q_n, build_h_n, smoothed_real_series
from .opuc import (MeasureSpec, localization_bound, min_root_modulus, orthonormal_polynomial,
                   verblunsky_from_measure, verblunsky_from_polynomial, zeros_inside_disk)
from .trig import (ComplexPoly, Grid, TrigSeries, default_grid_size, eval_on_grid,
                   power_series_from_samples, samples_from_power_series, star_reverse)

_MAX_FR_GRID = 1 << 22
_EIG_DEGREE = 256
_MAX_WEIGHT_GRID = 1 << 21
_MASS_TOL = 1e-10


# --- spectral factorization --------------------------------------------------


def _fr_residual(q: ComplexPoly, t: TrigSeries, g: Grid) -> tuple[float, float]:
    tv = eval_on_grid(t, g).real
    qv = eval_on_grid(q, g)
    return float(np.max(np.abs(np.abs(qv) ** 2 - tv))), float(tv.max())


def _fr_cepstral(t: TrigSeries, n: int, g0: Grid) -> ComplexPoly:
    N = g0.N
    while True:
        g = Grid(N)
        ts = eval_on_grid(t, g).real
        K = N // 2
        cep = power_series_from_samples(np.log(ts), K)
        half = cep.copy()
        half[0] = cep[0].real / 2
        vals = np.exp(samples_from_power_series(half, N))
        coeffs = power_series_from_samples(vals, K)
        head = coeffs[:n]
        tail = float(np.max(np.abs(coeffs[n:]), initial=0.0))
        if tail <= 1e-15 * float(np.max(np.abs(head))) or 2 * N > _MAX_FR_GRID:
            head = head.copy()
            head[0] = head[0].real
            return ComplexPoly(head)
        N *= 2


def _fr_roots(t: TrigSeries) -> ComplexPoly:
    J = t.J
    c = t.coeffs
    r = np.roots(c[::-1])  # z^J t(z), ascending coefficients c_{-J}..c_J
    out = r[np.abs(r) > 1]
    if out.size != J:
        raise ConstructionError(f"root reflection found {out.size} exterior roots, expected {J}")
    q = np.poly(out)[::-1]
    g = Grid.for_degree(max(J, 1))
    qv = eval_on_grid(ComplexPoly(q), g)
    tv = eval_on_grid(t, g).real
    scale = math.sqrt(float(np.sum(tv)) / float(np.sum(np.abs(qv) ** 2)))
    q = q * scale
    q = q * (abs(q[0]) / q[0])
    q[0] = q[0].real
    return ComplexPoly(q)


def fejer_riesz(t: TrigSeries, n: int, tol: float = 1e-9, grid: Grid | None = None) -> ComplexPoly:
    """``q`` of degree ``< n`` with ``|q|^2 = t`` on the circle, zero-free in the
    closed disk and ``q(0) > 0``.

    Uses the cepstrum of ``log t``; falls back to reflecting the roots of
    ``z^J t(z)`` when the cepstral residual misses ``tol * max t``.
    """
    if t.J > n - 1:
        raise PreconditionError(f"degree {t.J} exceeds n - 1 = {n - 1}")
    scale = float(np.max(np.abs(t.coeffs)))
    if not t.is_real(1e-12 * max(scale, 1e-300)):
        raise PreconditionError("t is not a real trigonometric polynomial")
    g = grid if grid is not None else Grid(default_grid_size(n))
    tv = eval_on_grid(t, g).real
    if tv.min() <= 1e-10 * tv.max():
        raise PreconditionError(f"t is not strictly positive on the grid (min {tv.min():.3e})")
    if t.J == 0:
        return ComplexPoly([math.sqrt(tv[0])])
    q = _fr_cepstral(t, n, g)
    res, top = _fr_residual(q, t, g)
    if res >= tol * top:
        q = _fr_roots(t)
        res, top = _fr_residual(q, t, g)
        if res >= tol * top:
            raise ConstructionError(f"spectral factorization residual {res:.3e} exceeds {tol * top:.3e}")
    return q


# --- the weight formula ------------------------------------------------------


def weight_from_polynomial(phi: ComplexPoly, F: np.ndarray, degree: int, grid: Grid) -> np.ndarray:
    """Probability density ``2 Re F / (pi |phi + phi* + F (phi* - phi)|^2)`` on ``grid``."""
    p = eval_on_grid(phi, grid)
    ps = eval_on_grid(star_reverse(phi, degree), grid)
    return 2 * F.real / (np.pi * np.abs(p + ps + F * (ps - p)) ** 2)


def _factored_weight(norm_const: float, q: np.ndarray, P: np.ndarray, F: np.ndarray, xi: np.ndarray):
    """Inverse weight as ``(pi c^2 / 2) * (|q|^2 / Re F) * B * C``."""
    upsilon = np.pi * norm_const ** 2 / 2
    A = np.abs(q) ** 2 / F.real
    denom = 2 + np.conj(P) * (1 - F)
    B = np.abs(denom) ** 2
    C = np.abs(xi + (2 + P * (1 + F)) / denom) ** 2
    return upsilon, A, B, C


def central_factor(P: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """``|4 + P + xi (conj P + 2 (1 - conj P / P))|^2``, the product ``B C`` without division."""
    Pb = np.conj(P)
    return np.abs(4 + P + xi * (Pb + 2 * (1 - Pb / P))) ** 2


# --- reports -----------------------------------------------------------------


def _stats(x: np.ndarray) -> dict:
    return {"min": float(x.min()), "max": float(x.max())}


@dataclass(eq=False)
class ConstructionReport:
    regime: str
    params: dict
    alpha_or_beta_n: float
    value_at_one: float
    weight: MeasureSpec  # probability density from the weight formula
    clipped: MeasureSpec
    deviation_stats: dict
    interval: float
    consistency: float | None
    phi: ComplexPoly
    phi_star: ComplexPoly
    q: ComplexPoly
    P: ComplexPoly
    mass_factor: float  # sigma' * mass_factor has total mass 2 pi
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.params["n"])

    @property
    def degree(self) -> int:
        return 2 * self.n

    def F_values(self, grid: Grid) -> np.ndarray:
        return 2.0 / eval_on_grid(self.P, grid)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "params": dict(self.params),
            "alpha_or_beta_n": self.alpha_or_beta_n,
            "value_at_one": self.value_at_one,
            "interval_half_width": self.interval,
            "mass_factor": self.mass_factor,
            "grid_N": self.weight.grid.N,
            "consistency": self.consistency,
            "deviation_stats": self.deviation_stats,
            "diagnostics": self.diagnostics,
        }


def small_interval(eps: float) -> float:
    """Half-width ``eps^(2/eps)``, so that ``|theta|^eps <= eps^2`` on the interval."""
    return eps ** (2.0 / eps)


def large_interval(alpha: float, scale: float = 0.1) -> float:
    """Half-width ``scale * tau^(2/alpha)`` with ``tau = 1 - alpha``."""
    return scale * (1.0 - alpha) ** (2.0 / alpha)


def clip_weight(sigma: MeasureSpec, half_width: float) -> MeasureSpec:
    """``sigma / min_I sigma`` on ``I = [-half_width, half_width]``, 1 elsewhere."""
    w = sigma.samples
    if w.min() <= 0:
        raise PreconditionError("clipping needs a strictly positive weight")
    inside = np.abs(sigma.grid.theta) <= half_width
    out = np.ones_like(w)
    out[inside] = w[inside] / w[inside].min()
    return MeasureSpec(out, sigma.grid, f"clipped({sigma.label}, {half_width!r})")


def _check_n(n: int, minimum: int) -> None:
    if int(n) != n or n % 2:
        raise PreconditionError(f"n must be even, got {n}")
    if n < minimum:
        raise PreconditionError(f"n must be at least {minimum}, got {n}")


def _normalize_and_mass(S: ComplexPoly, P: ComplexPoly, deg: int, g: Grid) -> tuple[float, float]:
    """Normalizing constant of ``S`` on ``g`` and ``|mass - 1|`` of the resulting weight."""
    Pv = eval_on_grid(P, g)
    if np.min(np.abs(Pv)) <= 1e-10:
        raise ConstructionError("auxiliary polynomial vanishes on the grid")
    c = math.sqrt(float(np.mean(np.abs(eval_on_grid(S, g)) ** -2)))
    sigma = weight_from_polynomial(star_reverse(S * c, deg), 2.0 / Pv, deg, g)
    return c, abs(2 * np.pi * float(np.mean(sigma)) - 1.0)


def _resolve_grid(S: ComplexPoly, P: ComplexPoly, deg: int) -> tuple[Grid, float, float]:
    """Double the grid until the weight has unit mass and the constant has settled.

    The weight has spikes narrower than ``1/deg`` where the phase factor
    meets the ratio term, so a fixed oversampling does not resolve it.
    """
    g = Grid.for_degree(deg)
    c, miss = _normalize_and_mass(S, P, deg, g)
    while g.N < _MAX_WEIGHT_GRID:
        g2 = g.doubled()
        c2, miss2 = _normalize_and_mass(S, P, deg, g2)
        settled = abs(c2 / c - 1) <= _MASS_TOL and miss2 <= _MASS_TOL
        g, c, miss = g2, c2, miss2
        if settled:
            break
    return g, c, miss


def _assemble(regime: str, params: dict, q: ComplexPoly, P: ComplexPoly, n: int,
              half_width: float, grid: Grid | None, splice_tail: int | None) -> ConstructionReport:
    deg = 2 * n
    qstar = star_reverse(q, deg)
    S = q + qstar + q * P
    g, c, mass_residual = (_resolve_grid(S, P, deg) if grid is None else
                           (grid,) + _normalize_and_mass(S, P, deg, grid))
    qv = eval_on_grid(q, g)
    Pv = eval_on_grid(P, g)
    F = 2.0 / Pv
    phi_star = S * c
    phi = star_reverse(phi_star, deg)
    inside = zeros_inside_disk(phi_star)
    if inside:
        raise ConstructionError(f"phi*_{deg} has {inside} zeros in the disk")
    diag: dict = {"zeros_in_disk": inside}
    if deg <= _EIG_DEGREE:
        diag["min_root_modulus_phi_star"] = min_root_modulus(phi_star)
    diag["degree_phi"] = int(phi.degree())
    diag["leading_coeff_phi"] = float(phi.coeffs[deg].real)
    diag["grid_N"] = g.N
    diag["mass_residual"] = mass_residual
    diag["normalization_residual"] = abs(2 * np.pi * float(np.mean(np.abs(eval_on_grid(phi_star, g)) ** -2)) - 2 * np.pi)

    sigma = weight_from_polynomial(phi, F, deg, g)
    if sigma.min() <= 0:
        raise ConstructionError("weight formula produced a non-positive value")
    xi = eval_on_grid(qstar, g) / qv
    ups, A, B, C = _factored_weight(c, qv, Pv, F, xi)
    sigma_fact = 1.0 / (ups * A * B * C)
    BC = central_factor(Pv, xi)
    diag["factorization_residual"] = float(np.max(np.abs(sigma_fact / sigma - 1)))
    diag["central_factor_residual"] = float(np.max(np.abs(B * C / BC - 1)))
    diag["xi_modulus_residual"] = float(np.max(np.abs(np.abs(xi) - 1)))
    diag["upsilon"] = float(ups)
    q1 = complex(q(1.0))
    diag["q_at_one"] = [q1.real, q1.imag]
    diag["mean_re_F"] = float(np.mean(F.real))

    mass = 2 * np.pi * float(np.mean(sigma))
    factor = 2 * np.pi / mass
    sig2pi = sigma * factor
    weight = MeasureSpec(sigma, g, f"{regime} {params}")
    clipped = clip_weight(weight, half_width)
    central = np.abs(g.theta) <= half_width
    omega = float(np.mean(sig2pi[central]))
    stats = {
        "sigma": _stats(sig2pi),
        "sigma_band": float(sig2pi.max() / sig2pi.min()),
        "clipped": _stats(clipped.samples),
        "central_sigma": _stats(sig2pi[central]),
        "central_points": int(central.sum()),
        "central_deviation": float(np.max(np.abs(sig2pi[central] / omega - 1))),
        "T_achieved": float(clipped.samples.max() / clipped.samples.min()),
        "A": _stats(A),
        "central_factor": _stats(BC),
        "central_factor_on_interval": _stats(BC[central]),
        "upsilon_sigma_on_interval": _stats(ups * sigma[central]),
    }
    value = abs(complex(phi_star(1.0)))
    report = ConstructionReport(regime, params, float(c), float(value), weight, clipped, stats,
                                float(half_width), None, phi, phi_star, q, P, float(factor), diag)
    if splice_tail is not None:
        sc = decop_splice_check(phi, lambda gr: 2.0 / eval_on_grid(P, gr), deg, tail=splice_tail, grid=g)
        report.consistency = sc["consistency"]
        report.diagnostics["splice"] = sc
    return report


def build_small_deviation(eps: float, n: int, grid: Grid | None = None,
                          splice_tail: int | None = None) -> ConstructionReport:
    """Small-deviation construction of degree ``2n`` from ``h_n``."""
    _check_n(n, 8)
    if not 0 < eps <= 1:
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    h = build_h_n(eps, n)
    t = smoothed_real_series(h, n)
    q = fejer_riesz(t, n)
    return _assemble("small-deviation", {"eps": eps, "n": n}, q, h, n, small_interval(eps),
                     grid, splice_tail)


def build_large_deviation(alpha: float, n: int, grid: Grid | None = None,
                          splice_tail: int | None = None, interval_scale: float = 0.1) -> ConstructionReport:
    """Large-deviation construction of degree ``2n`` from ``H_n`` and ``Q_n``."""
    _check_n(n, 16)
    if not 0.5 < alpha < 1:
        raise PreconditionError(f"alpha must lie in (1/2, 1), got {alpha}")
    H = build_H_n(alpha, n)
    Q = build_Q_n(alpha, n)
    tau = 1.0 - alpha
    rep = _assemble("large-deviation", {"alpha": alpha, "tau": tau, "n": n,
                                        "interval_scale": interval_scale},
                    Q, H, n, large_interval(alpha, interval_scale), grid, splice_tail)
    rep.diagnostics["beta_sq"] = rep.alpha_or_beta_n ** 2
    rep.diagnostics["beta_sq_tau3"] = rep.alpha_or_beta_n ** 2 * tau ** 3
    rep.diagnostics["tau_pow_minus4"] = tau ** -4
    return rep


def build(regime: str, param: float, n: int, **kw) -> ConstructionReport:
    if regime in ("small", "small-deviation"):
        return build_small_deviation(param, n, **kw)
    if regime in ("large", "large-deviation"):
        return build_large_deviation(param, n, **kw)
    raise PreconditionError(f"unknown regime {regime!r}")


# --- splice consistency --------------------------------------------------------


def decop_splice_check(phi: ComplexPoly, F_eval: Callable[[Grid], np.ndarray], degree: int,
                       tail: int = 4, grid: Grid | None = None) -> dict:
    """Compare the recursion coefficients of the weight built from ``phi`` and
    ``F`` with the concatenation of those of ``phi`` and of ``Re F / 2 pi``.

    Also recomputes the degree-``degree`` orthonormal polynomial of the weight.
    """
    g = grid if grid is not None else Grid.for_degree(degree + tail)
    phi_star = star_reverse(phi, degree)
    ps = eval_on_grid(phi_star, g)
    if degree and zeros_inside_disk(phi_star):
        raise PreconditionError("phi* must be zero-free in the closed disk")
    norm = 2 * np.pi * float(np.mean(np.abs(ps) ** -2))
    if abs(norm - 2 * np.pi) > 1e-8:
        raise PreconditionError(f"int |phi*|^-2 = {norm!r}, expected 2 pi")
    F = np.asarray(F_eval(g))
    if F.real.min() <= 0 or abs(float(np.mean(F.real)) - 1) > 1e-8:
        raise PreconditionError("Re F must be positive with mean 1")
    sigma = MeasureSpec(weight_from_polynomial(phi, F, degree, g), g, "spliced")
    gam_sigma = verblunsky_from_measure(sigma, degree + tail).gamma
    gam_head = verblunsky_from_polynomial(phi, degree).gamma if degree else np.zeros(0)
    ref = MeasureSpec(F.real / (2 * np.pi), g, "Re F")
    gam_tail = verblunsky_from_measure(ref, tail).gamma
    head_res = float(np.max(np.abs(gam_sigma[:degree] - gam_head), initial=0.0))
    tail_res = np.abs(gam_sigma[degree:] - gam_tail)
    phi_re = orthonormal_polynomial(sigma, degree)
    poly_res = float(np.max(np.abs(phi_re.coeffs - phi.padded(degree + 1)[: degree + 1])))
    return {
        "degree": degree,
        "mass": sigma.total_mass,
        "head_residual": head_res,
        "tail_residuals": [float(x) for x in tail_res],
        "poly_residual": poly_res,
        "consistency": max(head_res, poly_res),
    }


# --- disjoint arcs -------------------------------------------------------------


def _circ_dist(a: float, b: float) -> float:
    d = abs((a - b + np.pi) % (2 * np.pi) - np.pi)
    return float(d)


def assemble_global_weight(regime: str, param: float, arcs, degrees, grid: Grid | None = None):
    """One weight equal to 1 off the arcs and to a rotated clipped construction
    on each arc.  Returns ``(MeasureSpec, per-arc rows)``."""
    arcs = [(float(c), float(d)) for c, d in arcs]
    degrees = [int(k) for k in degrees]
    if len(arcs) != len(degrees):
        raise PreconditionError("one degree per arc is required")
    if any(d <= 0 for _, d in arcs):
        raise PreconditionError("arc widths must be positive")
    if sum(d for _, d in arcs) >= 2 * np.pi:
        raise PreconditionError("arc widths must sum to less than 2 pi")
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if _circ_dist(arcs[i][0], arcs[j][0]) < (arcs[i][1] + arcs[j][1]) / 2:
                raise PreconditionError(f"arcs {i} and {j} overlap")
    g = grid if grid is not None else Grid.for_degree(max(degrees))
    total = np.ones(g.N)
    locals_ = []
    for (center, width), k in zip(arcs, degrees):
        if k % 2:
            raise PreconditionError(f"arc degree must be even, got {k}")
        rep = build(regime, param, k // 2, grid=g)
        hw = min(rep.interval, width / 2)
        w_local = clip_weight(rep.weight, hw)
        shift = g.index_of(center) - g.index_of(0.0)
        rolled = np.roll(w_local.samples, shift)
        on = rolled != 1.0
        total[on] = rolled[on]
        locals_.append((center, width, k, w_local, shift, rep))
    w = MeasureSpec(total, g, f"global {regime} {param!r}")
    rows = []
    for center, width, k, w_local, shift, rep in locals_:
        back = MeasureSpec(np.roll(w.samples, -shift), g)
        single = abs(complex(eval_on_grid(orthonormal_polynomial(w_local, k), g)[g.index_of(0.0)]))
        value = abs(complex(eval_on_grid(orthonormal_polynomial(w, k), g)[g.index_of(g.theta[(g.index_of(0.0) + shift) % g.N])]))
        loc = localization_bound(w_local, back, width / 2, k)
        transfer = 1.0 / loc.rhs
        rows.append({
            "center": float(g.theta[(g.index_of(0.0) + shift) % g.N]),
            "width": width,
            "degree": k,
            "value_global": value,
            "value_single": single,
            "transfer_constant": transfer,
            "holds": bool(value >= transfer * single),
        })
    return w, rows
