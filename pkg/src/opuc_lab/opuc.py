"""Orthogonal polynomials on the unit circle from a sampled weight.

Every quantity here is computed against the grid measure
``sum_k w(theta_k) (2 pi / N) delta_{theta_k}``.  Moments, Gram matrices and
fixed-point projections all use the same discrete measure, so the different
paths to ``phi_n`` agree to round-off rather than to quadrature error.

Conventions: ``Phi_{j+1}(0) = -conj(gamma_j)`` and

    phi_{j+1}  = (z phi_j - conj(gamma_j) phi_j*) / rho_j
    phi*_{j+1} = (phi_j* - gamma_j z phi_j) / rho_j

with ``rho_j = sqrt(1 - |gamma_j|^2)``.  Polynomials of the second kind use
``-gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_toeplitz

from .errors import DegenerateMeasureError, PreconditionError
from .trig import ComplexPoly, Grid, TrigSeries, eval_on_grid, star_reverse

_DEGENERATE = 1.0 - 1e-12
_REORTH_EVERY = 16
_EIG_LIMIT = 256
_WINDING_GRID_LIMIT = 1 << 21


@dataclass(frozen=True, eq=False)
class MeasureSpec:
    """Absolutely continuous measure ``w(theta) d theta`` sampled on a grid."""

    samples: np.ndarray
    grid: Grid
    label: str = ""

    def __post_init__(self):
        w = np.array(self.samples, dtype=float, copy=True).ravel()
        if w.size != self.grid.N:
            raise PreconditionError(f"{w.size} samples on a grid of {self.grid.N}")
        if not np.all(np.isfinite(w)) or w.min() < 0 or not w.any():
            raise PreconditionError("weight samples must be finite, nonnegative and not all zero")
        w.setflags(write=False)
        object.__setattr__(self, "samples", w)

    @classmethod
    def from_function(cls, fn, grid: Grid, label: str = "") -> "MeasureSpec":
        return cls(fn(grid.theta), grid, label)

    @property
    def total_mass(self) -> float:
        return float(2 * np.pi * np.mean(self.samples))

    def scaled(self, factor: float, label: str | None = None) -> "MeasureSpec":
        return MeasureSpec(self.samples * factor, self.grid, self.label if label is None else label)

    def probability(self) -> "MeasureSpec":
        return self.scaled(1.0 / self.total_mass)

    def normalized_to(self, mass: float) -> "MeasureSpec":
        return self.scaled(mass / self.total_mass)

    @property
    def min(self) -> float:
        return float(self.samples.min())

    @property
    def max(self) -> float:
        return float(self.samples.max())


@dataclass(frozen=True, eq=False)
class VerblunskySeq:
    gamma: np.ndarray

    def __post_init__(self):
        g = np.array(self.gamma, dtype=np.complex128, copy=True).ravel()
        if g.size and np.max(np.abs(g)) >= 1:
            j = int(np.argmax(np.abs(g)))
            raise DegenerateMeasureError(f"|gamma_{j}| = {abs(g[j])} >= 1", j)
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def rho(self) -> np.ndarray:
        return np.sqrt(1.0 - np.abs(self.gamma) ** 2)

    def __len__(self):
        return self.gamma.size

    def negated(self) -> "VerblunskySeq":
        return VerblunskySeq(-self.gamma)


def splice(head: VerblunskySeq, tail: VerblunskySeq) -> VerblunskySeq:
    """Concatenate two coefficient sequences."""
    return VerblunskySeq(np.concatenate([head.gamma, tail.gamma]))


@dataclass(frozen=True, eq=False)
class OrthoPolySet:
    phi: ComplexPoly
    phi_star: ComplexPoly
    psi: ComplexPoly
    psi_star: ComplexPoly
    n: int

    @property
    def monic(self) -> ComplexPoly:
        return self.phi / self.phi.coeffs[self.n]


@dataclass(frozen=True, eq=False)
class SzegoData:
    lambda_w: float
    Lambda_w: float
    log_outer: TrigSeries  # nonnegative modes of log Pi

    def outer_values(self, grid: Grid) -> np.ndarray:
        """Boundary values of ``Pi``, the zero-free function with ``|Pi|^-2 = 2 pi w``."""
        return np.exp(eval_on_grid(self.log_outer, grid))


# --- moments and coefficient extraction -----------------------------------


def moments(m: MeasureSpec, K: int) -> np.ndarray:
    """``c_k = int exp(-ik theta) w d theta`` for ``k = 0..K`` by the grid rule."""
    N = m.grid.N
    if N < 2 * K + 2:
        raise PreconditionError(f"grid N={N} cannot resolve {K} moments")
    F = np.fft.fft(m.samples)[: K + 1]
    sign = np.where(np.arange(K + 1) % 2, -1.0, 1.0)
    return 2 * np.pi / N * F * sign


def _levinson(c: np.ndarray, n: int):
    """Monic Levinson recursion on moments ``c_0..c_n``.

    Returns ``(gamma, Phi_n coefficients, ||Phi_n||^2)``.  Every 16 steps the
    current monic polynomial is re-orthogonalized against ``1, ..., z^{j-1}``
    with a Toeplitz solve to remove drift.
    """
    gamma = np.zeros(n, dtype=np.complex128)
    Phi = np.zeros(n + 1, dtype=np.complex128)
    Phi[0] = 1.0
    norm2 = float(c[0].real)
    if norm2 <= 0:
        raise DegenerateMeasureError("measure has no mass", 0)
    for j in range(n):
        if j and j % _REORTH_EVERY == 0:
            Phi[: j + 1], norm2 = _reorthogonalize(Phi[: j + 1], c)
        # <z Phi_j, 1> = sum_k Phi_k conj(c_{k+1})
        inner = np.dot(Phi[: j + 1], np.conj(c[1: j + 2]))
        g = np.conj(inner / norm2)
        if abs(g) >= _DEGENERATE:
            raise DegenerateMeasureError(f"|gamma_{j}| = {abs(g)} is numerically 1", j)
        gamma[j] = g
        star = np.conj(Phi[: j + 1][::-1])
        new = np.zeros(j + 2, dtype=np.complex128)
        new[1:] = Phi[: j + 1]
        new[: j + 1] -= np.conj(g) * star
        Phi[: j + 2] = new
        norm2 *= 1.0 - abs(g) ** 2
    return gamma, Phi, norm2


def _reorthogonalize(Phi: np.ndarray, c: np.ndarray):
    j = Phi.size - 1
    # defect d_m = <Phi, z^m> = sum_k Phi_k c_{m-k}, m < j
    col = c[:j]
    full = np.concatenate([np.conj(c[1: j + 1][::-1]), c[: j + 1]])  # c_{-j}..c_{j}
    d = np.convolve(Phi, full)[j: 2 * j]
    out = Phi.copy()
    out[:j] -= solve_toeplitz((col, np.conj(col)), d)
    norm2 = float(np.convolve(out, full)[2 * j].real)
    return out, norm2


def verblunsky_from_measure(m: MeasureSpec, n: int) -> VerblunskySeq:
    """``gamma_0..gamma_{n-1}`` of the grid measure."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    c = moments(m, n + 1)
    gamma, _, _ = _levinson(c, n)
    return VerblunskySeq(gamma)


def monic_polynomial(m: MeasureSpec, n: int) -> ComplexPoly:
    """Monic ``Phi_n`` of ``m``; invariant under rescaling the measure."""
    c = moments(m, n + 1)
    _, Phi, _ = _levinson(c, n)
    return ComplexPoly(Phi)


def orthonormal_polynomial(m: MeasureSpec, n: int) -> ComplexPoly:
    """``phi_n`` of ``m`` itself (not of its probability version)."""
    c = moments(m, n + 1)
    _, Phi, norm2 = _levinson(c, n)
    return ComplexPoly(Phi / math.sqrt(norm2))


def check_toeplitz_positive(m: MeasureSpec, K: int) -> None:
    """Raise if the moment Toeplitz matrix of order ``K + 1`` is not positive definite."""
    c = moments(m, K)
    _levinson(c, K)


# --- recursion ---------------------------------------------------------------


def _run_recursion(gamma: np.ndarray, n: int, keep_all: bool = False):
    phi = np.ones(1, dtype=np.complex128)
    phis = np.ones(1, dtype=np.complex128)
    family = [phi.copy()] if keep_all else None
    for j in range(n):
        g = gamma[j]
        r = math.sqrt(1.0 - abs(g) ** 2)
        zphi = np.concatenate([[0.0], phi])
        ext = np.concatenate([phis, [0.0]])
        phi, phis = (zphi - np.conj(g) * ext) / r, (ext - g * zphi) / r
        if keep_all:
            family.append(phi.copy())
    return phi, phis, family


def szego_recursion(v: VerblunskySeq, n: int) -> OrthoPolySet:
    """``phi_n, phi_n*, psi_n, psi_n*`` for the probability measure with coefficients ``v``."""
    if len(v) < n:
        raise PreconditionError(f"need {n} coefficients, have {len(v)}")
    phi, phis, _ = _run_recursion(v.gamma, n)
    psi, psis, _ = _run_recursion(-v.gamma, n)
    return OrthoPolySet(ComplexPoly(phi), ComplexPoly(phis), ComplexPoly(psi), ComplexPoly(psis), n)


def orthonormal_family(v: VerblunskySeq, n: int) -> list[ComplexPoly]:
    """``[phi_0, ..., phi_n]`` from the recursion."""
    if len(v) < n:
        raise PreconditionError(f"need {n} coefficients, have {len(v)}")
    _, _, fam = _run_recursion(v.gamma, n, keep_all=True)
    return [ComplexPoly(p) for p in fam]


def inverse_szego(phi_next: ComplexPoly, n_next: int) -> tuple[ComplexPoly, complex]:
    """One step down: recover ``(phi_n, gamma_n)`` from orthonormal ``phi_{n+1}``."""
    if n_next < 1:
        raise PreconditionError("cannot step below degree 0")
    c = phi_next.padded(n_next + 1)[: n_next + 1]
    lead = c[n_next]
    g = -np.conj(c[0] / lead)
    if abs(g) >= 1:
        raise DegenerateMeasureError(f"|gamma| = {abs(g)} >= 1", n_next - 1)
    r = math.sqrt(1.0 - abs(g) ** 2)
    star = np.conj(c[::-1])
    zphi = (c + np.conj(g) * star) / r
    return ComplexPoly(zphi[1:]), complex(g)


def verblunsky_from_polynomial(phi: ComplexPoly, n: int) -> VerblunskySeq:
    """All ``gamma_0..gamma_{n-1}`` by repeated step-down from ``phi_n``."""
    gam = np.zeros(n, dtype=np.complex128)
    p = phi
    for k in range(n, 0, -1):
        p, gam[k - 1] = inverse_szego(p, k)
    return VerblunskySeq(gam)


def bernstein_szego(o: OrthoPolySet, grid: Grid | None = None) -> MeasureSpec:
    """``d theta / (2 pi |phi_n|^2)`` sampled on ``grid``."""
    g = grid if grid is not None else Grid.for_degree(o.n)
    vals = np.abs(eval_on_grid(o.phi, g)) ** 2
    return MeasureSpec(1.0 / (2 * np.pi * vals), g, f"bernstein-szego n={o.n}")


def caratheodory(o: OrthoPolySet, z) -> np.ndarray:
    """``psi_n*(z) / phi_n*(z)`` for ``|z| < 1``."""
    z = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(z) >= 1):
        raise PreconditionError("Caratheodory function is evaluated in the open disk only")
    return o.psi_star(z) / o.phi_star(z)


# --- Szego data, localization ------------------------------------------------


def szego_data(m: MeasureSpec) -> SzegoData:
    w = m.samples
    if w.min() <= 0:
        raise PreconditionError("Szego data need a weight bounded away from zero")
    logw = np.log(2 * np.pi * w)
    lam = math.exp(0.5 * float(np.mean(logw)))
    Lam = math.sqrt(m.total_mass)
    N = m.grid.N
    u = -0.5 * logw
    F = np.fft.fft(u) / N
    J = N // 2 - 1
    sign = np.where(np.arange(J + 1) % 2, -1.0, 1.0)
    half = F[: J + 1] * sign
    half[1:] *= 2
    coeffs = np.zeros(2 * J + 1, dtype=np.complex128)
    coeffs[J:] = half
    return SzegoData(lam, Lam, TrigSeries(coeffs))


def szego_residual(m: MeasureSpec, n: int) -> float:
    """``max |phi_n - e^{in theta} conj(Pi)|`` on the grid of ``m``."""
    phi = orthonormal_polynomial(m, n)
    sd = szego_data(m)
    g = m.grid
    target = g.z_power(n) * np.conj(sd.outer_values(g))
    return float(np.max(np.abs(eval_on_grid(phi, g) - target)))


@dataclass(frozen=True)
class LocalizationReport:
    n: int
    eps_arc: float
    lhs: float
    rhs: float
    holds: bool
    tail_integral: float
    band_lower_ratio: float  # lhs / (eps m1 / m2)
    band_upper_ratio: float  # lhs / (m2 / (eps m1))

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def localization_bound(w1: MeasureSpec, w2: MeasureSpec, eps_arc: float, n: int,
                       agree_tol: float = 1e-12) -> LocalizationReport:
    """Both sides of the localization inequality for weights agreeing on ``|theta| <= eps_arc``."""
    if w1.grid.N != w2.grid.N:
        raise PreconditionError("weights live on different grids")
    g = w1.grid
    arc = np.abs(g.theta) <= eps_arc
    a, b = w1.samples, w2.samples
    if np.max(np.abs(a[arc] - b[arc]), initial=0.0) > agree_tol * max(1.0, np.max(np.abs(a[arc]), initial=0.0)):
        raise PreconditionError(f"weights differ on the arc |theta| <= {eps_arc}")
    if a.min() <= 0 or b.min() <= 0:
        raise PreconditionError("weights must be positive")
    p1 = eval_on_grid(orthonormal_polynomial(w1, n), g)
    p2 = eval_on_grid(orthonormal_polynomial(w2, n), g)
    v1 = p1[g.index_of(0.0)]
    v2 = p2[g.index_of(0.0)]
    lhs = abs(v1 / v2)
    s1, s2 = szego_data(w1), szego_data(w2)
    integrand = np.abs(p1 * p2) * (a + b)
    tail = float(2 * np.pi * np.mean(np.where(arc, 0.0, integrand)))
    rhs = s2.Lambda_w / s1.lambda_w + 4 * s1.Lambda_w / (eps_arc * s1.lambda_w) * tail
    m1 = min(a.min(), b.min())
    m2 = max(a.max(), b.max())
    return LocalizationReport(n, eps_arc, float(lhs), float(rhs), bool(lhs <= rhs), tail,
                              float(lhs / (eps_arc * m1 / m2)), float(lhs / (m2 / (eps_arc * m1))))


# --- zero location -----------------------------------------------------------


def roots(p: ComplexPoly) -> np.ndarray:
    """Companion-matrix eigenvalues."""
    c = p.trimmed().coeffs
    if c.size <= 1:
        return np.zeros(0, dtype=np.complex128)
    return np.roots(c[::-1])


def zeros_inside_disk(p: ComplexPoly, grid: Grid | None = None) -> int:
    """Number of zeros in the open unit disk.

    Eigenvalues up to degree 256, the argument principle on a fine grid beyond.
    """
    d = p.degree()
    if d == -math.inf or d == 0:
        return 0
    if d <= _EIG_LIMIT:
        return int(np.sum(np.abs(roots(p)) < 1))
    g = grid if grid is not None else Grid.for_degree(d, minimum=4 * 4096)
    while True:
        vals = eval_on_grid(p, g)
        if np.min(np.abs(vals)) == 0:
            raise DegenerateMeasureError("polynomial vanishes on the circle", d)
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < np.pi / 4:
            return int(round(float(np.sum(steps)) / (2 * np.pi)))
        if g.N >= _WINDING_GRID_LIMIT:
            raise DegenerateMeasureError(
                f"argument of a degree-{d} polynomial not resolved on {g.N} points", d)
        g = g.doubled()


def min_root_modulus(p: ComplexPoly) -> float:
    r = roots(p)
    return float(np.min(np.abs(r))) if r.size else math.inf


def max_root_modulus(p: ComplexPoly) -> float:
    r = roots(p)
    return float(np.max(np.abs(r))) if r.size else 0.0


def gram_matrix(polys, m: MeasureSpec) -> np.ndarray:
    """``G[j, k] = int p_j conj(p_k) w d theta`` on the grid of ``m``."""
    g = m.grid
    V = np.array([eval_on_grid(p, g) for p in polys])
    return 2 * np.pi / g.N * (V * m.samples) @ V.conj().T


__all__ = [
    "MeasureSpec", "VerblunskySeq", "OrthoPolySet", "SzegoData", "LocalizationReport",
    "moments", "verblunsky_from_measure", "monic_polynomial", "orthonormal_polynomial",
    "check_toeplitz_positive", "szego_recursion", "orthonormal_family", "inverse_szego",
    "verblunsky_from_polynomial", "bernstein_szego", "caratheodory", "szego_data",
    "szego_residual", "localization_bound", "roots", "zeros_inside_disk",
    "min_root_modulus", "max_root_modulus", "gram_matrix", "splice", "star_reverse",
]
