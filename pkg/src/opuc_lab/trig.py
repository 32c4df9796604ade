"""Polynomials and trigonometric series on the unit circle.

Two carriers are used throughout the package:

* :class:`ComplexPoly` -- coefficients ``c[k]`` of ``z**k``, an algebraic
  polynomial in the disk variable.
* :class:`TrigSeries` -- two-sided coefficients ``c_j, |j| <= J`` of
  ``f(theta) = sum_j c_j exp(i j theta)``.

Fourier coefficients follow ``c_j = (2 pi)^{-1} \\int f e^{-ij theta} d theta``
so that ``integrate(f) == 2 pi c_0``.  Uniform grids place
``theta_k = -pi + 2 pi k / N``; all transforms are plain FFTs with the
``(-1)^j`` phase that the ``-pi`` offset produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.signal import lfilter

from .errors import AliasingError, InvalidContextError

NEG_INF = -math.inf  # degree of the zero polynomial

_MIN_GRID = 4096
_OVERSAMPLE = 16


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128, copy=True).ravel()
    arr.setflags(write=False)
    return arr


def next_pow2(x: int) -> int:
    return 1 << max(0, int(math.ceil(math.log2(max(int(x), 1)))))


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Dense complex polynomial ``sum_k coeffs[k] z**k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.size == 0:
            c = _frozen([0.0])
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, n: int, value: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(n + 1, dtype=np.complex128)
        c[n] = value
        return cls(c)

    @classmethod
    def constant(cls, value: complex) -> "ComplexPoly":
        return cls([value])

    def __len__(self):
        return self.coeffs.size

    def degree(self) -> Union[int, float]:
        """Largest index with a nonzero coefficient, ``NEG_INF`` for zero."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else NEG_INF

    def leading(self) -> complex:
        d = self.degree()
        return 0j if d == NEG_INF else complex(self.coeffs[d])

    def trimmed(self) -> "ComplexPoly":
        d = self.degree()
        return ComplexPoly([0.0]) if d == NEG_INF else ComplexPoly(self.coeffs[: d + 1])

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, self.coeffs.size), dtype=np.complex128)
        out[: self.coeffs.size] = self.coeffs
        return out

    def __call__(self, z):
        return horner(self, z)

    def __add__(self, other):
        if not isinstance(other, ComplexPoly):
            other = ComplexPoly([other])
        m = max(len(self), len(other))
        return ComplexPoly(self.padded(m) + other.padded(m))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ComplexPoly) else -other)

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return multiply(self, other)
        return ComplexPoly(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return ComplexPoly(self.coeffs / scalar)

    def star(self, n: int) -> "ComplexPoly":
        return star_reverse(self, n)

    def __repr__(self):
        return f"ComplexPoly(degree={self.degree()}, coeffs={np.array2string(self.coeffs, threshold=8)})"


@dataclass(frozen=True, eq=False)
class TrigSeries:
    """Two-sided Fourier coefficients stored as ``coeffs[j + J]`` for ``|j| <= J``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.size % 2 == 0:
            raise ValueError("TrigSeries needs an odd number of coefficients (2J + 1)")
        object.__setattr__(self, "coeffs", c)

    @property
    def J(self) -> int:
        return (self.coeffs.size - 1) // 2

    bandwidth = J

    @classmethod
    def from_dict(cls, mapping: dict[int, complex]) -> "TrigSeries":
        J = max((abs(j) for j in mapping), default=0)
        c = np.zeros(2 * J + 1, dtype=np.complex128)
        for j, v in mapping.items():
            c[j + J] = v
        return cls(c)

    @classmethod
    def from_poly(cls, p: ComplexPoly) -> "TrigSeries":
        """Boundary values of ``p`` viewed as a series with no negative modes."""
        d = p.degree()
        d = 0 if d == NEG_INF else d
        c = np.zeros(2 * d + 1, dtype=np.complex128)
        c[d:] = p.coeffs[: d + 1]
        return cls(c)

    @classmethod
    def real_part_of_power_series(cls, coeffs) -> "TrigSeries":
        """Series of ``Re f`` on the circle, where ``f = sum_{k>=0} coeffs[k] z^k``."""
        a = np.asarray(coeffs, dtype=np.complex128)
        J = a.size - 1
        c = np.zeros(2 * J + 1, dtype=np.complex128)
        c[J] = a[0].real
        c[J + 1:] = a[1:] / 2
        c[:J] = np.conj(a[1:][::-1]) / 2
        return cls(c)

    def coeff(self, j: int) -> complex:
        return complex(self.coeffs[j + self.J]) if abs(j) <= self.J else 0j

    def mean(self) -> complex:
        return self.coeff(0)

    def nonnegative_part(self) -> np.ndarray:
        return np.array(self.coeffs[self.J:])

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1]))) <= tol)

    def truncated(self, J: int) -> "TrigSeries":
        if J >= self.J:
            c = np.zeros(2 * J + 1, dtype=np.complex128)
            c[J - self.J: J + self.J + 1] = self.coeffs
            return TrigSeries(c)
        return TrigSeries(self.coeffs[self.J - J: self.J + J + 1])

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        J = max(self.J, other.J)
        return TrigSeries(self.truncated(J).coeffs + other.truncated(J).coeffs)

    def __mul__(self, scalar) -> "TrigSeries":
        return TrigSeries(self.coeffs * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``theta_k = -pi + 2 pi k / N`` with ``N`` a power of two."""

    N: int
    theta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = int(self.N)
        if N < 4 or N & (N - 1):
            raise ValueError(f"grid size must be a power of two >= 4, got {self.N}")
        th = -np.pi + 2 * np.pi * np.arange(N) / N
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    @classmethod
    def for_degree(cls, degree: int, minimum: int = _MIN_GRID) -> "Grid":
        return cls(default_grid_size(degree, minimum))

    @property
    def z(self) -> np.ndarray:
        return np.exp(1j * self.theta)

    def z_power(self, n: int) -> np.ndarray:
        """``exp(i n theta_k)`` with the phase reduced mod ``N`` in integer arithmetic."""
        k = (int(n) * (np.arange(self.N) - self.N // 2)) % self.N
        return np.exp(2j * np.pi * k / self.N)

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.N

    def index_of(self, theta: float) -> int:
        """Index of the grid angle nearest to ``theta`` (mod 2 pi)."""
        k = int(round((theta + np.pi) / self.spacing)) % self.N
        return k

    def mirror(self) -> np.ndarray:
        """Indices ``m`` with ``theta[m] == -theta[k]`` (mod 2 pi)."""
        return (-np.arange(self.N)) % self.N

    def mean(self, values) -> complex:
        return np.mean(values)

    def integrate(self, values) -> float:
        """Trapezoid rule over one period."""
        return 2 * np.pi * np.mean(values)

    def doubled(self) -> "Grid":
        return Grid(2 * self.N)


def default_grid_size(degree: int, minimum: int = _MIN_GRID) -> int:
    return next_pow2(max(minimum, _OVERSAMPLE * int(degree)))


def _alt(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


def horner(p: ComplexPoly, z):
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return acc


def star_reverse(p: ComplexPoly, n: int) -> ComplexPoly:
    """``p*`` in the degree-``n`` context: ``coeff k -> conj(coeff n - k)``."""
    d = p.degree()
    if d != NEG_INF and d > n:
        raise InvalidContextError(f"degree {d} exceeds star context {n}")
    if n < 0:
        raise InvalidContextError(f"negative star context {n}")
    c = p.padded(n + 1)[: n + 1]
    return ComplexPoly(np.conj(c[::-1]))


def eval_on_grid(p: Union[ComplexPoly, TrigSeries], g: Grid) -> np.ndarray:
    """Samples at ``exp(i theta_k)`` via a zero-padded inverse FFT."""
    N = g.N
    if isinstance(p, ComplexPoly):
        d = p.degree()
        if d == NEG_INF:
            return np.zeros(N, dtype=np.complex128)
        if N < 2 * d + 2:
            raise AliasingError(f"grid N={N} too small for degree {d}")
        a = np.zeros(N, dtype=np.complex128)
        a[: d + 1] = p.coeffs[: d + 1] * _alt(d + 1)
        return N * np.fft.ifft(a)
    J = p.J
    if N < 2 * J + 2:
        raise AliasingError(f"grid N={N} too small for bandwidth {J}")
    j = np.arange(-J, J + 1)
    a = np.zeros(N, dtype=np.complex128)
    a[j % N] = p.coeffs * np.where(j % 2, -1.0, 1.0)
    return N * np.fft.ifft(a)


def series_from_samples(samples, J: int) -> TrigSeries:
    """DFT Fourier coefficients ``c_j, |j| <= J`` of uniform samples."""
    f = np.asarray(samples, dtype=np.complex128)
    N = f.size
    if N < 2 * J + 2:
        raise AliasingError(f"{N} samples cannot resolve bandwidth {J}")
    F = np.fft.fft(f) / N
    j = np.arange(-J, J + 1)
    return TrigSeries(F[j % N] * np.where(j % 2, -1.0, 1.0))


def power_series_from_samples(samples, K: int) -> np.ndarray:
    """Coefficients 0..K-1 of the nonnegative modes of uniform samples."""
    f = np.asarray(samples, dtype=np.complex128)
    N = f.size
    if K > N:
        raise AliasingError(f"{N} samples cannot resolve {K} coefficients")
    return np.fft.fft(f)[:K] / N * _alt(K)


def samples_from_power_series(coeffs, N: int) -> np.ndarray:
    """Inverse of :func:`power_series_from_samples` for ``len(coeffs) <= N``."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size > N:
        raise AliasingError(f"{c.size} coefficients do not fit on {N} points")
    a = np.zeros(N, dtype=np.complex128)
    a[: c.size] = c * _alt(c.size)
    return N * np.fft.ifft(a)


def multiply(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    return ComplexPoly(np.convolve(p.coeffs, q.coeffs))


def sup_norm(p: Union[ComplexPoly, TrigSeries], g: Grid, rtol: float = 1e-6,
             max_doublings: int = 4) -> float:
    """Grid maximum of ``|p|``; refines the grid until the maximum settles.

    The returned value is a lower bound on the true sup norm.
    """
    best = float(np.max(np.abs(eval_on_grid(p, g))))
    for _ in range(max_doublings):
        g = g.doubled()
        new = float(np.max(np.abs(eval_on_grid(p, g))))
        done = abs(new - best) <= rtol * max(new, 1e-300)
        best = max(best, new)
        if done:
            break
    return best


def reciprocal_power_series(p: ComplexPoly, K: int) -> np.ndarray:
    """First ``K`` Taylor coefficients of ``1/p``.

    Runs the all-pole recursion, which is stable exactly when ``p`` has no
    zeros in the closed unit disk.
    """
    c = p.trimmed().coeffs
    if c[0] == 0:
        raise ZeroDivisionError("1/p is singular at the origin")
    impulse = np.zeros(K, dtype=np.complex128)
    impulse[0] = 1.0
    return lfilter([1.0], c, impulse)


def integrate(s: TrigSeries) -> complex:
    return 2 * np.pi * s.mean()


def lp_norm(samples, p: float) -> float:
    """``(int |f|^p d theta)^{1/p}`` by the grid rule; ``p = inf`` gives the max."""
    a = np.abs(np.asarray(samples))
    if math.isinf(p):
        return float(a.max())
    return float((2 * np.pi * np.mean(a ** p)) ** (1.0 / p))
