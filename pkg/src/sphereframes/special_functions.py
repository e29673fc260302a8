"""Gegenbauer polynomials, their derivatives and norms, and Funk-Hecke constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_gegenbauer, roots_legendre

__all__ = [
    "GegenbauerOrder",
    "ZonalProfileSamples",
    "gegenbauer",
    "gegenbauer_all",
    "gegenbauer_series",
    "gegenbauer_derivative",
    "gegenbauer_squared_norm",
    "funk_hecke_factor",
    "zonal_gauss_rule",
    "surface_area",
]

_T_TOL = 1e-12


@dataclass(frozen=True)
class GegenbauerOrder:
    """Gegenbauer index lambda; equals (n - 1)/2 for the sphere of dimension n."""

    lam: float

    def __post_init__(self) -> None:
        if not self.lam >= 0.5:
            raise ValueError(f"lambda must be >= 1/2, got {self.lam}")

    @classmethod
    def from_dimension(cls, n: int) -> "GegenbauerOrder":
        if n < 2:
            raise ValueError(f"sphere dimension must be >= 2, got {n}")
        return cls((n - 1) / 2)


@dataclass(frozen=True)
class ZonalProfileSamples:
    """Samples of a zonal function on [-1, 1] with the weight exponent of its measure.

    abscissae must be strictly increasing; weights, when present, are quadrature
    weights (with the factor (1 - t^2)^(lam - 1/2) already folded in) matching the
    abscissae, so that sum(values * weights) approximates the weighted integral.
    """

    abscissae: np.ndarray
    values: np.ndarray
    lam: float
    weights: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        t = np.asarray(self.abscissae, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "abscissae", t)
        object.__setattr__(self, "values", v)
        if t.ndim != 1 or v.shape != t.shape:
            raise ValueError("abscissae and values must be 1-d arrays of equal length")
        if t.size and (t[0] < -1 - _T_TOL or t[-1] > 1 + _T_TOL):
            raise ValueError("abscissae must lie in [-1, 1]")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("abscissae must be strictly increasing")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            object.__setattr__(self, "weights", w)
            if w.shape != t.shape:
                raise ValueError("weights must match abscissae in length")

    @classmethod
    def from_function(cls, fn, lam: float, npts: int) -> "ZonalProfileSamples":
        t, w = zonal_gauss_rule(lam, npts)
        return cls(t, np.asarray(fn(t), dtype=float), lam, w)

    def integrate(self) -> float:
        """Weighted integral int f(t) (1-t^2)^(lam-1/2) dt of the sampled profile."""
        if self.weights is None:
            raise ValueError("samples carry no quadrature weights")
        return float(np.dot(self.values, self.weights))


def _check_args(lam: float, l: int, t) -> np.ndarray:
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if l < 0:
        raise ValueError(f"degree must be >= 0, got {l}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + _T_TOL):
        raise ValueError("argument outside [-1, 1]")
    return t


def gegenbauer(lam: float, l: int, t):
    """Evaluate C_l^lam(t) by the three-term recurrence; t may be an array."""
    lam = getattr(lam, "lam", lam)
    t = _check_args(lam, l, t)
    scalar = t.ndim == 0
    c = _gegenbauer_last(lam, l, np.atleast_1d(t))
    return float(c[0]) if scalar else c


def _gegenbauer_last(lam: float, l: int, t: np.ndarray) -> np.ndarray:
    # forward recurrence l*C_l = 2(l+lam-1) t C_{l-1} - (l+2lam-2) C_{l-2}
    prev = np.ones_like(t)
    if l == 0:
        return prev
    cur = 2.0 * lam * t
    for m in range(2, l + 1):
        prev, cur = cur, (2.0 * (m + lam - 1.0) * t * cur - (m + 2.0 * lam - 2.0) * prev) / m
    return cur


def gegenbauer_all(lam: float, L: int, t: np.ndarray) -> np.ndarray:
    """Stack C_0..C_L at the given points; shape (L+1,) + t.shape."""
    t = _check_args(lam, L, t)
    out = np.empty((L + 1,) + t.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = 2.0 * lam * t
    for m in range(2, L + 1):
        out[m] = (2.0 * (m + lam - 1.0) * t * out[m - 1] - (m + 2.0 * lam - 2.0) * out[m - 2]) / m
    return out


def gegenbauer_series(lam: float, coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Sum_l coeffs[l] * C_l^lam(t) without storing the full polynomial stack."""
    coeffs = np.asarray(coeffs, dtype=float)
    t = _check_args(lam, max(coeffs.size - 1, 0), t)
    acc = np.full(t.shape, coeffs[0] if coeffs.size else 0.0, dtype=float)
    if coeffs.size <= 1:
        return acc
    prev = np.ones_like(t)
    cur = 2.0 * lam * t
    acc += coeffs[1] * cur
    for m in range(2, coeffs.size):
        prev, cur = cur, (2.0 * (m + lam - 1.0) * t * cur - (m + 2.0 * lam - 2.0) * prev) / m
        if coeffs[m] != 0.0:
            acc += coeffs[m] * cur
    return acc


def _pochhammer(x: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= x + i
    return out


def gegenbauer_derivative(lam: float, l: int, t, k: int = 1):
    """k-th derivative of C_l^lam at t, via d/dt C_l^lam = 2 lam C_{l-1}^{lam+1}."""
    lam = getattr(lam, "lam", lam)
    if k < 0:
        raise ValueError(f"derivative order must be >= 0, got {k}")
    t = _check_args(lam, l, t)
    if k == 0:
        return gegenbauer(lam, l, t)
    if k > l:
        return 0.0 if t.ndim == 0 else np.zeros_like(t)
    factor = 2.0**k * _pochhammer(lam, k)
    scalar = t.ndim == 0
    c = _gegenbauer_last(lam + k, l - k, np.atleast_1d(t))
    return float(factor * c[0]) if scalar else factor * c


def _log_squared_norm(lam: float, l: int) -> float:
    # pi 2^(1-2 lam) Gamma(l+2 lam) / (l! (l+lam) Gamma(lam)^2), in log space
    return (
        math.log(math.pi)
        + (1.0 - 2.0 * lam) * math.log(2.0)
        + math.lgamma(l + 2.0 * lam)
        - math.lgamma(l + 1.0)
        - math.log(l + lam)
        - 2.0 * math.lgamma(lam)
    )


def gegenbauer_squared_norm(lam: float, l: int) -> float:
    """Weighted squared norm int_{-1}^{1} C_l^lam(t)^2 (1-t^2)^(lam-1/2) dt."""
    lam = getattr(lam, "lam", lam)
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if l < 0:
        raise ValueError(f"degree must be >= 0, got {l}")
    return math.exp(_log_squared_norm(lam, l))


def funk_hecke_factor(n: int, l: int) -> float:
    """Degree-l multiplier (4 pi)^lam l! Gamma(lam) / Gamma(2 lam + l) on the n-sphere."""
    if n < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {n}")
    if l < 0:
        raise ValueError(f"degree must be >= 0, got {l}")
    lam = (n - 1) / 2
    log = (
        lam * math.log(4.0 * math.pi)
        + math.lgamma(l + 1.0)
        + math.lgamma(lam)
        - math.lgamma(2.0 * lam + l)
    )
    return math.exp(log)


def zonal_gauss_rule(lam: float, npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [-1, 1] for the weight (1-t^2)^(lam-1/2); exact to degree 2 npts - 1."""
    lam = getattr(lam, "lam", lam)
    if npts < 1:
        raise ValueError(f"need at least one node, got {npts}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if abs(lam - 0.5) < 1e-14:
        return roots_legendre(npts)
    t, w = roots_gegenbauer(npts, lam)
    return t, w


def surface_area(n: int) -> float:
    """Total measure of the n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    if n < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {n}")
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)
