"""Hyperspherical harmonics: indexing, evaluation, quadrature analysis and synthesis.

Angle convention on the n-sphere: (theta_1, ..., theta_{n-1}, phi) with
x_1 = cos theta_1, x_j = cos theta_j * prod_{i<j} sin theta_i, and the final
pair (x_n, x_{n+1}) carrying the azimuth phi. The last index k_{n-1} is signed
and enters as exp(i k phi); the polar factors use |k_{n-1}|.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .special_functions import (
    _log_squared_norm,
    gegenbauer_all,
    surface_area,
    zonal_gauss_rule,
)

__all__ = [
    "HarmonicIndex",
    "HarmonicCoefficients",
    "SphereGrid",
    "dim_harmonic",
    "enumerate_indices",
    "all_indices",
    "eval_harmonic",
    "build_sphere_grid",
    "harmonic_basis",
    "analyze",
    "synthesize",
    "gegenbauer_coeff_from_fourier",
    "fourier_from_gegenbauer_factor",
    "angles_to_vector",
    "vector_to_angles",
]


class HarmonicIndex(NamedTuple):
    l: int
    k: tuple[int, ...]


def validate_index(n: int, index: HarmonicIndex) -> None:
    l, k = index
    if len(k) != n - 1:
        raise ValueError(f"index needs {n - 1} inner entries, got {len(k)}")
    chain = (l,) + tuple(k[:-1]) + (abs(k[-1]),)
    if l < 0 or any(a < b for a, b in zip(chain, chain[1:])):
        raise ValueError(f"index {index} violates l >= k_1 >= ... >= |k_last| >= 0")
    if any(ki < 0 for ki in k[:-1]):
        raise ValueError(f"inner entries before the last must be nonnegative: {index}")


def dim_harmonic(n: int, l: int) -> int:
    """Number of linearly independent degree-l harmonics on the n-sphere."""
    if n < 2 or l < 0:
        raise ValueError(f"need n >= 2 and l >= 0, got n={n}, l={l}")
    return (n + 2 * l - 1) * math.factorial(n + l - 2) // (math.factorial(n - 1) * math.factorial(l))


def enumerate_indices(n: int, l: int) -> list[HarmonicIndex]:
    """All degree-l indices (k_1, ..., k_{n-1}), last entry signed, lexicographic."""
    if n < 2 or l < 0:
        raise ValueError(f"need n >= 2 and l >= 0, got n={n}, l={l}")

    def rec(bound: int, remaining: int) -> Iterable[tuple[int, ...]]:
        if remaining == 1:
            for k in range(-bound, bound + 1):
                yield (k,)
            return
        for k in range(0, bound + 1):
            for tail in rec(k, remaining - 1):
                yield (k,) + tail

    return [HarmonicIndex(l, k) for k in rec(l, n - 1)]


def all_indices(n: int, L: int) -> list[HarmonicIndex]:
    """Indices for every degree l <= L, ordered by (l, k) lexicographic."""
    out: list[HarmonicIndex] = []
    for l in range(L + 1):
        out.extend(enumerate_indices(n, l))
    return out


def _log_norm_product(n: int, index: HarmonicIndex) -> float:
    """log of (2 pi / Sigma_n) * prod_tau h(mu_tau, m_tau); A = exp(-log/2)."""
    l, k = index
    chain = (l,) + tuple(abs(ki) for ki in k)
    log = math.log(2.0 * math.pi) - math.log(surface_area(n))
    for tau in range(1, n):
        mu = (n - tau) / 2 + chain[tau]
        m = chain[tau - 1] - chain[tau]
        log += _log_squared_norm(mu, m)
    return log


def harmonic_normalization(n: int, index: HarmonicIndex) -> float:
    """Constant A_l^k making the harmonic unit-norm under the 1/Sigma_n inner product."""
    validate_index(n, index)
    return math.exp(-0.5 * _log_norm_product(n, index))


def eval_harmonic(n: int, index: HarmonicIndex, point) -> complex | np.ndarray:
    """Evaluate Y_l^k at angle tuples; accepts one point or an array (P, n)."""
    index = HarmonicIndex(index[0], tuple(index[1]))
    validate_index(n, index)
    pts = np.atleast_2d(np.asarray(point, dtype=float))
    if pts.shape[1] != n:
        raise ValueError(f"points need {n} angles for the {n}-sphere, got {pts.shape[1]}")
    l, k = index
    chain = (l,) + tuple(abs(ki) for ki in k)
    out = np.full(pts.shape[0], harmonic_normalization(n, index), dtype=complex)
    for tau in range(1, n):
        mu = (n - tau) / 2 + chain[tau]
        m = chain[tau - 1] - chain[tau]
        theta = pts[:, tau - 1]
        t = np.cos(theta)
        out *= gegenbauer_all(mu, m, t)[m] * np.sin(theta) ** chain[tau]
    out *= np.exp(1j * k[-1] * pts[:, n - 1])
    return out[0] if np.asarray(point).ndim == 1 else out


@dataclass
class SphereGrid:
    """Product quadrature grid on the n-sphere, exact for harmonic products at 2L."""

    n: int
    L: int
    axis_nodes: list[np.ndarray]  # per polar axis, cos(theta) ascending
    axis_weights: list[np.ndarray]
    phi_nodes: np.ndarray
    phi_weight: float
    angles: np.ndarray  # (M, n) flattened angle tuples
    weights: np.ndarray  # (M,)
    _basis_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.angles.shape[0]

    def cartesian(self) -> np.ndarray:
        return angles_to_vector(self.n, self.angles)


def build_sphere_grid(n: int, L: int) -> SphereGrid:
    """Gauss rule per polar angle (weight-matched) and uniform azimuth, exact at 2L."""
    if n < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {n}")
    if L < 0:
        raise ValueError(f"band limit must be >= 0, got {L}")
    axis_nodes, axis_weights = [], []
    for tau in range(1, n):
        t, w = zonal_gauss_rule((n - tau) / 2, L + 1)
        axis_nodes.append(t)
        axis_weights.append(w)
    m_phi = 2 * L + 1
    phi = 2.0 * math.pi * np.arange(m_phi) / m_phi
    phi_w = 2.0 * math.pi / m_phi

    thetas = [np.arccos(t) for t in axis_nodes]
    mesh = np.meshgrid(*thetas, phi, indexing="ij")
    angles = np.stack([m.reshape(-1) for m in mesh], axis=1)
    wmesh = np.meshgrid(*axis_weights, np.full(m_phi, phi_w), indexing="ij")
    weights = np.ones(angles.shape[0])
    for wm in wmesh:
        weights = weights * wm.reshape(-1)
    return SphereGrid(n, L, axis_nodes, axis_weights, phi, phi_w, angles, weights)


def harmonic_basis(grid: SphereGrid, L: int) -> tuple[list[HarmonicIndex], np.ndarray]:
    """Matrix of Y_l^k values on the grid, one row per index with l <= L; cached."""
    if L in grid._basis_cache:
        return grid._basis_cache[L]
    n = grid.n
    indices = all_indices(n, L)
    # per-axis blocks C_m^{(n-tau)/2 + kk}(t) * sin^kk(theta), any m <= L, kk <= L
    axis_blocks: list[dict[int, np.ndarray]] = []
    for tau in range(1, n):
        t = grid.axis_nodes[tau - 1]
        sin_pow = np.sqrt(np.maximum(0.0, 1.0 - t * t))
        blocks = {}
        for kk in range(L + 1):
            mu = (n - tau) / 2 + kk
            blocks[kk] = gegenbauer_all(mu, L - kk, t) * sin_pow**kk
        axis_blocks.append(blocks)
    phi_block = {
        k: np.exp(1j * k * grid.phi_nodes) for k in range(-L, L + 1)
    }
    shape = tuple(len(a) for a in grid.axis_nodes) + (len(grid.phi_nodes),)
    mat = np.empty((len(indices), grid.size), dtype=complex)
    for row, idx in enumerate(indices):
        l, k = idx
        chain = (l,) + tuple(abs(ki) for ki in k)
        parts = []
        for tau in range(1, n):
            m = chain[tau - 1] - chain[tau]
            parts.append(axis_blocks[tau - 1][chain[tau]][m])
        parts.append(phi_block[k[-1]])
        val = harmonic_normalization(n, idx)
        acc = np.asarray(parts[0], dtype=complex) * val
        for p in parts[1:]:
            acc = np.multiply.outer(acc, p)
        mat[row] = acc.reshape(-1)
    grid._basis_cache[L] = (indices, mat)
    return indices, mat


@dataclass
class HarmonicCoefficients:
    """Band-limited coefficient table aligned with all_indices(n, L)."""

    n: int
    L: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        expect = sum(dim_harmonic(self.n, l) for l in range(self.L + 1))
        if self.values.shape != (expect,):
            raise ValueError(
                f"expected {expect} coefficients for n={self.n}, L={self.L}, "
                f"got shape {self.values.shape}"
            )

    @classmethod
    def zeros(cls, n: int, L: int) -> "HarmonicCoefficients":
        count = sum(dim_harmonic(n, l) for l in range(L + 1))
        return cls(n, L, np.zeros(count, dtype=complex))

    def indices(self) -> list[HarmonicIndex]:
        return all_indices(self.n, self.L)

    def degree_slice(self, l: int) -> slice:
        if not 0 <= l <= self.L:
            raise ValueError(f"degree {l} outside [0, {self.L}]")
        start = sum(dim_harmonic(self.n, j) for j in range(l))
        return slice(start, start + dim_harmonic(self.n, l))

    def get(self, l: int, k: tuple[int, ...]) -> complex:
        idx = HarmonicIndex(l, tuple(k))
        validate_index(self.n, idx)
        block = enumerate_indices(self.n, l)
        return complex(self.values[self.degree_slice(l)][block.index(idx)])

    def degree_energy(self, l: int) -> float:
        v = self.values[self.degree_slice(l)]
        return float(np.vdot(v, v).real)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.values, self.values).real))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# dimension={self.n} band_limit={self.L}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l"] + [f"k_{i}" for i in range(1, self.n)] + ["re", "im"])
        for idx, v in zip(self.indices(), self.values):
            writer.writerow(
                [idx.l, *idx.k, format(v.real, ".17g"), format(v.imag, ".17g")]
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "HarmonicCoefficients":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise ValueError("missing dimension/band-limit header")
        meta = dict(item.split("=") for item in lines[0][1:].split())
        n, L = int(meta["dimension"]), int(meta["band_limit"])
        rows = list(csv.reader(lines[1:]))
        out = cls.zeros(n, L)
        table = {idx: i for i, idx in enumerate(out.indices())}
        for row in rows[1:]:
            if not row:
                continue
            l, k = int(row[0]), tuple(int(x) for x in row[1:n])
            out.values[table[HarmonicIndex(l, k)]] = complex(float(row[n]), float(row[n + 1]))
        return out


def analyze(samples: np.ndarray, grid: SphereGrid, L: int) -> HarmonicCoefficients:
    """Project grid samples onto harmonics: a_l^k = (1/Sigma_n) sum conj(Y) f w."""
    samples = np.asarray(samples)
    if samples.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} samples, got {samples.shape}")
    if L > grid.L:
        raise ValueError(f"grid exact to band {grid.L}, cannot analyze at L={L}")
    _, mat = harmonic_basis(grid, L)
    vals = mat.conj() @ (samples * grid.weights) / surface_area(grid.n)
    return HarmonicCoefficients(grid.n, L, vals)


def synthesize(coeffs: HarmonicCoefficients, grid: SphereGrid) -> np.ndarray:
    """Pointwise sum of the coefficient table against the basis on the grid."""
    if coeffs.n != grid.n:
        raise ValueError(f"dimension mismatch: coefficients n={coeffs.n}, grid n={grid.n}")
    if coeffs.L > grid.L:
        raise ValueError(f"coefficients at L={coeffs.L} exceed grid band {grid.L}")
    _, mat = harmonic_basis(grid, coeffs.L)
    return coeffs.values @ mat


def fourier_from_gegenbauer_factor(n: int, l: int) -> float:
    """The zonal bridge constant A_l^0 = (lam + l) / (lam sqrt(N(n, l)))."""
    lam = (n - 1) / 2
    return (lam + l) / (lam * math.sqrt(dim_harmonic(n, l)))


def gegenbauer_coeff_from_fourier(n: int, l: int, a: complex) -> complex:
    """Gegenbauer-series coefficient of a zonal function from its k=0 Fourier coefficient."""
    return fourier_from_gegenbauer_factor(n, l) * a


def angles_to_vector(n: int, angles) -> np.ndarray:
    """Embed angle tuples into ambient coordinates; (..., n) -> (..., n+1)."""
    a = np.asarray(angles, dtype=float)
    single = a.ndim == 1
    a = np.atleast_2d(a)
    if a.shape[-1] != n:
        raise ValueError(f"need {n} angles, got {a.shape[-1]}")
    out = np.empty(a.shape[:-1] + (n + 1,))
    run = np.ones(a.shape[:-1])
    for j in range(n - 1):
        out[..., j] = run * np.cos(a[..., j])
        run = run * np.sin(a[..., j])
    out[..., n - 1] = run * np.cos(a[..., n - 1])
    out[..., n] = run * np.sin(a[..., n - 1])
    return out[0] if single else out


def vector_to_angles(n: int, x) -> np.ndarray:
    """Inverse of angles_to_vector; tolerant at the poles (phi set to 0 there)."""
    v = np.asarray(x, dtype=float)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    if v.shape[-1] != n + 1:
        raise ValueError(f"need {n + 1} coordinates, got {v.shape[-1]}")
    out = np.empty(v.shape[:-1] + (n,))
    for j in range(n - 1):
        tail = np.sqrt(np.sum(v[..., j + 1 :] ** 2, axis=-1))
        out[..., j] = np.arctan2(tail, v[..., j])
    phi = np.arctan2(v[..., n], v[..., n - 1])
    out[..., n - 1] = np.mod(phi, 2.0 * math.pi)
    return out[0] if single else out
