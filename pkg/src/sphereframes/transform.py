"""Spherical wavelet transform by quadrature and the coefficient-space energy identity.

W f(rho, R) pairs the field with the wavelet rotated by R, so the wavelet only
enters through the two inner products y1 = x . (R e_1) and y2 = x . (R e_2).
For a band-limited field the wavelet may be truncated at the field's band
limit without any error: higher wavelet degrees are orthogonal to the field.
That keeps the quadrature requirement at twice the field band and lets one
sphere grid serve every scale and rotation.

The energy identity sums beta(l) against the per-degree field energies and is
the rotation-quadrature-free reference value for frame checks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .harmonics import (
    HarmonicCoefficients,
    all_indices,
    angles_to_vector,
    dim_harmonic,
    synthesize,
)
from .rotation_grid import RotationGrid, rotation_matrix
from .scale_grid import ScaleGrid
from .special_functions import gegenbauer_all, surface_area
from .wavelet_spectra import (
    BetaTable,
    SpectralProfile,
    _eval_uv_poly,
    _theta_derivative_tableau,
    zonal_hat_all,
)

__all__ = [
    "TestField",
    "random_bandlimited",
    "TransformTable",
    "wavelet_analysis",
    "transform_energies",
    "frame_energy",
    "energy_identity_oracle",
]


@dataclass(frozen=True)
class TestField:
    """Unit-norm band-limited field with vanishing moments through order m."""

    __test__ = False  # keep pytest collection away from the Test* name

    coeffs: HarmonicCoefficients
    order: int
    seed: object = None

    def __post_init__(self):
        low = sum(dim_harmonic(self.coeffs.n, l) for l in range(self.order + 1))
        if low and np.any(self.coeffs.values[:low] != 0.0):
            raise ValueError(f"coefficients up to degree {self.order} must vanish")
        if abs(self.coeffs.norm() - 1.0) > 1e-12:
            raise ValueError(f"field norm {self.coeffs.norm()} is not 1")

    @property
    def n(self) -> int:
        return self.coeffs.n

    @property
    def L(self) -> int:
        return self.coeffs.L


def random_bandlimited(n: int, L: int, m: int, seed) -> TestField:
    """Unit field with independent complex Gaussian coefficients for m < l <= L.

    Deterministic for a fixed seed (int or SeedSequence).
    """
    if L <= m:
        raise ValueError(f"band limit {L} leaves no degrees above order {m}")
    rng = np.random.default_rng(seed)
    total = len(all_indices(n, L))
    low = sum(dim_harmonic(n, l) for l in range(m + 1))
    vals = np.zeros(total, dtype=complex)
    live = total - low
    vals[low:] = (rng.standard_normal(live) + 1j * rng.standard_normal(live)) / math.sqrt(2)
    vals /= np.sqrt(np.vdot(vals, vals).real)
    return TestField(HarmonicCoefficients(n, L, vals), m, seed)


@dataclass(frozen=True)
class TransformTable:
    """Transform values W[j, g] aligned with a scale grid and a rotation grid."""

    values: np.ndarray
    scales: ScaleGrid
    rotations: RotationGrid

    def __post_init__(self):
        if self.values.shape != (len(self.scales), len(self.rotations)):
            raise ValueError(
                f"table shape {self.values.shape} does not match grids "
                f"({len(self.scales)}, {len(self.rotations)})"
            )

    def to_csv(self) -> str:
        lines = ["j,g,re,im"]
        for j in range(self.values.shape[0]):
            for g in range(self.values.shape[1]):
                w = self.values[j, g]
                lines.append(f"{j},{g},{w.real:.17g},{w.imag:.17g}")
        return "\n".join(lines) + "\n"


def _rotated_axes(n: int, rotations: RotationGrid):
    """First two columns of every rotation matrix: images of e_1 and e_2."""
    mats = np.stack([rotation_matrix(n, e) for e in rotations.angles])
    return mats[:, :, 0], mats[:, :, 1]


def _haar_normalization(n: int) -> float:
    return math.prod(surface_area(J) for J in range(1, n + 1))


def _scan(
    n: int,
    profile: SpectralProfile,
    field_matrix: np.ndarray,
    field_L: int,
    scales: ScaleGrid,
    rotations: RotationGrid,
    sphere_grid,
    threads=None,
    collect: bool = False,
):
    """Shared driver over (scale, rotation) pairs for pre-weighted field columns.

    field_matrix holds f(node) * w(node) / Sigma_n, one column per field.
    Expanding the wavelet rows through the derivative tableau, the node sum
    for each chain-rule order k is independent of the scale, so it is taken
    once per rotation chunk; every scale then reduces to a dot product of the
    spectrum against those per-degree sums.  Returns (energies per field,
    table or None); the table keeps only the first field's values.
    """
    lam = (n - 1) / 2
    d = profile.d
    X = angles_to_vector(n, sphere_grid.angles)
    U, V = _rotated_axes(n, rotations)
    G, M = len(rotations), X.shape[0]
    # truncating the wavelet at the field band is exact: higher degrees are
    # orthogonal to the field, so the product stays within band 2 * field_L
    if 2 * sphere_grid.L < 2 * field_L:
        raise ValueError(
            f"sphere grid exact to band {2 * sphere_grid.L} cannot integrate "
            f"field band {field_L} against the equally truncated wavelet"
        )
    rot_norm = rotations.weights / _haar_normalization(n)
    n_fields = field_matrix.shape[1]
    table = np.empty((len(scales), G), dtype=complex) if collect else None

    orders = [0] if d == 0 else list(range(1, d + 1))
    factors = {}
    for k in orders:
        fac = 2.0**k
        for i in range(k):
            fac *= lam + i
        factors[k] = fac
    tables = _theta_derivative_tableau(d) if d >= 1 else None
    hats = [zonal_hat_all(profile, float(r), n, field_L) for r in scales.scales]
    rho_pow = scales.scales ** (profile.tilde_exponent * d)

    chunk = max(64, int(500_000 / max(M, 1)))
    spans = [slice(s, min(s + chunk, G)) for s in range(0, G, chunk)]

    def scan_chunk(sl: slice):
        T1 = U[sl] @ X.T
        T2 = V[sl] @ X.T
        # per-degree node sums: B_k[l-k, g, t] = sum_m p_k(T1,T2) C_{l-k}(T1) fm
        sums = {}
        for k in orders:
            if field_L < k:
                continue
            stack = gegenbauer_all(lam + k, field_L - k, T1)
            if k > 0:
                stack = stack * _eval_uv_poly(tables[k - 1], T1, T2)[None]
            sums[k] = stack @ field_matrix
        local_energy = np.zeros(n_fields)
        local_rows = (
            np.empty((len(scales), sl.stop - sl.start), dtype=complex)
            if collect
            else None
        )
        for j in range(len(scales)):
            W = np.zeros((sl.stop - sl.start, n_fields), dtype=complex)
            for k, B in sums.items():
                coeffs = hats[j][k:] * factors[k]
                W += np.tensordot(coeffs, B, axes=(0, 0))
            W *= rho_pow[j]
            if collect:
                local_rows[j] = W[:, 0]
            local_energy += scales.weights[j] * (rot_norm[sl] @ np.abs(W) ** 2)
        return local_energy, local_rows

    if threads and threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(scan_chunk, spans))
    else:
        results = [scan_chunk(sl) for sl in spans]
    energies = np.zeros(n_fields)
    for sl, (local_energy, local_rows) in zip(spans, results):
        energies += local_energy
        if collect:
            table[:, sl] = local_rows
    return energies, table


def _weighted_field_matrix(fields, sphere_grid) -> np.ndarray:
    cols = []
    for f in fields:
        fv = synthesize(f.coeffs, sphere_grid)
        cols.append(fv * sphere_grid.weights / surface_area(sphere_grid.n))
    return np.stack(cols, axis=1)


def wavelet_analysis(
    n: int,
    profile: SpectralProfile,
    f: TestField,
    scales: ScaleGrid,
    rotations: RotationGrid,
    sphere_grid,
    threads=None,
) -> TransformTable:
    """W f(rho_j, R_g) by sphere quadrature for every grid pair."""
    if f.n != n or sphere_grid.n != n:
        raise ValueError("field, sphere grid, and transform dimension must agree")
    fm = _weighted_field_matrix([f], sphere_grid)
    _, table = _scan(
        n, profile, fm, f.L, scales, rotations, sphere_grid, threads, collect=True
    )
    return TransformTable(table, scales, rotations)


def transform_energies(
    n: int,
    profile: SpectralProfile,
    fields,
    scales: ScaleGrid,
    rotations: RotationGrid,
    sphere_grid,
    threads=None,
) -> np.ndarray:
    """Discrete frame energies of several fields, sharing the wavelet rows."""
    if not fields:
        return np.zeros(0)
    field_L = max(f.L for f in fields)
    for f in fields:
        if f.n != n:
            raise ValueError("field dimension mismatch")
    fm = _weighted_field_matrix(fields, sphere_grid)
    energies, _ = _scan(n, profile, fm, field_L, scales, rotations, sphere_grid, threads)
    return energies


def frame_energy(table: TransformTable, scales=None, rotations=None) -> float:
    """Sum of w_j * (lambda_g / prod Sigma_J) * |W[j,g]|^2 over the table."""
    scales = table.scales if scales is None else scales
    rotations = table.rotations if rotations is None else rotations
    if table.values.shape != (len(scales), len(rotations)):
        raise ValueError("table does not align with the given grids")
    rot_norm = rotations.weights / _haar_normalization(rotations.n)
    per_scale = np.abs(table.values) ** 2 @ rot_norm
    return float(np.dot(scales.weights, per_scale))


def energy_identity_oracle(
    n: int, profile: SpectralProfile, f: TestField, beta: BetaTable
) -> float:
    """Continuous-transform energy sum_l beta(l) * ||f_l||^2, no rotation grid."""
    if beta.n != n:
        raise ValueError(f"beta table is for n={beta.n}, not {n}")
    if beta.L < f.L:
        raise ValueError(f"beta table to degree {beta.L} cannot cover a field at {f.L}")
    return float(
        sum(beta.values[l] * f.coeffs.degree_energy(l) for l in range(f.L + 1))
    )
