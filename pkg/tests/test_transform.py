import math

import numpy as np
import pytest

from sphereframes.harmonics import HarmonicCoefficients, build_sphere_grid
from sphereframes.rotation_grid import RotationGrid, build_rotation_grid
from sphereframes.scale_grid import build_scale_grid, scale_grid_for_profile
from sphereframes.transform import (
    TestField,
    TransformTable,
    energy_identity_oracle,
    frame_energy,
    random_bandlimited,
    transform_energies,
    wavelet_analysis,
)
from sphereframes.wavelet_spectra import build_beta_table, directional_coeffs, make_preset


def test_random_field_determinism():
    a = random_bandlimited(2, 8, 0, 123)
    b = random_bandlimited(2, 8, 0, 123)
    c = random_bandlimited(2, 8, 0, 124)
    np.testing.assert_array_equal(a.coeffs.values, b.coeffs.values)
    assert np.any(a.coeffs.values != c.coeffs.values)


def test_random_field_structure():
    f = random_bandlimited(3, 6, 2, 5)
    assert f.n == 3 and f.L == 6
    assert f.coeffs.norm() == pytest.approx(1.0, abs=1e-13)
    for l in (0, 1, 2):
        assert f.coeffs.degree_energy(l) == 0.0
    assert f.coeffs.degree_energy(3) > 0.0
    with pytest.raises(ValueError):
        random_bandlimited(2, 4, 4, 0)


def test_field_validation():
    coeffs = HarmonicCoefficients.zeros(2, 2)
    coeffs.values[0] = 1.0
    with pytest.raises(ValueError):
        TestField(coeffs, order=0)  # degree-0 coefficient must vanish
    low = HarmonicCoefficients.zeros(2, 2)
    low.values[-1] = 0.5
    with pytest.raises(ValueError):
        TestField(low, order=0)  # norm is not 1


def _identity_grid(n):
    m = n * (n + 1) // 2
    return RotationGrid(
        n, (math.pi, 2 * math.pi), np.zeros((1, m)), np.array([1.0]), (1,) * n
    )


def test_identity_rotation_matches_spectral_inner_product():
    n, L = 2, 8
    prof = make_preset("abel-poisson", n, d=1)
    field = random_bandlimited(n, L, 0, 123)
    scales = build_scale_grid(2.0, 1.5, 4)
    table = wavelet_analysis(
        n, prof, field, scales, _identity_grid(n), build_sphere_grid(n, L)
    )
    for j, rho in enumerate(scales.scales):
        dc = directional_coeffs(prof, float(rho), n, L)
        ref = complex(np.vdot(dc.coeffs.values, field.coeffs.values))
        assert table.values[j, 0] == pytest.approx(ref, abs=1e-12)


def test_linearity_of_transform():
    n, L = 2, 6
    prof = make_preset("abel-poisson", n, d=1)
    sphere = build_sphere_grid(n, L)
    scales = build_scale_grid(1.5, 1.5, 3)
    rot = build_rotation_grid(n, (1.5, 1.5))
    f = random_bandlimited(n, L, 0, 1)
    g = random_bandlimited(n, L, 0, 2)
    mix = 0.6 * f.coeffs.values - 0.8j * g.coeffs.values
    norm = float(np.linalg.norm(mix))
    h = TestField(HarmonicCoefficients(n, L, mix / norm), order=0)
    Wf = wavelet_analysis(n, prof, f, scales, rot, sphere).values
    Wg = wavelet_analysis(n, prof, g, scales, rot, sphere).values
    Wh = wavelet_analysis(n, prof, h, scales, rot, sphere).values
    np.testing.assert_allclose(Wh, (0.6 * Wf - 0.8j * Wg) / norm, atol=1e-13)


def test_zonal_rescaled_energy_is_near_unit():
    # tight zonal family: frame energy / beta approximates the unit field norm
    n, L = 2, 8
    prof = make_preset("abel-poisson", n)
    field = random_bandlimited(n, L, 0, 7)
    scales = scale_grid_for_profile(n, prof, 1.3, L)
    rot = build_rotation_grid(n, (0.6, 0.6))
    table = wavelet_analysis(n, prof, field, scales, rot, build_sphere_grid(n, L))
    energy = frame_energy(table)
    assert energy / 0.25 == pytest.approx(1.0, rel=0.05)


def test_energy_identity_oracle_additivity():
    n, L = 2, 8
    prof = make_preset("abel-poisson", n, d=1)
    beta = build_beta_table(n, prof, L)
    f = random_bandlimited(n, L, 0, 11)
    expect = sum(
        beta.values[l] * f.coeffs.degree_energy(l) for l in range(L + 1)
    )
    assert energy_identity_oracle(n, prof, f, beta) == pytest.approx(expect, rel=1e-14)
    with pytest.raises(ValueError):
        energy_identity_oracle(3, prof, f, beta)
    short = build_beta_table(n, prof, 4)
    with pytest.raises(ValueError):
        energy_identity_oracle(n, prof, f, short)


def test_shared_rows_match_single_field_runs():
    n, L = 2, 6
    prof = make_preset("abel-poisson", n, d=1)
    sphere = build_sphere_grid(n, L)
    scales = build_scale_grid(1.5, 1.5, 3)
    rot = build_rotation_grid(n, (1.2, 1.2))
    fields = [random_bandlimited(n, L, 0, s) for s in (1, 2, 3)]
    energies = transform_energies(n, prof, fields, scales, rot, sphere)
    for f, e in zip(fields, energies):
        table = wavelet_analysis(n, prof, f, scales, rot, sphere)
        assert e == pytest.approx(frame_energy(table), rel=1e-12)
    assert transform_energies(n, prof, [], scales, rot, sphere).size == 0


def test_thread_count_does_not_change_values():
    n, L = 2, 6
    prof = make_preset("abel-poisson", n, d=2)
    sphere = build_sphere_grid(n, L)
    scales = build_scale_grid(1.5, 1.5, 2)
    rot = build_rotation_grid(n, (1.0, 1.0))
    f = random_bandlimited(n, L, 0, 9)
    one = wavelet_analysis(n, prof, f, scales, rot, sphere, threads=1)
    two = wavelet_analysis(n, prof, f, scales, rot, sphere, threads=2)
    np.testing.assert_array_equal(one.values, two.values)


def test_band_limit_mismatch_rejected():
    n = 2
    prof = make_preset("abel-poisson", n)
    f = random_bandlimited(n, 8, 0, 1)
    scales = build_scale_grid(1.0, 1.5, 2)
    rot = build_rotation_grid(n, (2.0, 2.0))
    with pytest.raises(ValueError):
        wavelet_analysis(n, prof, f, scales, rot, build_sphere_grid(n, 4))
    with pytest.raises(ValueError):
        wavelet_analysis(3, prof, f, scales, rot, build_sphere_grid(n, 8))


def test_table_csv_and_alignment():
    n, L = 2, 4
    prof = make_preset("abel-poisson", n)
    scales = build_scale_grid(1.0, 1.5, 2)
    rot = build_rotation_grid(n, (2.0, 2.0))
    f = random_bandlimited(n, L, 0, 3)
    table = wavelet_analysis(n, prof, f, scales, rot, build_sphere_grid(n, L))
    lines = table.to_csv().splitlines()
    assert lines[0] == "j,g,re,im"
    assert len(lines) == 1 + len(scales) * len(rot)
    with pytest.raises(ValueError):
        TransformTable(np.zeros((2, 3), dtype=complex), scales, rot)
    other = build_rotation_grid(n, (1.5, 1.5))
    with pytest.raises(ValueError):
        frame_energy(table, rotations=other)
