import dataclasses
import json
import math

import numpy as np
import pytest

from sphereframes.frame_verify import (
    certify_frame,
    error_budget,
    find_refinement,
    normalize_bounds,
)
from sphereframes.scale_grid import build_scale_grid
from sphereframes.wavelet_spectra import make_preset

AP1 = make_preset("abel-poisson", 2, d=1)


def test_certify_report_consistency():
    rep = certify_frame(2, AP1, 8, 1.5, (1.2, 1.2), 5, 2026)
    assert rep.verdict
    assert rep.A == pytest.approx(27.0 / 128.0, rel=1e-9)
    assert rep.B == pytest.approx(0.375, rel=1e-9)
    np.testing.assert_allclose(rep.ratios, rep.energies)  # unit-norm trial fields
    np.testing.assert_allclose(
        rep.discrepancies, np.abs(rep.energies - rep.oracles) / rep.oracles
    )
    assert rep.lower == pytest.approx(rep.A * 0.9)
    assert rep.upper == pytest.approx(rep.B * 1.1)
    assert np.all(rep.ratios >= rep.lower) and np.all(rep.ratios <= rep.upper)
    assert rep.epsilon_hat + rep.delta_hat < 0.95
    rows = rep.trials()
    assert len(rows) == 5
    assert rows[0]["ratio"] == pytest.approx(float(rep.ratios[0]))
    doc = json.loads(rep.to_json(extra={"tag": 1}))
    assert doc["verdict"] == "pass" and doc["tag"] == 1
    assert doc["grid"]["mode"] == "spatial"
    lines = rep.ratios_csv().splitlines()
    assert lines[0] == "trial,energy,oracle,ratio,discrepancy"
    assert len(lines) == 6


def test_certify_reproducible():
    a = certify_frame(2, AP1, 6, 1.5, (1.5, 1.5), 3, 7)
    b = certify_frame(2, AP1, 6, 1.5, (1.5, 1.5), 3, 7)
    assert a.to_json() == b.to_json()


def test_refinement_reduces_suite_discrepancy():
    # the worst energy-identity discrepancy over the trial suite shrinks as
    # the rotation caps halve (individual trials may fluctuate through
    # accidental cancellation; the suite maximum is the monotone quantity)
    worst = []
    for delta in (1.2, 0.6, 0.3):
        rep = certify_frame(2, AP1, 8, 1.5, (delta, delta), 5, 2026)
        worst.append(float(np.max(rep.discrepancies)))
    assert worst[1] <= worst[0] + 1e-12
    assert worst[2] <= worst[1] + 1e-12


def test_amplitude_rescaling_invariance():
    rep1 = certify_frame(2, AP1, 6, 1.5, (1.2, 1.2), 3, 5)
    doubled = dataclasses.replace(AP1, amplitude=2.0)
    rep2 = certify_frame(2, doubled, 6, 1.5, (1.2, 1.2), 3, 5)
    assert rep2.A == pytest.approx(4.0 * rep1.A, rel=1e-10)
    assert rep2.B == pytest.approx(4.0 * rep1.B, rel=1e-10)
    np.testing.assert_allclose(rep2.energies, 4.0 * rep1.energies, rtol=1e-10)
    np.testing.assert_allclose(rep2.discrepancies, rep1.discrepancies, rtol=1e-8)
    assert rep2.verdict == rep1.verdict


def test_normalize_bounds_arithmetic():
    rep = certify_frame(2, AP1, 6, 1.5, (1.5, 1.5), 2, 3)
    forced = dataclasses.replace(rep, A=0.2, B=0.3)
    out = normalize_bounds(forced)
    assert out.A == pytest.approx(0.8)
    assert out.B == pytest.approx(1.2)
    assert out.normalization == pytest.approx(4.0)  # 2 / (A + B)
    np.testing.assert_allclose(out.energies, 4.0 * forced.energies)
    assert out.verdict == forced.verdict
    with pytest.raises(ValueError):
        normalize_bounds(dataclasses.replace(rep, A=0.0))


@pytest.mark.parametrize("seed", [1, 77, 2026])
def test_negative_control_single_cell_fails(seed):
    rep = certify_frame(2, AP1, 8, 1.5, (math.pi, 2 * math.pi), 5, seed)
    assert not rep.verdict
    assert rep.delta_hat > 1.0  # far beyond any usable deviation


def test_trials_guard():
    with pytest.raises(ValueError):
        certify_frame(2, AP1, 8, 1.5, (1.2, 1.2), 0, 0)


def test_spectral_mode_for_higher_dimension():
    prof4 = make_preset("abel-poisson", 4)
    rep = certify_frame(4, prof4, 6, 1.2, None, 3, 11)
    assert rep.grid_info["mode"] == "spectral"
    assert rep.delta_hat == 0.0
    assert rep.verdict
    np.testing.assert_allclose(rep.energies, rep.oracles, rtol=1e-9)
    with pytest.raises(ValueError):
        certify_frame(4, prof4, 6, 1.2, (1.0, 1.0, 1.0, 1.0), 3, 11, spatial=True)
    with pytest.raises(ValueError):
        certify_frame(3, make_preset("abel-poisson", 3), 8, 1.2, (1.0, 1.0, 1.0), 3, 1, spatial=True)


def test_find_refinement_accepts_first_passing_level():
    rep = find_refinement(2, AP1, 8, 1.5, (1.2, 1.2), 5, 2026)
    assert rep.verdict
    assert rep.grid_info["delta"] == [1.2, 1.2]


def test_find_refinement_exhaustion():
    with pytest.raises(RuntimeError):
        find_refinement(
            2, AP1, 6, 1.5, (2.0, 2.0), 2, 1, margin=0.9999, max_rounds=1
        )


def test_error_budget_shape_and_scaling():
    scales = build_scale_grid(1.0, 2.0, 3)
    budget = error_budget(2, AP1, scales, (0.5, 0.25), dense=65, max_degree=256)
    assert len(budget.per_level) == 2
    assert budget.total == pytest.approx(sum(budget.per_level))
    assert all(v > 0 for v in budget.per_level)
    # each level indicator is linear in its diameter cap
    double = error_budget(2, AP1, scales, (1.0, 0.25), dense=65, max_degree=256)
    assert double.per_level[0] == pytest.approx(2 * budget.per_level[0], rel=1e-12)
    assert double.per_level[1] == pytest.approx(budget.per_level[1], rel=1e-12)
    zero = error_budget(2, AP1, scales, (0.0, 0.0), dense=65, max_degree=256)
    assert zero.total == 0.0
    # sup norms blow up toward small scales: the gradient dominates
    sup_prod = np.asarray(budget.sup_wavelet) * np.asarray(budget.sup_gradient)
    assert np.all(np.diff(sup_prod) > 0)
