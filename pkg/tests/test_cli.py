import json

import numpy as np
import pytest

from sphereframes.cli import main


def read(path):
    return path.read_text()


def config_line(text):
    first = text.splitlines()[0]
    assert first.startswith("# config ")
    return json.loads(first[len("# config ") :])


def test_spectrum_zonal_constant_column(tmp_path):
    out = tmp_path / "run"
    code = main(
        [
            "spectrum",
            "--preset",
            "abel-poisson-zonal",
            "--n",
            "2",
            "--band-limit",
            "16",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(read(out / "beta.json"))
    vals = np.array(doc["values"])
    np.testing.assert_allclose(vals[1:], 0.25, rtol=1e-10)
    assert vals[0] == 0.0
    assert doc["A"] == pytest.approx(0.25) and doc["B"] == pytest.approx(0.25)
    meta = config_line(read(out / "beta.csv"))
    assert meta["profile"]["preset"] == "abel-poisson-zonal"
    assert meta["profile"]["d"] == 0
    assert doc["config"] == meta


def test_zonal_suffix_overrides_configured_order(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("[profile]\npreset = abel-poisson\nd = 1\n")
    out = tmp_path / "o"
    assert (
        main(
            [
                "spectrum",
                "--config",
                str(conf),
                "--preset",
                "abel-poisson-zonal",
                "--band-limit",
                "8",
                "--out",
                str(out),
            ]
        )
        == 0
    )
    assert config_line(read(out / "beta.csv"))["profile"]["d"] == 0


def test_outputs_are_byte_identical(tmp_path):
    args = ["spectrum", "--preset", "gauss-weierstrass", "--band-limit", "12"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert read(a / "beta.csv") == read(b / "beta.csv")
    assert read(a / "beta.json") == read(b / "beta.json")


def test_flag_overrides_config_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("[run]\nband_limit = 4\n[profile]\npreset = abel-poisson\n")
    out = tmp_path / "o"
    code = main(
        ["spectrum", "--config", str(conf), "--band-limit", "6", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(read(out / "beta.json"))
    assert doc["config"]["band_limit"] == 6
    assert len(doc["values"]) == 7


def test_error_exits(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("[profile]\nq = 0, -1\n")
    assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert main(["spectrum", "--preset", "no-such", "--out", str(tmp_path)]) == 1
    assert main(["rot-grid", "--out", str(tmp_path)]) == 1  # delta missing
    assert main(["spectrum", "--config", str(tmp_path / "none.conf")]) == 1
    assert main(["not-a-command"]) == 1
    assert main(["spectrum", "--preset", "abel-poisson", "--ratio", "0.9"]) == 1


def test_explicit_profile_from_config(tmp_path):
    conf = tmp_path / "p.conf"
    conf.write_text("[profile]\na = 1.0\nb = 1.0\nc = 2.0\nq = 0, 1\n")
    out = tmp_path / "o"
    assert main(["spectrum", "--config", str(conf), "--band-limit", "8", "--out", str(out)]) == 0
    doc = json.loads(read(out / "beta.json"))
    np.testing.assert_allclose(np.array(doc["values"])[1:], 0.375, rtol=1e-10)
    assert doc["config"]["profile"]["preset"] is None


def test_scale_grid_command(tmp_path):
    out = tmp_path / "o"
    code = main(
        [
            "scale-grid",
            "--preset",
            "abel-poisson",
            "--band-limit",
            "8",
            "--ratio",
            "1.2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(read(out / "scale_report.json"))
    assert doc["epsilon_hat"] <= 1e-12
    assert doc["ratio"] == 1.2
    lines = read(out / "scale_report.csv").splitlines()
    assert lines[1] == "l,beta_continuous,beta_discrete,rel_dev"
    assert len(lines) == 10


def test_rot_grid_command(tmp_path):
    out = tmp_path / "o"
    assert main(["rot-grid", "--n", "2", "--delta", "1.2", "1.2", "--out", str(out)]) == 0
    doc = json.loads(read(out / "rotation_grid.json"))
    assert doc["sizes"] == [54, 6]
    assert doc["config"]["profile"] is None
    lines = read(out / "rotation_grid.csv").splitlines()
    assert lines[2] == "theta2_1,phi2,phi1,weight"
    assert len(lines) == 3 + 324


def test_transform_command_deterministic(tmp_path):
    args = [
        "transform",
        "--preset",
        "abel-poisson",
        "--band-limit",
        "6",
        "--delta",
        "1.2",
        "1.2",
        "--seed",
        "42",
        "--ratio",
        "1.5",
    ]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert read(a / "transform.csv") == read(b / "transform.csv")
    doc = json.loads(read(a / "transform.json"))
    assert doc["oracle"] == pytest.approx(0.25, rel=1e-9)  # zonal tight value
    assert doc["energy"] == pytest.approx(doc["oracle"], rel=0.1)
    assert doc["config"]["seed"] == 42


def test_certify_exit_codes(tmp_path):
    base = [
        "certify",
        "--preset",
        "abel-poisson",
        "--band-limit",
        "6",
        "--ratio",
        "1.5",
        "--trials",
        "3",
        "--seed",
        "11",
    ]
    good = tmp_path / "good"
    assert main(base + ["--delta", "0.6", "0.6", "--out", str(good)]) == 0
    doc = json.loads(read(good / "frame_report.json"))
    assert doc["verdict"] == "pass"
    assert "config" in doc
    lines = read(good / "trial_ratios.csv").splitlines()
    assert lines[1] == "trial,energy,oracle,ratio,discrepancy"
    assert len(lines) == 5
    bad = tmp_path / "bad"
    assert (
        main(base + ["--delta", "3.141592653589793", "6.283185307179586", "--out", str(bad)])
        == 2
    )
    assert json.loads(read(bad / "frame_report.json"))["verdict"] == "fail"
