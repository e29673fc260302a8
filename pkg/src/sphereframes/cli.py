"""Command-line front end: presets, key=value configs, and artifact files.

Commands map one-to-one onto the library layers: ``spectrum`` tabulates the
admissibility values, ``scale-grid`` reports the scale-discretization
deviation, ``rot-grid`` dumps a rotation grid, ``transform`` writes the
transform table of a seeded random field, and ``certify`` runs the full frame
check, exiting 0 on pass, 2 on fail, 1 on any configuration or runtime error.

Configuration comes from an INI-style key=value file (sections [run],
[profile], [scales], [rotations], [certify]) overridden by flags.  Every
output embeds the fully resolved configuration, and rerunning an identical
configuration reproduces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from configparser import ConfigParser
from dataclasses import dataclass

import numpy as np

from . import frame_verify, rotation_grid, scale_grid, transform, wavelet_spectra
from .harmonics import build_sphere_grid
from .wavelet_spectra import PRESET_NAMES, SpectralProfile, make_preset

log = logging.getLogger("sphereframes")


@dataclass
class RunConfig:
    """Fully resolved run parameters; validated eagerly at parse time."""

    command: str
    n: int = 2
    band_limit: int = 16
    seed: int = 0
    threads: int | None = None
    out: str = "."
    profile: SpectralProfile | None = None
    preset: str | None = None
    rho_max: float | None = None
    ratio: float = 1.2
    scale_count: int | None = None
    delta: tuple | None = None
    trials: int = 10
    tolerance: float = 0.1
    margin: float = 0.05
    max_elements: int = 200_000

    def resolved(self) -> dict:
        prof = self.profile
        doc = {
            "command": self.command,
            "n": self.n,
            "band_limit": self.band_limit,
            "seed": self.seed,
            "threads": self.threads,
            "profile": None
            if prof is None
            else {
                "preset": self.preset,
                "a": prof.a,
                "b": prof.b,
                "c": prof.c,
                "d": prof.d,
                "q": list(prof.q),
                "amplitude": prof.amplitude,
                "direction": prof.direction,
            },
            "scales": {
                "rho_max": self.rho_max,
                "ratio": self.ratio,
                "count": self.scale_count,
            },
            "rotations": {"delta": list(self.delta) if self.delta else None},
            "certify": {
                "trials": self.trials,
                "tolerance": self.tolerance,
                "margin": self.margin,
                "max_elements": self.max_elements,
            },
        }
        return doc


def _parse_floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _profile_from_parts(preset, n, d, order, coeffs) -> SpectralProfile:
    if preset:
        name = preset
        if name.endswith("-zonal"):
            name = name[: -len("-zonal")]
            d = 0
        base = make_preset(name, n, d=d, order=order if order is not None else 2)
        return base
    if "q" not in coeffs:
        raise ValueError("profile needs either a preset name or explicit q coefficients")
    return SpectralProfile(
        a=float(coeffs.get("a", 1.0)),
        b=float(coeffs.get("b", 1.0)),
        c=float(coeffs.get("c", 1.0)),
        q=_parse_floats(coeffs["q"]),
        d=d,
        amplitude=float(coeffs.get("amplitude", 1.0)),
    )


def load_config(args) -> RunConfig:
    """Merge the config file (if any) and the flag overrides, then validate."""
    sections: dict[str, dict] = {}
    if args.config:
        if not os.path.exists(args.config):
            raise FileNotFoundError(f"config file {args.config!r} not found")
        parser = ConfigParser()
        parser.read(args.config)
        sections = {name: dict(parser[name]) for name in parser.sections()}

    run = sections.get("run", {})
    prof_sec = sections.get("profile", {})
    scales = sections.get("scales", {})
    rots = sections.get("rotations", {})
    cert = sections.get("certify", {})

    cfg = RunConfig(command=args.command)
    cfg.n = int(args.n if args.n is not None else run.get("n", 2))
    cfg.band_limit = int(
        args.band_limit if args.band_limit is not None else run.get("band_limit", 16)
    )
    cfg.seed = int(args.seed if args.seed is not None else run.get("seed", 0))
    threads = args.threads if args.threads is not None else run.get("threads")
    cfg.threads = int(threads) if threads not in (None, "") else os.cpu_count()
    cfg.out = args.out if args.out is not None else run.get("out", ".")

    preset = args.preset if args.preset is not None else prof_sec.get("preset")
    d = int(prof_sec.get("d", 0))
    order = prof_sec.get("order")
    cfg.preset = preset
    if args.command != "rot-grid" or preset or "q" in prof_sec:
        cfg.profile = _profile_from_parts(
            preset, cfg.n, d, int(order) if order is not None else None, prof_sec
        )

    if "rho_max" in scales:
        cfg.rho_max = float(scales["rho_max"])
    cfg.ratio = float(args.ratio if args.ratio is not None else scales.get("ratio", 1.2))
    count = args.scales if args.scales is not None else scales.get("count")
    cfg.scale_count = int(count) if count not in (None, "") else None

    delta = args.delta if args.delta is not None else rots.get("delta")
    if delta is not None:
        cfg.delta = tuple(delta) if not isinstance(delta, str) else _parse_floats(delta)
    cfg.max_elements = int(
        rots.get("max_elements", cert.get("max_elements", cfg.max_elements))
    )

    cfg.trials = int(args.trials if args.trials is not None else cert.get("trials", 10))
    cfg.tolerance = float(
        args.tolerance if args.tolerance is not None else cert.get("tolerance", 0.1)
    )
    cfg.margin = float(cert.get("margin", 0.05))

    if cfg.n < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {cfg.n}")
    if cfg.band_limit < 1:
        raise ValueError(f"band limit must be >= 1, got {cfg.band_limit}")
    if cfg.ratio <= 1.0:
        raise ValueError(f"scale ratio must exceed 1, got {cfg.ratio}")
    if cfg.seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {cfg.seed}")
    if cfg.profile is not None:
        cfg.profile.validate_positive(cfg.band_limit)
    return cfg


def _write(cfg: RunConfig, name: str, text: str) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", path)
    return path


def _config_comment(cfg: RunConfig) -> str:
    return "# config " + json.dumps(cfg.resolved(), separators=(",", ":"))


def _scale_grid_from(cfg: RunConfig) -> scale_grid.ScaleGrid:
    if cfg.rho_max is not None and cfg.scale_count is not None:
        return scale_grid.build_scale_grid(cfg.rho_max, cfg.ratio, cfg.scale_count)
    return scale_grid.scale_grid_for_profile(
        cfg.n, cfg.profile, cfg.ratio, cfg.band_limit
    )


def cmd_spectrum(cfg: RunConfig) -> int:
    table = wavelet_spectra.build_beta_table(cfg.n, cfg.profile, cfg.band_limit)
    _write(cfg, "beta.csv", _config_comment(cfg) + "\n" + table.to_csv())
    doc = {
        "A": table.A,
        "B": table.B,
        "order": table.m,
        "values": [float(v) for v in table.values],
        "config": cfg.resolved(),
    }
    _write(cfg, "beta.json", json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_scale_grid(cfg: RunConfig) -> int:
    grid = _scale_grid_from(cfg)
    report = scale_grid.epsilon_report(cfg.n, cfg.profile, grid, cfg.band_limit)
    _write(cfg, "scale_report.csv", _config_comment(cfg) + "\n" + report.to_csv())
    doc = report.summary()
    doc["config"] = cfg.resolved()
    _write(cfg, "scale_report.json", json.dumps(doc, indent=2) + "\n")
    log.info("epsilon_hat = %.3e", report.epsilon_hat)
    return 0


def cmd_rot_grid(cfg: RunConfig) -> int:
    if cfg.delta is None:
        raise ValueError("rot-grid needs --delta (or [rotations] delta in the config)")
    grid = rotation_grid.build_rotation_grid(cfg.n, cfg.delta, cfg.max_elements)
    _write(cfg, "rotation_grid.csv", _config_comment(cfg) + "\n" + grid.to_csv())
    doc = grid.header()
    doc["total_weight"] = grid.total_weight
    doc["config"] = cfg.resolved()
    _write(cfg, "rotation_grid.json", json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_transform(cfg: RunConfig) -> int:
    if cfg.delta is None:
        raise ValueError("transform needs --delta (or [rotations] delta in the config)")
    m = wavelet_spectra.profile_order(cfg.profile)
    field = transform.random_bandlimited(cfg.n, cfg.band_limit, m, cfg.seed)
    scales = _scale_grid_from(cfg)
    rotations = rotation_grid.build_rotation_grid(cfg.n, cfg.delta, cfg.max_elements)
    sphere = build_sphere_grid(cfg.n, cfg.band_limit)
    table = transform.wavelet_analysis(
        cfg.n, cfg.profile, field, scales, rotations, sphere, cfg.threads
    )
    _write(cfg, "transform.csv", _config_comment(cfg) + "\n" + table.to_csv())
    beta = wavelet_spectra.build_beta_table(cfg.n, cfg.profile, cfg.band_limit)
    doc = {
        "energy": transform.frame_energy(table),
        "oracle": transform.energy_identity_oracle(cfg.n, cfg.profile, field, beta),
        "field_order": m,
        "scale_count": len(scales),
        "rotation_count": len(rotations),
        "config": cfg.resolved(),
    }
    _write(cfg, "transform.json", json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_certify(cfg: RunConfig) -> int:
    if cfg.delta is None:
        raise ValueError("certify needs --delta (or [rotations] delta in the config)")
    report = frame_verify.certify_frame(
        cfg.n,
        cfg.profile,
        cfg.band_limit,
        cfg.ratio,
        cfg.delta,
        cfg.trials,
        cfg.seed,
        cfg.tolerance,
        cfg.margin,
        cfg.max_elements,
        cfg.threads,
    )
    _write(
        cfg,
        "frame_report.json",
        report.to_json(extra={"config": cfg.resolved()}) + "\n",
    )
    _write(cfg, "trial_ratios.csv", _config_comment(cfg) + "\n" + report.ratios_csv())
    log.info(
        "verdict %s (eps=%.3g, delta=%.3g)",
        "pass" if report.verdict else "fail",
        report.epsilon_hat,
        report.delta_hat,
    )
    return 0 if report.verdict else 2


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "scale-grid": cmd_scale_grid,
    "rot-grid": cmd_rot_grid,
    "transform": cmd_transform,
    "certify": cmd_certify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphereframes",
        description="Construct and verify wavelet frames on the n-sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--threads", type=int, help="worker threads")
        p.add_argument("--preset", help=f"profile preset, one of {sorted(PRESET_NAMES)}")
        p.add_argument("--n", type=int, help="sphere dimension")
        p.add_argument("--band-limit", type=int, dest="band_limit")
        p.add_argument("--delta", type=float, nargs="+", help="rotation caps, outer first")
        p.add_argument("--ratio", type=float, help="scale grid ratio X0")
        p.add_argument("--scales", type=int, help="scale step count")
        p.add_argument("--trials", type=int)
        p.add_argument("--tolerance", type=float)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("SPHEREFRAMES_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING), format="%(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args)
        return _COMMANDS[cfg.command](cfg)
    except SystemExit as exc:
        # argparse error paths; map usage errors to exit code 1
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
