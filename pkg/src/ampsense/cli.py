"""Command-line driver: flat ``key = value`` configs in, CSV tables out.

Usage::

    ampsense <command> [--config PATH] [--out PATH] [--set key=value ...]

Commands: snl, sweep, threshold, qmap, wigner, calibrate.
Exit status: 0 success, 1 output not writable, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from . import interferometer as ifm
from . import wigner as wg

COMMANDS = ("snl", "sweep", "threshold", "qmap", "wigner", "calibrate")
PHYSICAL_KEYS = tuple(f.name for f in fields(ifm.InterferometerConfig))


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | str | None = None):
        self.line = line
        if line is None:
            prefix = ""
        elif isinstance(line, int):
            prefix = f"line {line}: "
        else:
            prefix = f"{line}: "
        super().__init__(prefix + message)


class NumericFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved run settings; the physical block defaults to the headline setup."""

    n_alpha: float = ifm.HEADLINE_DEFAULTS["n_alpha"]
    g1: float = ifm.HEADLINE_DEFAULTS["g1"]
    g2: float = ifm.HEADLINE_DEFAULTS["g2"]
    eta: float = ifm.HEADLINE_DEFAULTS["eta"]
    mu: float = ifm.HEADLINE_DEFAULTS["mu"]
    g2_corr: float = ifm.HEADLINE_DEFAULTS["g2_corr"]
    dark_rms: float = ifm.HEADLINE_DEFAULTS["dark_rms"]
    sv_enabled: bool = ifm.HEADLINE_DEFAULTS["sv_enabled"]
    mu_on_coherent: bool = ifm.HEADLINE_DEFAULTS["mu_on_coherent"]
    # sweep
    phi_min: float = -0.5 * math.pi
    phi_max: float = 0.5 * math.pi
    n_points: int = 361
    step: float = 1e-4
    # quantum-advantage map
    q0: float = 17.0
    eta_min: float = 0.01
    eta_max: float = 1.0
    eta_points: int = 100
    g2_min: float = 0.0
    g2_max: float = 5.0
    g2_points: int = 51
    # wigner
    scenario: str = "squeezed+amplified"
    alpha: float = 3.0
    sv_db: float = 6.0
    wigner_eta: float = 0.5
    dopa_db: float = 9.6
    n_phases: int = 6
    grid_points: int = 201
    grid_extent: float = 8.0
    # calibrate
    calib_data: str = ""

    @property
    def interferometer(self) -> ifm.InterferometerConfig:
        return ifm.InterferometerConfig(**{k: getattr(self, k) for k in PHYSICAL_KEYS})

    def items(self):
        return asdict(self).items()


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str, line):
    kind = _TYPES[key]
    try:
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
            return value
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}", line) from None


def _validate(values: dict, lines: dict) -> RunConfig:
    def fail(key, msg):
        raise ConfigError(f"{key}={values.get(key)!r} out of range: {msg}", lines.get(key))

    try:
        ifm.InterferometerConfig(**{k: values.get(k, getattr(RunConfig, k)) for k in PHYSICAL_KEYS})
    except ifm.ConfigError as exc:
        key = str(exc).split("=", 1)[0]
        raise ConfigError(str(exc), lines.get(key)) from None
    cfg = RunConfig(**values)
    rules = [
        ("phi_max", cfg.phi_min < cfg.phi_max, "phi_min < phi_max required"),
        ("n_points", cfg.n_points >= 2, "n_points >= 2"),
        ("step", cfg.step > 0, "step > 0"),
        ("q0", cfg.q0 > 0, "q0 > 0"),
        ("eta_min", 0 < cfg.eta_min <= cfg.eta_max, "0 < eta_min <= eta_max"),
        ("eta_max", cfg.eta_max <= 1, "eta_max <= 1"),
        ("eta_points", cfg.eta_points >= 1, "eta_points >= 1"),
        ("g2_min", 0 <= cfg.g2_min <= cfg.g2_max, "0 <= g2_min <= g2_max"),
        ("g2_points", cfg.g2_points >= 1, "g2_points >= 1"),
        ("scenario", cfg.scenario in wg.SCENARIOS, f"one of {', '.join(wg.SCENARIOS)}"),
        ("alpha", cfg.alpha >= 0, "alpha >= 0"),
        ("sv_db", cfg.sv_db >= 0, "sv_db >= 0"),
        ("wigner_eta", 0 < cfg.wigner_eta <= 1, "0 < wigner_eta <= 1"),
        ("dopa_db", cfg.dopa_db >= 0, "dopa_db >= 0"),
        ("n_phases", cfg.n_phases >= 2, "n_phases >= 2"),
        ("grid_points", cfg.grid_points >= 2, "grid_points >= 2"),
        ("grid_extent", cfg.grid_extent > 0, "grid_extent > 0"),
    ]
    for key, ok, msg in rules:
        if not ok:
            fail(key, msg)
    return cfg


def _parse_pairs(pairs, values: dict, lines: dict) -> None:
    for line, text in pairs:
        if "=" not in text:
            raise ConfigError(f"expected 'key = value', got {text!r}", line)
        key, raw = (part.strip() for part in text.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}", line)
        if not raw:
            raise ConfigError(f"{key}: missing value", line)
        values[key] = _convert(key, raw, line)
        lines[key] = line


def _document_pairs(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield number, body


def parse_config(text: str, overrides=()) -> RunConfig:
    """Parse a flat ``key = value`` document (``#`` starts a comment).

    ``overrides`` are extra ``key=value`` strings applied after the document.
    """
    values: dict = {}
    lines: dict = {}
    _parse_pairs(_document_pairs(text), values, lines)
    _parse_pairs((("--set", o) for o in overrides), values, lines)
    return _validate(values, lines)


def config_from_csv(text: str) -> RunConfig:
    """Recover the resolved configuration echoed in a CSV's ``#`` metadata lines."""
    pairs = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.startswith("#"):
            break
        body = raw[1:].strip()
        if "=" in body and not body.startswith("ampsense "):
            key, value = (part.strip() for part in body.split("=", 1))
            if value:
                pairs.append((number, f"{key} = {value}"))
    values: dict = {}
    lines: dict = {}
    _parse_pairs(pairs, values, lines)
    return _validate(values, lines)


# --- output ------------------------------------------------------------------


def fmt(value) -> str:
    """Shortest round-trip decimal text for floats; ``inf`` for infinities."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def write_csv(path: Path, command: str, config: RunConfig, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# ampsense {__version__} command={command}\n")
        for key, value in config.items():
            fh.write(f"# {key} = {fmt(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _cmd_snl(cfg: RunConfig):
    phys = cfg.interferometer
    try:
        value = ifm.snl(phys)
    except ValueError as exc:
        raise NumericFailure(str(exc)) from None
    n_sv = math.sinh(phys.g1) ** 2 if phys.sv_enabled else 0.0
    rows = [[value, 1e3 * value, phys.n_alpha, n_sv]]
    return (["snl_rad", "snl_mrad", "n_alpha_photons", "n_sv_photons"], rows,
            f"snl_mrad={1e3 * value:.2f}")


def _cmd_sweep(cfg: RunConfig):
    phys = cfg.interferometer
    curve = ifm.phase_sweep(phys, cfg.phi_min, cfg.phi_max, cfg.n_points, cfg.step)
    finite = np.isfinite(curve.delta_phi)
    if not finite.any():
        raise NumericFailure("fringe slope vanishes at every sampled phase")
    rows = [[p, m, v, d, curve.snl] for p, m, v, d in
            zip(curve.phis, curve.mean_n, curve.var_n, curve.delta_phi)]
    i = int(np.argmin(np.where(finite, curve.delta_phi, np.inf)))
    best = curve.delta_phi[i]
    gain_db = 20 * math.log10(curve.snl / best)
    return (["phi_rad", "mean_n_photons", "var_n_photons2", "delta_phi_rad", "snl_rad"], rows,
            f"best_delta_phi_mrad={1e3 * best:.2f} at_phi_rad={curve.phis[i]:.4f} "
            f"snl_mrad={1e3 * curve.snl:.2f} gain_db={gain_db:.2f}")


def _cmd_threshold(cfg: RunConfig):
    phys = cfg.interferometer
    try:
        eta = ifm.loss_threshold(phys)
    except ifm.NeverCrossesError as exc:
        raise NumericFailure(str(exc)) from None
    return (["eta_threshold", "g2", "snl_rad"], [[eta, phys.g2, ifm.snl(phys)]],
            f"eta_threshold={eta:.3f}")


def _cmd_qmap(cfg: RunConfig):
    etas = np.linspace(cfg.eta_min, cfg.eta_max, cfg.eta_points)
    g2s = np.linspace(cfg.g2_min, cfg.g2_max, cfg.g2_points)
    grid = ifm.advantage_map(cfg.q0, cfg.mu, etas, g2s)
    header = ["eta\\g2"] + [fmt(g) for g in g2s]
    rows = [[e, *row] for e, row in zip(etas, grid)]
    return header, rows, f"q_over_q0_min={grid.min():.4f} q_over_q0_max={grid.max():.4f}"


def _cmd_wigner(cfg: RunConfig):
    phis = np.linspace(0.0, math.pi, cfg.n_phases)
    states = wg.scenario_states(cfg.scenario, phis, cfg.alpha, cfg.sv_db, cfg.wigner_eta, cfg.dopa_db)
    # grid_extent is a minimum; widen to keep +-6 sigma of every state on the grid
    extent = cfg.grid_extent
    for state in states:
        sigma = np.sqrt(np.diag(state.cov))
        extent = max(extent, float(np.max(np.abs(state.mean) + 6.0 * sigma)))
    axis = np.linspace(-extent, extent, cfg.grid_points)
    rows = []
    integrals = []
    for k, (phi, state) in enumerate(zip(phis, states)):
        grid = wg.wigner_grid(state, axis, axis, label=f"{cfg.scenario} phi={phi!r}")
        integrals.append(grid.integral())
        for i, x in enumerate(axis):
            for j, p in enumerate(axis):
                rows.append([k, phi, x, p, grid.values[i, j]])
    sep = wg.separation_metric(states)
    return (["state_index", "phi_rad", "x", "p", "wigner_per_quadrature2"], rows,
            f"states={len(states)} extent={extent:.3f} min_integral={min(integrals):.4f} "
            f"max_separation={max(sep):.3f}")


def _read_samples(path: str):
    if not path:
        raise ConfigError("calibrate needs calib_data = <csv of pump_power,mean_photons>")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"calib_data: {exc}") from None
    samples = []
    for number, body in _document_pairs(text):
        parts = [s.strip() for s in body.split(",")]
        try:
            samples.append((float(parts[0]), float(parts[1])))
        except (ValueError, IndexError):
            if not samples:  # header row
                continue
            raise ConfigError(f"calib_data line {number}: malformed row {body!r}") from None
    return samples


def _cmd_calibrate(cfg: RunConfig):
    samples = _read_samples(cfg.calib_data)
    try:
        fit = ifm.calibrate_gain(samples)
    except ValueError as exc:
        raise NumericFailure(str(exc)) from None
    rows = []
    for power, counts in samples:
        g = fit.b * math.sqrt(power)
        rows.append([power, counts, fit.scale * math.sinh(g) ** 2, g, fit.b, fit.residual_rms])
    return (["pump_power", "mean_photons", "fitted_photons", "squeeze_factor", "b_per_sqrt_power",
             "relative_residual_rms"], rows,
            f"B={fit.b:.6g} scale={fit.scale:.6g} residual_rms={fit.residual_rms:.3g}")


_HANDLERS = {
    "snl": _cmd_snl,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "qmap": _cmd_qmap,
    "wigner": _cmd_wigner,
    "calibrate": _cmd_calibrate,
}


def run_command(name: str, config: RunConfig, out: str | Path, stdout=None) -> int:
    """Run one command, write its CSV to ``out`` and print a one-line summary."""
    stdout = stdout or sys.stdout
    if name not in _HANDLERS:
        print(f"error: unknown command {name!r}", file=sys.stderr)
        return 2
    try:
        header, rows, summary = _HANDLERS[name](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericFailure, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    try:
        write_csv(Path(out), name, config, header, rows)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return 1
    print(summary, file=stdout)
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ampsense", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value configuration file")
    ap.add_argument("--out", help="output CSV path (default: <command>.csv)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override one configuration key; repeatable")
    args = ap.parse_args(argv)

    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
        config = parse_config(text, args.set)
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run_command(args.command, config, args.out or f"{args.command}.csv")


if __name__ == "__main__":
    raise SystemExit(main())
