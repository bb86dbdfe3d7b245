"""Command-line front end: ``mmrabi <command> [options]``.

Every command writes its results into ``--out`` (CSV for series, JSON for
summaries) and exits 0 on success, 1 on a numerical failure and 2 on a
usage or configuration error.  Errors are reported on stderr as a single
JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np
import scipy.linalg

from . import __version__
from .analysis import (
    coupling_cutoff_curve,
    dressed_transition_series,
    lamb_shift_estimate,
    nonrenormalized_series,
    standard_lamb_shift,
)
from .circuit import charging_energy, derived_mode_parameters
from .config import RunConfig, parse_config
from .constants import GHZ, H_PLANCK, physical_constants
from .cpb import diagonalize_cpb, transition_frequency
from .errors import ConfigError, NumericalError
from .invariants import run_checks
from .modes import bogoliubov_diagonalize, build_quadratic_form

COMMANDS = ("converge", "converge-naive", "couplings", "modes", "estimate", "cpb", "check")
EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
TWO_PI = 2.0 * math.pi


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _plain(obj):
    # numpy scalars and arrays into JSON-native types
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def write_json(path: Path, obj):
    text = json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False)
    path.write_bytes((text + "\n").encode("utf-8"))


def _summary(command, cfg: RunConfig, caught, **extra):
    echo = cfg.to_dict()
    echo.pop("out_dir")
    out = {
        "command": command,
        "version": __version__,
        "config": echo,
        "constants": physical_constants(),
        "warnings": sorted({str(w.message) for w in caught}),
    }
    out.update(extra)
    return out


def _ghz(energy):
    return energy / H_PLANCK / GHZ


def _run_series(cfg, out, caught, naive):
    params = cfg.circuit()
    m_range = range(cfg.m_min, cfg.m_max + 1)
    sweep = nonrenormalized_series if naive else dressed_transition_series
    series = sweep(params, m_range, budget=cfg.budget, n_max=cfg.n_max, seed=cfg.seed)
    name = "converge_naive" if naive else "converge"
    rows = zip(series.m_values, series.f_dressed, series.f_bare, series.e_c, series.g0,
               series.ambiguous)
    write_csv(out / f"{name}.csv",
              ["M", "f_dressed_ghz", "f_bare_ghz", "e_c_ghz", "g0_ghz", "ambiguous_flag"], rows)
    write_json(out / f"{name}.json", _summary(
        "converge-naive" if naive else "converge", cfg, caught,
        renormalized=series.renormalized,
        steps_ghz=series.steps(),
        truncation=series.plan_used,
    ))
    return EXIT_OK


def cmd_converge(cfg, out, caught):
    return _run_series(cfg, out, caught, naive=False)


def cmd_converge_naive(cfg, out, caught):
    return _run_series(cfg, out, caught, naive=True)


def cmd_couplings(cfg, out, caught):
    curve = coupling_cutoff_curve(cfg.circuit(), cfg.modes, n_max=cfg.n_max)
    rows = zip(curve.m, curve.g / GHZ, curve.mode_freq / GHZ, curve.low_asymptote / GHZ)
    write_csv(out / "couplings.csv",
              ["m", "g_ghz", "mode_freq_ghz", "low_asymptote_ghz"], rows)
    write_json(out / "couplings.json", _summary(
        "couplings", cfg, caught,
        modes=cfg.modes,
        m_c=curve.m_c,
        knee=curve.knee,
        high_asymptote_ghz=curve.high_asymptote / GHZ,
    ))
    return EXIT_OK


def cmd_modes(cfg, out, caught):
    params = cfg.circuit()
    derived = derived_mode_parameters(params, cfg.modes)
    if params.cj == 0:
        normal = derived.omega
    else:
        normal = bogoliubov_diagonalize(build_quadratic_form(derived)).omega
    rows = zip(range(cfg.modes), derived.omega / TWO_PI / GHZ, normal / TWO_PI / GHZ)
    write_csv(out / "modes.csv", ["m", "bare_freq_ghz", "normal_freq_ghz"], rows)
    write_json(out / "modes.json", _summary("modes", cfg, caught, modes=cfg.modes,
                                            e_c_ghz=_ghz(derived.e_c)))
    return EXIT_OK


def cmd_estimate(cfg, out, caught):
    params = cfg.circuit()
    rows = []
    for m in range(cfg.m_max):
        with warnings.catch_warnings(record=True) as local:
            warnings.simplefilter("always", RuntimeWarning)
            cubed = lamb_shift_estimate(params, m)
        lamb = standard_lamb_shift(params, m)
        omega_m = (2 * m + 1) * params.omega0
        rows.append((m, omega_m / TWO_PI / GHZ, cubed.chi / 1e6, lamb.chi / 1e6, not local))
    write_csv(out / "estimate.csv",
              ["m", "mode_freq_ghz", "chi_mhz", "chi_standard_mhz", "dispersive_flag"], rows)
    write_json(out / "estimate.json", _summary("estimate", cfg, caught))
    return EXIT_OK


def cmd_cpb(cfg, out, caught):
    params = cfg.circuit()
    e_c = charging_energy(params, cfg.m_min)
    spec = diagonalize_cpb(e_c, params.ej, cfg.n_max)
    count = min(spec.dim, 10)
    write_json(out / "cpb.json", _summary(
        "cpb", cfg, caught,
        modes=cfg.m_min,
        e_c_ghz=_ghz(e_c),
        e_j_ghz=_ghz(params.ej),
        f_ge_ghz=transition_frequency(spec, 0, 1) / TWO_PI / GHZ,
        levels_ghz=_ghz(spec.eps[:count] - spec.eps[0]),
        n_from_ground=spec.n_elem[0, :count],
    ))
    return EXIT_OK


def cmd_check(cfg, out, caught):
    results = run_checks(cfg.circuit())
    ok = all(r.passed for r in results)
    write_json(out / "check.json", _summary(
        "check", cfg, caught,
        passed=ok,
        checks=[{"name": r.name, "value": r.value, "tol": r.tol, "passed": r.passed}
                for r in results],
    ))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} {r.value:.3e} (tol {r.tol:.0e})")
    return EXIT_OK if ok else EXIT_NUMERIC


HANDLERS = {
    "converge": cmd_converge,
    "converge-naive": cmd_converge_naive,
    "couplings": cmd_couplings,
    "modes": cmd_modes,
    "estimate": cmd_estimate,
    "cpb": cmd_cpb,
    "check": cmd_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="mmrabi", description="Multimode Rabi model toolkit.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="key = value configuration file")
    parser.add_argument("--out", type=Path, help="output directory (default: config out_dir)")
    parser.add_argument("--modes", type=int, help="mode count for couplings/modes")
    parser.add_argument("--cj-ff", type=float, help="override the junction capacitance (fF)")
    parser.add_argument("--seed", type=int, help="seed of the iterative-solver start vector")
    return parser


def _error(kind, message, code):
    record = {"error": kind, "message": message, "exit_code": code}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def load_config(args) -> RunConfig:
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        cfg = parse_config(text)
    else:
        cfg = RunConfig()
    out_dir = str(args.out) if args.out is not None else None
    return cfg.with_overrides(modes=args.modes, cj_ff=args.cj_ff, seed=args.seed,
                              out_dir=out_dir)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_USAGE)
    except ConfigError as exc:
        return _error("config", str(exc), EXIT_USAGE)

    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RuntimeWarning)
            return HANDLERS[args.command](cfg, out, caught)
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError,
            scipy.linalg.LinAlgError) as exc:
        return _error("numeric", str(exc), EXIT_NUMERIC)
    except (ValueError, OSError) as exc:
        return _error("usage", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
