"""Command-line front end: sweeps, crossing tables, regimes, analytic checks.

Subcommands
-----------
sweep       diagonalize along a 1D parameter grid, emit CSV/JSON rows
crossings   run a sweep, then locate and refine avoided crossings of a level
regimes     coupling-regime boundaries of the undriven model (JSON)
jc-perturb  degenerate-perturbation report against the dense numerics (JSON)
reproduce   run a named figure preset (see asymrabi.presets)

Everything is expressed in units of the field frequency (omega = 1).
Output files are written to a temporary sibling and renamed into place, so
a crashed run never leaves a partial file.  Exit codes: 0 success, 2 config
error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import jc_analytic, presets, spectra
from .entanglement import entropy_of_state
from .fock import TruncatedSpace
from .models import (
    MODEL_ASYM_QJC,
    MODEL_ASYM_QRM,
    ModelParams,
    build_hamiltonian,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_MODEL_CHOICES = ("qrm", "asym_qrm", "qjc", "asym_qjc", "asym_qrm_polaron_frame")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved sweep configuration (omega fixed to 1 as the unit)."""

    model_tag: str
    omega0: float
    g: float
    epsilon: float
    axes: tuple
    grids: tuple  # tuple of ndarrays
    n_levels: int
    n_trunc: object  # int or "auto"
    rel_tol: float
    out: Optional[str]
    fmt: str
    jobs: int
    debug_checks: bool = False

    def __post_init__(self):
        if self.n_levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.n_levels}")
        for grid in self.grids:
            if len(grid) < 1:
                raise ConfigError("grid count must be >= 1")
        if self.n_trunc == "auto":
            if self.rel_tol <= 0:
                raise ConfigError("rel-tol must be positive when trunc is 'auto'")
        elif not (isinstance(self.n_trunc, int) and self.n_trunc >= 1):
            raise ConfigError(f"trunc must be a positive integer or 'auto', got {self.n_trunc!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")

    @property
    def base_params(self) -> ModelParams:
        return ModelParams(omega0=self.omega0, g=self.g, epsilon=self.epsilon)


def _parse_grid_spec(text: str):
    """Parse ``min:max:count`` into a strictly increasing grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}") from None
    if count < 1:
        raise ConfigError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return np.array([lo])
    if hi <= lo:
        raise ConfigError(f"grid must be increasing, got min {lo} >= max {hi}")
    return np.linspace(lo, hi, count)


def _parse_trunc(text: str):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"trunc must be an integer or 'auto', got {text!r}") from None
    return value


def _atomic_write(path: str, text: str):
    """Write-then-rename so partially written files never survive."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(records: list, columns: list, fmt: str, out: Optional[str]):
    if fmt == "csv":
        lines = [",".join(columns)]
        for rec in records:
            lines.append(",".join(_fmt(rec[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([{c: rec[c] for c in columns} for rec in records], indent=1) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        _atomic_write(out, text)


def _resolve_trunc(config: RunConfig) -> int:
    """Resolve 'auto' truncation once, at the most demanding grid corner."""
    if config.n_trunc != "auto":
        return config.n_trunc
    hard = config.base_params
    for axis, grid in zip(config.axes, config.grids):
        hard = hard.replace(**{axis: float(np.max(grid))})
    return spectra.converged_truncation(
        hard,
        n_levels=config.n_levels,
        rel_tol=config.rel_tol,
        n_start=32,
        model_tag=config.model_tag,
    )


def _run_sweep(config: RunConfig) -> spectra.SweepResult:
    n_trunc = _resolve_trunc(config)
    if len(config.axes) == 1:
        return spectra.sweep(
            config.model_tag,
            config.base_params,
            config.axes[0],
            config.grids[0],
            n_levels=config.n_levels,
            n_trunc=n_trunc,
            jobs=config.jobs,
            debug_checks=config.debug_checks,
        )
    return spectra.sweep_2d(
        config.model_tag,
        config.base_params,
        config.axes,
        config.grids,
        n_levels=config.n_levels,
        n_trunc=n_trunc,
        jobs=config.jobs,
        debug_checks=config.debug_checks,
    )


def _sweep_records(result: spectra.SweepResult):
    if result.is_1d:
        columns = ["axis1", "level", "energy", "energy_rel", "entropy", "n_trunc"]
    else:
        columns = ["axis1", "axis2", "level", "energy", "energy_rel", "entropy", "n_trunc"]
    return list(result.iter_records()), columns


def _add_common_sweep_args(sub):
    sub.add_argument("--model", default="asym_qrm", choices=_MODEL_CHOICES)
    sub.add_argument("--omega0", type=float, default=1.0, help="atom frequency (units of omega)")
    sub.add_argument("--g", type=float, default=0.0, help="coupling strength (units of omega)")
    sub.add_argument("--epsilon", type=float, default=0.0, help="drive amplitude (units of omega)")
    sub.add_argument("--axis", default="g", choices=spectra.SWEEP_AXES)
    sub.add_argument("--grid", default="0:3:121", help="sweep grid as min:max:count")
    sub.add_argument("--levels", type=int, default=8, help="number of lowest levels")
    sub.add_argument("--trunc", default="400", help="Fock truncation, an integer or 'auto'")
    sub.add_argument("--rel-tol", type=float, default=1e-8, help="convergence tolerance for 'auto'")
    sub.add_argument("--jobs", type=int, default=1, help="max concurrent grid points")
    sub.add_argument("--debug-checks", action="store_true",
                     help="verify rotated-frame spectra and field-side entropies per point")
    sub.add_argument("--out", default=None, help="output path (stdout when omitted)")
    sub.add_argument("--format", default="csv", choices=("csv", "json"))


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        model_tag=args.model,
        omega0=args.omega0,
        g=args.g,
        epsilon=args.epsilon,
        axes=(args.axis,),
        grids=(_parse_grid_spec(args.grid),),
        n_levels=args.levels,
        n_trunc=_parse_trunc(args.trunc),
        rel_tol=args.rel_tol,
        out=args.out,
        fmt=args.format,
        jobs=args.jobs,
        debug_checks=args.debug_checks,
    )


def _cmd_sweep(args) -> int:
    result = _run_sweep(_config_from_args(args))
    records, columns = _sweep_records(result)
    _emit(records, columns, args.format, args.out)
    return EXIT_OK


def _cmd_crossings(args) -> int:
    if args.gap_threshold <= 0:
        raise ConfigError(f"gap-threshold must be positive, got {args.gap_threshold}")
    config = _config_from_args(args)
    if args.level + 1 > config.n_levels:
        config = RunConfig(**{**config.__dict__, "n_levels": args.level + 1})
    result = _run_sweep(config)
    events = spectra.detect_avoided_crossings(result, args.level, args.gap_threshold)
    records = [
        {
            "level": ev.level_low,
            "locus": ev.locus,
            "min_gap": ev.min_gap,
            "bracket_lo": ev.bracket[0],
            "bracket_hi": ev.bracket[1],
        }
        for ev in events
    ]
    _emit(records, ["level", "locus", "min_gap", "bracket_lo", "bracket_hi"], args.format, args.out)
    return EXIT_OK


def _cmd_regimes(args) -> int:
    base = ModelParams(omega0=args.omega0, g=0.0, epsilon=0.0)
    boundaries = spectra.classify_regimes(
        base,
        g_max=args.g_max,
        n_levels=args.levels,
        n_trunc=_parse_trunc(args.trunc),
        quasi_degeneracy_tol=args.tol,
    )
    payload = {
        "g_cross1": boundaries.g_cross1,
        "g_coalesce": boundaries.g_coalesce,
        "quasi_degeneracy_tol": boundaries.quasi_degeneracy_tol,
    }
    text = json.dumps(payload, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        _atomic_write(args.out, text)
    return EXIT_OK


def _cmd_jc_perturb(args) -> int:
    try:
        g_star = jc_analytic.find_degenerate_coupling(args.n, args.delta)
    except jc_analytic.NoDegeneracyError as exc:
        text = json.dumps(
            {"degenerate": False, "n": args.n, "delta": args.delta, "reason": str(exc)},
            indent=1,
        ) + "\n"
        if args.out is None:
            sys.stdout.write(text)
        else:
            _atomic_write(args.out, text)
        return EXIT_OK

    result = jc_analytic.degenerate_perturbation(args.n, args.delta, args.epsilon)
    n_trunc = _parse_trunc(args.trunc)
    if n_trunc == "auto":
        raise ConfigError("jc-perturb needs an explicit integer truncation")
    params = ModelParams(omega0=1.0 + args.delta, g=g_star, epsilon=args.epsilon)
    space = TruncatedSpace(n_trunc)
    sol = spectra.diagonalize(build_hamiltonian(MODEL_ASYM_QJC, params, space), args.n + 8)
    pair = spectra.nearest_adjacent_pair(sol.energies, result.e0)
    gap_numeric = float(sol.energies[pair + 1] - sol.energies[pair])
    # The symmetric zeroth-order combination carries the +eps D_n D_{n+1}
    # shift, so it matches the upper level of the split pair.
    entropy_upper = entropy_of_state(sol.states[:, pair + 1], space)
    entropy_lower = entropy_of_state(sol.states[:, pair], space)
    payload = {
        "degenerate": True,
        "n": args.n,
        "delta": args.delta,
        "epsilon": args.epsilon,
        "g_star": result.g_star,
        "e0": result.e0,
        "e1_plus": result.e1_plus,
        "e1_minus": result.e1_minus,
        "splitting_perturbative": result.e1_plus - result.e1_minus,
        "gap_numeric": gap_numeric,
        "entropy_perturbative": result.entropy,
        "entropy_numeric": entropy_upper,
        "entropy_numeric_lower": entropy_lower,
        "n_trunc": n_trunc,
    }
    text = json.dumps(payload, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        _atomic_write(args.out, text)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    preset = presets.PRESETS[args.figure]
    n_trunc = preset.n_trunc if args.trunc is None else _parse_trunc(args.trunc)
    grids = []
    for lo, hi, count in preset.grids:
        count = count if args.points is None else args.points
        grids.append(np.linspace(lo, hi, count) if count > 1 else np.array([lo]))
    config = RunConfig(
        model_tag=preset.model_tag,
        omega0=preset.omega0,
        g=preset.g,
        epsilon=preset.epsilon,
        axes=preset.axes,
        grids=tuple(grids),
        n_levels=preset.n_levels,
        n_trunc=n_trunc,
        rel_tol=1e-8,
        out=args.out,
        fmt=args.format,
        jobs=args.jobs,
    )
    result = _run_sweep(config)
    records, columns = _sweep_records(result)
    _emit(records, columns, config.fmt, config.out)
    return EXIT_OK


def _apply_config_file(parser, argv):
    """Load flat key/value defaults from --config; explicit flags still win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return
    try:
        with open(known.config) as handle:
            values = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {known.config}: {exc}") from exc
    if not isinstance(values, dict):
        raise ConfigError("config file must hold a flat JSON object")
    cleaned = {str(k).replace("-", "_"): v for k, v in values.items()}
    for sub in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
        valid = {a.dest for a in sub._actions}  # noqa: SLF001
        sub.set_defaults(**{k: v for k, v in cleaned.items() if k in valid})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymrabi",
        description="Spectra and entanglement of the driven Rabi/Jaynes-Cummings models",
    )
    parser.add_argument("--config", default=None, help="flat JSON file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="1D parameter sweep")
    _add_common_sweep_args(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cross = sub.add_parser("crossings", help="avoided-crossing table for one level")
    _add_common_sweep_args(p_cross)
    p_cross.add_argument("--level", type=int, required=True, help="level index (1-based)")
    p_cross.add_argument("--gap-threshold", type=float, required=True,
                         help="count gap minima below this value (units of omega)")
    p_cross.set_defaults(func=_cmd_crossings)

    p_reg = sub.add_parser("regimes", help="coupling-regime boundaries (epsilon = 0)")
    p_reg.add_argument("--omega0", type=float, default=1.0)
    p_reg.add_argument("--g-max", type=float, default=3.0)
    p_reg.add_argument("--levels", type=int, default=8)
    p_reg.add_argument("--trunc", default="400")
    p_reg.add_argument("--tol", type=float, default=spectra.QUASI_DEGENERACY_TOL,
                       help="quasi-degeneracy tolerance (units of omega)")
    p_reg.add_argument("--out", default=None)
    p_reg.set_defaults(func=_cmd_regimes)

    p_jc = sub.add_parser("jc-perturb", help="degenerate perturbation vs dense numerics")
    p_jc.add_argument("--n", type=int, default=1, help="crossing sector index")
    p_jc.add_argument("--delta", type=float, default=0.5, help="detuning omega0 - omega")
    p_jc.add_argument("--epsilon", type=float, default=0.05)
    p_jc.add_argument("--trunc", default="60")
    p_jc.add_argument("--out", default=None)
    p_jc.set_defaults(func=_cmd_jc_perturb)

    p_rep = sub.add_parser("reproduce", help="run a named figure preset")
    p_rep.add_argument("figure", choices=sorted(presets.PRESETS))
    p_rep.add_argument("--trunc", default=None, help="override the preset truncation")
    p_rep.add_argument("--points", type=int, default=None, help="override grid point counts")
    p_rep.add_argument("--jobs", type=int, default=1)
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--format", default="csv", choices=("csv", "json"))
    p_rep.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors carry code 2
        return int(exc.code or 0)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        spectra.DiagonalizationError,
        spectra.SweepPointError,
        spectra.TruncationCapError,
        spectra.RegimeNotFoundError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
