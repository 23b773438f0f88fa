"""Command-line front end.

    dimerfluor steady      --beta 0.785 --big-r 1000 --omega 100
    dimerfluor observables --sweep delta --grid=-0.05R:0.05R:41
    dimerfluor spectrum    --beta 0.7854 --omega 1.0R --delta 0
    dimerfluor ladder      --omega 0.05R
    dimerfluor fisher      --axis1 omega=1:100:13:log --axis2=delta_laser=-1.2R:1.2R:97
    dimerfluor reproduce   fig3 --panel e --out fig3e.csv --plot

Exit status: 0 on success, 2 for configuration or usage errors, 3 for
numerical failures. Values starting with "-" need the ``--flag=value`` form.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .effective import ValidityWarning, combined_steady
from .errors import ConfigError, NumericalError, UndefinedCorrelationError
from .estimation import MAP_AXES, fisher_information, fisher_map
from .lindblad import steady_state_of, to_collective_basis
from .observables import (
    g2_effective,
    g2_zero,
    intensity_effective,
    intensity_exact,
    omega_visibility,
)
from .params import params_from_mapping, parse_rate, read_config
from .reproduce import DEFAULT_PANELS, FIGURES, fisher_grid, reproduce
from .spectrum import (
    TRANSITION_PAIRS,
    detect_peaks,
    dressed_ladder,
    resolution_grid,
    rf_spectrum,
    strong_driving_eigensystem,
)
from .tables import Table, emit, table_to_csv, table_to_json, to_json

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

DEFAULT_GEOMETRY = {"big_r": "1000", "beta": repr(math.pi / 4)}
FISHER_GEOMETRY = {"kr12": "0.17", "delta_emit": "50"}

# flag dest -> config key
PARAM_FLAGS = {
    "gamma": "gamma", "gamma12": "gamma12", "delta_emit": "delta_emit", "j": "j_coupling",
    "kr12": "kr12", "big_r": "big_r", "beta": "beta", "omega": "omega",
    "delta": "delta_laser", "det_linewidth": "det_linewidth",
    "geometry_mode": "geometry_mode", "mu_dot_r": "mu_dot_r",
}

BARE_LABELS = ("gg", "ge", "eg", "ee")
COLLECTIVE_LABELS = ("gg", "A", "S", "ee")


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_param_flags(p):
    g = p.add_argument_group("system parameters (rates in units of gamma; suffix R = units of R)")
    g.add_argument("--config", help="key=value parameter file")
    g.add_argument("--gamma", help="local decay rate used as the unit (default 1)")
    g.add_argument("--gamma12", help="collective decay rate (default 0.999)")
    g.add_argument("--delta-emit", help="emitter detuning delta (with --j or --kr12)")
    g.add_argument("--j", help="dipole-dipole coupling J")
    g.add_argument("--kr12", help="emitter separation times the wavenumber")
    g.add_argument("--big-r", help="doublet splitting R (with --beta)")
    g.add_argument("--beta", help="mixing angle in radians (with --big-r)")
    g.add_argument("--omega", help="drive amplitude")
    g.add_argument("--delta", help="laser detuning from the two-photon resonance")
    g.add_argument("--det-linewidth", help="detector linewidth Gamma")
    g.add_argument("--geometry-mode", choices=("exact", "nearfield"))
    g.add_argument("--mu-dot-r", help="cosine between dipole and separation")


def _add_output_flags(p, grid=False):
    g = p.add_argument_group("output")
    if grid:
        g.add_argument("--grid", help="frequency grid min:max:n (suffix R allowed)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--plot", action="store_true", help="also render a PNG next to --out")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")


def build_parser():
    parser = _Parser(prog="dimerfluor", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("steady", help="steady-state density matrix")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--basis", choices=("bare", "collective"), default="bare")

    p = sub.add_parser("observables", help="intensity, g2(0) and two-photon visibility")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--sweep", choices=("delta", "omega"))
    p.add_argument("--grid", help="sweep values min:max:n[:log] (suffix R allowed)")

    p = sub.add_parser("spectrum", help="resonance-fluorescence spectrum and peaks")
    _add_param_flags(p)
    _add_output_flags(p, grid=True)
    p.add_argument("--prominence", type=float, default=1e-3,
                   help="peak prominence relative to the maximum")

    p = sub.add_parser("ladder", help="dressed-state energies and sideband frequencies")
    _add_param_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("fisher", help="Fisher information for the emitter separation")
    _add_param_flags(p)
    _add_output_flags(p, grid=True)
    p.add_argument("--eta", type=float, default=1.0, help="detection efficiency")
    p.add_argument("--axis1", help=f"map axis name=min:max:n[:log], name in {MAP_AXES}")
    p.add_argument("--axis2", help="second map axis, same syntax")
    p.add_argument("--no-step-check", action="store_true",
                   help="skip the Richardson check of the finite-difference step")

    p = sub.add_parser("reproduce", help="data for one of the reference figure sets")
    p.add_argument("figure", help=f"one of {', '.join(sorted(FIGURES))}")
    p.add_argument("--panel", help="panel letter (default depends on the figure)")
    _add_output_flags(p)
    return parser


# ---------------------------------------------------------------------------
# argument helpers


def load_params(args, default_geometry=DEFAULT_GEOMETRY):
    mapping = read_config(args.config) if args.config else {}
    for dest, key in PARAM_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            mapping[key] = value
    # half of the (big_r, beta) pair is completed from the default geometry
    pair = ("big_r", "beta")
    if sum(k in mapping for k in pair) == 1 and all(k in default_geometry for k in pair):
        missing = next(k for k in pair if k not in mapping)
        mapping[missing] = default_geometry[missing]
    return params_from_mapping(mapping, default_geometry)


def _value(text, big_r, gamma):
    text = text.strip()
    if text.endswith(("R", "r")):
        return parse_rate(text, big_r)
    return parse_rate(text) / gamma


def parse_range(text, big_r, gamma=1.0):
    """``min:max:n[:log]`` -> array; rejects empty or non-finite ranges."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise ConfigError(f"range {text!r} must be min:max:n or min:max:n:log")
    lo, hi = _value(parts[0], big_r, gamma), _value(parts[1], big_r, gamma)
    try:
        n = int(parts[2])
    except ValueError:
        raise ConfigError(f"range {text!r}: n must be an integer") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError(f"range {text!r} must be non-empty and finite")
    if len(parts) == 4:
        if lo <= 0 or hi <= 0:
            raise ConfigError(f"log range {text!r} needs positive limits")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _gamma_unit(args):
    mapping = read_config(args.config) if getattr(args, "config", None) else {}
    raw = args.gamma if args.gamma is not None else mapping.get("gamma", "1")
    return parse_rate(raw)


def _pool_map(func, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def _param_meta(params):
    meta = {"gamma": params.gamma, "gamma12": params.gamma12, "j_coupling": params.j_coupling,
            "delta_emit": params.delta_emit, "big_r": params.big_r, "omega": params.omega_drive,
            "delta_laser": params.delta_laser, "det_linewidth": params.det_linewidth}
    if params.big_r > 0:
        meta["beta"] = params.beta
    if params.kr12 is not None:
        meta["kr12"] = params.kr12
    return meta


def _write(table, args):
    text = table_to_json(table) if args.format == "json" else table_to_csv(table)
    emit(text, args.out)


def _image_path(args):
    if not args.plot:
        return None
    if not args.out or args.out == "-":
        raise UsageError("--plot needs --out so the image has somewhere to go")
    return str(Path(args.out).with_suffix(".png"))


# ---------------------------------------------------------------------------
# commands


def cmd_steady(args):
    params = load_params(args)
    image = _image_path(args)
    rho = steady_state_of(params)
    labels = BARE_LABELS
    if args.basis == "collective":
        rho = to_collective_basis(rho, params.beta)
        labels = COLLECTIVE_LABELS
    m = np.asarray(rho)
    rows = [(i, j, m[i, j].real, m[i, j].imag) for i in range(4) for j in range(4)]
    meta = _param_meta(params) | {"basis": rho.basis.value, "labels": " ".join(labels)}
    meta |= {f"pop_{lbl}": float(p) for lbl, p in zip(labels, rho.populations)}
    table = Table(("row", "col", "real", "imag"), rows, meta)
    _write(table, args)
    if image:
        from . import plotting
        plotting.map_plot(image, np.arange(4), np.arange(4), np.abs(m), "column", "row",
                          r"$|\rho_{ij}|$", title=" ".join(labels))


OBS_COLUMNS = ("I_numerical", "g2_numerical", "I_analytical", "I1", "I2", "g2_analytical",
               "V2p")


def observables_row(params):
    rho = steady_state_of(params)
    intensity = intensity_exact(rho)
    try:
        g2 = g2_zero(rho)
    except UndefinedCorrelationError:
        g2 = math.nan
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        state = combined_steady(params)
    i_eff, i1, i2 = intensity_effective(state, params.beta)
    try:
        g2e = g2_effective(state, params.beta)
    except UndefinedCorrelationError:
        g2e = math.nan
    return intensity, g2, i_eff, i1, i2, g2e, i2 / i1 if i1 > 0 else math.inf


def cmd_observables(args):
    params = load_params(args)
    image = _image_path(args)
    if (args.sweep is None) != (args.grid is None):
        raise UsageError("--sweep and --grid go together")
    meta = _param_meta(params) | {"omega_v": omega_visibility(params)}
    if args.sweep is None:
        table = Table(OBS_COLUMNS, [observables_row(params)], meta)
        _write(table, args)
        return
    values = parse_range(args.grid, params.big_r, _gamma_unit(args))
    field = "delta_laser" if args.sweep == "delta" else "omega_drive"
    points = [params.replace(**{field: float(v)}) for v in values]
    rows = _pool_map(observables_row, points, args.jobs)
    table = Table((args.sweep, *OBS_COLUMNS), np.column_stack([values, np.array(rows)]),
                  meta | {"sweep": args.sweep})
    _write(table, args)
    if image:
        from . import plotting
        r = np.array(rows)
        logx = args.sweep == "omega" and values.min() > 0
        plotting.line_plot(image, values, [(r[:, 0], "numerical", "C0-"),
                                           (r[:, 2], "analytical", "C3--")],
                           args.sweep, "I", logx=logx, logy=True)


def _spectrum_grid(args, params):
    if args.grid:
        return parse_range(args.grid, params.big_r, _gamma_unit(args))
    return resolution_grid(params.big_r, 5.0, 5)


def cmd_spectrum(args):
    params = load_params(args)
    image = _image_path(args)
    series = rf_spectrum(params, _spectrum_grid(args, params))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        peaks = detect_peaks(series, args.prominence)
    meta = _param_meta(params) | {
        "prominence": args.prominence,
        "n_peaks": len(peaks),
        "peaks": " ".join(format(p.omega, ".10g") for p in peaks),
    }
    table = Table(series.COLUMNS, series.columns(), meta)
    _write(table, args)
    if image:
        from . import plotting
        plotting.spectrum_plot(image, series, peaks, scale=params.big_r)


def cmd_ladder(args):
    params = load_params(args)
    image = _image_path(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ValidityWarning)
        ladder = dressed_ladder(params)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    exact_e, _ = strong_driving_eigensystem(params)
    rows = [(0, 0.0, 0.0)]
    for k, (name, (i, j)) in enumerate(TRANSITION_PAIRS.items(), 1):
        rows.append((k, ladder.transitions[name][0], exact_e[i - 1] - exact_e[j - 1]))
    meta = _param_meta(params) | {"omega_2ps": ladder.omega_2ps}
    meta |= {f"E{i + 1}": e for i, e in enumerate(ladder.energies)}
    meta |= {f"E{i + 1}_exact": float(e) for i, e in enumerate(exact_e)}
    table = Table(("transition", "omega_perturbative", "omega_exact"), rows, meta)
    if args.format == "json":
        emit(to_json(ladder.as_dict() | {"exact_energies": exact_e, "meta": meta}), args.out)
    else:
        _write(table, args)
    if image:
        from . import plotting
        r = np.array(rows)
        plotting.line_plot(image, r[:, 0], [(r[:, 1], "perturbative", "C0o"),
                                            (r[:, 2], "exact", "C3x")],
                           "transition", r"$\omega$")


def _parse_axis(text, params, gamma):
    name, sep, spec = text.partition("=")
    if not sep or name not in MAP_AXES:
        raise ConfigError(f"axis {text!r} must be name=min:max:n[:log] with name in {MAP_AXES}")
    return name, parse_range(spec, params.big_r, gamma)


def cmd_fisher(args):
    params = load_params(args, FISHER_GEOMETRY)
    if args.det_linewidth is None and not params.det_linewidth > 0:
        params = params.replace(det_linewidth=1.0)
    image = _image_path(args)
    gamma = _gamma_unit(args)
    omegas = (parse_range(args.grid, params.big_r, gamma) if args.grid
              else fisher_grid(params.big_r))
    check = not args.no_step_check
    meta = _param_meta(params) | {"eta": args.eta, "n_points": omegas.size,
                                  "omega_min": float(omegas.min()),
                                  "omega_max": float(omegas.max())}
    if (args.axis1 is None) != (args.axis2 is None):
        raise UsageError("--axis1 and --axis2 go together")
    if args.axis1 is None:
        report = fisher_information(params, params.kr12, omegas, eta=args.eta, check=check)
        if args.format == "json":
            emit(to_json(report.as_dict()), args.out)
        else:
            d = report.as_dict()
            _write(Table(tuple(d), [tuple(float(v) for v in d.values())], meta), args)
        return
    ax1 = _parse_axis(args.axis1, params, gamma)
    ax2 = _parse_axis(args.axis2, params, gamma)
    fmap = fisher_map(params, ax1, ax2, omegas, eta=args.eta, jobs=args.jobs, check=check)
    f = fmap.values
    n1, n2 = f.shape
    rows = np.column_stack([np.repeat(ax1[1], n2), np.tile(ax2[1], n1), f.ravel(),
                            [r.crlb for r in fmap.reports]])
    best = fmap.argmax()
    meta |= {f"argmax_{ax1[0]}": best[0], f"argmax_{ax2[0]}": best[1]}
    _write(Table((ax1[0], ax2[0], "fisher", "crlb"), rows, meta), args)
    if image:
        from . import plotting
        plotting.map_plot(image, ax2[1], ax1[1], f, ax2[0], ax1[0], "F", logz=True,
                          logy=ax1[0] == "omega")


def cmd_reproduce(args):
    if args.figure not in FIGURES:
        raise UsageError(f"unknown figure {args.figure!r}; expected one of {sorted(FIGURES)}")
    image = _image_path(args)
    panel = reproduce(args.figure, args.panel, jobs=args.jobs)
    panel.table.meta.setdefault("panel", args.panel or DEFAULT_PANELS[args.figure])
    _write(panel.table, args)
    if image:
        panel.draw(image)


COMMANDS = {
    "steady": cmd_steady,
    "observables": cmd_observables,
    "spectrum": cmd_spectrum,
    "ladder": cmd_ladder,
    "fisher": cmd_fisher,
    "reproduce": cmd_reproduce,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
