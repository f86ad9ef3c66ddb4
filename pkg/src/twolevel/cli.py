"""Command-line front end.

Subcommands: ``constants``, ``surface``, ``slice``, ``lifetime``,
``validate``. Physical inputs carry their unit in the flag name
(``--tau-s``, ``--omega-rabi-radps``, ``--t-s-ns`` ...). Flag abbreviations
are disabled, so a unitless ``--omega-rabi`` is rejected.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .dynamics import DriveKind, DriveSpec
from .lifetime import lifetime_constants
from .oracle import OdeConfig
from .physcore import (
    get_atom,
    load_presets,
    spontaneous_emission_time,
    to_ghz_rad,
    to_mhz,
)
from .surface import (
    GridSpec,
    ResourceLimitError,
    default_grid,
    export_slice,
    export_surface,
    find_unit_peaks,
    generate_surface,
    spectral_slice,
)
from .validation import SUITES, run_suite

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _positive(text):
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg(text):
    v = _finite(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _count(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("sample counts must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twolevel", allow_abbrev=False,
                                description="Two-level atom probabilities, lifetimes and PTF surfaces.")
    p.add_argument("--version", action="version", version=f"twolevel {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, allow_abbrev=False, **kw)

    c = add("constants", help="atom data and spontaneous emission time")
    c.add_argument("--atom", default="lithium")
    c.add_argument("--presets", metavar="PATH", help="extra atom presets (INI key/value file)")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out", metavar="PATH")

    s = add("surface", help="probability surface over time and detuning")
    s.add_argument("--kind", choices=("p1", "p2"), default="p1")
    s.add_argument("--x-min", type=_nonneg, help="scaled time X = tau*omega, lower end")
    s.add_argument("--x-max", type=_finite)
    s.add_argument("--y-min", type=_finite, help="scaled detuning Y = detuning/omega, lower end")
    s.add_argument("--y-max", type=_finite)
    s.add_argument("--nx", type=_count)
    s.add_argument("--ny", type=_count)
    s.add_argument("--omega-rabi-radps", type=_nonneg,
                   help="switch to physical axes with this Rabi frequency")
    s.add_argument("--tau-min-s", type=_nonneg)
    s.add_argument("--tau-max-s", type=_positive)
    s.add_argument("--detuning-min-radps", type=_finite)
    s.add_argument("--detuning-max-radps", type=_finite)
    s.add_argument("--detuning-radps", type=_positive,
                   help="symmetric detuning half-range (physical axes)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("csv", "json", "matrix"), default="matrix")
    s.add_argument("--out", metavar="PATH")

    sl = add("slice", help="probability versus detuning at a fixed time")
    sl.add_argument("--kind", choices=("p1", "p2"), default="p2")
    sl.add_argument("--tau-s", type=_positive, required=True)
    sl.add_argument("--omega-rabi-radps", type=_nonneg, required=True)
    sl.add_argument("--detuning-min-radps", type=_finite)
    sl.add_argument("--detuning-max-radps", type=_finite)
    sl.add_argument("--detuning-radps", type=_positive, help="symmetric half-range")
    sl.add_argument("--n", type=_count, default=2001)
    sl.add_argument("--find-peaks", action="store_true")
    sl.add_argument("--peak-tol", type=_positive, default=1e-9)
    sl.add_argument("--format", choices=("csv", "json", "matrix"), default="csv")
    sl.add_argument("--out", metavar="PATH")

    lt = add("lifetime", help="lifetime constants from the spontaneous emission time")
    src = lt.add_mutually_exclusive_group()
    src.add_argument("--t-s-ns", type=_positive)
    src.add_argument("--atom")
    lt.add_argument("--presets", metavar="PATH")
    lt.add_argument("--format", choices=("text", "json"), default="json")
    lt.add_argument("--out", metavar="PATH")

    v = add("validate", help="compare closed forms with the ODE oracle")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--rel-tol", type=_positive, default=1e-10)
    v.add_argument("--abs-tol", type=_positive, default=1e-12)
    v.add_argument("--max-step-s", type=_positive, help="integrator step cap (default: 1/20 period)")
    v.add_argument("--method", choices=("DOP853", "RK45", "RK23"), default="DOP853")
    v.add_argument("--max-error", type=_positive, help="pass bar (default 1e-6; 1e-8 relative for damped)")
    v.add_argument("--coupling-factor", type=_positive, default=1.0,
                   help="bichromatic coupling k in k*omega*cos(detuning*t)")
    v.add_argument("--informational", action="store_true", help="always exit 0, report only")
    v.add_argument("--out", metavar="PATH")
    return p


def _provenance(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}
    return {"package": "twolevel", "version": __version__, "command": args.command, "parameters": params}


def _emit(data, out):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out:
        try:
            with open(out, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _atom(args):
    extra = load_presets(args.presets) if getattr(args, "presets", None) else None
    try:
        return get_atom(args.atom, extra)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_constants(args):
    atom = _atom(args)
    t_s = spontaneous_emission_time(atom)
    report = {
        "atom": atom.name,
        "omega0_radps": atom.omega0,
        "dipole_Cm": atom.dipole,
        "dipole_au": atom.dipole_au,
        "fine_splitting_radps": atom.fine_splitting,
        "t_s_s": t_s,
        "gamma_s_per_s": 1.0 / t_s,
        "display": {
            "omega0_GHz_rad": to_ghz_rad(atom.omega0),
            "t_s_ns": t_s * 1e9,
            "gamma_s_MHz": to_mhz(1.0 / t_s),
            "fine_splitting_GHz_rad": None if atom.fine_splitting is None else to_ghz_rad(atom.fine_splitting),
        },
        "notes": atom.notes,
        "provenance": _provenance(args),
    }
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        lines = [
            f"atom            {atom.name}",
            f"omega0          {atom.omega0:.6e} rad/s  ({to_ghz_rad(atom.omega0):.4g} GHz.rad)",
            f"dipole          {atom.dipole:.6e} C m  ({atom.dipole_au:.5g} a.u.)",
        ]
        if atom.fine_splitting is not None:
            lines.append(f"fine splitting  {atom.fine_splitting:.6e} rad/s  "
                         f"({to_ghz_rad(atom.fine_splitting):.4g} GHz.rad)")
        lines += [
            f"t_S             {t_s:.6e} s  ({t_s * 1e9:.4g} ns)",
            f"gamma_S         {1.0 / t_s:.6e} 1/s  ({to_mhz(1.0 / t_s):.4g} MHz)",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _surface_spec(args):
    physical = args.omega_rabi_radps is not None
    dimless_flags = [args.x_min, args.x_max, args.y_min, args.y_max]
    phys_flags = [args.tau_min_s, args.tau_max_s, args.detuning_min_radps,
                  args.detuning_max_radps, args.detuning_radps]
    if not physical:
        if any(f is not None for f in phys_flags):
            raise UsageError("physical-axis flags need --omega-rabi-radps")
        base = default_grid(args.kind)
        fields = dict(x_min=base.x_min, x_max=base.x_max, y_min=base.y_min, y_max=base.y_max,
                      nx=base.nx, ny=base.ny)
        for key in ("x_min", "x_max", "y_min", "y_max", "nx", "ny"):
            if getattr(args, key) is not None:
                fields[key] = getattr(args, key)
        defaults = all(f is None for f in dimless_flags)
        return GridSpec(dimensionless=True, kind=args.kind, default_ranges=defaults, **fields), None
    if any(f is not None for f in dimless_flags):
        raise UsageError("--x-*/--y-* are scaled-axis flags; use --tau-*-s/--detuning-*-radps")
    w = args.omega_rabi_radps
    if w == 0:
        raise UsageError("--omega-rabi-radps must be positive for physical axes")
    defaults = args.tau_max_s is None and args.detuning_radps is None and args.detuning_max_radps is None
    tau_min = args.tau_min_s if args.tau_min_s is not None else 0.0
    tau_max = args.tau_max_s if args.tau_max_s is not None else 4.0 * math.pi / w
    if args.detuning_radps is not None:
        if args.detuning_min_radps is not None or args.detuning_max_radps is not None:
            raise UsageError("use either --detuning-radps or --detuning-min/max-radps")
        d_min, d_max = -args.detuning_radps, args.detuning_radps
    else:
        d_min = args.detuning_min_radps if args.detuning_min_radps is not None else -4.0 * w
        d_max = args.detuning_max_radps if args.detuning_max_radps is not None else 4.0 * w
    nx = args.nx if args.nx is not None else 257
    ny = args.ny if args.ny is not None else 161
    kind = DriveKind.MONOCHROMATIC if args.kind == "p1" else DriveKind.BICHROMATIC_SYMMETRIC
    spec = GridSpec(tau_min, tau_max, d_min, d_max, nx, ny, False, args.kind, default_ranges=defaults)
    return spec, DriveSpec(kind, w)


def cmd_surface(args):
    nx = args.nx if args.nx is not None else 257
    ny = args.ny if args.ny is not None else 161
    if nx * ny > 100_000_000:
        raise ResourceLimitError(f"{nx} x {ny} samples exceeds the limit of 100000000")
    spec, drive = _surface_spec(args)
    surf = generate_surface(spec, drive, workers=max(1, args.workers))
    surf.metadata["provenance"] = _provenance(args)
    _emit(export_surface(surf, args.format), args.out)
    return EXIT_OK


def cmd_slice(args):
    if args.detuning_radps is not None:
        if args.detuning_min_radps is not None or args.detuning_max_radps is not None:
            raise UsageError("use either --detuning-radps or --detuning-min/max-radps")
        d_min, d_max = -args.detuning_radps, args.detuning_radps
    else:
        if args.detuning_min_radps is None or args.detuning_max_radps is None:
            raise UsageError("give --detuning-radps or both --detuning-min-radps and --detuning-max-radps")
        d_min, d_max = args.detuning_min_radps, args.detuning_max_radps
    sl = spectral_slice(args.kind, args.tau_s, args.omega_rabi_radps, d_min, d_max, args.n)
    if args.find_peaks:
        sl.peaks = find_unit_peaks(args.kind, args.omega_rabi_radps, args.tau_s, d_min, d_max,
                                   tol=args.peak_tol)
        sl.peak_tolerance = args.peak_tol
    _emit(export_slice(sl, args.format, metadata={"provenance": _provenance(args)}), args.out)
    if args.find_peaks:
        stream = sys.stderr if not args.out else sys.stdout
        print(f"{len(sl.peaks)} unit-probability detuning(s)", file=stream)
        for d in sl.peaks:
            print(f"  {d:.17g} rad/s", file=stream)
    return EXIT_OK


def cmd_lifetime(args):
    if args.t_s_ns is not None:
        t_s, source = args.t_s_ns * 1e-9, "t_s_ns flag"
    else:
        args.atom = args.atom or "lithium"
        atom = _atom(args)
        t_s, source = spontaneous_emission_time(atom), f"spontaneous emission time of {atom.name}"
    model = lifetime_constants(t_s)
    report = model.to_dict()
    report["t_s_source"] = source
    report["display_MHz"] = {k: to_mhz(getattr(model, k))
                             for k in ("gamma_s", "gamma_l", "gamma_lg", "gamma_l_pi", "gamma_lg_pi")}
    report["provenance"] = _provenance(args)
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        lines = [f"t_S        {model.t_s:.6e} s ({source})",
                 f"pi*        {model.pi_star:.15g}  (pi* - pi = {model.pi_star - math.pi:.6g}, "
                 f"residual {model.residual_pi_star:.2e})",
                 f"x_small    {model.x_small:.15g}  (residual {model.residual_x_small:.2e})",
                 f"gamma_S    {to_mhz(model.gamma_s):.6g} MHz",
                 f"gamma_L    {to_mhz(model.gamma_l):.6g} MHz  (pi*/19 t_S; literal pi: "
                 f"{to_mhz(model.gamma_l_pi):.6g})",
                 f"Gamma_Lg   {to_mhz(model.gamma_lg):.6g} MHz  (pi*/20 t_S; literal pi: "
                 f"{to_mhz(model.gamma_lg_pi):.6g})",
                 f"19/pi*     {model.ratio_19:.6g}  (19/pi = {model.ratio_19_pi:.6g})",
                 f"t_L1       {model.t_l1:.6e} s",
                 f"t_L2       {model.t_l2:.6e} s  (t_S/x_small: {model.t_l2_from_small_root:.6e} s)"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_validate(args):
    cfg = OdeConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_step=args.max_step_s, method=args.method)
    kwargs = {"coupling_factor": args.coupling_factor} if args.suite == "bichromatic" else {}
    report = run_suite(args.suite, cfg, args.max_error, **kwargs)
    report["informational"] = bool(args.informational)
    report["provenance"] = _provenance(args)
    _emit(_json(report), args.out)
    if args.informational or report["passed"]:
        return EXIT_OK
    return EXIT_VALIDATION


COMMANDS = {
    "constants": cmd_constants,
    "surface": cmd_surface,
    "slice": cmd_slice,
    "lifetime": cmd_lifetime,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"twolevel: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError, FileNotFoundError) as exc:
        print(f"twolevel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
