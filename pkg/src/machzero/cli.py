"""Command line front end: scenario files in, CSV tables out.

Subcommands: run (one tracker run), sweep (kappa sweep plus limit model),
limit (limit model alone), compare (tracker vs finite volume oracle),
audit (functional decrease check on the event ledger).

Exit codes: 0 success, 1 bad configuration, 2 numerical failure,
3 failed acceptance check (audit violation or compare above threshold).
"""

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import fronttracker as ft
from . import glimm as _glimm
from . import limits as _limits
from . import oracle as _oracle
from .eos import GammaLaw
from .errors import (MachZeroError, ParseError, ValidationError,
                     InadmissibleScenario)
from .laxwaves import State

_FLOAT_FMT = "%.17g"


# --------------------------------------------------------------------------
# scenario parsing

def _law(raw, path):
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: expected a table with k and gamma")
    extra = set(raw) - {"k", "gamma"}
    if extra:
        raise ValidationError(f"{path}: unknown keys {sorted(extra)}")
    return GammaLaw(k=raw.get("k", 1.0), gamma=raw.get("gamma", 1.0))


def _state(raw, path):
    if not isinstance(raw, dict) or set(raw) != {"p", "v"}:
        raise ValidationError(f"{path}: expected a table with p and v")
    return State(float(raw["p"]), float(raw["v"]))


_SCALARS = {"p_bar": float, "kappa": float, "m": float, "p_o": float,
            "eps": float, "t_end": float, "budget": float, "seed": int,
            "event_cap": int, "dt_piston": float, "name": str}
_LISTS = {"snapshot_times", "trace_z", "kappas"}


def parse_scenario(path):
    """Read a TOML scenario file into a validated Scenario."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc

    kw = {}
    for key, val in raw.items():
        if key in ("gas", "liquid_base"):
            kw[key] = _law(val, key)
        elif key == "initial_left":
            kw[key] = _state(val, key)
        elif key == "jumps":
            jumps = []
            for i, item in enumerate(val):
                if not isinstance(item, dict) or set(item) != {"z", "p", "v"}:
                    raise ValidationError(
                        f"jumps[{i}]: expected a table with z, p, v")
                jumps.append((float(item["z"]),
                              State(float(item["p"]), float(item["v"]))))
            kw[key] = tuple(jumps)
        elif key == "z_window":
            if not (isinstance(val, list) and len(val) == 2):
                raise ValidationError("z_window: expected [lo, hi]")
            kw[key] = (float(val[0]), float(val[1]))
        elif key in _LISTS:
            kw[key] = tuple(float(x) for x in val)
        elif key in _SCALARS:
            kw[key] = _SCALARS[key](val)
        else:
            raise ValidationError(f"{key}: unknown scenario key")

    kw.setdefault("gas", GammaLaw())
    kw.setdefault("liquid_base", GammaLaw())
    kw.setdefault("p_bar", kw["gas"].k)
    kw.setdefault("kappa", 1.0)
    try:
        scn = ft.Scenario(**kw)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc
    scn.validate()
    for z, _ in scn.jumps:
        if z == 0.0 or z == scn.m:
            raise ValidationError(
                f"jumps: datum must be continuous at the interface z={z}")
    return scn


def _apply_overrides(scn, args):
    if getattr(args, "kappa", None) is not None:
        scn = replace(scn, kappa=args.kappa)
    if getattr(args, "eps", None) is not None:
        scn = replace(scn, eps=args.eps)
    seed_env = os.environ.get("MACHZERO_SEED")
    if seed_env is not None:
        try:
            scn = replace(scn, seed=int(seed_env))
        except ValueError as exc:
            raise ValidationError(f"MACHZERO_SEED: {seed_env!r}") from exc
    scn.validate()
    return scn


# --------------------------------------------------------------------------
# CSV writers (plain text, fixed float format, so reruns are byte identical)

def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(x) for x in row) + "\n")


def _cell(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (list, tuple)):
        return ";".join(_FLOAT_FMT % v for v in x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return _FLOAT_FMT % x


def _snapshot_rows(traj, times, window):
    rows = []
    for t in times:
        f = traj.sample(t)
        edges = np.concatenate(([window[0]], f.breaks, [window[1]]))
        for i in range(len(f.p)):
            lo, hi = edges[i], edges[i + 1]
            if hi < window[0] or lo > window[1]:
                continue
            tau = f.tau[i] if f.tau is not None else float("nan")
            rows.append((t, max(lo, window[0]), f.p[i], f.v[i], tau))
            rows.append((t, min(hi, window[1]), f.p[i], f.v[i], tau))
    return rows


def _trace_rows(traj, zs):
    rows = []
    for z in zs:
        ts = traj.trace(z)
        for t, p, v in zip(ts.times, ts.p, ts.v):
            rows.append((z, t, p, v))
    return rows


def _event_rows(ledger):
    return [(ev.time, ev.z, ev.location, ev.event_type,
             ev.sigmas_in, ev.sigmas_out, ev.d_upsilon) for ev in ledger]


def _default_window(scn):
    if scn.z_window is not None:
        return scn.z_window
    lo = min([z for z, _ in scn.jumps] + [0.0]) - 0.5
    hi = max([z for z, _ in scn.jumps] + [scn.m]) + 0.5
    return (lo, hi)


def _default_times(scn):
    if scn.snapshot_times:
        return scn.snapshot_times
    return tuple(np.linspace(0.0, scn.t_end, 11))


def _write_run_outputs(outdir, traj, scn):
    window = _default_window(scn)
    _write_csv(os.path.join(outdir, "snapshots.csv"),
               ("t", "z", "p", "v", "tau"),
               _snapshot_rows(traj, _default_times(scn), window))
    trace_z = scn.trace_z or (0.0, 0.5 * scn.m, scn.m)
    _write_csv(os.path.join(outdir, "traces.csv"),
               ("z", "t", "p", "v"), _trace_rows(traj, trace_z))
    _write_csv(os.path.join(outdir, "events.csv"),
               ("t", "z", "location", "class",
                "sigmas_in", "sigmas_out", "d_upsilon"),
               _event_rows(traj.ledger))
    _write_csv(os.path.join(outdir, "glimm.csv"),
               ("t", "V_Gin", "V_Gout", "V_L", "Q_G", "Q_L",
                "upsilon", "wtv"), traj.glimm_rows)


def _write_summary(outdir, payload):
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------
# subcommands

def _cmd_run(args):
    scn = _apply_overrides(parse_scenario(args.scenario), args)
    if getattr(args, "kappa", None) is None and "kappa" not in _toml_keys(args.scenario):
        raise ValidationError("kappa: required (config key or --kappa)")
    traj = ft.run(scn)
    os.makedirs(args.out, exist_ok=True)
    _write_run_outputs(args.out, traj, scn)
    f0, fT = traj.sample(0.0), traj.sample(traj.t_end)
    window = _default_window(scn)
    _write_summary(args.out, {
        "scenario": scn.name,
        "kappa": scn.kappa,
        "eps": scn.eps,
        "seed": scn.seed,
        "event_count": traj.event_count,
        "upsilon_initial": traj.upsilon0,
        "momentum_initial": f0.integral("v", *window),
        "momentum_final": fT.integral("v", *window),
    })
    return 0


def _toml_keys(path):
    with open(path, "rb") as fh:
        return set(tomllib.load(fh))


def _cmd_sweep(args):
    scn = _apply_overrides(parse_scenario(args.scenario), args)
    kappas = scn.kappas
    if args.kappas:
        kappas = tuple(float(x) for x in args.kappas.split(","))
    if not kappas:
        raise ValidationError("kappas: required (config key or --kappas)")
    report = _limits.kappa_sweep(scn, kappas=kappas)
    os.makedirs(args.out, exist_ok=True)
    _write_csv(os.path.join(args.out, "sweep.csv"),
               ("kappa", "metric", "value"), report.rows())
    _write_summary(args.out, {
        "scenario": scn.name,
        "kappas": list(kappas),
        "verdicts": report.verdicts,
        "windows": [list(w) for w in report.windows],
    })
    return 0


def _cmd_limit(args):
    scn = _apply_overrides(parse_scenario(args.scenario), args)
    lim = _limits.run_limit_model(scn, dt_piston=args.dt_piston)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for t, v in zip(lim.piston_times, lim.piston_v):
        rows.append((0.0, t, lim.p_left.at(t, "p"), v))
    for t, v in zip(lim.piston_times, lim.piston_v):
        rows.append((scn.m, t, lim.p_right.at(t, "p"), v))
    _write_csv(os.path.join(args.out, "traces.csv"),
               ("z", "t", "p", "v"), rows)
    _write_summary(args.out, {
        "scenario": scn.name,
        "piston_velocity_final": float(lim.piston_v[-1]),
        "event_count": lim.gas.event_count,
    })
    return 0


def _cmd_compare(args):
    scn = _apply_overrides(parse_scenario(args.scenario), args)
    traj = ft.run(scn)
    window = _default_window(scn)
    ref = _oracle.godunov(scn, cells=args.cells, cfl=args.cfl,
                          T=scn.t_end, window=window)
    dist = _oracle.l1_distance(traj.sample(scn.t_end), ref, *window)
    os.makedirs(args.out, exist_ok=True)
    payload = {
        "scenario": scn.name,
        "cells": args.cells,
        "cfl": args.cfl,
        "l1_distance": dist,
        "event_count": traj.event_count,
    }
    if args.max_l1 is not None:
        payload["max_l1"] = args.max_l1
        payload["passed"] = bool(dist <= args.max_l1)
    _write_summary(args.out, payload)
    if args.max_l1 is not None and dist > args.max_l1:
        return 3
    return 0


def _cmd_audit(args):
    scn = _apply_overrides(parse_scenario(args.scenario), args)
    traj = ft.run(scn)
    report = _glimm.audit(traj.ledger, traj.weights, scn.kappa)
    os.makedirs(args.out, exist_ok=True)
    _write_csv(os.path.join(args.out, "events.csv"),
               ("t", "z", "location", "class",
                "sigmas_in", "sigmas_out", "d_upsilon"),
               _event_rows(traj.ledger))
    _write_summary(args.out, {
        "scenario": scn.name,
        "event_count": traj.event_count,
        "violations": len(report.violations),
        "worst_monotonicity_margin": report.worst_monotonicity_margin,
        "worst_bound_margin": report.worst_bound_margin,
        "passed": report.passed,
    })
    return 0 if report.passed else 3


# --------------------------------------------------------------------------

def _build_parser():
    top = argparse.ArgumentParser(prog="machzero")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True)
        p.add_argument("--out", default="out")
        p.add_argument("--eps", type=float, default=None)

    p = sub.add_parser("run", help="one tracker run, full CSV output")
    common(p)
    p.add_argument("--kappa", type=float, default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="kappa sweep plus limit model")
    common(p)
    p.add_argument("--kappas", default=None,
                   help="comma separated, strictly decreasing")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("limit", help="rigid slab limit model")
    common(p)
    p.add_argument("--dt-piston", type=float, default=None)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("compare", help="tracker vs finite volume oracle")
    common(p)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--cells", type=int, default=400)
    p.add_argument("--cfl", type=float, default=0.45)
    p.add_argument("--max-l1", type=float, default=None)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("audit", help="functional decrease audit")
    common(p)
    p.add_argument("--kappa", type=float, default=None)
    p.set_defaults(func=_cmd_audit)

    return top


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, InadmissibleScenario) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MachZeroError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
