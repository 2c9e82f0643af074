"""``frb-dyn`` command line: validated JSON config in, deterministic CSV/JSON out.

Exit status: 0 success, 2 configuration error, 3 numerical failure.
``FRB_DYN_THREADS`` caps the number of worker processes used by sweeps;
rows are always written in grid order.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import io
import itertools
import json
import math
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor

import jsonschema

from . import __version__, presets
from .calibration import CalibrationTargets, calibrate
from .core import ModelParams, Policy
from .credit import chi_c, chi_hat_c
from .cycles import (
    chi_hat_m,
    chi_m,
    find_cycle,
    orbit_samples,
    slope_at_steady,
    sunspot_near_cycle,
)
from .errors import (
    CalibrationError,
    FrbDynError,
    NoCycleError,
    NoSunspotError,
    OrbitVerificationError,
)
from .steady import comparative_statics, solve_steady
from .transition import DEFAULT_HORIZON, announce_transition, announce_transition_credit
from .welfare import welfare_cost

COMMANDS = ("steady", "thresholds", "cycles", "sunspot", "calibrate", "welfare",
            "transition", "bifurcate")

_num = {"type": "number"}
_num_or_list = {"oneOf": [_num, {"type": "array", "items": _num, "minItems": 1}]}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "required": list(required),
            "additionalProperties": False}


CONFIG_SCHEMA = _obj({
    "params": _obj({k: _num for k in
                    ("beta", "sigma", "B", "C", "eta", "mu", "alpha", "alpha_s")}),
    "policy": _obj({"i": _num_or_list, "chi": _num_or_list}),
    "omega_form": {"enum": ["closed", "recursive"]},
    "targets": _obj({"zy_ratio": _num, "elasticity": _num, "i_bar": _num,
                     "chi_bar": _num}),
    "calibration": _obj({
        "sigmas": {"type": "array", "items": _num, "minItems": 1},
        "derivative": {"enum": ["exact", "legacy"]},
        "start": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
        "reference": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
    }),
    "welfare": _obj({"pi": _num_or_list, "chi": _num_or_list,
                     "scaling": {"enum": ["utility", "surplus"]}}),
    "transition": _obj({"i0": _num, "iT": _num, "chi": _num,
                        "T": {"type": "integer", "minimum": 1}}),
    "bifurcate": _obj({"chi": _num_or_list,
                       "n_burn": {"type": "integer", "minimum": 0},
                       "n_keep": {"type": "integer", "minimum": 1}}),
    "output": _obj({"path": {"type": "string"}, "format": {"enum": ["csv", "json"]}}),
})

DEFAULT_CONFIG = {
    "params": {"beta": presets.BETA, "sigma": presets.SIGMA, "B": presets.B_LEVEL,
               "C": presets.MONEY_ONLY_CE[0], "eta": presets.MONEY_ONLY_CE[1],
               "mu": 0.0},
    "policy": {"i": presets.I_BAR, "chi": presets.CHI_BAR},
    "omega_form": "closed",
    "targets": {"zy_ratio": presets.ZY_TARGET,
                "elasticity": presets.ELASTICITY_NO_CREDIT,
                "i_bar": presets.I_BAR, "chi_bar": presets.CHI_BAR},
    "calibration": {"sigmas": [0.3, 0.4, 0.5, 0.6, 0.7], "derivative": "exact",
                    "start": [1.0, 0.1], "reference": list(presets.MONEY_ONLY_CE)},
    "welfare": {"pi": 0.10, "chi": [0.01, 0.0325, 0.05, 0.1, 0.5, 1.0],
                "scaling": "utility"},
    "transition": {"i0": 0.02, "iT": 0.01, "chi": 1.0, "T": DEFAULT_HORIZON},
    "bifurcate": {"chi": [0.05, 0.1, 0.2, 0.5, 1.0], "n_burn": 500, "n_keep": 32},
}


class ConfigError(Exception):
    pass


def _as_list(x):
    return list(x) if isinstance(x, list) else [x]


def _merge(base, extra):
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _check_finite(node, where="config"):
    if isinstance(node, dict):
        for k, v in node.items():
            _check_finite(v, f"{where}.{k}")
    elif isinstance(node, list):
        if not node:
            raise ConfigError(f"{where}: empty list")
        for k, v in enumerate(node):
            _check_finite(v, f"{where}[{k}]")
    elif isinstance(node, float) and not math.isfinite(node):
        raise ConfigError(f"{where}: non-finite number")


def load_config(path, overrides):
    """Read, validate and merge a config with defaults and CLI overrides."""
    user = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            jsonschema.validate(user, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"invalid config: {exc.message} at "
                              f"{'/'.join(map(str, exc.absolute_path)) or '<root>'}") from exc
        _check_finite(user)
    cfg = _merge(DEFAULT_CONFIG, user)
    if overrides.i is not None:
        cfg["policy"]["i"] = overrides.i
    if overrides.chi is not None:
        cfg["policy"]["chi"] = overrides.chi
        cfg["welfare"]["chi"] = overrides.chi
        cfg["transition"]["chi"] = overrides.chi
        cfg["bifurcate"]["chi"] = overrides.chi
    if overrides.pi is not None:
        cfg["welfare"]["pi"] = overrides.pi
    if overrides.mu is not None:
        cfg["params"]["mu"] = overrides.mu
    if overrides.sigma is not None:
        cfg["params"]["sigma"] = overrides.sigma
        cfg["calibration"]["sigmas"] = [overrides.sigma]
    if overrides.T is not None:
        cfg["transition"]["T"] = overrides.T
    _check_finite(cfg)
    return cfg


def build_params(cfg):
    p = cfg["params"]
    try:
        if "alpha" in p or "alpha_s" in p:
            sigma = p["sigma"]
            return ModelParams(beta=p["beta"], sigma=sigma,
                               alpha=p.get("alpha", 1.0 - sigma),
                               alpha_s=p.get("alpha_s", sigma),
                               B=p["B"], C=p["C"], eta=p["eta"], mu=p["mu"])
        return ModelParams.from_matching(p["beta"], p["sigma"], p["B"], p["C"],
                                         p["eta"], p["mu"])
    except ValueError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc


def _policies(cfg):
    pol = cfg["policy"]
    try:
        return [Policy(i, chi) for i, chi in
                itertools.product(_as_list(pol["i"]), _as_list(pol["chi"]))]
    except ValueError as exc:
        raise ConfigError(f"invalid policy: {exc}") from exc


NAN = float("nan")


# -- row builders (top level so worker processes can pickle them) ----------

def _steady_row(task):
    params, pol = task
    ss = solve_steady(params, pol)
    try:
        d_i, d_chi = comparative_statics(params, pol)
    except FrbDynError:
        d_i = d_chi = NAN
    try:
        slope = slope_at_steady(params, pol)
    except FrbDynError:
        slope = NAN
    return [pol.i, pol.chi, ss.q_s, ss.pbar_s, ss.z_s, ss.i_d, ss.mbar, d_i, d_chi, slope]


def _threshold_row(task):
    params, pol = task
    return [pol.i, chi_m(params, pol), chi_hat_m(params, pol),
            chi_c(params, pol), chi_hat_c(params, pol)]


def _cycle_rows(task):
    params, pol = task
    rows = []
    for period in (2, 3):
        pts = [NAN, NAN, NAN]
        try:
            cyc = find_cycle(params, pol, period)
            status, resid = 1, max(cyc.residuals)
            pts[:period] = cyc.points
        except OrbitVerificationError:
            status, resid = 0, NAN
        except NoCycleError:
            status, resid = -1, NAN
        rows.append([pol.i, pol.chi, period, status, *pts, resid])
    return rows


def _sunspot_row(task):
    params, pol = task
    try:
        ss = sunspot_near_cycle(params, pol)
        return [pol.i, pol.chi, 1, ss.z1, ss.z2, ss.zeta1, ss.zeta2, max(ss.residuals)]
    except (NoCycleError, NoSunspotError):
        return [pol.i, pol.chi, 0, NAN, NAN, NAN, NAN, NAN]


def _calibrate_row(task):
    targets, fixed, options, ref = task
    try:
        res = calibrate(targets, fixed, **options)
        C, eta, r = res.C, res.eta, res.residuals
    except CalibrationError as exc:
        C = eta = NAN
        r = exc.residuals or (NAN, NAN)
    dist = math.hypot(C - ref[0], eta - ref[1])
    return [fixed["sigma"], C, eta, float(r[0]), float(r[1]), dist]


def _welfare_row(task):
    params, pi, chi, scaling, form = task
    rep = welfare_cost(pi, params, chi, scaling=scaling, omega_form=form)
    d = rep.decomposition
    return [pi, chi, rep.delta, rep.cost, d.money_cost, d.dm_surplus, d.cm_surplus]


def _bifurcate_rows(task):
    params, pol, n_burn, n_keep = task
    zs = orbit_samples(params, pol, n_burn=n_burn, n_keep=n_keep)
    return [[pol.chi, k, z] for k, z in enumerate(zs)]


def _workers():
    raw = os.environ.get("FRB_DYN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"FRB_DYN_THREADS must be an integer, got {raw!r}")


def sweep(func, tasks, workers=None):
    """Apply ``func`` to ``tasks`` in order, optionally across processes."""
    workers = workers or _workers()
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def _flatten(chunks):
    return [row for chunk in chunks for row in chunk]


def run_command(command, cfg):
    """Compute ``(columns, rows)`` for ``command``."""
    params = build_params(cfg)
    form = cfg["omega_form"]
    if command == "steady":
        cols = ["i", "chi", "q_s", "pbar_s", "z_s", "i_d", "mbar", "dpbar_di",
                "dpbar_dchi", "slope"]
        return cols, sweep(_steady_row, [(params, p) for p in _policies(cfg)])
    if command == "thresholds":
        chi = _as_list(cfg["policy"]["chi"])[0]
        tasks = [(params, Policy(i, chi)) for i in _as_list(cfg["policy"]["i"])]
        return ["i", "chi_m", "chi_hat_m", "chi_c", "chi_hat_c"], sweep(_threshold_row, tasks)
    if command == "cycles":
        cols = ["i", "chi", "period", "status", "z_1", "z_2", "z_3", "max_residual"]
        return cols, _flatten(sweep(_cycle_rows, [(params, p) for p in _policies(cfg)]))
    if command == "sunspot":
        cols = ["i", "chi", "status", "z1", "z2", "zeta1", "zeta2", "max_residual"]
        return cols, sweep(_sunspot_row, [(params, p) for p in _policies(cfg)])
    if command == "calibrate":
        t = cfg["targets"]
        try:
            targets = CalibrationTargets(t["zy_ratio"], t["elasticity"], t["i_bar"],
                                         t["chi_bar"])
        except ValueError as exc:
            raise ConfigError(f"invalid targets: {exc}") from exc
        c = cfg["calibration"]
        options = dict(start=tuple(c["start"]), omega_form=form,
                       derivative=c["derivative"])
        p = cfg["params"]
        tasks = [(targets, dict(beta=p["beta"], B=p["B"], mu=p["mu"], sigma=s),
                  options, tuple(c["reference"])) for s in c["sigmas"]]
        cols = ["sigma", "C", "eta", "resid_zy", "resid_elasticity", "distance"]
        return cols, sweep(_calibrate_row, tasks)
    if command == "welfare":
        w = cfg["welfare"]
        tasks = [(params, pi, chi, w["scaling"], form)
                 for pi, chi in itertools.product(_as_list(w["pi"]), _as_list(w["chi"]))]
        cols = ["pi", "chi", "delta", "cost", "money_cost", "dm_surplus", "cm_surplus"]
        return cols, sweep(_welfare_row, tasks)
    if command == "transition":
        tr = cfg["transition"]
        chi = _as_list(tr["chi"])[0]
        if params.mu > 0.0:
            # paths need a steady state that is a fixed point of the joint step
            path = announce_transition_credit(tr["i0"], tr["iT"], tr["T"], chi, params)
        else:
            path = announce_transition(tr["i0"], tr["iT"], tr["T"], chi, params)
        if not path.complete:
            print(f"frb-dyn: transition truncated: {path.diagnostic}", file=sys.stderr)
        b = path.b_path if len(path.b_path) else [None] * len(path.z_path)
        return ["t", "z", "b"], [[int(t), z, bb] for t, z, bb in zip(path.t, path.z_path, b)]
    if command == "bifurcate":
        bf = cfg["bifurcate"]
        i = _as_list(cfg["policy"]["i"])[0]
        tasks = [(params, Policy(i, chi), bf["n_burn"], bf["n_keep"])
                 for chi in _as_list(bf["chi"])]
        return ["chi", "k", "z"], _flatten(sweep(_bifurcate_rows, tasks))
    raise ConfigError(f"unknown command {command!r}")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    return "%.17g" % x


def render_csv(cols, rows):
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _json_value(x):
    if x is None:
        return None
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


def render_json(cols, rows, command, cfg):
    doc = {
        "meta": {"command": command, "version": __version__,
                 "config_sha256": config_hash(cfg)},
        "columns": cols,
        "rows": [[_json_value(x) for x in row] for row in rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def config_hash(cfg):
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _origin(exc):
    """Module name of the innermost package frame that raised ``exc``."""
    name = "frbdyn"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("frbdyn") and mod != "frbdyn._roots":
            name = mod
    return name


def _parser():
    ap = argparse.ArgumentParser(prog="frb-dyn", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file (defaults: benchmark calibration)")
    ap.add_argument("--out", help="output file (default: standard output)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--i", type=float, help="nominal rate override")
    ap.add_argument("--chi", type=float, help="reserve requirement override")
    ap.add_argument("--pi", type=float, help="inflation rate for welfare")
    ap.add_argument("--mu", type=float, help="monitoring probability override")
    ap.add_argument("--sigma", type=float, help="buyer probability override")
    ap.add_argument("--T", type=int, help="transition horizon override")
    ap.add_argument("--version", action="version", version=f"frb-dyn {__version__}")
    return ap


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        out = args.out or cfg.get("output", {}).get("path")
        fmt = args.format or cfg.get("output", {}).get("format", "csv")
        cols, rows = run_command(args.command, cfg)
    except ConfigError as exc:
        print(f"frb-dyn: {exc}", file=sys.stderr)
        return 2
    except FrbDynError as exc:
        print(f"frb-dyn: numerical failure in {_origin(exc)}: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = (render_csv(cols, rows) if fmt == "csv"
            else render_json(cols, rows, args.command, cfg))
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
