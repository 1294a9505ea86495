"""Batch driver: profile -> formal powers -> fit -> solve -> files.

Configuration is a JSON document (see ``--print-preset``); command line flags
override the corresponding keys. Exit status is 0 on success, 2 for invalid
configuration and 1 when a pipeline stage fails.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import oracles
from .medium import Constant, MediumError, PowerLaw, build_profile, profile_from_table
from .quadrature import MeshError
from .signals import (GaussianSignal, GeneralInitialData, PSKSignal, SignalError, TrigSignal, Zero,
                      from_EH_general, from_EH_trig, load_sampled, load_symbols, TrigInitialData)
from .solver import GridError, GridSpec, grid_residuals, solve
from .transmutation import DomainError, fit_auto, write_report

log = logging.getLogger("vekuawave")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage, exc):
        super().__init__(f"stage '{stage}' failed: {exc}")
        self.stage = stage


PRESETS = {
    "example1": {
        "medium": {"family": "power_law", "alpha": 2.0, "beta": 1.0, "p": -2.0, "mu": 1.0,
                   "x_max": 5.0, "mesh_points": 5001},
        "signal": {"kind": "trig", "freqs": [1.0], "gamma_plus": [[3.0, -4.0]],
                   "gamma_minus": [[3.0, 4.0]]},
        "grid": {"nx": 101, "t_start": 0.0, "t_stop": 5.0, "nt": 101},
        "solver": {"N_max": 30, "order": None, "single_wave": False},
        "output": {"dir": "out_example1", "write_W": False, "oracle": "example1",
                   "oracle_params": {"A": 1.0, "B": 3.0}},
    },
    "example2": {
        "medium": {"family": "power_law", "alpha": 2.0, "beta": 1.0, "p": -2.0, "mu": 1.0,
                   "x_max": 6.0, "mesh_points": 5001},
        "signal": {"kind": "trig", "freqs": [2.0, -2.0, 3.0, -3.0],
                   "gamma_plus": [2.0, 2.0, 2.0, 2.0], "gamma_minus": [2.0, 2.0, 2.0, 2.0]},
        "grid": {"nx": 101, "t_start": 0.0, "t_stop": 6.0, "nt": 101},
        "solver": {"N_max": 30, "order": None, "single_wave": False},
        "output": {"dir": "out_example2", "write_W": False, "oracle": "example2"},
    },
    "example3": {
        "medium": {"family": "power_law", "alpha": 5.0, "beta": 1.0, "p": -1.6, "mu": 1.0,
                   "x_max": 2.0, "mesh_points": 2001},
        "signal": {"kind": "general", "plus": {"type": "zero"},
                   "minus": {"type": "gaussian", "a": 4.0, "amplitude": 1.0, "center": 0.0}},
        "grid": {"nx": 101, "t_start": -2.0, "t_stop": 2.0, "nt": 101},
        "solver": {"N_max": 30, "order": None, "single_wave": False},
        "output": {"dir": "out_example3", "write_W": False, "oracle": "example3"},
    },
}

DEFAULTS = {
    "solver": {"N_max": 30, "order": None, "single_wave": False},
    "output": {"dir": "out", "write_W": False, "oracle": None, "oracle_params": {}},
}


# ---------------------------------------------------------------- config parsing


def _get(d, key, where, kind=float, default=KeyError):
    if key not in d or d[key] is None:
        if default is KeyError:
            raise ConfigError(f"{where}.{key}: missing")
        return default
    try:
        return kind(d[key])
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key}: expected {kind.__name__}, got {d[key]!r}") from None


def _complex(value, where):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: cannot read {value!r} as a complex number") from None


def _complex_list(d, key, where):
    if key not in d:
        raise ConfigError(f"{where}.{key}: missing")
    vals = d[key]
    if not isinstance(vals, list) or not vals:
        raise ConfigError(f"{where}.{key}: expected a non-empty list")
    return np.array([_complex(v, f"{where}.{key}[{i}]") for i, v in enumerate(vals)])


def _path(cfg, p):
    p = Path(p)
    base = Path(cfg.get("_base", "."))
    return p if p.is_absolute() else base / p


def merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = merge(out[k], v)
        else:
            out[k] = v
    return out


def build_medium(cfg):
    m = cfg.get("medium")
    if not isinstance(m, dict):
        raise ConfigError("medium: missing section")
    fam = m.get("family", "power_law")
    mu = _get(m, "mu", "medium", default=1.0)
    n = _get(m, "mesh_points", "medium", int, default=5001)
    try:
        if fam == "table":
            return profile_from_table(_path(cfg, _get(m, "path", "medium", str)), mu=mu,
                                      n_points=n, x_max=m.get("x_max"))
        x_max = _get(m, "x_max", "medium")
        if fam == "power_law":
            eps = PowerLaw(_get(m, "alpha", "medium"), _get(m, "beta", "medium"), _get(m, "p", "medium"))
        elif fam == "inverse_square":
            eps = PowerLaw(_get(m, "alpha", "medium"), _get(m, "beta", "medium"), -2.0)
        elif fam == "constant":
            eps = Constant(_get(m, "value", "medium"))
        else:
            raise ConfigError(f"medium.family: unknown family {fam!r}")
        return build_profile(eps, mu=mu, x_max=x_max, n_points=n)
    except (MeshError, MediumError, OSError) as exc:
        raise ConfigError(f"medium: {exc}") from None


def _provider(spec, where, cfg):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object")
    kind = spec.get("type", "zero")
    try:
        if kind == "zero":
            return Zero()
        if kind == "gaussian":
            return GaussianSignal(_get(spec, "a", where, default=4.0),
                                  _complex(spec.get("amplitude", 1.0), f"{where}.amplitude"),
                                  _get(spec, "center", where, default=0.0))
        if kind == "trig":
            return TrigSignal(np.array(spec["freqs"], float), _complex_list(spec, "amps", where))
        if kind == "psk":
            if "path" in spec:
                c, s = load_symbols(_path(cfg, spec["path"]))
            else:
                c, s = np.array(spec["c"], float), np.array(spec["s"], float)
            return PSKSignal(c, s, _get(spec, "omega0", where), _get(spec, "duration", where),
                             _get(spec, "t0", where, default=0.0))
        if kind == "sampled":
            return load_sampled(_path(cfg, _get(spec, "path", where, str)))
    except (SignalError, OSError, KeyError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.type: unknown signal type {kind!r}")


def build_signal(cfg, profile):
    s = cfg.get("signal")
    if not isinstance(s, dict):
        raise ConfigError("signal: missing section")
    kind = s.get("kind", "trig")
    if kind == "trig":
        if "gamma_plus" in s:
            gp = _complex_list(s, "gamma_plus", "signal")
            gm = _complex_list(s, "gamma_minus", "signal")
            freqs = np.array(s.get("freqs", []), float)
            if not (freqs.size == gp.size == gm.size):
                raise ConfigError("signal: freqs, gamma_plus and gamma_minus must have equal length")
            return TrigInitialData.from_gamma(freqs, gp, gm, profile)
        alpha = _complex_list(s, "E", "signal")
        beta = _complex_list(s, "H", "signal")
        try:
            return from_EH_trig(alpha, beta, profile, _get(s, "omega0", "signal"),
                                _get(s, "omega", "signal", default=0.0))
        except SignalError as exc:
            raise ConfigError(f"signal: {exc}") from None
    if kind == "general":
        return GeneralInitialData(_provider(s.get("plus", {}), "signal.plus", cfg),
                                  _provider(s.get("minus", {}), "signal.minus", cfg))
    if kind == "fields":
        return from_EH_general(_provider(s.get("E", {}), "signal.E", cfg),
                               _provider(s.get("H", {}), "signal.H", cfg), profile)
    raise ConfigError(f"signal.kind: unknown kind {kind!r}")


def build_grid(cfg, profile):
    g = cfg.get("grid")
    if not isinstance(g, dict):
        raise ConfigError("grid: missing section")
    nx = _get(g, "nx", "grid", int)
    nt = _get(g, "nt", "grid", int)
    if nx < 3:
        raise ConfigError("grid.nx: must be at least 3")
    if nt < 3:
        raise ConfigError("grid.nt: must be at least 3")
    t0, t1 = _get(g, "t_start", "grid"), _get(g, "t_stop", "grid")
    if not t1 > t0:
        raise ConfigError("grid.t_stop: must exceed grid.t_start")
    try:
        return GridSpec.regular(profile, nx, t0, t1, nt, x_stop=g.get("x_stop"))
    except GridError as exc:
        raise ConfigError(f"grid.nx: {exc} (need (mesh_points - 1) divisible by (nx - 1))") from None


# ---------------------------------------------------------------- oracle errors


def oracle_fields(cfg, data, X, T):
    out = cfg["output"]
    name = out.get("oracle")
    m = cfg["medium"]
    a, b, mu = float(m.get("alpha", 0)), float(m.get("beta", 0)), float(m.get("mu", 1.0))
    extra = out.get("oracle_params") or {}
    if name == "example1":
        return oracles.example1_fields(
            oracles.Example1Params(a, b, mu, float(extra.get("A", 1.0)), float(extra.get("B", 3.0))), X, T)
    if name == "example2":
        return oracles.example2_fields(oracles.example2_terms(a, b, mu), X, T)
    if name == "example3":
        p = oracles.Example3Params((float(m.get("p")) + 2.0) / 2.0, a, b, mu)
        gen = data.as_general() if isinstance(data, TrigInitialData) else data
        return oracles.example3_reference(p, gen, X, T)
    raise ConfigError(f"output.oracle: unknown oracle {name!r}")


# ---------------------------------------------------------------- output


def _write_grid(path, X, T, cols, names):
    flat = [X.ravel(), T.ravel()]
    for c in cols:
        flat += [c.real.ravel(), c.imag.ravel()]
    np.savetxt(path, np.column_stack(flat), delimiter=",", fmt="%.17g",
               header=",".join(["x", "t"] + names), comments="")


def _stage(name, fun, *args, **kw):
    try:
        return fun(*args, **kw)
    except (ConfigError, DomainError):
        raise
    except Exception as exc:   # propagate with the stage name
        raise StageError(name, exc) from exc


def run(cfg: dict) -> dict:
    """Execute one configuration; returns the summary dictionary."""
    cfg = merge(DEFAULTS, cfg)
    timings = {}
    clock = time.perf_counter()

    profile = build_medium(cfg)
    data = build_signal(cfg, profile)
    grid = build_grid(cfg, profile)
    timings["profile"] = time.perf_counter() - clock

    sv = cfg["solver"]
    single = bool(sv.get("single_wave", False))
    order = sv.get("order")
    tic = time.perf_counter()
    coeffs, powers = _stage("fit", fit_auto, profile, N_max=int(sv.get("N_max", 30)),
                            order=None if order is None else int(order))
    timings["fit"] = time.perf_counter() - tic

    tic = time.perf_counter()
    try:
        fg = _stage("solve", solve, data, coeffs, powers, profile, grid, single=single)
    except DomainError as exc:
        raise ConfigError(f"grid: {exc}") from None
    timings["solve"] = time.perf_counter() - tic

    rv, rm = _stage("residuals", grid_residuals, fg, profile)
    summary = {
        "order_N": int(coeffs.N),
        "method": fg.method,
        "fit_residual": float(coeffs.residual),
        "mesh_points": int(profile.n),
        "grid": {"nx": int(fg.x.size), "nt": int(fg.t.size)},
        "residuals": {"vekua": rv, "maxwell": rm},
    }

    X, T = np.meshgrid(fg.x, fg.t, indexing="ij")
    if cfg["output"].get("oracle"):
        Er, Hr = _stage("oracle", oracle_fields, cfg, data, X, T)
        dE, dH = np.abs(fg.E - Er), np.abs(fg.H - Hr)
        summary["errors"] = {"oracle": cfg["output"]["oracle"],
                             "max_abs_E": float(dE.max()), "mean_abs_E": float(dE.mean()),
                             "max_abs_H": float(dH.max()), "mean_abs_H": float(dH.mean())}

    outdir = Path(cfg["output"]["dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    _write_grid(outdir / "fields_E.csv", X, T, [fg.E], ["E_re", "E_im"])
    _write_grid(outdir / "fields_H.csv", X, T, [fg.H], ["H_re", "H_im"])
    if cfg["output"].get("write_W"):
        _write_grid(outdir / "fields_W.csv", X, T, [fg.W.u, fg.W.v], ["u_re", "u_im", "v_re", "v_im"])
    write_report(coeffs, outdir / "coeffs.txt")
    with open(outdir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(outdir / "summary.txt", "w") as fh:
        fh.write(_summary_text(summary))
    timings["total"] = time.perf_counter() - clock
    # wall-clock numbers vary between runs, so they live apart from the summary
    with open(outdir / "timing.json", "w") as fh:
        json.dump(timings, fh, indent=2, sort_keys=True)
        fh.write("\n")
    summary["timings"] = timings
    return summary


def _summary_text(s):
    lines = [f"method          {s['method']}",
             f"order N         {s['order_N']}",
             f"fit residual    {s['fit_residual']:.3e}",
             f"mesh points     {s['mesh_points']}",
             f"grid            {s['grid']['nx']} x {s['grid']['nt']}",
             f"vekua residual  {s['residuals']['vekua']:.3e}",
             f"maxwell resid.  {s['residuals']['maxwell']:.3e}"]
    if "errors" in s:
        e = s["errors"]
        lines += [f"oracle          {e['oracle']}",
                  f"max |dE|        {e['max_abs_E']:.3e}   mean {e['mean_abs_E']:.3e}",
                  f"max |dH|        {e['max_abs_H']:.3e}   mean {e['mean_abs_H']:.3e}"]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- entry point


def _parser():
    ap = argparse.ArgumentParser(prog="vekuawave", description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, help="JSON run configuration")
    ap.add_argument("--preset", choices=sorted(PRESETS), help="built-in configuration")
    ap.add_argument("--print-preset", choices=sorted(PRESETS), help="print a preset as JSON and exit")
    ap.add_argument("--output-dir", type=Path)
    ap.add_argument("--order", type=int, help="fix N instead of selecting it")
    ap.add_argument("--mesh-points", type=int)
    ap.add_argument("--oracle", help="example1, example2, example3 or none")
    ap.add_argument("--single-wave", action="store_true", help="replace both operators by the identity")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(args) -> dict:
    if args.config and args.preset:
        raise ConfigError("--config and --preset are mutually exclusive")
    if args.config:
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{args.config}: {exc}") from None
        cfg["_base"] = str(args.config.parent)
    elif args.preset:
        cfg = copy.deepcopy(PRESETS[args.preset])
    else:
        raise ConfigError("one of --config or --preset is required")
    cfg = merge(DEFAULTS, cfg)
    if args.output_dir is not None:
        cfg["output"]["dir"] = str(args.output_dir)
    if args.order is not None:
        cfg["solver"]["order"] = args.order
    if args.mesh_points is not None:
        cfg.setdefault("medium", {})["mesh_points"] = args.mesh_points
    if args.oracle is not None:
        cfg["output"]["oracle"] = None if args.oracle == "none" else args.oracle
    if args.single_wave:
        cfg["solver"]["single_wave"] = True
    return cfg


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.print_preset:
        print(json.dumps(PRESETS[args.print_preset], indent=2))
        return 0
    try:
        cfg = config_from_args(args)
        s = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"selected N = {s['order_N']}  ({s['method']})")
    if "errors" in s:
        e = s["errors"]
        print(f"max |dE| = {e['max_abs_E']:.3e}   max |dH| = {e['max_abs_H']:.3e}")
    t = s["timings"]
    print(f"time: fit {t['fit']:.3f} s, solve {t['solve']:.3f} s, total {t['total']:.3f} s")
    print(f"output written to {cfg['output']['dir']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
