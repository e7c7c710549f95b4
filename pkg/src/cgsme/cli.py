"""Command-line front end.

    python -m cgsme compare --omega1 0.095 --omega2 0.105 --g 0.001 --dt 63.7 --out runs/bench

A run is described by a :class:`RunConfig`, built from an optional JSON file
(``--config``) with individual flags layered on top.  Exit status is 0 on
success, 2 for an invalid configuration and 3 for a numerical failure.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
import json
import logging
import math
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .analysis import (ReferenceCache, default_horizon, exact_reference, integrated_distance,
                       optimize_dt, trace_distances)
from .bath import BathSpec
from .dephasing import TwoLevelSpec, dephasing_table
from .errors import BoundaryError, CGSMEError, ConfigError
from .exact import SCHEMES, VSystemSpec, max_step
from .io import write_json, write_table_csv, write_trajectory_csv
from .lindblad import build_cg_generator, build_rwa_generator, propagate
from .rates import FORMS, rate_scan

log = logging.getLogger("cgsme")

TASKS = ("exact", "cg", "rwa", "compare", "optimize", "rates-scan", "dephasing")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


@dataclass
class RunConfig:
    task: str = "compare"
    model: str = "vsystem"
    omega1: float = 0.095
    omega2: float = 0.105
    omega0: float = 1.0
    eta: float = None
    omega_c: float = 1.0
    g: float = 0.001
    beta: float = math.inf
    psi0: list = field(default_factory=lambda: [0.0, 1.0, 0.0])
    t_max: float = None
    h: float = 0.05
    scheme: str = "trapezoid"
    subsample: int = 100
    dt: float = None
    dt_values: list = None
    search_lo: float = None
    search_hi: float = None
    n_grid: int = 40
    forms: str = "exact"
    cache_dir: str = None
    out: str = "out"
    format: str = "csv"

    def to_dict(self):
        d = asdict(self)
        if math.isinf(d["beta"]):
            d["beta"] = "inf"
        return d

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}", field=sorted(unknown)[0])
        data = dict(data)
        if isinstance(data.get("beta"), str):
            try:
                data["beta"] = float(data["beta"])
            except ValueError:
                raise ConfigError(f"beta must be a number or 'inf', got {data['beta']!r}", field="beta")
        return cls(**data)

    def bath(self):
        return BathSpec(omega_c=self.omega_c, g=self.g, eta=self.eta, beta=self.beta)

    def system(self):
        return VSystemSpec(self.omega1, self.omega2)


@dataclass(frozen=True)
class Violation:
    level: str  # "error" or "warning"
    field: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.field}: {self.message}"


def _num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and not math.isnan(x)


def validate(config):
    """All problems with ``config``; it can run iff none has level 'error'."""
    out = []

    def err(f, msg):
        out.append(Violation("error", f, msg))

    def warn(f, msg):
        out.append(Violation("warning", f, msg))

    c = config
    if c.task not in TASKS:
        err("task", f"must be one of {TASKS}")
    if c.model not in ("vsystem", "twolevel"):
        err("model", "must be 'vsystem' or 'twolevel'")
    elif (c.model == "twolevel") != (c.task == "dephasing"):
        err("model", "the dephasing task uses model 'twolevel' and every other task 'vsystem'")
    for name in ("omega_c", "h"):
        v = getattr(c, name)
        if not (_num(v) and v > 0 and math.isfinite(v)):
            err(name, "must be a positive finite number")
    if not (_num(c.g) and c.g >= 0 and math.isfinite(c.g)):
        err("g", "must be a nonnegative finite number")
    if c.eta is not None and not (_num(c.eta) and c.eta > 0):
        err("eta", "must be positive")
    if not (_num(c.beta) and c.beta > 0):
        err("beta", "must be positive (use inf for zero temperature)")
    if c.model == "vsystem":
        for name in ("omega1", "omega2"):
            v = getattr(c, name)
            if not (_num(v) and v > 0 and math.isfinite(v)):
                err(name, "must be a positive finite number")
        if not (isinstance(c.psi0, (list, tuple)) and len(c.psi0) == 3 and all(_num(x) for x in c.psi0)):
            err("psi0", "must be three real amplitudes (c0, c1, c2)")
        elif sum(x * x for x in c.psi0) > 1 + 1e-9:
            err("psi0", "amplitude norm exceeds 1")
        if c.beta != math.inf and _num(c.beta):
            err("beta", "the three-level model is solved at zero temperature only")
        if c.g == 0 and c.task in ("optimize", "compare", "exact", "cg", "rwa"):
            warn("g", "zero coupling: dynamics are trivial")
    elif not (_num(c.omega0) and math.isfinite(c.omega0)):
        err("omega0", "must be a finite number")
    if c.t_max is not None and not (_num(c.t_max) and c.t_max > 0):
        err("t_max", "must be positive")
    if c.scheme not in SCHEMES:
        err("scheme", f"must be one of {SCHEMES}")
    if not (isinstance(c.subsample, int) and c.subsample >= 1):
        err("subsample", "must be a positive integer")
    if not (isinstance(c.n_grid, int) and c.n_grid >= 3):
        err("n_grid", "must be an integer >= 3")
    if c.forms not in FORMS:
        err("forms", f"must be one of {FORMS}")
    if c.format not in ("csv", "json"):
        err("format", "must be 'csv' or 'json'")
    if c.dt is not None and not (_num(c.dt) and c.dt > 0):
        err("dt", "must be positive")
    if c.task == "cg" and c.dt is None:
        err("dt", "required for task 'cg'")
    if c.dt_values is not None and not (isinstance(c.dt_values, (list, tuple)) and c.dt_values
                                        and all(_num(x) and x > 0 for x in c.dt_values)):
        err("dt_values", "must be a nonempty list of positive numbers")
    for name in ("search_lo", "search_hi"):
        v = getattr(c, name)
        if v is not None and not (_num(v) and v > 0):
            err(name, "must be positive")
    if _num(c.search_lo) and _num(c.search_hi) and c.search_lo >= c.search_hi:
        err("search_lo", "must be below search_hi")

    if any(v.level == "error" for v in out):
        return out
    if c.model == "vsystem" and c.h > max_step(c.system(), c.bath()) * (1 + 1e-12):
        err("h", f"exceeds 0.1/max(omega1, omega2, omega_c) = {max_step(c.system(), c.bath()):.4g}")
    # tau_c << dt << tau_S with tau_c = 1/omega_c and tau_S ~ 1/g
    if c.dt is not None and c.task != "dephasing":
        if c.dt <= 1.0 / c.omega_c or (c.g > 0 and c.dt >= 1.0 / c.g):
            warn("dt", f"dt={c.dt:g} violates 1/omega_c << dt << 1/g")
    if c.model == "vsystem" and c.omega1 == c.omega2 and c.task in ("optimize", "compare"):
        warn("omega2", "omega1 == omega2: the dark state decouples and the objective is degenerate")
    return out


def check(config):
    errors = [v for v in validate(config) if v.level == "error"]
    if errors:
        raise ConfigError("; ".join(str(v) for v in errors), field=errors[0].field)
    for v in validate(config):
        log.warning("%s", v)


# --- tasks ----------------------------------------------------------------

def _horizon(c, sys, bath):
    return c.t_max if c.t_max is not None else default_horizon(sys, bath)


def _reference(c, sys, bath):
    cache = ReferenceCache(c.cache_dir) if c.cache_dir else None
    return exact_reference(sys, bath, tuple(c.psi0), _horizon(c, sys, bath), c.h, c.scheme, c.subsample, cache)


def _emit_trajectory(c, name, traj, cfg):
    out = Path(c.out)
    if c.format == "csv":
        return [write_trajectory_csv(out / f"{name}.csv", traj, cfg)]
    rec = {"picture": traj.picture, "times": traj.times.tolist(),
           "re": traj.states.real.tolist(), "im": traj.states.imag.tolist()}
    return [write_json(out / f"{name}.json", rec, cfg, traj.times)]


def _optimize(c, sys, bath):
    search = None
    if c.search_lo is not None or c.search_hi is not None or c.n_grid != 40:
        lo = c.search_lo if c.search_lo is not None else 1.0 / bath.omega_c
        hi = c.search_hi if c.search_hi is not None else 0.5 / bath.g
        search = (lo, hi, c.n_grid)
    cache = ReferenceCache(c.cache_dir) if c.cache_dir else None
    return optimize_dt(sys, bath, _horizon(c, sys, bath), tuple(c.psi0), search, c.h, c.scheme,
                       c.subsample, cache=cache, forms=c.forms)


def task_trajectory(c, cfg):
    sys_, bath = c.system(), c.bath()
    ref = _reference(c, sys_, bath)
    if c.task == "exact":
        return _emit_trajectory(c, "exact", ref, cfg)
    gen = build_cg_generator(sys_, bath, c.dt, c.forms) if c.task == "cg" else build_rwa_generator(sys_, bath)
    return _emit_trajectory(c, c.task, propagate(gen, ref.states[0], ref.times), cfg)


def task_compare(c, cfg):
    sys_, bath = c.system(), c.bath()
    ref = _reference(c, sys_, bath)
    dt = c.dt if c.dt is not None else _optimize(c, sys_, bath).dt_opt
    cg = propagate(build_cg_generator(sys_, bath, dt, c.forms), ref.states[0], ref.times)
    rwa = propagate(build_rwa_generator(sys_, bath), ref.states[0], ref.times)
    files = []
    for name, traj in (("exact", ref), ("cg", cg), ("rwa", rwa)):
        files += _emit_trajectory(c, name, traj, cfg)
    d_cg, d_rwa = trace_distances(cg, ref), trace_distances(rwa, ref)
    summary = {"dt": dt, "integrated_cg": integrated_distance(cg, ref),
               "integrated_rwa": integrated_distance(rwa, ref)}
    out = Path(c.out)
    if c.format == "csv":
        rows = zip(ref.times, d_cg, d_rwa)
        files.append(write_table_csv(out / "distance.csv", ("t", "trace_distance_cg", "trace_distance_rwa"),
                                     rows, cfg, ref.times))
    files.append(write_json(out / "distance.json", summary if c.format == "csv" else
                            dict(summary, times=ref.times.tolist(), cg=d_cg.tolist(), rwa=d_rwa.tolist()),
                            cfg, ref.times))
    return files


def task_optimize(c, cfg):
    sys_, bath = c.system(), c.bath()
    out = Path(c.out)
    params = {"omega1": sys_.omega1, "omega2": sys_.omega2, "g": bath.g, "eta": bath.eta,
              "omega_c": bath.omega_c, "t_max": _horizon(c, sys_, bath)}
    try:
        res = _optimize(c, sys_, bath)
    except BoundaryError as exc:
        if exc.result is not None:
            write_json(out / "optimize.json", {"params": params, "error": str(exc),
                                               "grid": exc.result.scan}, cfg)
        raise
    rec = {"params": params, "dt_opt": res.dt_opt, "objective": res.objective,
           "rwa_objective": res.rwa_objective, "bracket": list(res.bracket),
           "evaluations": res.evaluations, "grid": [list(p) for p in res.scan]}
    files = [write_json(out / "optimize.json", rec, cfg)]
    if c.format == "csv":
        files.append(write_table_csv(out / "optimize_scan.csv", ("dt", "objective"), res.scan, cfg))
    return files


def task_rates_scan(c, cfg):
    sys_, bath = c.system(), c.bath()
    dts = c.dt_values if c.dt_values is not None else np.geomspace(1.0, 1e4, 20).tolist()
    cols = ["dt"]
    for kind in ("gamma", "lamb"):
        for jk in ("11", "12", "22"):
            cols += [f"re_{kind}{jk}", f"im_{kind}{jk}"]
    cols.append("min_eig_gamma")
    rows = []
    for rt in rate_scan(bath, sys_, dts, c.forms):
        row = [rt.dt]
        for m in (rt.gamma, rt.lamb):
            for j, k in ((0, 0), (0, 1), (1, 1)):
                row += [m[j, k].real, m[j, k].imag]
        rows.append(row + [rt.min_eigenvalue()])
    out = Path(c.out)
    if c.format == "csv":
        return [write_table_csv(out / "rates.csv", cols, rows, cfg)]
    return [write_json(out / "rates.json", {"columns": cols, "rows": rows}, cfg)]


def task_dephasing(c, cfg):
    spec = TwoLevelSpec(c.omega0, c.bath())
    t_max = c.t_max if c.t_max is not None else 100.0 / c.omega_c
    dt = c.dt if c.dt is not None else 10.0 / c.omega_c
    times = np.linspace(0.0, t_max, 201)
    rows = dephasing_table(spec, times, dt)
    cols = ("t", "gamma_exact", "gamma_cg", "gamma_rwa", "abs_rho12")
    out = Path(c.out)
    if c.format == "csv":
        return [write_table_csv(out / "dephasing.csv", cols, rows, cfg, times)]
    return [write_json(out / "dephasing.json", {"columns": list(cols), "rows": rows}, cfg, times)]


DISPATCH = {"exact": task_trajectory, "cg": task_trajectory, "rwa": task_trajectory,
            "compare": task_compare, "optimize": task_optimize, "rates-scan": task_rates_scan,
            "dephasing": task_dephasing}


def run(config):
    """Validate and execute one configuration; returns the list of files written.

    Raises ConfigError before touching the file system if the configuration
    is invalid.
    """
    check(config)
    return DISPATCH[config.task](config, config.to_dict())


def run_status(config):
    """:func:`run` mapped onto an exit status."""
    try:
        for path in run(config):
            log.info("wrote %s", path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CGSMEError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def sweep(base, runs, out, workers=4):
    """Run every override in ``runs`` on top of ``base``, each into ``out/run-NNN``."""
    configs = []
    for i, override in enumerate(runs):
        d = dict(base.to_dict(), **override)
        d["out"] = str(Path(out) / f"run-{i:03d}")
        configs.append(RunConfig.from_dict(d))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_status, configs))


# --- argument parsing -----------------------------------------------------

FLAG_FIELDS = {
    "omega1": float, "omega2": float, "omega0": float, "g": float, "eta": float, "omega_c": float,
    "beta": float, "dt": float, "t_max": float, "h": float, "scheme": str, "subsample": int,
    "search_lo": float, "search_hi": float, "n_grid": int, "forms": str, "cache_dir": str,
    "out": str, "format": str,
}


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    for name, typ in FLAG_FIELDS.items():
        flag = "--" + name.replace("_", "-")
        kw = {"type": typ, "default": None, "dest": name}
        if name == "h":
            flag = "--step"
        if name == "format":
            kw["choices"] = ("csv", "json")
        common.add_argument(flag, **kw)
    common.add_argument("--dt-values", type=_floats, default=None, dest="dt_values",
                        help="comma-separated windows for rates-scan")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cgsme", description="Coarse-grained vs rotating-wave master equations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for task in TASKS:
        sub.add_parser(task, parents=[common])
    sw = sub.add_parser("sweep", parents=[common],
                        help="run a list of overrides from the config file key 'runs'")
    sw.add_argument("--workers", type=int, default=4)
    return p


def config_from_args(args, task):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}", field="config")
    runs = data.pop("runs", None)
    for name in list(FLAG_FIELDS) + ["dt_values"]:
        v = getattr(args, name)
        if v is not None:
            data[name] = v
    if task is not None:
        data["task"] = task
        if task == "dephasing":
            data.setdefault("model", "twolevel")
    return RunConfig.from_dict(data), runs


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "sweep":
            base, runs = config_from_args(args, None)
            if not runs:
                raise ConfigError("sweep needs a 'runs' list in the config file", field="runs")
            for i, override in enumerate(runs):
                check(RunConfig.from_dict(dict(base.to_dict(), **override)))
            codes = sweep(base, runs, base.out, args.workers)
            return max(codes)
        config, _ = config_from_args(args, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TypeError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_status(config)


if __name__ == "__main__":
    sys.exit(main())
