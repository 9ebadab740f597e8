"""Command line front end.

Subcommands: simulate, verify, formula, path-dump.  Scenario configs are
INI documents with sections [law], [response], [regime], [grid], [run];
unknown keys are rejected so silent typos cannot change an experiment.

Exit codes: 0 success, 1 verification failures, 2 config/usage error,
3 inadmissible scenario, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys

import numpy as np

from . import limits, renewal, shotnoise, verify
from .laws import (Constant, ExpDecay, Exponential, Gamma, Pareto,
                   ParetoTailMatch, PowerDecay, Uniform, Window)
from .shotnoise import InadmissibleSpec, LimitSpec, solve_c
from .stable import abs_moment
from .streams import DOMAIN_AUX, substream

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_INADMISSIBLE = 3
EXIT_RESOURCE = 4


class ConfigError(ValueError):
    pass


_LAW_KEYS = {
    "exponential": {"rate"},
    "uniform": {"a", "b"},
    "gamma": {"shape", "rate"},
    "pareto": {"alpha", "xm"},
}
_RESPONSE_KEYS = {
    "constant": {"value"},
    "expdecay": {"lam"},
    "powerdecay": {"beta", "c0"},
    "window": {"a", "b"},
    "paretotailmatch": {"alpha", "xm", "c"},
}
_RUN_KEYS = {"replicates", "seed", "plans", "significance", "max_shots",
             "threads", "horizon", "delay", "x_star_truncation",
             "reference_mesh_d", "reference_u_mesh_cells"}


def _floats(section, keys):
    out = {}
    for k in keys:
        if k not in section:
            raise ConfigError(f"missing key {k!r}")
        out[k] = float(section[k])
    return out


def _check_keys(section, allowed, name):
    extra = set(section) - set(allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in [{name}]: {sorted(extra)}")


def _build_law(section):
    fam = section.get("family", "").lower()
    if fam not in _LAW_KEYS:
        raise ConfigError(f"unknown law family {fam!r}")
    _check_keys(section, _LAW_KEYS[fam] | {"family"}, "law")
    p = _floats(section, _LAW_KEYS[fam])
    if fam == "exponential":
        return Exponential(p["rate"])
    if fam == "uniform":
        return Uniform(p["a"], p["b"])
    if fam == "gamma":
        return Gamma(p["shape"], p["rate"])
    return Pareto(p["alpha"], p["xm"])


def _build_response(section):
    kind = section.get("kind", "").lower()
    if kind not in _RESPONSE_KEYS:
        raise ConfigError(f"unknown response kind {kind!r}")
    allowed = _RESPONSE_KEYS[kind]
    _check_keys(section, allowed | {"kind"}, "response")
    if kind == "powerdecay":
        beta = float(section["beta"])
        c0 = float(section.get("c0", 1.0))
        return PowerDecay(beta, c0)
    p = _floats(section, allowed)
    if kind == "constant":
        return Constant(p["value"])
    if kind == "expdecay":
        return ExpDecay(p["lam"])
    if kind == "window":
        return Window(p["a"], p["b"])
    return ParetoTailMatch(p["alpha"], p["xm"], p["c"])


def _float_list(text):
    return tuple(float(x) for x in text.replace(",", " ").split())


def load_config(path):
    """Parse an INI config into (LimitSpec, scenario keyword arguments)."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not cp.read(path):
        raise ConfigError(f"cannot read config {path!r}")
    for sec in cp.sections():
        if sec not in ("law", "response", "regime", "grid", "run"):
            raise ConfigError(f"unknown section [{sec}]")
    for sec in ("law", "response", "regime", "grid", "run"):
        if sec not in cp:
            raise ConfigError(f"missing section [{sec}]")
    law = _build_law(cp["law"])
    h = _build_response(cp["response"])
    _check_keys(cp["regime"], {"name", "alpha", "beta"}, "regime")
    name = cp["regime"].get("name", "")
    if name not in shotnoise.REGIMES:
        raise ConfigError(f"unknown regime {name!r}")
    alpha = float(cp["regime"].get("alpha", "2"))
    beta = float(cp["regime"].get("beta", "0"))
    spec = LimitSpec(regime=name, alpha=alpha, beta=beta, law=law, h=h)

    _check_keys(cp["grid"], {"u", "t"}, "grid")
    u_grid = _float_list(cp["grid"].get("u", "1"))
    t_ladder = _float_list(cp["grid"].get("t", "100 1000 10000"))

    run = cp["run"]
    _check_keys(run, _RUN_KEYS, "run")
    kw = {
        "u_grid": u_grid,
        "t_ladder": t_ladder,
        "replicates": run.getint("replicates", 1000),
        "seed": run.getint("seed", 0),
        "plans": tuple(p.strip() for p in
                       run.get("plans", "KS_MARGINAL").split(",")),
        "significance": run.getfloat("significance", 0.01),
        "max_shots": run.getfloat("max_shots", 1e8),
    }
    if "x_star_truncation" in run:
        kw["x_star_truncation"] = run.getfloat("x_star_truncation")
    if "reference_mesh_d" in run:
        kw["reference_mesh_d"] = run.getfloat("reference_mesh_d")
    if "reference_u_mesh_cells" in run:
        kw["reference_u_mesh_cells"] = run.getint("reference_u_mesh_cells")
    extras = {
        "threads": run.getint("threads", 0) or None,
        "horizon": run.getfloat("horizon", 0.0),
        "delay": run.get("delay", "zero"),
    }
    return spec, kw, extras


def _resolve_threads(args, extras):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("RENEWALSHOT_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError("RENEWALSHOT_THREADS must be an integer")
    return extras.get("threads") or 1


def cmd_simulate(args):
    spec, kw, extras = load_config(args.config)
    if args.seed is not None:
        kw["seed"] = args.seed
    threads = _resolve_threads(args, extras)
    scn = verify.Scenario(spec=spec, threads=threads, **kw)
    t = scn.t_ladder[-1]
    samples = verify.simulate_scaled_matrix(
        spec, scn.u_grid, t, scn.replicates, scn.seed, threads, scn.max_shots)
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["replicate", "u", "value"])
        for r in range(scn.replicates):
            for j, u in enumerate(scn.u_grid):
                w.writerow([r, u, repr(float(samples[r, j]))])
    if args.json:
        summary = {"t": t, "u_grid": list(scn.u_grid), "n": scn.replicates,
                   "seed": scn.seed,
                   "mean": [float(m) for m in samples.mean(axis=0)]}
        print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _report_paths(out):
    base, ext = os.path.splitext(out)
    if ext.lower() not in (".json", ".csv"):
        base = out
    return base + ".json", base + ".csv", base + ".plot.csv"


def cmd_verify(args):
    spec, kw, extras = load_config(args.config)
    if args.seed is not None:
        kw["seed"] = args.seed
    threads = _resolve_threads(args, extras)
    scn = verify.Scenario(spec=spec, threads=threads, **kw)
    report = verify.run_scenario(scn)
    jpath, cpath, ppath = _report_paths(args.out)
    with open(jpath, "w", encoding="utf-8") as f:
        f.write(report.to_json())
        f.write("\n")
    with open(cpath, "w", newline="", encoding="utf-8") as f:
        report.write_csv(f)
    if report.plot_data:
        with open(ppath, "w", newline="", encoding="utf-8") as f:
            report.write_plot_data(f)
    if args.json:
        print(json.dumps({"all_passed": report.all_passed,
                          "n_records": len(report.records)}, sort_keys=True))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def cmd_formula(args):
    name = args.name.lower()
    if name == "moments":
        val = limits.moments_inverse_case(args.alpha, args.beta, args.u,
                                          int(args.k))
    elif name == "covariance":
        val = limits.covariance_inverse_case(args.alpha, args.beta,
                                             args.t1, args.t2)
    elif name == "rs":
        val = limits.stationary_covariance(args.alpha, args.s)
    elif name == "absmoment":
        val = abs_moment(args.alpha, args.r)
    elif name == "solvec":
        val = solve_c(Pareto(args.alpha, args.xm), args.t)
    else:
        raise ConfigError(f"unknown formula {args.name!r}")
    if args.json:
        print(json.dumps({"formula": name, "value": val}, sort_keys=True))
    else:
        print(np.format_float_positional(val, precision=12, unique=False,
                                         fractional=False))
    return EXIT_OK


def cmd_path_dump(args):
    spec, kw, extras = load_config(args.config)
    seed = args.seed if args.seed is not None else kw["seed"]
    horizon = extras["horizon"] or kw["t_ladder"][-1]
    delay = {"zero": renewal.ZERO_DELAYED,
             "stationary": renewal.STATIONARY}.get(extras["delay"])
    if delay is None:
        raise ConfigError(f"unknown delay kind {extras['delay']!r}")
    rng = substream(seed, DOMAIN_AUX, 0)
    path = renewal.sample_path(spec.law, horizon, delay, rng)
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        renewal.dump_csv(path, f)
    if args.json:
        print(json.dumps({"epochs": len(path), "horizon": horizon,
                          "seed": seed}, sort_keys=True))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="renewalshot",
                                description="renewal shot noise laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_config=True):
        if needs_config:
            sp.add_argument("--config", required=True)
            sp.add_argument("--out", required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--json", action="store_true")

    common(sub.add_parser("simulate", help="write scaled-statistic samples"))
    common(sub.add_parser("verify", help="run a verification scenario"))
    common(sub.add_parser("path-dump", help="write one renewal path as CSV"))

    f = sub.add_parser("formula", help="evaluate a closed-form quantity")
    f.add_argument("name")
    for flag in ("alpha", "beta", "u", "s", "r", "t", "t1", "t2", "xm", "k"):
        f.add_argument(f"--{flag}", type=float, default=None)
    f.add_argument("--json", action="store_true")
    return p


_DISPATCH = {"simulate": cmd_simulate, "verify": cmd_verify,
             "formula": cmd_formula, "path-dump": cmd_path_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except InadmissibleSpec as exc:
        print(f"inadmissible scenario: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except verify.ResourceCapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, configparser.Error, FileNotFoundError, TypeError,
            ValueError, AttributeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
