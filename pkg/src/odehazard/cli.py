"""Command-line surface: curve emission, simulation, fitting, studies, MGF sweeps.

Commands read a flat key=value config (overridable with --set key=value) and
write plain delimited text into --out.  Exit codes: 0 success, 2 bad
configuration or parameters, 3 numerical failure, 4 data errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import dataio
from .errors import (
    ConfigError,
    DataFormatError,
    HorizonExhaustedError,
    IntegrationBlowupError,
    InvalidParameterError,
    OdeHazardError,
)
from .fitting import FAMILIES, mle_fit
from .initial import init_from_survival
from .mcmc import ChainConfig
from .mgf import mgf_sweep
from .models import (
    MODEL_FIELDS,
    PRESETS,
    delayed_logistic_solve,
    logistic_first_order_solve,
    model_from_params,
)
from .ode import State2, TimeGrid, integrate
from .sampling import simulate_dataset, tune_cmax
from .study import monte_carlo_study

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_DATA = 4


def _load_config(args) -> dict[str, str]:
    cfg = dataio.read_config(args.config) if args.config else {}
    cfg = dataio.apply_overrides(cfg, args.set or [])
    if args.seed is not None:
        cfg["seed"] = str(args.seed)
    if args.dt is not None:
        cfg["dt"] = str(args.dt)
    return cfg


def _model_from_config(cfg: dict[str, str]):
    family = cfg.get("family")
    if not family:
        raise ConfigError("config needs family=<constant|damped|popdyn|sinusoidal|exp>")
    names = MODEL_FIELDS.get(family)
    if names is None:
        raise ConfigError(f"unknown family {family!r}")
    params = {}
    for name in names:
        if name in cfg:
            params[name] = float(cfg[name])
    if family == "popdyn" and "zeta" in cfg and "eta" not in cfg:
        params["zeta"] = float(cfg["zeta"])
    missing = [n for n in names if n not in params and not (family == "popdyn" and n == "eta" and "zeta" in params)]
    if missing:
        raise ConfigError(f"family {family!r} needs config keys {missing}")
    return model_from_params(family, **params)


def _curve_trajectory(kind: str, params: dict, horizon: float, dt: float):
    grid = TimeGrid.from_bounds(0.0, horizon, dt)
    if kind == "logistic1":
        return logistic_first_order_solve(params["r"], params["K"], params["h0"], grid)
    if kind == "logistic-delay":
        return delayed_logistic_solve(
            params["r"], params["K"], params["tau"], params["h0"], grid
        )
    model = model_from_params(kind, **params)
    return integrate(model.field(), State2(model.h0, model.v0), grid)


def cmd_curves(args) -> int:
    cfg = _load_config(args)
    dt = dataio.get_float(cfg, "dt", 1e-3)
    os.makedirs(args.out, exist_ok=True)
    members: dict[str, tuple[str, dict]] = {}
    if "preset" in cfg:
        name = cfg["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
        preset = PRESETS[name]
        horizon = dataio.get_float(cfg, "horizon", preset["horizon"])
        members = preset["members"]
    else:
        model = _model_from_config(cfg)
        horizon = dataio.get_float(cfg, "horizon")
        members = {model.family: (model.family, model.params())}
    for member, (kind, params) in members.items():
        traj = _curve_trajectory(kind, params, horizon, dt)
        path = os.path.join(args.out, f"{member}.csv")
        dataio.write_curves(path, traj.times, traj.h, traj.H)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    model = _model_from_config(cfg)
    n = dataio.get_int(cfg, "n")
    seed = dataio.get_int(cfg, "seed", 0)
    censor = cfg.get("censor", "none")
    admin_horizon = dataio.get_float(cfg, "admin_horizon", math.nan)
    admin_horizon = None if math.isnan(admin_horizon) else admin_horizon
    c_max = None
    if censor == "uniform":
        if "c_max" in cfg:
            c_max = dataio.get_float(cfg, "c_max")
        else:
            target = dataio.get_float(cfg, "censor_target", 0.25)
            c_max = tune_cmax(model, target, seed=seed)
            print(f"tuned c_max={c_max:.6g} for target rate {target}")
    data = simulate_dataset(
        model, n, censor=censor, seed=seed, c_max=c_max, admin_horizon=admin_horizon
    )
    os.makedirs(args.out, exist_ok=True)
    out_csv = os.path.join(args.out, "dataset.csv")
    dataio.write_dataset(out_csv, data)
    dataio.write_meta(os.path.join(args.out, "dataset.meta"), data.meta)
    print(
        f"wrote {out_csv}: n={data.n}, censoring rate {data.censoring_rate:.4f}"
    )
    return EXIT_OK


def _fit_init(args, cfg, family_name, data):
    mode = args.init or cfg.get("init", "default")
    if mode == "auto":
        if family_name == "sinusoidal":
            return init_from_survival(data).sinusoidal_vector()
        return None
    if mode in ("default", "none"):
        return None
    init_cfg = dataio.read_config(mode)
    names = FAMILIES[family_name].param_names
    missing = [n for n in names if n not in init_cfg]
    if missing:
        raise ConfigError(f"init file {mode} missing keys {missing}")
    return np.array([float(init_cfg[n]) for n in names])


def cmd_fit(args) -> int:
    cfg = _load_config(args)
    path = args.data or cfg.get("data")
    if not path:
        raise ConfigError("fit needs a dataset (--data or data= in config)")
    data = dataio.read_dataset(
        path,
        convention=cfg.get("convention", "status01"),
        time_unit=cfg.get("time_unit", "native"),
    )
    families = [f.strip() for f in cfg.get("families", "weibull").split(",") if f.strip()]
    unknown = [f for f in families if f not in FAMILIES]
    if unknown:
        raise ConfigError(f"unknown families {unknown}; have {sorted(FAMILIES)}")
    seed = dataio.get_int(cfg, "seed", 0)
    os.makedirs(args.out, exist_ok=True)
    results = []
    for family_name in families:
        init = _fit_init(args, cfg, family_name, data)
        if init is not None and (args.init or cfg.get("init")) == "auto":
            # reproduction pathway: single local simplex in natural
            # coordinates from the data-driven start (see README)
            fit = mle_fit(
                family_name, data, init=init, n_starts=1, transform=False, adaptive=True
            )
        else:
            fit = mle_fit(family_name, data, init=init, seed=seed)
        results.append(fit)
        report = os.path.join(args.out, f"fit_{family_name}.txt")
        dataio.write_report(report, fit.report_lines())
        print(f"{family_name}: loglik={fit.loglik:.4f} bic={fit.bic:.4f} -> {report}")
    order = sorted(results, key=lambda r: r.bic)
    print("bic ranking: " + " < ".join(f"{r.family}({r.bic:.2f})" for r in order))
    return EXIT_OK


def cmd_study(args) -> int:
    cfg = _load_config(args)
    family = cfg.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"study needs family=<one of {sorted(FAMILIES)}>")
    names = FAMILIES[family].param_names
    missing = [n for n in names if f"true_{n}" not in cfg]
    if missing:
        raise ConfigError(f"study needs true_<param> keys for {missing}")
    truth = {n: dataio.get_float(cfg, f"true_{n}") for n in names}
    n_grid = tuple(
        int(x) for x in cfg.get("n_grid", "500,1000,2000,5000").split(",") if x.strip()
    )
    chain = ChainConfig(
        iterations=dataio.get_int(cfg, "iterations", 60_000),
        burn_in=dataio.get_int(cfg, "burn_in", 10_000),
        thin=dataio.get_int(cfg, "thin", 5),
        seed=dataio.get_int(cfg, "seed", 0),
    )
    result = monte_carlo_study(
        family,
        truth,
        n_grid=n_grid,
        replications=dataio.get_int(cfg, "replications", 50),
        censor_target=dataio.get_float(cfg, "censor_target", 0.25),
        seed=dataio.get_int(cfg, "seed", 0),
        chain=chain,
        jobs=args.jobs or 1,
    )
    os.makedirs(args.out, exist_ok=True)
    table = os.path.join(args.out, "study.csv")
    dataio.write_study_table(table, result)
    seeds_lines = [
        f"n={n} seeds={','.join(str(s) for s in result.rep_seeds[n])}" for n in result.n_grid
    ]
    dataio.write_report(os.path.join(args.out, "study_seeds.txt"), seeds_lines)
    print(f"wrote {table}")
    return EXIT_OK


def cmd_mgf(args) -> int:
    cfg = _load_config(args)
    model = _model_from_config(cfg)
    if "s_list" in cfg:
        s_values = [float(x) for x in cfg["s_list"].split(",") if x.strip()]
    else:
        s_min = dataio.get_float(cfg, "s_min")
        s_max = dataio.get_float(cfg, "s_max")
        count = dataio.get_int(cfg, "s_count", 9)
        s_values = list(np.linspace(s_min, s_max, count))
    dt = dataio.get_float(cfg, "dt", 1e-3)
    results = mgf_sweep(model, s_values, dt=dt)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "mgf.csv")
    dataio.write_mgf_sweep(path, results)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_ingest_check(args) -> int:
    cfg = _load_config(args)
    path = args.data or cfg.get("data")
    if not path:
        raise ConfigError("ingest-check needs a dataset (--data or data= in config)")
    data = dataio.read_dataset(
        path,
        convention=cfg.get("convention", "status01"),
        time_unit=cfg.get("time_unit", "native"),
    )
    events = int(np.sum(data.events))
    print(f"rows={data.n} events={events} censored={data.n - events}")
    print(f"censoring_rate={data.censoring_rate:.4f}")
    print(f"time_range=[{float(np.min(data.times))!r}, {float(np.max(data.times))!r}]")
    print(f"time_unit={data.meta['time_unit']}")
    print(f"dropped_rows={data.meta['dropped_rows']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odehazard",
        description="Survival toolkit for hazard functions governed by second-order ODEs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "curves": (cmd_curves, "emit t,h,S,H tables for a model or preset"),
        "simulate": (cmd_simulate, "simulate a right-censored dataset"),
        "fit": (cmd_fit, "fit families to a dataset by censored MLE"),
        "study": (cmd_study, "replicated simulate-then-refit study"),
        "mgf": (cmd_mgf, "moment generating function sweep"),
        "ingest-check": (cmd_ingest_check, "validate and summarize a dataset file"),
    }
    for name, (fn, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--jobs", type=int, default=None, help="worker processes")
        p.add_argument("--dt", type=float, default=None, help="integration step size")
        p.add_argument("--init", default=None, help="'auto' or an init key=value file")
        p.add_argument("--data", default=None, help="dataset file (fit / ingest-check)")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (IntegrationBlowupError, HorizonExhaustedError, OdeHazardError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
