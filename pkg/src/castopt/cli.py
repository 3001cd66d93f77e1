"""Command-line front end: ``castopt {run,compare,sweep,decay-study}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import expected_log_mse, marginalize, summarize
from .config import (
    ConfigError,
    apply_overrides,
    load_document,
    parse_compare,
    parse_experiment,
    parse_plan,
    plan_to_dict,
)
from .engine import run_batch
from .output import write_csv, write_json
from .sweep import run_sweep

log = logging.getLogger("castopt")

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

TRACE_COLUMNS = ["step", "best_mse", "avg_mse", "m1", "m2", "var", "geo_mean", "best_T"]


def _load(path, args):
    doc = load_document(path)
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    return apply_overrides(doc, overrides)


def _out_dir(args, default: str) -> Path:
    out = Path(args.out or default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _histogram_rows(trace, step_values, histograms):
    edges = trace.bin_edges
    for step, counts in zip(step_values, histograms):
        for b, count in enumerate(counts):
            yield step, edges[b], edges[b + 1], count


def cmd_run(args) -> list[Path]:
    cfg = parse_experiment(_load(args.config, args))
    config = cfg.run_config()
    out = _out_dir(args, "castopt-run")
    meta = cfg.to_dict()
    traces = run_batch(config, cfg.repeats, cfg.seed, jobs=args.jobs)
    spec = config.spec
    multi = cfg.repeats > 1

    trace_rows, hist_rows = [], []
    for k, tr in enumerate(traces):
        prefix = (k,) if multi else ()
        for r in range(len(tr)):
            trace_rows.append(prefix + (
                tr.steps[r], tr.best_mse[r], tr.avg_mse[r], tr.m1[r], tr.m2[r],
                tr.var[r], tr.geo_mean[r], tr.best_T[r],
            ))
        if config.hist_bins:
            hist_rows.extend(prefix + row for row in
                             _histogram_rows(tr, tr.steps, tr.histogram))
    lead = ["run"] if multi else []
    files = [
        write_csv(out / "trace.csv", lead + TRACE_COLUMNS, trace_rows, meta, cfg.seed),
        write_csv(out / "histogram.csv", lead + ["step", "bin_low", "bin_high", "count"],
                  hist_rows, meta, cfg.seed),
    ]
    summaries = [summarize(tr, spec, cfg.shrink) for tr in traces]
    payload = {
        "runs": [s.to_dict() for s in summaries],
        "success_rate": float(np.mean([s.success for s in summaries])),
    }
    files.append(write_json(out / "summary.json", payload, meta, cfg.seed))
    return files


def cmd_compare(args) -> list[Path]:
    base, arms = parse_compare(_load(args.config, args))
    out = _out_dir(args, "castopt-compare")
    meta = {**base.to_dict(), "arms": {n: a.to_dict() for n, a in arms.items()}}

    curves = {}
    for name, cfg in arms.items():
        log.info("arm %s: %d repeats", name, cfg.repeats)
        traces = run_batch(cfg.run_config(), cfg.repeats, cfg.seed, jobs=args.jobs,
                           tag=f"compare:{name}")
        lengths = {len(t) for t in traces}
        curves[name] = {
            "cast": cfg.cooling == "cast",
            "steps": traces[0].steps,
            "best": expected_log_mse(traces, "best"),
            "avg": expected_log_mse(traces, "average"),
            "m1": np.mean([t.m1 for t in traces], axis=0),
            "geo_mean": np.mean([t.geo_mean for t in traces], axis=0),
            "best_T": np.mean([t.best_T for t in traces], axis=0),
        }
        if len(lengths) != 1:
            raise RuntimeError(f"arm {name!r} produced traces of unequal length")
    step_sets = {tuple(c["steps"]) for c in curves.values()}
    if len(step_sets) != 1:
        raise ConfigError("arms disagree on recorded steps")

    names = list(curves)
    columns = ["step"]
    columns += [f"{n}_best_logmse" for n in names]
    columns += [f"{n}_avg_logmse" for n in names]
    series = [curves[n]["best"] for n in names] + [curves[n]["avg"] for n in names]
    for n in names:
        c = curves[n]
        if c["cast"]:
            columns += [f"{n}_m1", f"{n}_geo_mean", f"{n}_best_T"]
            series += [c["m1"], c["geo_mean"], c["best_T"]]
        else:
            columns.append(f"{n}_T")
            series.append(c["m1"])
    steps = curves[names[0]]["steps"]
    rows = [(s, *(col[i] for col in series)) for i, s in enumerate(steps)]
    return [write_csv(out / "compare.csv", columns, rows, meta, base.seed)]


def cmd_sweep(args) -> list[Path]:
    plan = parse_plan(_load(args.config, args))
    out = _out_dir(args, "castopt-sweep")
    meta = plan_to_dict(plan)
    cells = run_sweep(plan, jobs=args.jobs)
    swept = plan.swept
    from .sweep import PARAM_AXES

    columns = ["cell", *PARAM_AXES, "valid", "success_rate", "mean_steps",
               "normalized_weighted_steps"]
    rows = [
        (k, *(c.params[p] for p in PARAM_AXES), c.valid, c.success_rate,
         c.mean_steps_to_basin, c.normalized_weighted_steps)
        for k, c in enumerate(cells)
    ]
    files = [write_csv(out / "cells.csv", columns, rows, meta, plan.seed)]
    payload = {"cells": [dict(zip(columns, row)) for row in rows]}
    files.append(write_json(out / "cells.json", payload, meta, plan.seed))

    for axis in swept:
        sr = marginalize(cells, "success_rate", axis)
        nws = marginalize(cells, "normalized_weighted_steps", axis)
        mrows = [(v, sr[v], nws[v]) for v in plan.axes[axis]]
        files.append(write_csv(out / f"marginal_{axis}.csv",
                               [axis, "success_rate", "normalized_weighted_steps"],
                               mrows, meta, plan.seed))
    if "mu" in swept and "lambda" in swept:
        sr = marginalize(cells, "success_rate", ("mu", "lambda"))
        ms = marginalize(cells, "mean_steps_to_basin", ("mu", "lambda"))
        hrows = [(mu, lam, sr[(mu, lam)], ms[(mu, lam)])
                 for mu in plan.axes["mu"] for lam in plan.axes["lambda"]]
        files.append(write_csv(out / "heatmap.csv",
                               ["mu", "lambda", "success_rate", "mean_steps"],
                               hrows, meta, plan.seed))
    return files


def cmd_decay_study(args) -> list[Path]:
    cfg = parse_experiment(_load(args.config, args))
    if cfg.cooling != "cast":
        raise ConfigError("decay-study needs cooling = \"cast\"")
    config = cfg.run_config()
    out = _out_dir(args, "castopt-decay")
    meta = cfg.to_dict()
    traces = run_batch(config, cfg.repeats, cfg.seed, jobs=args.jobs, tag="decay")

    t_bar = cfg.t_bar
    steps = np.concatenate([[0], traces[0].steps])

    def with_initial(attr):
        return np.mean([np.concatenate([[t.initial[attr]], getattr(t, attr)])
                        for t in traces], axis=0)

    m1, geo, var = with_initial("m1"), with_initial("geo_mean"), with_initial("var")
    ref_log = t_bar / np.log(steps + np.e)
    ref_geo = t_bar * cfg.alpha ** steps
    rows = [(s, m1[i], geo[i], var[i], ref_log[i], ref_geo[i]) for i, s in enumerate(steps)]
    files = [write_csv(out / "decay.csv",
                       ["step", "m1", "geo_mean", "var", "ref_log", "ref_geo"],
                       rows, meta, cfg.seed)]
    if config.hist_bins:
        hist = np.mean([np.vstack([t.initial["histogram"], t.histogram]) for t in traces],
                       axis=0)
        files.append(write_csv(out / "decay_histogram.csv",
                               ["step", "bin_low", "bin_high", "count"],
                               _histogram_rows(traces[0], steps, hist), meta, cfg.seed))
    return files


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "decay-study": cmd_decay_study,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="output directory")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="castopt",
        description="Collective annealing experiments on Ackley/Rastrigin.",
    )
    parser.add_argument("--version", action="version", version=f"castopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "run": "run one configuration and write its trace",
        "compare": "compare several arms on matched budgets",
        "sweep": "full-factorial hyperparameter sweep",
        "decay-study": "mean-temperature decay against reference schedules",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("config", help="config file (TOML key = value)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        files = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"castopt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report and map to exit code
        print(f"castopt: error: {exc}", file=sys.stderr)
        if args.verbose:
            raise
        return EXIT_RUNTIME
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
