"""Command-line interface.

Subcommands: ``simulate`` one dataset to disk, ``figure1``/``figure2``
sweep tables with SVG plots, ``bounds`` closed-form limits for a model
config, and ``check`` for the named empirical suites. Exit codes: 0
success, 1 configuration error, 2 check-suite failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import svg
from .bounds import crossing_report
from .errors import ConfigError, PFCError
from .estimators import Basis, pc, pfc
from .experiments import (
    CHECK_SUITES,
    FIG1_PANELS,
    FIG2_PANELS,
    bound_report,
    grid_from_config,
    run_checks,
    run_figure1,
    run_figure2,
)
from .metrics import theta
from .model import ModelSpec, simulate
from .randsrc import RngStream

_XLABELS = {
    "n": "sample size n",
    "sigma": "error scale",
    "sigma_y": "response scale",
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError, not SystemExit."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pfc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="draw one dataset and summarize it")
    sim.add_argument("--config", required=True, help="model spec JSON file")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output directory")

    for name in ("figure1", "figure2"):
        fig = sub.add_parser(name, help=f"run one {name} panel sweep")
        panels = FIG1_PANELS if name == "figure1" else FIG2_PANELS
        fig.add_argument("--panel", required=True, choices=sorted(panels))
        fig.add_argument("--seed", type=int, default=0)
        fig.add_argument("--out", required=True, help="output directory")
        fig.add_argument("--config", default=None,
                         help="optional JSON overrides (model and sweep keys)")

    bnd = sub.add_parser("bounds", help="closed-form limits for a model spec")
    bnd.add_argument("--config", required=True, help="model spec JSON file")
    bnd.add_argument("--alpha", type=float, default=0.1)
    bnd.add_argument("--out", default=None, help="optional JSON output file")

    chk = sub.add_parser("check", help="run one named empirical check suite")
    chk.add_argument("--suite", required=True, choices=CHECK_SUITES,
                     metavar="SUITE",
                     help=f"one of: {', '.join(CHECK_SUITES)}")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--out", default=None, help="optional JSON output file")
    return parser


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"expected a JSON object in {path}")
    return doc


def _dump_json(doc: dict, path: str | None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


def _cmd_simulate(args) -> int:
    spec = ModelSpec.from_json_dict(_load_json(args.config))
    ds = simulate(spec, RngStream(args.seed, 0))
    os.makedirs(args.out, exist_ok=True)
    npz_path = os.path.join(args.out, "dataset.npz")
    np.savez(npz_path, y=ds.y, F=ds.F, X_raw=ds.X_raw,
             X_centered=ds.X_centered, X_fitted=ds.X_fitted,
             E_true=ds.E_true)
    truth = Basis(spec.gamma, kind="true")
    basis_pfc = pfc(ds, spec.d)
    basis_pc = pc(ds, spec.d)
    cross = crossing_report(spec, ds)
    summary = {
        "seed": args.seed,
        "model": spec.to_json_dict(),
        "angles_deg": {
            "pfc": theta(basis_pfc, truth).theta_deg,
            "pc": theta(basis_pc, truth).theta_deg,
        },
        "crossing": {
            "min_spacing_m": cross.min_spacing_m,
            "noise_lambda1": cross.noise_lambda1,
            "l1_occurred": cross.l1_occurred,
            "l2_occurred": cross.l2_occurred,
            "l2_tail": cross.l2_tail,
        },
    }
    _dump_json(spec.to_json_dict(), os.path.join(args.out, "spec.json"))
    text = _dump_json(summary, os.path.join(args.out, "summary.json"))
    print(text)
    print(f"wrote {npz_path}", file=sys.stderr)
    return 0


def _cmd_figure(args, name: str) -> int:
    panels = FIG1_PANELS if name == "figure1" else FIG2_PANELS
    doc = _load_json(args.config) if args.config else None
    default_series = (("mean", "q05", "q95") if name == "figure1"
                      else ("mean", "eq11", "eq12"))
    grid = grid_from_config(args.panel, args.seed, doc, panels,
                            default_series=default_series)
    runner = run_figure1 if name == "figure1" else run_figure2
    table = runner(grid, args.panel)
    os.makedirs(args.out, exist_ok=True)
    stem = os.path.join(args.out, f"{name}_{args.panel}")
    with open(stem + ".csv", "w", encoding="utf-8") as fh:
        fh.write(table.to_csv_text())
    markup = svg.render_panel(
        table,
        title=f"{name} panel {args.panel}",
        xlabel=_XLABELS[grid.sweep_param],
    )
    with open(stem + ".svg", "w", encoding="utf-8") as fh:
        fh.write(markup)
    print(f"{stem}.csv")
    print(f"{stem}.svg")
    return 0


def _cmd_bounds(args) -> int:
    spec = ModelSpec.from_json_dict(_load_json(args.config))
    report = bound_report(spec, args.alpha)
    print(_dump_json(report.to_json_dict(), args.out))
    return 0


def _cmd_check(args) -> int:
    result = run_checks(args.suite, args.seed)
    print(_dump_json(result.to_json_dict(), args.out))
    return 0 if result.passed else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command in ("figure1", "figure2"):
            return _cmd_figure(args, args.command)
        if args.command == "bounds":
            return _cmd_bounds(args)
        return _cmd_check(args)
    except PFCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
