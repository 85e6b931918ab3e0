"""Command-line experiment runner.

Each subcommand reproduces one figure-style dataset as a CSV (plus a
quick-look PNG next to it unless --no-plot). Values are computed in natural
units (hbar = 1, t = 1); --hopping rescales the *reported* columns by the
physical hopping energy (rates and energies multiply by it, times divide).

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 grid
boundary warning escalated under --strict.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from .exceptions import OpenChainError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment
from .reporting import render_figure, write_csv

_OPTION_FLAGS = {
    "sites": ("--sites", int, "chain length N"),
    "hopping": ("--hopping", float, "physical hopping scale for reported units (default 1)"),
    "gamma_in": ("--gamma-in", float, "pump rate"),
    "gamma_out": ("--gamma-out", float, "sink rate (also the NEGF lead coupling)"),
    "gamma_phi": ("--gamma-phi", float, "dephasing rate per site"),
    "gamma_loss": ("--gamma-loss", float, "loss rate per site"),
    "disorder": ("--disorder", float, "disorder width W"),
    "eta": ("--eta", float, "NEGF broadening eta"),
    "seed": ("--seed", int, "master seed"),
    "realizations": ("--realizations", int, "disorder realizations per point"),
    "threads": ("--threads", int, "worker threads (default: machine parallelism)"),
}

_GRID_FLAGS = ("gamma_out", "gamma_phi", "gamma_in", "gamma", "gamma_loss", "omega", "disorder")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openchain",
        description="Coherent transport through finite open chains: figure-style datasets as CSV.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        for key, (flag, typ, help_text) in _OPTION_FLAGS.items():
            p.add_argument(flag, dest=key, type=typ, default=None, help=help_text)
        for grid in _GRID_FLAGS:
            p.add_argument(
                f"--grid-{grid.replace('_', '-')}",
                dest=f"grid_{grid}",
                default=None,
                metavar="START:STOP:COUNT[:lin|log] | v1,v2,...",
                help=f"scan grid for {grid}",
            )
        p.add_argument("--output", default=None, help="CSV output path")
        p.add_argument("--config", default=None, help="INI config file (CLI flags override it)")
        p.add_argument("--no-plot", dest="plot", action="store_false", default=None,
                       help="skip the quick-look figure")
        p.add_argument("--strict", action="store_true", default=None,
                       help="escalate grid-boundary warnings to exit code 4")
    return parser


def _config_file_options(path: str, experiment: str) -> dict[str, str]:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as err:
        raise ValueError(f"cannot read config file {path}: {err}") from err
    except configparser.Error as err:
        # configparser errors carry line positions
        raise ValueError(f"config parse error: {err}") from err
    if not parser.has_section(experiment):
        return {}
    return dict(parser.items(experiment))


def resolve_config(args: argparse.Namespace) -> tuple[ExperimentConfig, float]:
    """Merge defaults < config file < explicit CLI flags; returns (config, hopping)."""
    name = args.experiment
    options: dict[str, str] = {}
    for key, value in EXPERIMENTS[name].defaults.items():
        if key == "grids":
            for grid, spec in value.items():
                options[f"grid_{grid}"] = spec
        else:
            options[key] = str(value)
    if args.config:
        options.update(_config_file_options(args.config, name))
    hopping = float(options.pop("hopping", "1.0"))
    for key in _OPTION_FLAGS:
        flag_value = getattr(args, key, None)
        if flag_value is None:
            continue
        if key == "hopping":
            hopping = float(flag_value)
        else:
            options[key] = str(flag_value)
    for grid in _GRID_FLAGS:
        flag_value = getattr(args, f"grid_{grid}", None)
        if flag_value is not None:
            options[f"grid_{grid}"] = flag_value
    if args.output is not None:
        options["output"] = args.output
    if args.plot is not None:
        options["plot"] = "true" if args.plot else "false"
    if args.strict is not None:
        options["strict"] = "true"
    if hopping <= 0:
        raise ValueError("--hopping must be > 0")
    return ExperimentConfig.from_options(name, options), hopping


def _error(code: int, kind: str, detail: str) -> int:
    print(f'error code={code} kind={kind} detail="{detail}"', file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, hopping = resolve_config(args)
    except ValueError as err:
        return _error(2, "config", str(err))

    try:
        result = run_experiment(cfg)
    except OpenChainError as err:
        return _error(3, type(err).__name__, str(err))
    except ValueError as err:
        return _error(2, "config", str(err))

    if "summary" in result.meta:
        print(result.meta["summary"])

    definition = EXPERIMENTS[cfg.experiment]
    out_path = cfg.output
    if out_path is None and definition.default_output:
        out_path = f"{cfg.experiment}.csv"

    messages = []
    if out_path is not None:
        header = {"experiment": cfg.experiment, "hopping": repr(hopping)}
        header.update(cfg.to_items())
        header["hopping"] = repr(hopping)
        for key, value in result.meta.items():
            if key != "summary":
                header[f"resolved_{key}"] = value
        rows = result.rows
        if hopping != 1.0:
            powers = [result.scales.get(c, 0) for c in result.columns]
            rows = [
                tuple(v * hopping**p if p else v for v, p in zip(row, powers)) for row in rows
            ]
        csv_path = write_csv(out_path, result.columns, rows, header)
        messages.append(f"{len(rows)} rows -> {csv_path}")
        if cfg.plot and definition.has_figure:
            fig_path = render_figure(
                cfg.experiment, result.columns, rows, result.meta, Path(out_path).with_suffix(".png")
            )
            messages.append(f"figure -> {fig_path}")

    exit_code = 0
    if result.boundary_warning:
        print(f"warning kind=grid-boundary detail=\"{result.boundary_warning}\"", file=sys.stderr)
        if cfg.strict:
            exit_code = 4
    print(f"{cfg.experiment}: " + ("; ".join(messages) if messages else "done"))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
