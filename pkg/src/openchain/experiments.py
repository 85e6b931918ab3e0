"""Experiment definitions behind the CLI: one runner per figure-style dataset.

Every runner takes a resolved ExperimentConfig and returns a TableResult
(columns, rows in deterministic grid order, header metadata). Grid points
run on a thread pool (dense linear algebra releases the GIL); results are
collected in submission order, so the output never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from . import analytics
from .chain import ChainParams, build_hamiltonian, build_jump_operators
from .dynamics import transfer_time
from .ensemble import averaged_max_current, loss_scan
from .exceptions import GridTooCoarseError
from .lindblad import build_liouvillian, ness_current, steady_state
from .manybody import compare_se_me
from .negf import TransmissionModel, conductance_scan, spectral_function
from .superradiance import width_scan

__all__ = [
    "GridSpec",
    "ExperimentConfig",
    "TableResult",
    "EXPERIMENTS",
    "run_experiment",
]


@dataclass(frozen=True)
class GridSpec:
    """A 1-D scan axis: either start:stop:count[:lin|log] or explicit values."""

    start: float = 0.0
    stop: float = 0.0
    count: int = 0
    scale: str = "lin"
    values: tuple[float, ...] | None = None

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        text = text.strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) not in (3, 4):
                raise ValueError(f"grid {text!r}: want START:STOP:COUNT[:lin|log]")
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            scale = parts[3] if len(parts) == 4 else "lin"
            if scale not in ("lin", "log"):
                raise ValueError(f"grid {text!r}: scale must be lin or log")
            if count < 1:
                raise ValueError(f"grid {text!r}: count must be >= 1")
            if scale == "log" and (start <= 0 or stop <= 0):
                raise ValueError(f"grid {text!r}: log grids need positive endpoints")
            return cls(start=start, stop=stop, count=count, scale=scale)
        values = tuple(float(v) for v in text.split(",") if v.strip() != "")
        if not values:
            raise ValueError(f"grid {text!r}: no values")
        return cls(values=values)

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self) -> str:
        if self.values is not None:
            return ",".join(repr(v) for v in self.values)
        return f"{self.start!r}:{self.stop!r}:{self.count}:{self.scale}"


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved inputs of one experiment run (defaults < config file < flags).

    Serializes to one INI section and back; the round trip is the identity.
    """

    experiment: str
    sites: int = 10
    hopping: float = 1.0
    gamma_in: float = 0.0
    gamma_out: float = 2.0
    gamma_phi: float = 0.0
    gamma_loss: float = 0.0
    disorder: float = 0.0
    eta: float = 0.03
    seed: int = 1
    realizations: int = 100
    threads: int | None = None
    output: str | None = None
    plot: bool = True
    strict: bool = False
    grids: Mapping[str, GridSpec] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "grids", dict(self.grids))

    def __eq__(self, other):
        if not isinstance(other, ExperimentConfig):
            return NotImplemented
        return self.to_items() == other.to_items()

    def to_items(self) -> list[tuple[str, str]]:
        """Flat key/value view used for INI serialization and CSV headers."""
        items: list[tuple[str, str]] = []
        for name in ("sites", "hopping", "gamma_in", "gamma_out", "gamma_phi",
                     "gamma_loss", "disorder", "eta", "seed", "realizations"):
            value = getattr(self, name)
            items.append((name, repr(value) if isinstance(value, float) else str(value)))
        items.append(("threads", "auto" if self.threads is None else str(self.threads)))
        if self.output is not None:
            items.append(("output", self.output))
        items.append(("plot", "true" if self.plot else "false"))
        items.append(("strict", "true" if self.strict else "false"))
        for name in sorted(self.grids):
            items.append((f"grid_{name}", str(self.grids[name])))
        return items

    def to_ini(self) -> str:
        lines = [f"[{self.experiment}]"]
        lines += [f"{key} = {value}" for key, value in self.to_items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_options(cls, experiment: str, options: Mapping[str, str]) -> "ExperimentConfig":
        """Build from a flat string mapping; unknown keys raise ValueError."""
        kwargs: dict = {"experiment": experiment}
        grids: dict[str, GridSpec] = {}
        converters: dict[str, Callable[[str], object]] = {
            "sites": int, "seed": int, "realizations": int,
            "hopping": float, "gamma_in": float, "gamma_out": float,
            "gamma_phi": float, "gamma_loss": float, "disorder": float, "eta": float,
            "output": str,
            "plot": _parse_bool, "strict": _parse_bool,
            "threads": lambda s: None if s == "auto" else int(s),
        }
        for key, raw in options.items():
            if key.startswith("grid_"):
                grids[key[len("grid_"):]] = GridSpec.parse(raw)
            elif key in converters:
                try:
                    kwargs[key] = converters[key](raw)
                except ValueError as err:
                    raise ValueError(f"option {key!r}: {err}") from err
            else:
                raise ValueError(f"unknown option {key!r}")
        kwargs["grids"] = grids
        return cls(**kwargs)


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes", "on"):
        return True
    if text.lower() in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class TableResult:
    """Columns, rows (grid order) and header metadata of one experiment."""

    columns: list[str]
    rows: list[tuple]
    meta: dict
    #: per-column power of the --hopping scale (rates/energies +1, times -1)
    scales: dict[str, int]
    boundary_warning: str | None = None


def _pool_map(fn, items, threads: int | None):
    workers = threads if threads else (os.cpu_count() or 1)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _params(cfg: ExperimentConfig, **overrides) -> ChainParams:
    base = dict(
        n_sites=cfg.sites,
        gamma_in=cfg.gamma_in,
        gamma_out=cfg.gamma_out,
        gamma_phi=cfg.gamma_phi,
        gamma_loss=cfg.gamma_loss,
        disorder_width=cfg.disorder,
    )
    base.update(overrides)
    return ChainParams(**base)


def _steady_current(params: ChainParams) -> float:
    liouv = build_liouvillian(build_hamiltonian(params), build_jump_operators(params))
    return ness_current(steady_state(liouv), params.gamma_out)


def _i_se_numeric(params: ChainParams) -> float:
    tau, _ = transfer_time(params)
    return analytics.i_se(tau)


def run_ness_scan(cfg: ExperimentConfig) -> TableResult:
    gouts = cfg.grids["gamma_out"].points()
    gphis = cfg.grids["gamma_phi"].points()
    cells = [(go, gp) for go in gouts for gp in gphis]
    values = _pool_map(
        lambda c: _i_se_numeric(_params(cfg, gamma_out=c[0], gamma_phi=c[1])), cells, cfg.threads
    )
    rows = [(go, gp, v) for (go, gp), v in zip(cells, values)]
    return TableResult(
        columns=["gamma_out", "gamma_phi", "i_se"],
        rows=rows,
        meta={},
        scales={"gamma_out": 1, "gamma_phi": 1, "i_se": 1},
    )


def _widths_table(cfg: ExperimentConfig) -> TableResult:
    grid = cfg.grids["gamma_out"].points()
    scan = width_scan(_params(cfg), grid)
    rows = list(zip(scan.gammas, scan.max_widths, scan.subradiant_means))
    warning = None
    if scan.peak_index in (0, len(grid) - 1):
        warning = f"subradiant-width maximum on grid boundary (gamma={scan.gamma_st:g})"
    return TableResult(
        columns=["gamma_out", "width_max", "width_subradiant_mean"],
        rows=rows,
        meta={"gamma_st": scan.gamma_st},
        scales={"gamma_out": 1, "width_max": 1, "width_subradiant_mean": 1},
        boundary_warning=warning,
    )


def run_widths_scan(cfg: ExperimentConfig) -> TableResult:
    return _widths_table(cfg)


def run_superradiant_gamma(cfg: ExperimentConfig) -> TableResult:
    result = _widths_table(cfg)
    result.meta["summary"] = f"gamma_st = {result.meta['gamma_st']:.6g} t"
    return result


def run_transfer_time(cfg: ExperimentConfig) -> TableResult:
    gouts = cfg.grids["gamma_out"].points()
    gphis = cfg.grids["gamma_phi"].points()
    cells = [(gp, go) for gp in gphis for go in gouts]

    def one(cell):
        gp, go = cell
        tau, eta = transfer_time(_params(cfg, gamma_out=go, gamma_phi=gp))
        closed = analytics.transfer_time_closed(cfg.sites, 1.0, go, gp)
        return tau, closed, eta

    values = _pool_map(one, cells, cfg.threads)
    rows = [(go, gp, tau, closed, eta) for (gp, go), (tau, closed, eta) in zip(cells, values)]
    return TableResult(
        columns=["gamma_out", "gamma_phi", "tau_numeric", "tau_closed", "eta"],
        rows=rows,
        meta={},
        scales={"gamma_out": 1, "gamma_phi": 1, "tau_numeric": -1, "tau_closed": -1, "eta": 0},
    )


def run_current_vs_pump(cfg: ExperimentConfig) -> TableResult:
    tau, _ = transfer_time(_params(cfg))
    gins = cfg.grids["gamma_in"].points()
    currents = _pool_map(
        lambda gi: _steady_current(_params(cfg, gamma_in=float(gi))), gins, cfg.threads
    )
    rows = [
        (gi, i_num, analytics.ness_current_closed(gi, tau)) for gi, i_num in zip(gins, currents)
    ]
    return TableResult(
        columns=["gamma_in", "i_ness", "i_closed"],
        rows=rows,
        meta={"tau": tau},
        scales={"gamma_in": 1, "i_ness": 1, "i_closed": 1},
    )


def run_max_current_vs_dephasing(cfg: ExperimentConfig) -> TableResult:
    gphis = cfg.grids["gamma_phi"].points()
    values = _pool_map(
        lambda gp: _i_se_numeric(_params(cfg, gamma_phi=float(gp))), gphis, cfg.threads
    )
    rows = [
        (
            gp,
            v,
            analytics.i_se(
                analytics.transfer_time_closed(cfg.sites, 1.0, cfg.gamma_out, float(gp))
            ),
        )
        for gp, v in zip(gphis, values)
    ]
    return TableResult(
        columns=["gamma_phi", "i_se", "i_se_closed"],
        rows=rows,
        meta={"gamma_out": cfg.gamma_out},
        scales={"gamma_phi": 1, "i_se": 1, "i_se_closed": 1},
    )


def run_conductance_scan(cfg: ExperimentConfig) -> TableResult:
    model = TransmissionModel(n_sites=cfg.sites, hopping=1.0, broadening=cfg.eta)
    grid = cfg.grids["gamma"].points()
    warning = None
    try:
        scan = conductance_scan(model, grid)
    except GridTooCoarseError as err:
        scan = err.scan
        warning = str(err)
    rows = list(zip(scan.gammas, scan.conductances))
    return TableResult(
        columns=["gamma", "g"],
        rows=rows,
        meta={"gamma_peak": scan.peak_gamma, "eta": cfg.eta},
        scales={"gamma": 1, "g": 0},
        boundary_warning=warning,
    )


def run_spectral_scan(cfg: ExperimentConfig) -> TableResult:
    model = TransmissionModel(
        n_sites=cfg.sites, hopping=1.0, lead_coupling=cfg.gamma_out, broadening=cfg.eta
    )
    omegas = cfg.grids["omega"].points()
    spectra = _pool_map(
        lambda site: spectral_function(model, site, omegas),
        list(range(1, cfg.sites + 1)),
        cfg.threads,
    )
    rows = [
        (site, w, a)
        for site, spec in zip(range(1, cfg.sites + 1), spectra)
        for w, a in zip(omegas, spec)
    ]
    return TableResult(
        columns=["site", "omega", "a"],
        rows=rows,
        meta={"gamma": cfg.gamma_out, "eta": cfg.eta},
        scales={"site": 0, "omega": 1, "a": -1},
    )


def run_se_me_compare(cfg: ExperimentConfig) -> TableResult:
    params = _params(cfg)
    tau, _ = transfer_time(params)
    table = compare_se_me(params, cfg.grids["gamma_in"].points())
    rows = [(r.gamma_in, r.i_se, r.i_me, r.rel_gap) for r in table]
    return TableResult(
        columns=["gamma_in", "i_se", "i_me", "rel_gap"],
        rows=rows,
        meta={"tau": tau},
        scales={"gamma_in": 1, "i_se": 1, "i_me": 1, "rel_gap": 0},
    )


def run_disorder_scan(cfg: ExperimentConfig) -> TableResult:
    ws = cfg.grids["disorder"].points()
    gphis = cfg.grids["gamma_phi"].points()
    cells = [(w, gp) for w in ws for gp in gphis]
    base = _params(cfg)

    # common master seed across cells: each gamma_phi column reuses the same
    # disorder realizations, which smooths the map without biasing the mean
    def one(cell):
        w, gp = cell
        res = averaged_max_current(base, w, gp, cfg.realizations, master_seed=cfg.seed)
        return res.mean, res.stderr, res.n_failed

    values = _pool_map(one, cells, cfg.threads)
    rows = [(w, gp, m, s, f) for (w, gp), (m, s, f) in zip(cells, values)]
    return TableResult(
        columns=["disorder_w", "gamma_phi", "i_se_mean", "i_se_stderr", "n_failed"],
        rows=rows,
        meta={"realizations": cfg.realizations, "master_seed": cfg.seed},
        scales={"disorder_w": 1, "gamma_phi": 1, "i_se_mean": 1, "i_se_stderr": 1, "n_failed": 0},
    )


def run_loss_scan(cfg: ExperimentConfig) -> TableResult:
    clean = _params(cfg, gamma_loss=0.0, gamma_phi=0.0)
    tau0, _ = transfer_time(clean)
    gamma_in = cfg.gamma_in if cfg.gamma_in > 0 else 0.1 / tau0
    params = _params(cfg, gamma_in=gamma_in, gamma_phi=0.0)
    grid = cfg.grids["gamma_loss"].points()
    scan = loss_scan(params, grid)
    baseline = scan.baseline
    rows = [(gl, i, i / baseline) for gl, i in zip(scan.gamma_loss, scan.currents)]
    return TableResult(
        columns=["gamma_loss", "i_ness", "ratio_to_baseline"],
        rows=rows,
        meta={"tau0": tau0, "gamma_in": gamma_in},
        scales={"gamma_loss": 1, "i_ness": 1, "ratio_to_baseline": 0},
    )


def run_table1(cfg: ExperimentConfig) -> TableResult:
    summary = analytics.table1_summary(cfg.sites, 1.0)
    columns = [
        "n_sites",
        "gamma_in_max",
        "gamma_out_opt",
        "gamma_phi_max",
        "disorder_max",
        "gamma_loss_max",
        "i_se_floor",
    ]
    row = (
        summary.n_sites,
        summary.gamma_in_max,
        summary.gamma_out_opt,
        summary.gamma_phi_max,
        summary.disorder_max,
        summary.gamma_loss_max,
        summary.i_se_floor,
    )
    lines = [
        f"single-excitation pump bound gamma_in <= {summary.gamma_in_max:.6g}",
        f"optimal sink coupling gamma_out = {summary.gamma_out_opt:.6g}",
        f"max dephasing gamma_phi = {summary.gamma_phi_max:.6g}",
        f"max disorder W = {summary.disorder_max:.6g}",
        f"max loss rate gamma_loss = {summary.gamma_loss_max:.6g}",
        f"optimal current floor I_se > {summary.i_se_floor:.6g}",
    ]
    return TableResult(
        columns=columns,
        rows=[row],
        meta={"summary": "\n".join(lines)},
        scales={c: (0 if c == "n_sites" else 1) for c in columns},
    )


@dataclass(frozen=True)
class ExperimentDef:
    runner: Callable[[ExperimentConfig], TableResult]
    defaults: dict
    has_figure: bool = True
    default_output: bool = True  # write <name>.csv even without --output


EXPERIMENTS: dict[str, ExperimentDef] = {
    "ness-scan": ExperimentDef(
        run_ness_scan,
        {"grids": {"gamma_out": "0.1:10:40:log", "gamma_phi": "0.1:10:40:log"}},
    ),
    "widths-scan": ExperimentDef(
        run_widths_scan,
        {"grids": {"gamma_out": "0.2:20:100:log"}},
    ),
    "transfer-time": ExperimentDef(
        run_transfer_time,
        {"grids": {"gamma_out": "0.1:10:60:log", "gamma_phi": "0,0.1,1,10"}},
    ),
    "current-vs-pump": ExperimentDef(
        run_current_vs_pump,
        {"gamma_phi": 0.1, "grids": {"gamma_in": "0.001:100:60:log"}},
    ),
    "max-current-vs-dephasing": ExperimentDef(
        run_max_current_vs_dephasing,
        {"grids": {"gamma_phi": "0.001:100:60:log"}},
    ),
    "conductance-scan": ExperimentDef(
        run_conductance_scan,
        {"grids": {"gamma": "0.2:20:100:log"}},
    ),
    "spectral-scan": ExperimentDef(
        run_spectral_scan,
        {"grids": {"omega": "-3:3:1201:lin"}},
    ),
    "se-me-compare": ExperimentDef(
        run_se_me_compare,
        {"sites": 4, "grids": {"gamma_in": "0.003:6:25:log"}},
    ),
    "disorder-scan": ExperimentDef(
        run_disorder_scan,
        {"grids": {"disorder": "0.1:10:10:log", "gamma_phi": "0.01:10:10:log"}},
    ),
    "loss-scan": ExperimentDef(
        run_loss_scan,
        {"grids": {"gamma_loss": "0.001:11:40:log"}},
    ),
    "table1": ExperimentDef(run_table1, {}, has_figure=False, default_output=False),
    "superradiant-gamma": ExperimentDef(
        run_superradiant_gamma,
        {"grids": {"gamma_out": "0.2:20:100:log"}},
        default_output=False,
    ),
}


def run_experiment(cfg: ExperimentConfig) -> TableResult:
    if cfg.experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {cfg.experiment!r}")
    return EXPERIMENTS[cfg.experiment].runner(cfg)
