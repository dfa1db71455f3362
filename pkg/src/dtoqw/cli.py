"""Command-line front end.

Examples
--------
Single run at the default ADC parameters, CSV to stdout::

    dtoqw --graph path:5 --channel adc --gamma 500 --g 0.01 --steps 30

Dephasing sweep over five values of ``p``, one file per grid point::

    dtoqw --graph star:5 --channel nmd --sweep p:0.1:0.5:5 --out runs/star.csv

Exit codes: 0 success, 2 bad usage, 3 bad graph spec, 4 parameter out of
domain, 5 verification failure, 6 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import CHANNELS, ChannelError, ChannelSpec, build_coins, verify_completeness
from .graph import Graph, GraphError, parse_graph_spec, to_walk_graph
from .metrics import MetricSeries, compute_series
from .oracle import MAX_ORACLE_N, build_superop, step_residual
from .walk import RunConfig, Trajectory, coins_for_step, trajectory

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GRAPH = 3
EXIT_PARAM = 4
EXIT_VERIFY = 5
EXIT_IO = 6

VERIFY_TOL = 1e-10

CHANNEL_PARAMS = {
    "adc": ("gamma", "g"),
    "nmd": ("p", "eta", "omega"),
    "depol": ("p", "alpha"),
}
PARAM_DEFAULTS = {"gamma": 500.0, "g": 0.01, "p": 0.5, "eta": 0.5, "omega": 50.0, "alpha": 1.0}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Sweep:
    param: str
    lo: float
    hi: float
    count: int

    def values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.lo, self.hi, self.count)]


@dataclass
class CliConfig:
    graph_spec: str
    graph: Graph
    channel: str
    params: dict[str, float]
    steps: int = 30
    dt: float = 1.0
    start: int = 0
    out: str = "-"
    fmt: str = "csv"
    sweep: Sweep | None = None
    verify: bool = False
    jobs: int = 1
    grid: list[dict[str, float]] = field(default_factory=list)

    def channel_spec(self, params: dict[str, float]) -> ChannelSpec:
        return CHANNELS[self.channel](**params)

    def describe(self, params: dict[str, float]) -> dict:
        return {
            "graph": self.graph_spec,
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.sorted_edges()],
            "channel": self.channel,
            "params": dict(sorted(params.items())),
            "steps": self.steps,
            "dt": self.dt,
            "start": self.start,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, f"usage error: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dtoqw", description="Discrete-time open quantum walks with noisy coins.")
    ap.add_argument("--graph", required=True,
                    help="path:N | cycle:N | star:N | complete:N | bipartite:A,B | file:PATH")
    ap.add_argument("--channel", required=True, choices=sorted(CHANNELS))
    for name in PARAM_DEFAULTS:
        ap.add_argument(f"--{name}", type=float, default=None,
                        help=f"channel parameter (default {PARAM_DEFAULTS[name]})")
    ap.add_argument("--steps", type=int, default=30)
    ap.add_argument("--dt", type=float, default=1.0, help="time per step for the ADC")
    ap.add_argument("--start", type=int, default=0, help="start vertex")
    ap.add_argument("--out", default="-", help="output file ('-' for stdout)")
    ap.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    ap.add_argument("--sweep", default=None, help="PARAM:MIN:MAX:COUNT")
    ap.add_argument("--verify", action="store_true",
                    help="check Kraus completeness and compare against the full Kraus-sum oracle")
    ap.add_argument("--jobs", type=int, default=0, help="parallel sweep workers (0 = auto)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _parse_sweep(text: str, channel: str) -> Sweep:
    parts = text.split(":")
    if len(parts) != 4:
        raise CliError(EXIT_USAGE, f"malformed sweep {text!r}; expected PARAM:MIN:MAX:COUNT")
    name, lo, hi, count = parts
    if name not in CHANNEL_PARAMS[channel]:
        raise CliError(EXIT_USAGE, f"sweep parameter {name!r} does not belong to channel {channel!r}")
    try:
        sweep = Sweep(name, float(lo), float(hi), int(count))
    except ValueError:
        raise CliError(EXIT_USAGE, f"malformed sweep {text!r}; bounds must be numbers and COUNT an integer")
    if sweep.count < 1:
        raise CliError(EXIT_USAGE, f"sweep count must be >= 1, got {sweep.count}")
    return sweep


def parse_args(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    try:
        graph = parse_graph_spec(ns.graph)
    except GraphError as exc:
        raise CliError(EXIT_GRAPH, f"graph error: {exc}")

    allowed = CHANNEL_PARAMS[ns.channel]
    foreign = [k for k in PARAM_DEFAULTS if getattr(ns, k) is not None and k not in allowed]
    if foreign:
        raise CliError(EXIT_USAGE, f"parameter(s) {', '.join('--' + k for k in foreign)} "
                                   f"do not apply to channel {ns.channel!r}")
    params = {k: getattr(ns, k) if getattr(ns, k) is not None else PARAM_DEFAULTS[k] for k in allowed}

    if ns.steps < 0:
        raise CliError(EXIT_PARAM, f"parameter error: --steps must be >= 0, got {ns.steps}")
    if not ns.dt > 0:
        raise CliError(EXIT_PARAM, f"parameter error: --dt must be > 0, got {ns.dt}")
    if not 0 <= ns.start < graph.n:
        raise CliError(EXIT_PARAM, f"parameter error: --start {ns.start} out of range for n={graph.n}")

    sweep = _parse_sweep(ns.sweep, ns.channel) if ns.sweep else None
    if sweep is not None and ns.out == "-":
        raise CliError(EXIT_USAGE, "a sweep writes several files; give --out PATH")
    grid = [params] if sweep is None else [{**params, sweep.param: v} for v in sweep.values()]

    cfg = CliConfig(ns.graph, graph, ns.channel, params, ns.steps, ns.dt, ns.start,
                    ns.out, ns.fmt, sweep, ns.verify, ns.jobs, grid)
    for point in grid:
        try:
            RunConfig(graph, cfg.channel_spec(point), ns.steps, ns.dt, ns.start)
            if ns.channel == "depol":
                # radicand check needs the actual degrees
                build_coins(cfg.channel_spec(point), to_walk_graph(graph))
        except (ChannelError, ValueError) as exc:
            raise CliError(EXIT_PARAM, f"parameter error: {exc}")
    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    return cfg


def verify_trajectory(traj: Trajectory) -> dict:
    """Completeness residual of every coin set used, plus oracle agreement when feasible."""
    wg = traj.walk_graph
    coin_sets = traj.coins or [coins_for_step(traj.config, wg, 0)]
    report = {"completeness_residual": max(verify_completeness(cs) for cs in coin_sets)}
    if wg.n <= MAX_ORACLE_N:
        global_res, oracle_res = 0.0, 0.0
        for k, cs in enumerate(coin_sets):
            so = build_superop(wg, cs)
            global_res = max(global_res, so.completeness_residual())
            if k < len(traj.coins):
                oracle_res = max(oracle_res, step_residual(traj.states[k], cs, wg, so))
        report["global_completeness_residual"] = global_res
        report["oracle_residual"] = oracle_res
    else:
        report["oracle_residual"] = None
    return report


def verify_passed(report: dict) -> bool:
    return all(v is None or v <= VERIFY_TOL for v in report.values())


def _num(x: float) -> str:
    return format(float(x), ".17g")


def render_csv(series: MetricSeries) -> str:
    buf = io.StringIO()
    header = ["step"] + [f"p_v{u}" for u in range(series.n)] + ["coherence", "fidelity"]
    buf.write(",".join(header) + "\n")
    probs = series.reported_probabilities()
    for k in range(series.steps + 1):
        row = [str(k)] + [_num(x) for x in probs[k]] + [_num(series.coherence[k]), _num(series.fidelity[k])]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def render_json(config: dict, series: MetricSeries, report: dict | None) -> str:
    doc = {
        "config": config,
        "series": {
            "probabilities": [[float(x) for x in row] for row in series.reported_probabilities()],
            "coherence": [float(x) for x in series.coherence],
            "fidelity": [float(x) for x in series.fidelity],
        },
    }
    if report is not None:
        doc["verify"] = report
    return json.dumps(doc, indent=2) + "\n"


@dataclass
class RunResult:
    params: dict[str, float]
    path: str
    series: MetricSeries
    report: dict | None


def _output_path(cfg: CliConfig, index: int) -> str:
    if cfg.sweep is None:
        return cfg.out
    p = Path(cfg.out)
    suffix = p.suffix or f".{cfg.fmt}"
    return str(p.with_name(f"{p.stem}_{cfg.sweep.param}_{index:03d}{suffix}"))


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def run_point(cfg: CliConfig, index: int) -> RunResult:
    params = cfg.grid[index]
    rc = RunConfig(cfg.graph, cfg.channel_spec(params), cfg.steps, cfg.dt, cfg.start)
    traj = trajectory(rc)
    series = compute_series(traj.states)
    report = verify_trajectory(traj) if cfg.verify else None
    path = _output_path(cfg, index)
    if cfg.fmt == "json":
        text = render_json(cfg.describe(params), series, report)
    else:
        text = render_csv(series)
    _write(path, text)
    log.info("wrote %s (%s)", path, params)
    return RunResult(params, path, series, report)


def _write_index(cfg: CliConfig, results: list[RunResult]) -> str:
    p = Path(cfg.out)
    if cfg.fmt == "json":
        path = p.with_name(f"{p.stem}_index.json")
        doc = [{"index": i, cfg.sweep.param: r.params[cfg.sweep.param], "file": Path(r.path).name}
               for i, r in enumerate(results)]
        _write(str(path), json.dumps(doc, indent=2) + "\n")
    else:
        path = p.with_name(f"{p.stem}_index.csv")
        lines = [f"index,{cfg.sweep.param},file"]
        lines += [f"{i},{_num(r.params[cfg.sweep.param])},{Path(r.path).name}" for i, r in enumerate(results)]
        _write(str(path), "\n".join(lines) + "\n")
    return str(path)


def execute(cfg: CliConfig) -> int:
    indices = range(len(cfg.grid))
    try:
        if len(cfg.grid) == 1:
            results = [run_point(cfg, 0)]
        else:
            jobs = cfg.jobs or min(len(cfg.grid), os.cpu_count() or 1)
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda i: run_point(cfg, i), indices))
            _write_index(cfg, results)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not cfg.verify:
        return EXIT_OK
    failed = False
    for r in results:
        status = "ok" if verify_passed(r.report) else "FAILED"
        failed |= status != "ok"
        fields = " ".join(f"{k}={'n/a' if v is None else format(v, '.3e')}" for k, v in r.report.items())
        print(f"verify {status}: {fields} [{r.params}]", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except CliError as exc:
        print(f"dtoqw: {exc}", file=sys.stderr)
        return exc.code
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
