"""Command-line scenario runner.

    opar-sim run --config scenario.yaml [--seed N] [--out results.csv]
    opar-sim sweep --config scenario.yaml --param w1 --values 0.5,0.7,1.0 --seeds 10
    opar-sim oracle-check --nodes 10 --trials 1000
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .config import dump_config, parse_config
from .errors import ConfigError, InvalidInputError
from .mobility import write_trajectory_csv
from .optimizer import Weights
from .oracle import audit
from .simulator import MetricsReport, ScenarioConfig, run_scenario

SWEEP_PARAMETERS = ("w1", "n_flows", "n_uavs", "mobility_model")
COLUMNS = ("parameter", "seed", "success_rate", "weighted_throughput_mbps",
           "mean_fct_s", "overhead_bytes", "mean_reroutes")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    seeds_per_point: int = 1

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError("param", f"expected one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if not self.values:
            raise ConfigError("values", "need at least one value")
        if self.seeds_per_point < 1:
            raise ConfigError("seeds", f"need at least 1 seed per point, got {self.seeds_per_point}")


def apply_parameter(base: ScenarioConfig, parameter: str, value) -> ScenarioConfig:
    try:
        if parameter == "w1":
            return dataclasses.replace(base, weights=Weights.from_w1(float(value)))
        if parameter in ("n_flows", "n_uavs"):
            return dataclasses.replace(base, **{parameter: int(value)})
        if parameter == "mobility_model":
            return dataclasses.replace(base, mobility=dataclasses.replace(base.mobility, model=str(value)))
    except (InvalidInputError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(parameter, str(exc)) from None
    raise ConfigError("param", f"cannot sweep {parameter!r}")


def _metric_values(report: MetricsReport) -> List[float]:
    return [report.success_rate, report.weighted_throughput, report.mean_fct,
            float(report.routing_overhead_bytes), report.mean_reroutes]


def _row(parameter: str, seed: str, values: Sequence[float]) -> str:
    return ",".join([parameter, seed] + [f"{v:.6f}" for v in values])


def _header(cfg: ScenarioConfig, extra: Sequence[str] = ()) -> str:
    lines = ["# opar-sim results"]
    lines += [f"# {line}" for line in extra]
    lines.append("# weighted_throughput_mbps = mean(bytes_delivered*8/(end-start))/1e6 * success_rate")
    lines.append("# mean_fct_s counts failed flows at sim_time")
    lines.append("# config:")
    lines += [f"#   {line}" for line in dump_config(cfg).splitlines()]
    lines.append(",".join(COLUMNS))
    return "\n".join(lines) + "\n"


def _run_point(cfg: ScenarioConfig) -> List[float]:
    return _metric_values(run_scenario(cfg))


def report_csv(cfg: ScenarioConfig, report: MetricsReport) -> str:
    """Single-run CSV: header block plus one row."""
    return _header(cfg) + _row("", str(cfg.seed), _metric_values(report)) + "\n"


def run_sweep(base: ScenarioConfig, sweep: SweepSpec, jobs: int = 1) -> str:
    """Run every (value, seed) point and return the CSV report.

    Seeds run from ``base.seed`` upward. A mean row (seed ``mean``) follows
    each point when more than one seed is used.
    """
    points = []
    for value in sweep.values:
        cfg = apply_parameter(base, sweep.parameter, value)
        for k in range(sweep.seeds_per_point):
            points.append((str(value), dataclasses.replace(cfg, seed=base.seed + k)))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_point, cfg) for _, cfg in points]
            results = []
            for (value, cfg), fut in zip(points, futures):
                try:
                    results.append(fut.result())
                except Exception as exc:
                    raise RuntimeError(f"sweep point {sweep.parameter}={value} seed={cfg.seed} failed: {exc}") from exc
    else:
        results = []
        for value, cfg in points:
            try:
                results.append(_run_point(cfg))
            except Exception as exc:
                raise RuntimeError(f"sweep point {sweep.parameter}={value} seed={cfg.seed} failed: {exc}") from exc

    buf = io.StringIO()
    buf.write(_header(base, [f"sweep_parameter: {sweep.parameter}",
                             f"sweep_values: {','.join(str(v) for v in sweep.values)}",
                             f"seeds_per_point: {sweep.seeds_per_point}"]))
    k = sweep.seeds_per_point
    for i, value in enumerate(sweep.values):
        chunk = results[i * k:(i + 1) * k]
        for (label, cfg), vals in zip(points[i * k:(i + 1) * k], chunk):
            buf.write(_row(label, str(cfg.seed), vals) + "\n")
        if k > 1:
            means = [sum(col) / k for col in zip(*chunk)]
            buf.write(_row(str(value), "mean", means) + "\n")
    return buf.getvalue()


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_values(raw: str) -> tuple:
    return tuple(v.strip() for v in raw.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opar-sim", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--flows", help="also write per-flow records to this CSV")
    run.add_argument("--trajectory", help="also write sampled positions to this CSV")

    sweep = sub.add_parser("sweep", help="sweep one parameter over several seeds")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    sweep.add_argument("--values", required=True)
    sweep.add_argument("--seeds", type=int, default=1)
    sweep.add_argument("--out")
    sweep.add_argument("--jobs", type=int, default=1)

    oracle = sub.add_parser("oracle-check", help="compare the solver with exhaustive search")
    oracle.add_argument("--nodes", type=int, default=10)
    oracle.add_argument("--trials", type=int, default=1000)
    oracle.add_argument("--seed", type=int, default=0)
    return parser


def _flows_csv(report: MetricsReport) -> str:
    lines = ["flow_id,source,destination,bytes_delivered,start_time,finish_time,completed,reroute_count"]
    for f in report.per_flow:
        finish = "" if f.finish_time is None else f"{f.finish_time:.6f}"
        lines.append(f"{f.flow_id},{f.source},{f.destination},{f.bytes_delivered:.6f},"
                     f"{f.start_time:.6f},{finish},{int(f.completed)},{f.reroute_count}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "oracle-check":
            if args.nodes < 3 or args.trials < 1:
                raise ConfigError("nodes", "need --nodes >= 3 and --trials >= 1")
            res = audit(args.trials, max_nodes=args.nodes, seed=args.seed)
            print(f"trials={res.trials} mismatches={res.mismatches} "
                  f"bfs_bound_violations={res.bound_violations} "
                  f"threshold_violations={res.threshold_violations} max_gap={res.max_gap:.3e}")
            print("PASS" if res.ok else "FAIL")
            return 0 if res.ok else 1

        cfg = parse_config(args.config)
        if args.command == "run":
            if args.seed is not None:
                cfg = dataclasses.replace(cfg, seed=args.seed)
            trajectory = [] if args.trajectory else None
            report = run_scenario(cfg, trajectory=trajectory)
            _write(report_csv(cfg, report), args.out)
            if args.flows:
                _write(_flows_csv(report), args.flows)
            if args.trajectory:
                with open(args.trajectory, "w", encoding="utf-8", newline="") as fh:
                    write_trajectory_csv(trajectory, fh)
            return 0

        spec = SweepSpec(args.param, _parse_values(args.values), args.seeds)
        _write(run_sweep(cfg, spec, jobs=args.jobs), args.out)
        return 0
    except (ConfigError, InvalidInputError, RuntimeError, OSError) as exc:
        print(f"opar-sim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
