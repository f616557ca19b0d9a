"""Seeded simulation campaigns and the ``mgear simulate`` command line."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from .config import ConfigError, NetworkConfig, Protocol, parse_config
from .metrics import DEFAULT_METRICS, compare_protocols, run_metric
from .protocol import SimulationResult, run_simulation

log = logging.getLogger(__name__)

SERIES_HEADER = "round,alive,residual_j,pkts_bs,pkts_src,cum_pkts_bs,cum_pkts_src"
SUMMARY_HEADER = "seed,first_death,half_death,last_death,total_src_pkts,total_energy_j"
COMPARISON_HEADER = "metric,level,seeds,mean_mgear,half_width_mgear,mean_leach,half_width_leach,ratio,verdict"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


class CampaignIOError(OSError):
    pass


@dataclass(frozen=True)
class CampaignSpec:
    base: NetworkConfig
    seeds: tuple[int, ...]
    out_dir: Path
    protocols: tuple[Protocol, ...] = (Protocol.MGEAR, Protocol.LEACH)
    metrics: tuple[str, ...] = DEFAULT_METRICS
    level: float = 0.99
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.seeds:
            raise ConfigError("seed list is empty", key="seeds")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seed list has duplicates", key="seeds")
        if not self.protocols:
            raise ConfigError("no protocol selected", key="protocol")
        object.__setattr__(self, "out_dir", Path(self.out_dir))


def fmt(value: float) -> str:
    return f"{value:.9g}"


def _opt(value: int | None) -> str:
    return "" if value is None else str(value)


def series_csv(result: SimulationResult) -> str:
    lines = [SERIES_HEADER]
    for rec in result.series:
        lines.append(
            f"{rec.round},{rec.alive_count},{fmt(rec.total_residual_energy)},"
            f"{rec.packets_received_at_bs},{rec.source_packets_delivered},"
            f"{rec.cumulative_packets_at_bs},{rec.cumulative_source_packets}"
        )
    return "\n".join(lines) + "\n"


def summary_csv(results: dict[int, SimulationResult]) -> str:
    lines = [SUMMARY_HEADER]
    for seed in sorted(results):
        s = results[seed].summary
        lines.append(
            f"{seed},{_opt(s.first_node_death_round)},{_opt(s.half_nodes_death_round)},"
            f"{_opt(s.last_node_death_round)},{s.total_source_packets},{fmt(results[seed].energy_consumed)}"
        )
    return "\n".join(lines) + "\n"


def comparison_csv(mgear: dict[int, SimulationResult], leach: dict[int, SimulationResult],
                   level: float, metrics: Sequence[str]) -> str:
    lines = [COMPARISON_HEADER]
    if len(mgear) < 2:
        return "\n".join(lines) + "\n"
    report = compare_protocols(mgear, leach, level=level, metrics=metrics)
    for name, cmp in report.items():
        ratio = cmp.a.mean / cmp.b.mean if cmp.b.mean else float("inf")
        verdict = {"a higher": "mgear higher", "b higher": "leach higher"}.get(cmp.verdict, cmp.verdict)
        lines.append(
            f"{name},{fmt(level)},{cmp.a.sample_count},{fmt(cmp.a.mean)},{fmt(cmp.a.half_width)},"
            f"{fmt(cmp.b.mean)},{fmt(cmp.b.half_width)},{fmt(ratio)},{verdict}"
        )
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def check_writable(out_dir: Path) -> None:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        fd, probe = tempfile.mkstemp(dir=out_dir, prefix=".probe.")
        os.close(fd)
        os.unlink(probe)
    except OSError as exc:
        raise CampaignIOError(f"output directory {out_dir} is not writable: {exc}") from exc


def _run_one(config: NetworkConfig) -> SimulationResult:
    return run_simulation(config)


def run_campaign(spec: CampaignSpec) -> dict[Protocol, dict[int, SimulationResult]]:
    """Run every (protocol, seed) pair and write the CSV outputs.

    Writes ``<protocol>_seed<seed>.csv`` per run, ``<protocol>_summary.csv``
    per protocol and, when both protocols ran, ``comparison.csv``.
    """
    check_writable(spec.out_dir)
    jobs = [(proto, seed) for proto in spec.protocols for seed in spec.seeds]
    configs = [spec.base.replace(protocol=proto, seed=seed) for proto, seed in jobs]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            outcomes = list(pool.map(_run_one, configs))
    else:
        outcomes = [_run_one(cfg) for cfg in configs]

    results: dict[Protocol, dict[int, SimulationResult]] = {p: {} for p in spec.protocols}
    for (proto, seed), res in zip(jobs, outcomes):
        results[proto][seed] = res
        write_atomic(spec.out_dir / f"{proto.value}_seed{seed}.csv", series_csv(res))
        log.info("%s seed %d: last death %s", proto.value, seed, res.summary.last_node_death_round)
    for proto in spec.protocols:
        write_atomic(spec.out_dir / f"{proto.value}_summary.csv", summary_csv(results[proto]))
    if Protocol.MGEAR in results and Protocol.LEACH in results:
        write_atomic(
            spec.out_dir / "comparison.csv",
            comparison_csv(results[Protocol.MGEAR], results[Protocol.LEACH], spec.level, spec.metrics),
        )
    return results


def parse_seeds(text: str) -> tuple[int, ...]:
    """``"30"`` means seeds 1..30; ``"3,7,11"`` is an explicit list."""
    text = text.strip()
    try:
        if "," in text:
            seeds = tuple(int(part) for part in text.split(",") if part.strip())
        else:
            count = int(text)
            if count < 1:
                raise ConfigError(f"seed count must be >= 1, got {count}", key="seeds")
            seeds = tuple(range(1, count + 1))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"expected a count or a comma-separated list, got {text!r}", key="seeds") from None
    if not seeds:
        raise ConfigError("seed list is empty", key="seeds")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seed list has duplicates", key="seeds")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgear", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a seeded campaign and write CSV series")
    sim.add_argument("--config", type=Path, help="key = value config file (defaults if omitted)")
    sim.add_argument("--protocol", choices=["mgear", "leach", "both"], default="both")
    sim.add_argument("--seeds", default="30", help="seed count n (seeds 1..n) or comma list")
    sim.add_argument("--out", type=Path, required=True)
    sim.add_argument("--max-rounds", type=int)
    sim.add_argument("--level", type=float, default=0.99, help="confidence level for comparison.csv")
    sim.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        text = args.config.read_text() if args.config else ""
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        base = parse_config(text)
        if args.max_rounds is not None:
            if args.max_rounds < 0:
                raise ConfigError("must be >= 0", key="max_rounds")
            base = base.replace(max_rounds=args.max_rounds)
        if not 0 < args.level < 1:
            raise ConfigError("must lie in (0, 1)", key="level")
        protocols = (Protocol.MGEAR, Protocol.LEACH) if args.protocol == "both" else (Protocol(args.protocol),)
        spec = CampaignSpec(base=base, seeds=parse_seeds(args.seeds), out_dir=args.out,
                            protocols=protocols, level=args.level, jobs=max(1, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        results = run_campaign(spec)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for proto, runs in results.items():
        lifetimes = [run_metric(r, "lifetime") for r in runs.values()]
        print(f"{proto.value}: {len(runs)} runs, mean lifetime {sum(lifetimes) / len(lifetimes):.1f} rounds")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
