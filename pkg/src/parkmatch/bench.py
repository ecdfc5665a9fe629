"""Experiment runner: per-matcher metrics, size and density sweeps, timing."""
from __future__ import annotations

import csv
import io
import math
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import distance_matrix, greedy_match, hungarian_match, random_match
from .matching import Matching, find_blocking_pairs, mm_match
from .preferences import build_all_preferences
from .scenario import EDGES_ONLY, Scenario, ScenarioConfig, generate

MATCHERS = ("mm", "greedy", "random", "km")
CSV_COLUMNS = (
    "matcher", "drivers", "spots", "eta", "seed", "total_distance",
    "matched_count", "blocking_pairs", "proposals", "wall_time_s",
)
TIMING_COLUMNS = ("matcher", "drivers", "spots", "eta", "runs", "median_wall_time_s")


@dataclass
class RunMetrics:
    matcher: str
    drivers: int
    spots: int
    eta: float
    seed: int
    total_distance: float
    matched_count: int
    blocking_pairs: int
    proposals: Optional[int]
    wall_time_s: float
    config: Optional[Dict[str, Any]] = field(default=None, repr=False)
    pairs: List[Tuple[str, str]] = field(default_factory=list, repr=False)

    def row(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in CSV_COLUMNS}


@dataclass
class Prepared:
    """Everything the matchers consume, built once per scenario."""

    scenario: Scenario
    driver_lists: dict
    spot_lists: dict
    distances: np.ndarray

    @classmethod
    def of(cls, s: Scenario) -> "Prepared":
        dl, sl = build_all_preferences(s.drivers, s.spots, s.model)
        return cls(s, dl, sl, distance_matrix(dl, s.driver_ids, s.spot_ids))


def _call(name: str, prep: Prepared, seed: int) -> Tuple[Matching, Optional[int]]:
    dl, sl = prep.driver_lists, prep.spot_lists
    if name == "mm":
        m, trace = mm_match(dl, sl)
        return m, trace.proposal_count
    if name == "greedy":
        return greedy_match(dl, sl), None
    if name == "random":
        return random_match(dl, sl, seed), None
    if name == "km":
        s = prep.scenario
        return hungarian_match(prep.distances, s.driver_ids, s.spot_ids), None
    raise KeyError(f"unknown matcher {name!r}")


def timed_match(name: str, prep: Prepared, seed: int) -> Tuple[Matching, Optional[int], float]:
    t0 = time.perf_counter()
    m, proposals = _call(name, prep, seed)
    return m, proposals, time.perf_counter() - t0


def total_distance(s: Scenario, m: Matching) -> float:
    """Sum of scenario distances over the matched pairs, looked up afresh."""
    parts = []
    for d, p in m.pairs:
        x = s.distance_between(d, p)
        if x is None:
            raise ValueError(f"matched pair ({d}, {p}) has no distance in the scenario")
        parts.append(x)
    return math.fsum(parts)


def scenario_eta(prep: Prepared) -> float:
    """Configured edge fraction, or the realised fraction of feasible pairs
    for scenarios that were ingested rather than generated."""
    s = prep.scenario
    if s.config is not None:
        return s.config.edge_fraction
    cells = len(s.drivers) * len(s.spots)
    listed = sum(len(pl) for pl in prep.driver_lists.values())
    return listed / cells if cells else 0.0


def run_matchers(
    s: Scenario,
    matchers: Sequence[str] = MATCHERS,
    seeds: Optional[Sequence[int]] = None,
    prepared: Optional[Prepared] = None,
) -> List[RunMetrics]:
    """One row per (seed, matcher). Preference lists are built once; the
    seed only drives the random matcher but is echoed on every row."""
    prep = prepared or Prepared.of(s)
    if seeds is None:
        seeds = [s.config.seed if s.config else 0]
    echo = s.config.to_dict() if s.config else None
    rows = []
    for seed in seeds:
        for name in matchers:
            m, proposals, wall = timed_match(name, prep, seed)
            rows.append(RunMetrics(
                matcher=name,
                drivers=len(s.drivers),
                spots=len(s.spots),
                eta=scenario_eta(prep),
                seed=seed,
                total_distance=total_distance(s, m),
                matched_count=m.size,
                blocking_pairs=len(find_blocking_pairs(m, prep.driver_lists, prep.spot_lists)),
                proposals=proposals,
                wall_time_s=wall,
                config=echo,
                pairs=m.sorted_pairs(),
            ))
    return rows


def _cell(num_drivers, num_spots, eta, distance_range, seed, constraint_mode, h):
    cfg = ScenarioConfig(num_drivers, num_spots, eta, tuple(distance_range), seed, h, constraint_mode)
    return generate(cfg)


def sweep_size(
    sizes: Iterable[int],
    eta: float = 0.2,
    distance_range: Tuple[float, float] = (0.0, 5.0),
    seeds: Sequence[int] = (0,),
    matchers: Sequence[str] = MATCHERS,
    constraint_mode: str = EDGES_ONLY,
    H: int = 48,
) -> List[RunMetrics]:
    """Square instances (drivers = spots = size), fresh scenario per seed."""
    rows = []
    for n in sizes:
        for seed in seeds:
            s = _cell(n, n, eta, distance_range, seed, constraint_mode, H)
            rows.extend(run_matchers(s, matchers, [seed]))
    return rows


def sweep_density(
    etas: Iterable[float],
    size: int = 250,
    distance_range: Tuple[float, float] = (0.0, 100.0),
    seeds: Sequence[int] = (0,),
    matchers: Sequence[str] = MATCHERS,
    constraint_mode: str = EDGES_ONLY,
    H: int = 48,
) -> List[RunMetrics]:
    rows = []
    for eta in etas:
        for seed in seeds:
            s = _cell(size, size, eta, distance_range, seed, constraint_mode, H)
            rows.extend(run_matchers(s, matchers, [seed]))
    return rows


@dataclass
class TimingRow:
    matcher: str
    drivers: int
    spots: int
    eta: float
    runs: int
    median_wall_time_s: float

    def row(self) -> Dict[str, Any]:
        return asdict(self)


def time_matchers(
    sizes: Sequence[int],
    eta: float = 0.2,
    seeds: Sequence[int] = (0,),
    matchers: Sequence[str] = MATCHERS,
    distance_range: Tuple[float, float] = (0.0, 5.0),
    repeats: int = 1,
) -> List[TimingRow]:
    """Median wall time per (matcher, size), measured sequentially."""
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be nondecreasing")
    samples: Dict[Tuple[str, int], List[float]] = {}
    for n in sizes:
        for seed in seeds:
            prep = Prepared.of(_cell(n, n, eta, distance_range, seed, EDGES_ONLY, 48))
            for name in matchers:
                for _ in range(repeats):
                    samples.setdefault((name, n), []).append(timed_match(name, prep, seed)[2])
    return [
        TimingRow(name, n, n, eta, len(samples[(name, n)]), statistics.median(samples[(name, n)]))
        for n in sizes
        for name in matchers
    ]


def loglog_slope(sizes: Sequence[float], times: Sequence[float]) -> float:
    """Least-squares slope of log(time) against log(size)."""
    slope, _ = np.polyfit(np.log(sizes), np.log(times), 1)
    return float(slope)


def aggregate(rows: Iterable[RunMetrics], key: str = "drivers") -> List[Dict[str, Any]]:
    """Seed-means per (key value, matcher), in first-seen order."""
    groups: Dict[Tuple[Any, str], List[RunMetrics]] = {}
    for r in rows:
        groups.setdefault((getattr(r, key), r.matcher), []).append(r)
    out = []
    for (value, name), rs in groups.items():
        out.append({
            key: value,
            "matcher": name,
            "seeds": len(rs),
            "mean_total_distance": statistics.fmean(r.total_distance for r in rs),
            "mean_matched_count": statistics.fmean(r.matched_count for r in rs),
            "mean_blocking_pairs": statistics.fmean(r.blocking_pairs for r in rs),
            "mean_wall_time_s": statistics.fmean(r.wall_time_s for r in rs),
        })
    return out


def to_csv(rows: Iterable[Any], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r if isinstance(r, dict) else r.row())
    return buf.getvalue()


def mean_by(rows: Iterable[RunMetrics], key: str, attr: str = "total_distance") -> Dict[Tuple[Any, str], float]:
    """{(key value, matcher): seed-mean of attr}."""
    groups: Dict[Tuple[Any, str], List[float]] = {}
    for r in rows:
        groups.setdefault((getattr(r, key), r.matcher), []).append(getattr(r, attr))
    return {k: statistics.fmean(v) for k, v in groups.items()}
