"""Seeded synthetic instances and JSON ingestion of driver/spot records."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from .domain import (
    DEFAULT_H,
    Driver,
    ParkingSpot,
    TimeVector,
    unconstrained_driver,
    unconstrained_spot,
)
from .errors import ConfigError, IngestionError, ParkMatchError
from .preferences import COORDINATE, MATRIX, DistanceModel

EDGES_ONLY = "edges-only"
FULL = "full"


@dataclass(frozen=True)
class ScenarioConfig:
    num_drivers: int
    num_spots: int
    edge_fraction: float = 0.2
    distance_range: Tuple[float, float] = (0.0, 5.0)
    seed: int = 0
    H: int = DEFAULT_H
    constraint_mode: str = EDGES_ONLY

    def __post_init__(self) -> None:
        if self.num_drivers < 1 or self.num_spots < 1:
            raise ConfigError("num_drivers and num_spots must be positive")
        if not 0.0 < self.edge_fraction <= 1.0:
            raise ConfigError(f"edge_fraction must lie in (0, 1], got {self.edge_fraction}")
        lo, hi = self.distance_range
        if not 0.0 <= lo < hi:
            raise ConfigError(f"distance_range must satisfy 0 <= lo < hi, got {self.distance_range}")
        object.__setattr__(self, "distance_range", (float(lo), float(hi)))
        if self.H < 1:
            raise ConfigError("H must be positive")
        if self.constraint_mode not in (EDGES_ONLY, FULL):
            raise ConfigError(f"unknown constraint_mode {self.constraint_mode!r}")

    @property
    def edge_count(self) -> int:
        return edge_count(self.edge_fraction, self.num_drivers, self.num_spots)

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["distance_range"] = list(self.distance_range)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        data = dict(data)
        if "distance_range" in data:
            data["distance_range"] = tuple(data["distance_range"])
        return cls(**data)


def edge_count(fraction: float, num_drivers: int, num_spots: int) -> int:
    """round-half-up(fraction * |D| * |P|), computed in decimal so that e.g.
    0.35 * 10 is not nudged below 3.5 by binary floating point."""
    exact = Decimal(repr(float(fraction))) * num_drivers * num_spots
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class Scenario:
    drivers: Tuple[Driver, ...]
    spots: Tuple[ParkingSpot, ...]
    model: DistanceModel
    edges: Tuple[Tuple[str, str, float], ...]
    config: Optional[ScenarioConfig] = None

    @property
    def driver_ids(self) -> List[str]:
        return [d.id for d in self.drivers]

    @property
    def spot_ids(self) -> List[str]:
        return [p.id for p in self.spots]

    @cached_property
    def edge_lookup(self) -> Dict[Tuple[str, str], float]:
        return {(d, p): x for d, p, x in self.edges}

    def distance_between(self, driver_id: str, spot_id: str) -> Optional[float]:
        if self.model.mode == MATRIX:
            return self.model.spots_near(driver_id).get(spot_id)
        return self.edge_lookup.get((driver_id, spot_id))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict() if self.config else None,
            "drivers": [driver_record(d) for d in self.drivers],
            "spots": [spot_record(p) for p in self.spots],
            "edges": [{"driver": d, "spot": p, "distance": x} for d, p, x in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _ids(prefix: str, n: int) -> List[str]:
    width = len(str(n))
    return [f"{prefix}{k:0{width}d}" for k in range(1, n + 1)]


def _random_block(rng: np.random.Generator, h: int, max_len: int) -> Tuple[int, ...]:
    # One contiguous run of ones of random length 0..max_len.
    length = int(rng.integers(0, max_len + 1))
    start = int(rng.integers(0, h - length + 1))
    return tuple(1 if start <= k < start + length else 0 for k in range(h))


def _sample_side_constraints(cfg: ScenarioConfig, rng, driver_ids, spot_ids):
    h = cfg.H
    drivers = tuple(
        Driver(
            did,
            None,
            max_price=float(rng.uniform(5.0, 15.0)),
            min_spot_reputation=float(rng.uniform(0.0, 0.6)),
            demand=TimeVector(_random_block(rng, h, max(1, h // 4))),
            reputation=float(rng.uniform(0.5, 1.0)),
        )
        for did in driver_ids
    )
    spots = tuple(
        ParkingSpot(
            sid,
            None,
            price=float(rng.uniform(0.0, 10.0)),
            min_driver_reputation=float(rng.uniform(0.0, 0.6)),
            availability=TimeVector(_random_block(rng, h, max(1, h // 4))),
            reputation=float(rng.uniform(0.5, 1.0)),
        )
        for sid in spot_ids
    )
    return drivers, spots


def generate(config: ScenarioConfig) -> Scenario:
    """Sample ``config.edge_count`` distinct driver-spot pairs uniformly and
    give each an independent uniform distance in ``config.distance_range``.

    In edges-only mode every participant is unconstrained, so the sampled
    edges alone decide feasibility. Full mode additionally samples prices,
    reputations, thresholds and one busy block per time vector.
    """
    rng = np.random.default_rng(config.seed)
    nd, ns = config.num_drivers, config.num_spots
    driver_ids = _ids("D", nd)
    spot_ids = _ids("P", ns)
    m = config.edge_count
    flat = np.sort(rng.choice(nd * ns, size=m, replace=False))
    lo, hi = config.distance_range
    dist = rng.uniform(lo, hi, size=m)
    edges = tuple(
        (driver_ids[int(f) // ns], spot_ids[int(f) % ns], float(x))
        for f, x in zip(flat, dist)
    )
    if config.constraint_mode == FULL:
        drivers, spots = _sample_side_constraints(config, rng, driver_ids, spot_ids)
    else:
        drivers = tuple(unconstrained_driver(d, config.H) for d in driver_ids)
        spots = tuple(unconstrained_spot(p, config.H) for p in spot_ids)
    model = DistanceModel.from_matrix({(d, p): x for d, p, x in edges})
    return Scenario(drivers, spots, model, edges, config)


# -- records -----------------------------------------------------------------

def driver_record(d: Driver) -> Dict[str, Any]:
    return {
        "id": d.id,
        "location": list(d.location) if d.location is not None else None,
        "max_price": d.max_price,
        "min_spot_reputation": d.min_spot_reputation,
        "demand": list(d.demand.slots),
        "reputation": d.reputation,
    }


def spot_record(p: ParkingSpot) -> Dict[str, Any]:
    return {
        "id": p.id,
        "location": list(p.location) if p.location is not None else None,
        "price": p.price,
        "min_driver_reputation": p.min_driver_reputation,
        "availability": list(p.availability.slots),
        "reputation": p.reputation,
    }


_DRIVER_FIELDS = ("id", "location", "max_price", "min_spot_reputation", "demand", "reputation")
_SPOT_FIELDS = ("id", "location", "price", "min_driver_reputation", "availability", "reputation")


def _location(raw, where, required):
    if raw is None:
        if required:
            raise IngestionError(f"{where}: location is required")
        return None
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise IngestionError(f"{where}: location must be [x, y], got {raw!r}")
    return (float(raw[0]), float(raw[1]))


def _parse_participant(kind, rec, index, h, need_location):
    fields = _DRIVER_FIELDS if kind == "drivers" else _SPOT_FIELDS
    label = rec.get("id", "?") if isinstance(rec, Mapping) else "?"
    where = f"{kind}[{index}] (id {label!r})"
    if not isinstance(rec, Mapping):
        raise IngestionError(f"{where}: record must be an object")
    missing = [f for f in fields if f not in rec and f != "reputation"]
    if missing:
        raise IngestionError(f"{where}: missing field(s) {', '.join(missing)}")
    vector_key = fields[4]
    slots = rec[vector_key]
    if not isinstance(slots, list):
        raise IngestionError(f"{where}: {vector_key} must be a list")
    if h is not None and len(slots) != h:
        raise IngestionError(f"{where}: {vector_key} has length {len(slots)}, expected H={h}")
    try:
        vec = TimeVector(tuple(slots))
        loc = _location(rec["location"], where, need_location)
        args = dict(rec)
        args.pop(vector_key)
        args.pop("location")
        args = {k: (str(v) if k == "id" else float(v)) for k, v in args.items()}
        if kind == "drivers":
            return Driver(location=loc, demand=vec, **args)
        return ParkingSpot(location=loc, availability=vec, **args)
    except IngestionError:
        raise
    except (ParkMatchError, TypeError, ValueError) as exc:
        raise IngestionError(f"{where}: {exc}") from exc


def _parse_participants(records: Mapping[str, Any], need_location: bool):
    if not isinstance(records, Mapping):
        raise IngestionError("input must be an object with 'drivers' and 'spots'")
    h = records.get("H")
    out = {}
    for kind in ("drivers", "spots"):
        raw = records.get(kind)
        if not isinstance(raw, list):
            raise IngestionError(f"'{kind}' must be a list of records")
        parsed = [_parse_participant(kind, rec, k, h, need_location) for k, rec in enumerate(raw)]
        if h is None and parsed:
            first = parsed[0]
            h = len(first.demand if kind == "drivers" else first.availability)
            for k, item in enumerate(parsed):
                n = len(item.demand if kind == "drivers" else item.availability)
                if n != h:
                    raise IngestionError(
                        f"{kind}[{k}] (id {item.id!r}): time vector length {n}, expected H={h}"
                    )
        ids = [item.id for item in parsed]
        if len(set(ids)) != len(ids):
            raise IngestionError(f"duplicate ids among {kind}")
        out[kind] = tuple(parsed)
    return out["drivers"], out["spots"]


def ingest(records: Mapping[str, Any]) -> Scenario:
    """Scenario from driver/spot records with Euclidean distances.

    ``records`` is ``{"H": optional int, "drivers": [...], "spots": [...]}``.
    Feasibility is left to the full pairwise predicate; ``edges`` lists every
    pair with its coordinate distance.
    """
    drivers, spots = _parse_participants(records, need_location=True)
    model = DistanceModel(COORDINATE)
    edges = tuple((d.id, p.id, model.distance(d, p)) for d in drivers for p in spots)
    return Scenario(drivers, spots, model, edges, None)


def scenario_from_dict(data: Mapping[str, Any]) -> Scenario:
    """Load a scenario file; without an ``edges`` key it is read as records."""
    if "edges" not in data:
        return ingest(data)
    drivers, spots = _parse_participants(data, need_location=False)
    driver_set = {d.id for d in drivers}
    spot_set = {p.id for p in spots}
    edges = []
    for k, e in enumerate(data["edges"]):
        try:
            d, p, x = str(e["driver"]), str(e["spot"]), float(e["distance"])
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"edges[{k}]: malformed edge {e!r}") from exc
        if d not in driver_set or p not in spot_set:
            raise IngestionError(f"edges[{k}]: unknown participant in {e!r}")
        if not x >= 0:
            raise IngestionError(f"edges[{k}]: distance must be >= 0")
        edges.append((d, p, x))
    cfg = data.get("config")
    try:
        config = ScenarioConfig.from_dict(cfg) if cfg else None
    except (TypeError, ConfigError) as exc:
        raise IngestionError(f"config: {exc}") from exc
    model = DistanceModel.from_matrix({(d, p): x for d, p, x in edges})
    return Scenario(drivers, spots, model, tuple(edges), config)


def load_scenario(path) -> Scenario:
    with open(Path(path), encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise IngestionError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_dict(data)


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(s.to_json() + "\n", encoding="utf-8")
