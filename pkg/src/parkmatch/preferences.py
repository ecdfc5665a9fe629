"""Distances between participants and feasibility-filtered preference lists.

Both sides rank their feasible counterparties by ascending distance; equal
distances fall back to ascending counterparty id so every list is strict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .domain import Driver, ParkingSpot, feasible
from .errors import StructuralError

COORDINATE = "coordinate"
MATRIX = "matrix"


@dataclass(frozen=True)
class PreferenceList:
    owner: str
    ranked: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        prev = -math.inf
        for cid, dist in self.ranked:
            if cid in seen:
                raise StructuralError(f"{self.owner}: duplicate entry {cid!r}")
            if dist < 0 or dist < prev:
                raise StructuralError(f"{self.owner}: distances must be nonnegative and sorted")
            seen.add(cid)
            prev = dist

    @classmethod
    def from_distances(cls, owner: str, distances: Mapping[str, float]) -> "PreferenceList":
        ranked = sorted(distances.items(), key=lambda kv: (kv[1], kv[0]))
        return cls(owner, tuple(ranked))

    @cached_property
    def ids(self) -> Tuple[str, ...]:
        return tuple(cid for cid, _ in self.ranked)

    @cached_property
    def rank(self) -> Dict[str, int]:
        """Counterparty id -> position (0 is most preferred)."""
        return {cid: k for k, (cid, _) in enumerate(self.ranked)}

    def __len__(self) -> int:
        return len(self.ranked)

    def __contains__(self, cid: object) -> bool:
        return cid in self.rank

    def prefers(self, a: str, b: Optional[str]) -> bool:
        """True if ``a`` is listed and ranked strictly above ``b``.

        ``b=None`` stands for being unassigned, which every listed entry beats.
        """
        ra = self.rank.get(a)
        if ra is None:
            return False
        if b is None:
            return True
        rb = self.rank.get(b)
        return rb is None or ra < rb


@dataclass(frozen=True)
class DistanceModel:
    """Either Euclidean distances between locations or an explicit sparse
    matrix in which a missing (driver, spot) entry means "no edge"."""

    mode: str = COORDINATE
    matrix: Optional[Mapping[Tuple[str, str], float]] = None
    _by_driver: Dict[str, Dict[str, float]] = field(init=False, repr=False, compare=False)
    _by_spot: Dict[str, Dict[str, float]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.mode not in (COORDINATE, MATRIX):
            raise StructuralError(f"unknown distance mode {self.mode!r}")
        by_driver: Dict[str, Dict[str, float]] = {}
        by_spot: Dict[str, Dict[str, float]] = {}
        if self.mode == MATRIX:
            if self.matrix is None:
                raise StructuralError("matrix mode requires a matrix")
            for (did, sid), dist in self.matrix.items():
                if not dist >= 0:
                    raise StructuralError(f"negative or NaN distance for ({did}, {sid})")
                by_driver.setdefault(did, {})[sid] = float(dist)
                by_spot.setdefault(sid, {})[did] = float(dist)
        object.__setattr__(self, "_by_driver", by_driver)
        object.__setattr__(self, "_by_spot", by_spot)

    @classmethod
    def from_matrix(cls, matrix: Mapping[Tuple[str, str], float]) -> "DistanceModel":
        return cls(MATRIX, dict(matrix))

    def distance(self, d: Driver, p: ParkingSpot) -> Optional[float]:
        if self.mode == MATRIX:
            return self._by_driver.get(d.id, {}).get(p.id)
        if d.location is None or p.location is None:
            return None
        return math.dist(d.location, p.location)

    def spots_near(self, driver_id: str) -> Mapping[str, float]:
        return self._by_driver.get(driver_id, {})

    def drivers_near(self, spot_id: str) -> Mapping[str, float]:
        return self._by_spot.get(spot_id, {})


def distance(model: DistanceModel, d: Driver, p: ParkingSpot) -> Optional[float]:
    return model.distance(d, p)


def _candidates(owner_id, others, near, model_mode):
    # Matrix mode only needs to look at stored edges.
    if model_mode == MATRIX:
        index = {o.id: o for o in others}
        return [index[oid] for oid in near(owner_id) if oid in index]
    return list(others)


def build_driver_preferences(
    d: Driver, spots: Iterable[ParkingSpot], model: DistanceModel
) -> PreferenceList:
    """Rank every feasible spot with a defined distance, nearest first."""
    found = {}
    for p in _candidates(d.id, spots, model.spots_near, model.mode):
        if not feasible(d, p):
            continue
        dist = model.distance(d, p)
        if dist is not None:
            found[p.id] = dist
    return PreferenceList.from_distances(d.id, found)


def build_spot_preferences(
    p: ParkingSpot, drivers: Iterable[Driver], model: DistanceModel
) -> PreferenceList:
    """Rank every feasible driver with a defined distance, nearest first."""
    found = {}
    for d in _candidates(p.id, drivers, model.drivers_near, model.mode):
        if not feasible(d, p):
            continue
        dist = model.distance(d, p)
        if dist is not None:
            found[d.id] = dist
    return PreferenceList.from_distances(p.id, found)


def build_all_preferences(drivers, spots, model: DistanceModel):
    """Lists for every participant, evaluating each candidate pair once.

    Returns ``(driver_lists, spot_lists)`` keyed by participant id, in the
    order the participants were given.
    """
    drivers = list(drivers)
    spots = list(spots)
    spot_index = {p.id: p for p in spots}
    d_found: Dict[str, Dict[str, float]] = {d.id: {} for d in drivers}
    s_found: Dict[str, Dict[str, float]] = {p.id: {} for p in spots}
    for d in drivers:
        if model.mode == MATRIX:
            pairs = [(spot_index[sid], dist) for sid, dist in model.spots_near(d.id).items()
                     if sid in spot_index]
        else:
            pairs = [(p, model.distance(d, p)) for p in spots]
        for p, dist in pairs:
            if dist is not None and feasible(d, p):
                d_found[d.id][p.id] = dist
                s_found[p.id][d.id] = dist
    driver_lists = {did: PreferenceList.from_distances(did, f) for did, f in d_found.items()}
    spot_lists = {sid: PreferenceList.from_distances(sid, f) for sid, f in s_found.items()}
    return driver_lists, spot_lists
