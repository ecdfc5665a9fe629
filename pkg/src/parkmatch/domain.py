"""Participants of the parking market and the pairwise feasibility rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import ParameterError, StructuralError

DEFAULT_H = 48
DEFAULT_REPUTATION = 1.0
DEFAULT_GAMMA = 0.5
DEFAULT_DELTA = 0.5

Location = Tuple[float, float]


@dataclass(frozen=True)
class TimeVector:
    """Binary per-slot flags over one day split into ``len(slots)`` slots.

    For a driver a 1 marks a slot in which parking is needed; for a spot a 1
    marks a slot in which the spot is *not* offered.
    """

    slots: Tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        slots = tuple(int(s) for s in self.slots)
        if not slots:
            raise StructuralError("time vector must have at least one slot")
        if any(s not in (0, 1) for s in slots):
            raise StructuralError(f"time vector entries must be 0 or 1, got {self.slots!r}")
        object.__setattr__(self, "slots", slots)
        mask = 0
        for k, s in enumerate(slots):
            if s:
                mask |= 1 << k
        object.__setattr__(self, "mask", mask)

    @classmethod
    def zeros(cls, h: int = DEFAULT_H) -> "TimeVector":
        return cls((0,) * h)

    def __len__(self) -> int:
        return len(self.slots)

    def dot(self, other: "TimeVector") -> int:
        if len(self) != len(other):
            raise StructuralError(
                f"time vectors differ in length ({len(self)} vs {len(other)})"
            )
        return bin(self.mask & other.mask).count("1")


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class Driver:
    id: str
    location: Optional[Location]
    max_price: float
    min_spot_reputation: float
    demand: TimeVector
    reputation: float = DEFAULT_REPUTATION

    def __post_init__(self) -> None:
        if self.max_price < 0:
            raise ParameterError(f"max_price must be >= 0, got {self.max_price}")
        _check_unit("min_spot_reputation", self.min_spot_reputation)
        _check_unit("reputation", self.reputation)


@dataclass(frozen=True)
class ParkingSpot:
    id: str
    location: Optional[Location]
    price: float
    min_driver_reputation: float
    availability: TimeVector
    reputation: float = DEFAULT_REPUTATION

    def __post_init__(self) -> None:
        if self.price < 0:
            raise ParameterError(f"price must be >= 0, got {self.price}")
        _check_unit("min_driver_reputation", self.min_driver_reputation)
        _check_unit("reputation", self.reputation)


def feasible(d: Driver, p: ParkingSpot) -> bool:
    """True iff the pair passes the price, both reputation thresholds and the
    time-conflict test. Ties on price and reputation count as feasible."""
    conflict = d.demand.dot(p.availability)  # raises on length mismatch
    return (
        d.max_price >= p.price
        and d.min_spot_reputation <= p.reputation
        and p.min_driver_reputation <= d.reputation
        and conflict == 0
    )


def _smooth(prev: float, weight: float, score: float) -> float:
    return (1.0 - weight) * prev + weight * score


def update_driver_reputation(prev: float, gamma: float, score: float) -> float:
    """Exponentially smoothed driver reputation after one transaction.

    ``gamma`` may be 0 (ignore the new score) or 1 (replace by it); callers
    without a preference use ``DEFAULT_GAMMA``.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"gamma must lie in [0, 1], got {gamma}")
    _check_unit("prev", prev)
    _check_unit("score", score)
    return _smooth(prev, gamma, score)


def update_spot_reputation(prev: float, delta: float, score: float) -> float:
    """Exponentially smoothed spot reputation; ``delta`` is open-interval."""
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    _check_unit("prev", prev)
    _check_unit("score", score)
    return _smooth(prev, delta, score)


def unconstrained_driver(id: str, h: int = DEFAULT_H) -> Driver:
    """Driver whose side constraints accept every unconstrained spot."""
    return Driver(id, None, 0.0, 0.0, TimeVector.zeros(h), DEFAULT_REPUTATION)


def unconstrained_spot(id: str, h: int = DEFAULT_H) -> ParkingSpot:
    return ParkingSpot(id, None, 0.0, 0.0, TimeVector.zeros(h), DEFAULT_REPUTATION)


def time_vector(slots: Sequence[int]) -> TimeVector:
    return TimeVector(tuple(slots))
