"""Stable two-sided matching of drivers and shared parking spots."""
from .baselines import greedy_match, hungarian_match, random_match
from .domain import (
    Driver,
    ParkingSpot,
    TimeVector,
    feasible,
    update_driver_reputation,
    update_spot_reputation,
)
from .errors import (
    ConfigError,
    IngestionError,
    ParameterError,
    ParkMatchError,
    SizeError,
    StructuralError,
)
from .matching import (
    BlockingPair,
    Matching,
    ProposalTrace,
    enumerate_stable_matchings,
    find_blocking_pairs,
    is_stable,
    mm_match,
)
from .preferences import (
    DistanceModel,
    PreferenceList,
    build_all_preferences,
    build_driver_preferences,
    build_spot_preferences,
    distance,
)
from .scenario import Scenario, ScenarioConfig, generate, ingest, load_scenario

__version__ = "0.1.0"

__all__ = [
    "BlockingPair", "ConfigError", "DistanceModel", "Driver", "IngestionError", "Matching",
    "ParameterError", "ParkMatchError", "ParkingSpot", "PreferenceList", "ProposalTrace",
    "Scenario", "ScenarioConfig", "SizeError", "StructuralError", "TimeVector",
    "build_all_preferences", "build_driver_preferences", "build_spot_preferences", "distance",
    "enumerate_stable_matchings", "feasible", "find_blocking_pairs", "generate", "greedy_match",
    "hungarian_match", "ingest", "is_stable", "load_scenario", "mm_match", "random_match",
    "update_driver_reputation", "update_spot_reputation",
]
