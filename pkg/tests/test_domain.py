import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parkmatch.domain import (
    Driver,
    ParkingSpot,
    TimeVector,
    feasible,
    update_driver_reputation,
    update_spot_reputation,
)
from parkmatch.errors import ParameterError, StructuralError


def make_pair(**overrides):
    d = Driver("D1", (0, 0), max_price=10, min_spot_reputation=0.5,
               demand=TimeVector((1, 0)), reputation=0.6)
    p = ParkingSpot("P1", (1, 1), price=8, min_driver_reputation=0.4,
                    availability=TimeVector((0, 1)), reputation=0.7)
    dk = {k: v for k, v in overrides.items() if hasattr(d, k) and k != "reputation"}
    pk = {k: v for k, v in overrides.items() if hasattr(p, k) and k != "reputation"}
    return dataclasses.replace(d, **dk), dataclasses.replace(p, **pk)


def test_feasible_all_constraints_hold():
    d, p = make_pair()
    assert feasible(d, p)


def test_price_violation():
    d, p = make_pair(max_price=5)
    assert not feasible(d, p)


def test_time_conflict():
    d, p = make_pair(availability=TimeVector((1, 0)))
    assert not feasible(d, p)


@pytest.mark.parametrize("change", [
    {"max_price": 7.99},
    {"min_spot_reputation": 0.71},
    {"min_driver_reputation": 0.61},
    {"demand": TimeVector((1, 1))},
])
def test_single_constraint_toggle(change):
    d, p = make_pair(**change)
    assert not feasible(d, p)


def test_ties_are_feasible():
    d, p = make_pair(max_price=8, min_spot_reputation=0.7, min_driver_reputation=0.6)
    assert feasible(d, p)


def test_mismatched_time_vectors():
    d, p = make_pair(availability=TimeVector((0, 0, 0)))
    with pytest.raises(StructuralError):
        feasible(d, p)


def test_time_vector_rejects_non_binary():
    with pytest.raises(StructuralError):
        TimeVector((0, 2))
    with pytest.raises(StructuralError):
        TimeVector(())


@pytest.mark.parametrize("bad", [
    dict(reputation=1.2), dict(min_spot_reputation=-0.1), dict(max_price=-1.0),
])
def test_driver_invariants(bad):
    args = dict(id="D", location=None, max_price=1.0, min_spot_reputation=0.0,
                demand=TimeVector((0,)), reputation=0.5)
    args.update(bad)
    with pytest.raises(ParameterError):
        Driver(**args)


@pytest.mark.parametrize("prev,gamma,score,expected", [
    (0.8, 0.5, 1.0, 0.9), (0.8, 0.0, 0.1, 0.8), (0.3, 1.0, 0.7, 0.7),
])
def test_driver_reputation(prev, gamma, score, expected):
    assert update_driver_reputation(prev, gamma, score) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("prev,delta,score,expected", [
    (1.0, 0.5, 0.0, 0.5), (0.6, 0.25, 0.6, 0.6), (0.0, 0.5, 1.0, 0.5),
])
def test_spot_reputation(prev, delta, score, expected):
    assert update_spot_reputation(prev, delta, score) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("gamma", [-0.01, 1.01])
def test_gamma_range(gamma):
    with pytest.raises(ParameterError):
        update_driver_reputation(0.5, gamma, 0.5)


@pytest.mark.parametrize("delta", [0.0, 1.0, 1.5])
def test_delta_open_interval(delta):
    with pytest.raises(ParameterError):
        update_spot_reputation(0.5, delta, 0.5)


unit = st.floats(0.0, 1.0)


@given(unit, unit, unit)
def test_driver_update_is_convex(prev, gamma, score):
    r = update_driver_reputation(prev, gamma, score)
    assert min(prev, score) - 1e-15 <= r <= max(prev, score) + 1e-15


@given(unit, st.floats(0.0, 1.0, exclude_min=True, exclude_max=True), unit)
def test_spot_update_is_convex(prev, delta, score):
    r = update_spot_reputation(prev, delta, score)
    assert min(prev, score) - 1e-15 <= r <= max(prev, score) + 1e-15


slots = st.lists(st.integers(0, 1), min_size=6, max_size=6)


@given(
    slots, slots, st.floats(0, 20), st.floats(0, 20), unit, unit, unit, unit,
    st.floats(0, 5), unit, unit,
)
def test_feasible_monotone_and_symmetric(a, b, max_price, price, msr, mdr, drep, srep,
                                         raise_price, raise_drep, raise_srep):
    d = Driver("D", None, max_price, msr, TimeVector(a), drep)
    p = ParkingSpot("P", None, price, mdr, TimeVector(b), srep)
    assert d.demand.dot(p.availability) == p.availability.dot(d.demand)
    if feasible(d, p):
        d2 = dataclasses.replace(d, max_price=max_price + raise_price,
                                 reputation=max(drep, raise_drep))
        p2 = dataclasses.replace(p, reputation=max(srep, raise_srep))
        assert feasible(d2, p2)
