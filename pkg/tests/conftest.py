import json
from pathlib import Path

import pytest

from parkmatch.preferences import PreferenceList

FIXTURES = Path(__file__).parent / "fixtures"

WORKED_DRIVERS = {"D1": ["P2", "P1"], "D2": ["P1", "P3"], "D3": ["P2"], "D4": ["P1"], "D5": ["P4"]}
WORKED_SPOTS = {"P1": ["D1", "D2", "D4"], "P2": ["D3", "D1"], "P3": ["D2"], "P4": ["D5"]}
WORKED_RESULT = {("D1", "P1"), ("D2", "P3"), ("D3", "P2"), ("D5", "P4")}


def lists_from_order(prefs):
    """PreferenceLists whose rank order is exactly the given id order."""
    return {
        owner: PreferenceList(owner, tuple((cid, float(k)) for k, cid in enumerate(ids)))
        for owner, ids in prefs.items()
    }


@pytest.fixture
def worked_lists():
    return lists_from_order(WORKED_DRIVERS), lists_from_order(WORKED_SPOTS)


@pytest.fixture
def fixture_json():
    def load(name):
        return json.loads((FIXTURES / name).read_text())
    return load


def pytest_terminal_summary(terminalreporter):
    try:
        from tests.test_acceptance import REPORT
    except ImportError:
        return
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(REPORT):
        parts = REPORT[criterion]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:2d}: {status}")
        for name, ok, detail in parts:
            terminalreporter.write_line(f"    [{'ok' if ok else 'x '}] {name}: {detail}")
