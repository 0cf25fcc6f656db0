import numpy as np
import pytest

from chemalign_adapter import Structure

WATER = Structure(
    elements=("O", "H", "H"),
    positions=[[0.0, 0.0, 0.12], [0.0, 0.76, -0.47], [0.0, -0.76, -0.47]],
    comment="water",
)
METHANE = Structure(
    elements=("C", "H", "H", "H", "H"),
    positions=[
        [0.0, 0.0, 0.0],
        [0.63, 0.63, 0.63],
        [-0.63, -0.63, 0.63],
        [-0.63, 0.63, -0.63],
        [0.63, -0.63, -0.63],
    ],
    comment="methane",
)


@pytest.fixture
def toy_structures():
    # two waters, one methane: the standard grouping fixture
    shuffled_water = Structure(
        elements=("H", "O", "H"),
        positions=np.asarray(WATER.positions)[[1, 0, 2]],
        comment="water again",
    )
    return [WATER, shuffled_water, METHANE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if outcome == "passed" and getattr(rep, "when", "call") == "call":
                results.setdefault(name, "PASS")
            elif outcome in ("failed", "error"):
                results[name] = "FAIL"
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results):
            terminalreporter.write_line(f"[{results[name]}] {name}")
