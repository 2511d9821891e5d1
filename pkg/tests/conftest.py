import json
import sys
from pathlib import Path

import pytest
from hypothesis import settings

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# boundary data used throughout: name -> self-intersections
FIXTURE_KS = {
    "p2": (1, 1, 1),
    "p1xp1": (0, 0, 0, 0),
    "cubic": (-1, -1, -1),
    "dp5": (-1, -1, -1, -1, -1),
    "conic": (4, 1),
    "a1": (1, 1, 0),
}


def fixture_doc(name: str) -> dict:
    return json.loads((FIXTURES / f"{name}.json").read_text())


@pytest.fixture
def fig_doc():
    return fixture_doc("fig")
