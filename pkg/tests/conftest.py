import json
from pathlib import Path

import pytest
from hypothesis import settings

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def reference_table():
    data = json.loads((FIXTURES / "table_p_below_50.json").read_text())
    return [dict(zip(data, row)) for row in zip(*data.values())]


def squares_by_enumeration(p):
    return {x * x % p for x in range(1, p)}
