import json
from pathlib import Path

import pytest

from fuzzybisim import automaton_from_obj

FIXTURES = Path(__file__).parent / "fixtures"


def load_automaton(name):
    return automaton_from_obj(json.loads((FIXTURES / name).read_text()))


@pytest.fixture(scope="session")
def aut_a():
    return load_automaton("ex_a.json")


@pytest.fixture(scope="session")
def aut_ap():
    return load_automaton("ex_a_prime.json")


@pytest.fixture()
def fixture_dir():
    return FIXTURES
