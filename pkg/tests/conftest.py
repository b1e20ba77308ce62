import random

import pytest
from hypothesis import settings

from pseudochar.rings import Integers, IntegersMod, PrimeField, adjoin, finite_field

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile("default")


def standard_rings():
    z = Integers()
    return [z, IntegersMod(4), IntegersMod(25), PrimeField(5), PrimeField(7), finite_field(4), adjoin(z, ["t"])]


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_RESULTS: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_RESULTS[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
