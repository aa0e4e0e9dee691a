"""Fixtures shared by the test modules."""

from __future__ import annotations

import pytest

from bifuzzy.serialize import parse_automaton, parse_ucmap
from helpers import FIXTURES


@pytest.fixture
def example2():
    g = parse_automaton(FIXTURES / "example2_plant.json")
    r = parse_automaton(FIXTURES / "example2_spec.json")
    uc1 = parse_ucmap(FIXTURES / "example2_uc1.json")
    uc2 = parse_ucmap(FIXTURES / "example2_uc2.json")
    return g, r, uc1, uc2


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
