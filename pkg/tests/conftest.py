import itertools

import pytest

from codedetect import ConvCode, parse_octal_generators, validate_assumptions


@pytest.fixture(scope="session")
def code57():
    return parse_octal_generators(["5", "7"])


@pytest.fixture(scope="session")
def code45():
    return parse_octal_generators(["4", "5"])


@pytest.fixture(scope="session")
def example_pairs():
    """The four benchmark code pairs, in octal."""
    return [
        (["5", "7"], ["4", "5"]),
        (["11", "5"], ["7", "10"]),
        (["37", "21"], ["31", "27"]),
        (["133", "171"], ["117", "127"]),
    ]


def eligible_family() -> list[ConvCode]:
    """Every non-degenerate k=1, n=2, m=2 code, by exhaustive tap enumeration."""
    family = []
    for g0 in itertools.product((0, 1), repeat=3):
        for g1 in itertools.product((0, 1), repeat=3):
            if g0 == (0, 0, 0) or g1 == (0, 0, 0) or (g0[2] == 0 and g1[2] == 0):
                continue
            code = ConvCode.make([g0, g1])
            if validate_assumptions(code).is_analysis_eligible:
                family.append(code)
    return family


@pytest.fixture(scope="session")
def eligible_codes():
    family = eligible_family()
    assert len(family) >= 10
    return family
