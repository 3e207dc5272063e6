from fractions import Fraction

import pytest

from weighted_zeta import fixture, random_graph

FIXTURE_ARGS = [
    ("G1", "0.5"), ("G1", "1"), ("G1", "2"),
    ("G2", "1", "1"), ("G2", "2", "3"),
    ("G3",), ("G4",),
]


def fixture_corpus():
    return [(" ".join(args), fixture(*args)) for args in FIXTURE_ARGS]


def random_corpus(count=50, start=0):
    return [(f"random-{s}", random_graph(s)) for s in range(start, start + count)]


def full_corpus():
    return fixture_corpus() + random_corpus()


@pytest.fixture(scope="session")
def corpus():
    return full_corpus()


@pytest.fixture
def g3():
    return fixture("G3")


@pytest.fixture
def g4():
    return fixture("G4")


def frac(x):
    return Fraction(x)
