import random
from fractions import Fraction

import pytest

import betaforge as bf


@pytest.fixture(scope="session")
def golden():
    return bf.get_preset("golden")


@pytest.fixture(scope="session")
def sqrt2():
    return bf.get_preset("sqrt2")


@pytest.fixture(scope="session")
def cbrt2():
    return bf.get_preset("cbrt2")


@pytest.fixture(scope="session")
def tribonacci():
    return bf.get_preset("tribonacci")


@pytest.fixture
def rng():
    return random.Random(0xBE7A)


def random_rational(rng, lo=Fraction(0), hi=Fraction(1), den_bits=20):
    den = rng.randrange(1, 1 << den_bits)
    num = rng.randrange(0, den + 1)
    return lo + (hi - lo) * Fraction(num, den)
