import random
from fractions import Fraction

import pytest


@pytest.fixture
def rng():
    return random.Random(20260808)


@pytest.fixture
def lam64():
    return Fraction(1, 64)


def random_point(rng, den=2**12):
    return Fraction(rng.randint(0, den - 1), den), Fraction(rng.randint(0, den - 1), den)
