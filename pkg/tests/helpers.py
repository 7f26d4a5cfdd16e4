import random

from hktorelli.errors import DependentSpan, NotPositive
from hktorelli.period import make_period


def unit(n, *idx):
    return [int(i in idx) for i in range(n)]


def rational_period(lattice, rng: random.Random, box: int = 3):
    while True:
        a = [rng.randint(-box, box) for _ in range(lattice.rank)]
        b = [rng.randint(-box, box) for _ in range(lattice.rank)]
        try:
            return make_period(lattice, a, b)
        except (NotPositive, DependentSpan):
            continue

