import random
from fractions import Fraction

import pytest

from pshnd.algebra import GaussianRational, HolomorphicPolynomial, MixedPolynomial, ModulusCombination
from pshnd.parser import parse
from pshnd.verify import COUNTEREXAMPLE_P


def rand_scalar(rng: random.Random, real_only=False) -> GaussianRational:
    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))

    return GaussianRational(q(), 0 if real_only or rng.random() < 0.4 else q())


def rand_mixed(rng: random.Random, terms=5, degree=6) -> MixedPolynomial:
    out = {}
    for _ in range(rng.randint(0, terms)):
        parts = [0, 0, 0, 0]
        for _ in range(rng.randint(0, degree)):
            parts[rng.randrange(4)] += 1
        out[tuple(parts)] = rand_scalar(rng)
    return MixedPolynomial(out)


def rand_holo(rng: random.Random, terms=4, degree=6) -> HolomorphicPolynomial:
    out = {}
    for _ in range(rng.randint(1, terms)):
        a = rng.randint(0, degree)
        c = rng.randint(0, degree - a)
        out[(a, c)] = rand_scalar(rng)
    return HolomorphicPolynomial(out)


def rand_mc(rng: random.Random, summands=4, degree=6) -> ModulusCombination:
    return ModulusCombination(
        [(rng.choice((-1, 1)), rand_holo(rng, degree=degree)) for _ in range(rng.randint(1, summands))]
    )


def rand_real(rng: random.Random, degree=6) -> MixedPolynomial:
    p = rand_mixed(rng, degree=degree)
    return p + p.conjugate()


def rand_diagram(rng: random.Random, size=12, coord=30):
    return frozenset((rng.randint(0, coord), rng.randint(0, coord)) for _ in range(rng.randint(1, size)))


@pytest.fixture(scope="session")
def ce_p() -> MixedPolynomial:
    return parse(COUNTEREXAMPLE_P)
