"""Random inputs shared by the property tests."""
import numpy as np

from jaynes_qic import Hermitian2, QubitState, expectation


def random_bloch(rng, inside=True):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * (rng.uniform() ** (1 / 3) if inside else 1.0)


def random_state(rng):
    return QubitState.from_bloch(random_bloch(rng))


def random_hermitian(rng, scale=1.0):
    h11, h22, re, im = rng.uniform(-scale, scale, size=4)
    return Hermitian2(h11, h22, complex(re, im))


def random_constraints(rng, k):
    """k random observables with means taken from a random state, so always feasible."""
    s = random_state(rng)
    obs = [random_hermitian(rng) for _ in range(k)]
    return [(a, expectation(s, a)) for a in obs]
