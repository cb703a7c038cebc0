"""Shared random generators for the tests."""

import random
from math import gcd

from cherncount.chow import RingSpec


def random_class(ring: RingSpec, rng: random.Random, max_terms: int = 3):
    """A random class made of one to three degree-one generators with small integer coefficients."""
    linear = [nm for nm, d in zip(ring.names, ring.degrees) if d == 1]
    x = ring.zero
    for _ in range(rng.randint(1, max_terms)):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        x = x + c * ring.gen(rng.choice(linear))
    return x


def check_confluence(ring: RingSpec, rng: random.Random, n: int) -> int:
    """Check associativity and commutativity of reduced products on n random triples."""
    for _ in range(n):
        x, y, z = (random_class(ring, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
    return n


P2 = [(1, 0), (0, 1), (-1, -1)]
F1 = [(1, 0), (1, 1), (0, 1), (-1, -1)]


def subdivide(rays, rng: random.Random, steps: int):
    """Insert random primitive rays into random cones of a complete fan."""
    rays = list(rays)
    for _ in range(steps):
        i = rng.randrange(len(rays))
        u, v = rays[i], rays[(i + 1) % len(rays)]
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        w = (a * u[0] + b * v[0], a * u[1] + b * v[1])
        g = gcd(*w)
        rays.insert(i + 1, (w[0] // g, w[1] // g))
    return rays
