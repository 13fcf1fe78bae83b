"""Random cone generators and brute-force oracles shared by the cone tests."""

import itertools
import random
from fractions import Fraction

from conebench.exact import dot, kernel, primitive_integer_ray, rank, vec


def random_generators(rng: random.Random, dim: int, count: int, lo: int = -4, hi: int = 4) -> list:
    gens = []
    while len(gens) < count:
        v = vec(rng.randint(lo, hi) for _ in range(dim))
        if any(v):
            gens.append(v)
    return gens


def random_full_generators(rng: random.Random, dim: int, count: int) -> list:
    while True:
        gens = random_generators(rng, dim, count)
        if rank(gens) == dim:
            return gens


def random_cone_with_lineality(rng: random.Random, dim: int):
    """Spanning data (generators, lineality) with 0 < dim W < dim."""
    k = rng.randint(1, dim - 1)
    while True:
        lin = random_generators(rng, dim, k, -3, 3)
        if rank(lin) == k:
            break
    gens = random_generators(rng, dim, rng.randint(1, dim + 2))
    return gens, lin


def brute_force_facets(gens: list, dim: int) -> set:
    """Facets of a full-dimensional Cone(gens) by hyperplane enumeration.

    Every (dim-1)-subset of generators of rank dim-1 spans a hyperplane; it
    is a facet when all generators lie on one side of it.
    """
    if dim == 1:
        signs = {g[0] > 0 for g in gens}
        return {(Fraction(1),)} if signs == {True} else {(Fraction(-1),)} if signs == {False} else set()
    out = set()
    for subset in itertools.combinations(gens, dim - 1):
        if rank(list(subset)) != dim - 1:
            continue
        (n,) = kernel(list(subset), dim)
        vals = [dot(g, n) for g in gens]
        if all(v >= 0 for v in vals):
            out.add(primitive_integer_ray(n))
        if all(v <= 0 for v in vals):
            out.add(primitive_integer_ray(tuple(-a for a in n)))
    return out


def random_rational_point(rng: random.Random, dim: int, bound: int = 6, max_den: int = 5) -> tuple:
    return tuple(Fraction(rng.randint(-bound * 5, bound * 5), rng.randint(1, max_den)) for _ in range(dim))
