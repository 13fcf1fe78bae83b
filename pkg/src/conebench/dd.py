"""Double description: generators of {x : <a_i, x> >= 0}.

The row space of the constraint matrix is parametrized by the values of a
maximal independent set of constraints, which turns the problem into a
pointed cone inside the nonnegative orthant. Remaining constraints are then
added one at a time (Motzkin's double description step) with the
combinatorial adjacency test.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import (
    DimensionError,
    Vec,
    dot,
    inverse,
    kernel,
    matmul,
    matvec,
    primitive_integer_ray,
    rref,
    solve_linear,
    transpose,
)


def _independent_rows(a):
    """Indices of a maximal linearly independent subset of rows, greedy in order."""
    # pivots of rref(a^T) are the independent columns of a^T
    _, pivots = rref(transpose(a))
    return pivots


def _adjacent(zp: int, zm: int, zeros: list, i: int, j: int, need: int) -> bool:
    common = zp & zm
    if common.bit_count() < need:
        return False
    for k, z in enumerate(zeros):
        if k != i and k != j and common & ~z == 0:
            return False
    return True


def extreme_rays(a: Sequence[Sequence[Fraction]], dim: int):
    """Return ``(rays, lineality)`` for the cone ``{x : a x >= 0}``.

    ``lineality`` is a basis of ker(a); ``rays`` are the extreme rays of the
    pointed part intersected with the row space of ``a``, as primitive
    integer vectors sorted lexicographically.
    """
    a = [tuple(r) for r in a]
    if any(len(r) != dim for r in a):
        raise DimensionError("constraint of wrong length")
    a = [r for r in a if any(r)]
    lineality = kernel(a, dim)
    if not a:
        return [], lineality
    basic = _independent_rows(a)
    r = len(basic)
    b = [a[i] for i in basic]
    bt = transpose(b)
    # every row in the y-coordinates y_k = <b_k, x>
    coords = []
    for row in a:
        c, _ = solve_linear(bt, row)
        coords.append(c)
    others = [coords[i] for i in range(len(a)) if i not in set(basic)]

    # y >= 0 is constraint k for k < r; extreme rays are unit vectors
    rays = []
    zeros = []
    full = (1 << r) - 1
    for k in range(r):
        rays.append(tuple(Fraction(int(k == j)) for j in range(r)))
        zeros.append(full & ~(1 << k))
    ncons = r
    for c in others:
        vals = [dot(c, y) for y in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        negs = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        bit = 1 << ncons
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        for i in pos:
            for j in negs:
                if not _adjacent(zeros[i], zeros[j], zeros, i, j, r - 2):
                    continue
                y = tuple(vals[i] * q - vals[j] * p for p, q in zip(rays[i], rays[j]))
                new_rays.append(primitive_integer_ray(y))
                new_zeros.append((zeros[i] & zeros[j]) | bit)
        rays, zeros = new_rays, new_zeros
        ncons += 1
        if not rays:
            break

    # back to x: x = B^T z with B B^T z = y
    gram_inv = inverse(matmul(b, bt))
    out = []
    for y in rays:
        x = matvec(bt, matvec(gram_inv, y))
        out.append(primitive_integer_ray(x))
    return sorted(set(out)), lineality
