"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; vectors and matrices are tuples of
them (rows for matrices). Everything here is a pure function over immutable
values.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Vec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[Vec, ...]


class DimensionError(ValueError):
    pass


def frac(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a canonical Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def vec(values: Iterable) -> Vec:
    return tuple(frac(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when q == 1)."""
    return str(x)


def fmt_vec(v: Sequence[Fraction]) -> list:
    return [fmt(x) for x in v]


def fmt_mat(m: Sequence[Sequence[Fraction]]) -> list:
    return [fmt_vec(r) for r in m]


def zero(n: int) -> Vec:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vec:
    return tuple(Fraction(int(i == j)) for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"dot of length {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence[Fraction]) -> Vec:
    return tuple(c * a for a in v)


def neg(v: Sequence[Fraction]) -> Vec:
    return tuple(-a for a in v)


def vsum(vectors: Iterable[Sequence[Fraction]], n: int) -> Vec:
    acc = [Fraction(0)] * n
    for v in vectors:
        for i, a in enumerate(v):
            acc[i] += a
    return tuple(acc)


def matvec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, v) for row in m)


def transpose(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> Mat:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(tuple(col) for col in zip(*m))


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def bilinear(x: Sequence[Fraction], q: Sequence[Sequence[Fraction]], y: Sequence[Fraction]) -> Fraction:
    return dot(x, matvec(q, y))


def rref(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in m]
    n = len(rows[0]) if rows else (ncols or 0)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def kernel(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> list:
    """Basis of {x : m x = 0}, canonical for the row space of ``m``.

    Each basis vector is scaled to primitive integer form with its first
    nonzero entry positive.
    """
    n = len(m[0]) if m else ncols
    if n is None:
        raise DimensionError("kernel of an empty matrix needs ncols")
    rows, pivots = rref(m, n) if m else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        v = primitive_integer_ray(v)
        if next(a for a in v if a) < 0:
            v = neg(v)
        basis.append(v)
    return basis


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: Optional[int] = None):
    """Solve ``a x = b`` exactly.

    Returns ``(x, kernel_basis)`` where ``x`` is one particular solution (free
    variables set to zero) or ``None`` if the system is inconsistent.
    """
    if len(a) != len(b):
        raise DimensionError(f"{len(a)} equations but right-hand side of length {len(b)}")
    n = len(a[0]) if a else ncols
    if n is None:
        raise DimensionError("empty system needs ncols")
    if any(len(r) != n for r in a):
        raise DimensionError("ragged coefficient matrix")
    aug = [tuple(r) + (frac(bi),) for r, bi in zip(a, b)]
    rows, pivots = rref(aug, n + 1) if aug else ([], [])
    if n in pivots:
        return None, kernel(a, n)
    x = [Fraction(0)] * n
    for row, p in zip(rows, pivots):
        x[p] = row[n]
    return tuple(x), kernel(a, n)


def inverse(m: Sequence[Sequence[Fraction]]) -> Mat:
    n = len(m)
    aug = [tuple(r) + unit(n, i) for i, r in enumerate(m)]
    rows, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in rows)


def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    rows = [[Fraction(a) for a in r] for r in m]
    n = len(rows)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(basis)


def primitive_integer_ray(v: Sequence[Fraction]) -> Vec:
    """The coprime integer vector on the ray spanned by ``v``."""
    if is_zero(v):
        raise ValueError("zero vector spans no ray")
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(Fraction(a // g) for a in ints)


def is_integral(m: Iterable[Iterable[Fraction]]) -> bool:
    return all(a.denominator == 1 for row in m for a in row)


def inertia(q: Sequence[Sequence[Fraction]]) -> tuple:
    """Return (n_pos, n_neg, n_zero) of a symmetric matrix by congruence.

    Symmetric Gaussian elimination; a zero diagonal with a nonzero
    off-diagonal entry is repaired by the congruence row_i += row_j,
    col_i += col_j.
    """
    m = [list(r) for r in q]
    pos = negc = 0
    while m:
        n = len(m)
        p = next((i for i in range(n) if m[i][i] != 0), None)
        if p is None:
            off = next(((i, j) for i in range(n) for j in range(n) if i != j and m[i][j] != 0), None)
            if off is None:
                return pos, negc, n
            i, j = off
            m[i] = [a + b for a, b in zip(m[i], m[j])]
            for row in m:
                row[i] += row[j]
            p = i
        piv = m[p][p]
        if piv > 0:
            pos += 1
        else:
            negc += 1
        col = [m[i][p] for i in range(n)]
        m = [
            [m[i][j] - col[i] * col[j] / piv for j in range(n) if j != p]
            for i in range(n)
            if i != p
        ]
    return pos, negc, 0


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qt, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    return a, x0, y0


def column_reduce(a: Sequence[Sequence[int]], ncols: int):
    """Unimodular column reduction of an integer matrix.

    Returns ``(h, u)`` with ``a @ u == h``, ``u`` unimodular, and the nonzero
    columns of ``h`` occupying a leading block of width rank(a). The trailing
    columns of ``u`` are then a Z-basis of the integer kernel of ``a``.
    """
    h = [list(map(int, r)) for r in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i, j, p, q, r, s):
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mtx in (h, u):
            for row in mtx:
                ci, cj = row[i], row[j]
                row[i], row[j] = p * ci + q * cj, r * ci + s * cj

    c = 0
    for row_idx in range(len(h)):
        if c == ncols:
            break
        for j in range(c + 1, ncols):
            x, y = h[row_idx][c], h[row_idx][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(c, j, s, t, -y // g, x // g)
        if h[row_idx][c] != 0:
            if h[row_idx][c] < 0:
                for mtx in (h, u):
                    for row in mtx:
                        row[c] = -row[c]
            c += 1
    return h, u
