"""Polyhedral and Lorentzian cones, duality, lineality and quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import lp
from .dd import extreme_rays
from .exact import (
    DimensionError,
    Mat,
    Vec,
    bilinear,
    column_reduce,
    dot,
    in_span,
    inertia,
    inverse,
    is_zero,
    kernel,
    matvec,
    neg,
    primitive_integer_ray,
    rank,
    transpose,
    vec,
    vsum,
    zero,
)


@dataclass(frozen=True)
class PolyCone:
    """Rational polyhedral cone ``Cone(generators) + span(lineality_basis)``.

    ``facets`` are inner normals: the cone is ``{x : <x, n> >= 0}``. When the
    cone is not full-dimensional the equations cutting out its span appear as
    opposite pairs ``n, -n``.
    """

    dim: int
    generators: tuple
    facets: tuple
    lineality_basis: tuple

    def contains(self, x: Sequence[Fraction]) -> bool:
        _check_dim(self.dim, x)
        return all(dot(x, n) >= 0 for n in self.facets)

    def contains_interior(self, x: Sequence[Fraction]) -> bool:
        """Strict membership in the topological interior of the cone."""
        return self.is_full_dimensional() and all(dot(x, n) > 0 for n in self.facets)

    def rank(self) -> int:
        """Dimension of the linear span."""
        return rank(list(self.generators) + list(self.lineality_basis))

    def is_full_dimensional(self) -> bool:
        return self.rank() == self.dim

    def is_pointed(self) -> bool:
        return not self.lineality_basis

    def interior_point(self) -> Vec:
        """A point of the relative interior."""
        return vsum(self.generators, self.dim)

    def spanning_set(self) -> list:
        """Vectors whose conic hull is the cone."""
        return list(self.generators) + list(self.lineality_basis) + [neg(v) for v in self.lineality_basis]

    def is_subset(self, other: "PolyCone") -> bool:
        return all(other.contains(v) for v in self.spanning_set())

    def same_set(self, other: "PolyCone") -> bool:
        return self.dim == other.dim and self.is_subset(other) and other.is_subset(self)

    def transform(self, m: Sequence[Sequence[Fraction]]) -> "PolyCone":
        """Image under an invertible linear map."""
        gens = [matvec(m, g) for g in self.generators]
        lin = [matvec(m, w) for w in self.lineality_basis]
        return _from_spanning(gens, lin, self.dim)

    def intersect(self, other: "PolyCone") -> "PolyCone":
        return cone_from_facets(list(self.facets) + list(other.facets), self.dim)

    def face(self, normal: Sequence[Fraction]) -> "PolyCone":
        """The face cut out by a supporting inner normal."""
        gens = [g for g in self.generators if dot(g, normal) == 0]
        return _from_spanning(gens, list(self.lineality_basis), self.dim)


@dataclass(frozen=True)
class QuadCone:
    """Positive cone ``{q(x) >= 0, <x, h>_Q >= 0}`` of a Lorentzian form."""

    dim: int
    Q: Mat
    selector: Vec
    _q_inv: Mat = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        q = self.Q
        if len(q) != self.dim or any(len(r) != self.dim for r in q):
            raise DimensionError("form must be dim x dim")
        if any(q[i][j] != q[j][i] for i in range(self.dim) for j in range(self.dim)):
            raise ValueError("quadratic form is not symmetric")
        if inertia(q) != (1, self.dim - 1, 0):
            raise ValueError(f"form has inertia {inertia(q)}, expected (1, {self.dim - 1}, 0)")
        _check_dim(self.dim, self.selector)
        if self.q(self.selector) <= 0:
            raise ValueError("selector must satisfy q(h) > 0")
        object.__setattr__(self, "_q_inv", inverse(q))

    def q(self, x: Sequence[Fraction]) -> Fraction:
        return bilinear(x, self.Q, x)

    def pair(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return bilinear(x, self.Q, y)

    def contains(self, x: Sequence[Fraction]) -> bool:
        _check_dim(self.dim, x)
        return self.q(x) >= 0 and self.pair(x, self.selector) >= 0

    def contains_interior(self, x: Sequence[Fraction]) -> bool:
        return self.q(x) > 0 and self.pair(x, self.selector) > 0

    def on_boundary(self, x: Sequence[Fraction]) -> bool:
        return self.contains(x) and not self.contains_interior(x)

    def functional_in_dual_interior(self, y: Sequence[Fraction]) -> bool:
        # Under the standard pairing the dual of the positive cone is Q(C).
        return self.contains_interior(matvec(self._q_inv, y))


ConeRef = Union[PolyCone, QuadCone]


def _check_dim(dim: int, x: Sequence) -> None:
    if len(x) != dim:
        raise DimensionError(f"vector of length {len(x)} in a cone of dimension {dim}")


def _facets_of(gens, lin, dim):
    spanning = list(gens) + list(lin) + [neg(w) for w in lin]
    rays, dual_lin = extreme_rays(spanning, dim)
    return rays + [v for w in dual_lin for v in (w, neg(w))]


def _from_spanning(gens, lin, dim) -> PolyCone:
    """Canonical cone from any conic spanning data (generators + lineality)."""
    facets = _facets_of([g for g in gens if not is_zero(g)], lin, dim)
    rays, lineality = extreme_rays(facets, dim)
    return PolyCone(dim, tuple(rays), tuple(facets), tuple(lineality))


def cone_from_generators(gens: Sequence[Sequence], dim: Optional[int] = None) -> PolyCone:
    """Closed convex cone generated by ``gens`` in double description."""
    gens = [vec(g) for g in gens]
    if not gens:
        raise ValueError("cone_from_generators needs at least one generator")
    d = len(gens[0]) if dim is None else dim
    if any(len(g) != d for g in gens):
        raise DimensionError("generators of mixed dimension")
    if all(is_zero(g) for g in gens):
        raise ValueError("all generators are zero")
    return _from_spanning(gens, [], d)


def cone_from_facets(normals: Sequence[Sequence], dim: Optional[int] = None) -> PolyCone:
    """Cone ``{x : <x, n> >= 0 for all n}``; no normals means the whole space."""
    normals = [vec(n) for n in normals]
    if dim is None:
        if not normals:
            raise DimensionError("dimension needed for an empty facet list")
        dim = len(normals[0])
    if any(len(n) != dim for n in normals):
        raise DimensionError("normals of mixed dimension")
    rays, lin = extreme_rays(normals, dim)
    return _from_spanning(rays, lin, dim)


def dual_cone(c: PolyCone) -> PolyCone:
    """``{y : <x, y> >= 0 for all x in c}``, generated by the facet normals of ``c``."""
    rays, lin = extreme_rays(c.spanning_set(), c.dim)
    return _from_spanning(rays, lin, c.dim)


def lineality_space(c: ConeRef) -> list:
    if isinstance(c, QuadCone):
        return []
    return list(c.lineality_basis)


def cplus_membership(c: ConeRef, x: Sequence[Fraction]) -> bool:
    """Membership in the convex hull of the rational points of the closed cone."""
    x = vec(x)
    _check_dim(c.dim, x)
    if is_zero(x):
        return True
    if isinstance(c, PolyCone):
        return c.contains(x)
    # a rational point of the closed Lorentzian cone spans a rational ray
    return c.q(x) >= 0 and c.pair(x, c.selector) > 0


def in_conic_hull(x: Sequence[Fraction], spanning: Sequence[Sequence[Fraction]]) -> Optional[Vec]:
    """Nonnegative coefficients expressing ``x`` over ``spanning`` (exact LP), or None."""
    k = len(spanning)
    if k == 0:
        return () if is_zero(x) else None
    cols = transpose(spanning)
    a_ub = [tuple(Fraction(-int(i == j)) for j in range(k)) for i in range(k)]
    return lp.feasible_point(k, a_ub, [Fraction(0)] * k, cols, list(x))


def separated(a: PolyCone, b: PolyCone) -> bool:
    """True if a facet hyperplane of one cone weakly separates it from the other."""
    for p, q in ((a, b), (b, a)):
        span = q.spanning_set()
        for n in p.facets:
            if all(dot(v, n) <= 0 for v in span):
                return True
    return False


def common_interior_point(a: PolyCone, b: PolyCone) -> Optional[Vec]:
    """A point in Int(a) and Int(b), found by exact LP, or None.

    Maximizes ``t`` subject to ``<x, n> >= t`` for every facet normal of both
    cones, ``t <= 1`` and the normalization ``sum_n <x, n> <= 1`` over the
    facets of ``a``.
    """
    d = a.dim
    if separated(a, b):
        return None
    normals = list(a.facets) + list(b.facets)
    one, zer = Fraction(1), Fraction(0)
    a_ub, b_ub = [], []
    for n in normals:
        a_ub.append(tuple(-v for v in n) + (one,))
        b_ub.append(zer)
    if a.facets:
        a_ub.append(vsum(a.facets, d) + (zer,))
        b_ub.append(one)
    a_ub.append(zero(d) + (one,))
    b_ub.append(one)
    res = lp.maximize(zero(d) + (one,), a_ub, b_ub)
    if res.status != lp.OPTIMAL or res.value <= 0:
        return None
    return res.x[:d]


@dataclass(frozen=True)
class Quotient:
    """The projection ``p: V -> V/W`` in a lattice-adapted complement basis.

    ``projection`` (r x d) sends V to coordinates on V/W, ``lift`` (d x r) is a
    splitting with ``projection @ lift = id``, ``kernel_basis`` is a Z-basis of
    W(Z).
    """

    cone: ConeRef
    projection: Mat
    lift: Mat
    kernel_basis: tuple

    def project(self, x: Sequence[Fraction]) -> Vec:
        return matvec(self.projection, x)

    def lift_point(self, y: Sequence[Fraction]) -> Vec:
        return matvec(self.lift, y)

    def induced(self, m: Sequence[Sequence[Fraction]]) -> Mat:
        """Matrix of the induced map on V/W (``m`` must preserve W)."""
        cols = [self.project(matvec(m, col)) for col in transpose(self.lift)]
        return transpose(cols, len(self.projection))


def lattice_complement(w_basis: Sequence[Sequence[Fraction]], dim: int):
    """Projection/lift matrices onto V/W with W(Z) sent to 0.

    The annihilator of W is column-reduced over Z; the unimodular transform
    ``u`` has W(Z) as its trailing columns and a lattice complement as its
    leading ones.
    """
    k = len(w_basis)
    if k == 0:
        return tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)), \
            tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)), ()
    ann = kernel(w_basis, dim)
    ann_int = [[int(a) for a in primitive_integer_ray(v)] for v in ann]
    r = len(ann_int)
    _, u = column_reduce(ann_int, dim)
    uf = tuple(tuple(Fraction(a) for a in row) for row in u)
    u_inv = inverse(uf)
    projection = tuple(u_inv[i] for i in range(r))
    lift = tuple(tuple(uf[i][j] for j in range(r)) for i in range(dim))
    w_int = []
    for j in range(r, dim):
        v = primitive_integer_ray(tuple(uf[i][j] for i in range(dim)))
        w_int.append(neg(v) if next(a for a in v if a) < 0 else v)
    w_int = tuple(w_int)
    return projection, lift, w_int


def project_quotient(c: ConeRef, w: Sequence[Sequence]) -> Quotient:
    """Image of ``c`` in V/W for a rational subspace W of its lineality space."""
    w = [vec(v) for v in w if not is_zero(vec(v))]
    for v in w:
        _check_dim(c.dim, v)
    if isinstance(c, QuadCone):
        if w:
            raise ValueError("W is not contained in the lineality space of the cone")
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(c.dim)) for i in range(c.dim))
        return Quotient(c, ident, ident, ())
    lin = list(c.lineality_basis)
    for v in w:
        if not in_span(lin, v):
            raise ValueError("W is not contained in the lineality space of the cone")
    if w and rank(w) < len(w):
        w = kernel(kernel(w, c.dim), c.dim)
    projection, lift, w_int = lattice_complement(w, c.dim)
    r = len(projection)
    gens = [matvec(projection, g) for g in c.generators]
    lin_img = [matvec(projection, v) for v in c.lineality_basis]
    lin_img = [v for v in lin_img if not is_zero(v)]
    image = _from_spanning(gens, kernel(kernel(lin_img, r), r) if lin_img else [], r)
    return Quotient(image, projection, lift, w_int)
