"""Dirichlet-type fundamental domains and their depth-truncated certification.

For a functional ``xi`` in the interior of the dual cone the candidate domain
at depth L is

    Pi_L(xi) = {x in C : <x, xi> <= <g x, xi> for every word g of length <= L}

i.e. the points whose pairing with ``xi`` is minimal over their (truncated)
orbit. For Lorentzian cones the pairing is ``<x, y>_Q`` and ``xi`` is a vector
of V; internally it is converted to the functional ``Q xi``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .cones import (
    ConeRef,
    PolyCone,
    QuadCone,
    Quotient,
    _from_spanning,
    common_interior_point,
    cone_from_facets,
    cplus_membership,
    lineality_space,
    project_quotient,
)
from .exact import (
    Vec,
    add,
    dot,
    in_span,
    is_zero,
    matvec,
    neg,
    primitive_integer_ray,
    scale,
    sub,
    transpose,
    vec,
    vsum,
)
from .groups import GroupSpec, Word, free_reduce, preserves_cone, stabilizer_search, word_bfs

log = logging.getLogger(__name__)

UNVERIFIED = "unverified"
VERIFIED = "verified-at-depth"
REFUTED = "refuted"

STANDARD = "standard"
QUADRATIC = "quadratic-form"


class WorkbenchError(Exception):
    pass


class DegenerateConeError(WorkbenchError):
    pass


class XiRejected(WorkbenchError):
    pass


class NotInvariantError(WorkbenchError):
    pass


@dataclass(frozen=True)
class Status:
    kind: str = UNVERIFIED
    depth: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    counterexample: Optional[dict] = field(default=None, compare=False, hash=False)

    @property
    def verified(self) -> bool:
        return self.kind == VERIFIED

    @property
    def refuted(self) -> bool:
        return self.kind == REFUTED


@dataclass(frozen=True)
class DomainCandidate:
    pi: PolyCone
    xi: Vec
    depth: int
    group: GroupSpec
    cone: ConeRef
    pairing: str = STANDARD
    status: Status = Status()
    quotient: Optional["LiftData"] = None

    @property
    def functional(self) -> Vec:
        """``xi`` as a functional for the standard pairing."""
        return _functional(self.cone, self.pairing, self.xi)


@dataclass(frozen=True)
class LiftData:
    """Quotient-side data of a domain lifted from V/W."""

    quotient: Quotient
    group: GroupSpec
    candidate: DomainCandidate


@dataclass(frozen=True)
class ReductionTrace:
    """``output == word.matrix @ input``; ``complete`` is False when the budget ran out."""

    input: Vec
    word: Word
    output: Vec
    pairings_evaluated: int
    complete: bool = True


@dataclass(frozen=True)
class SidePairing:
    facet: Vec
    gamma: Word
    image_facet: Vec


@dataclass(frozen=True)
class PairingReport:
    pairings: tuple
    boundary_facets: tuple
    unmatched_facets: tuple


def default_pairing(cone: ConeRef) -> str:
    return QUADRATIC if isinstance(cone, QuadCone) else STANDARD


def _functional(cone: ConeRef, pairing: str, xi: Sequence[Fraction]) -> Vec:
    if pairing == QUADRATIC:
        if not isinstance(cone, QuadCone):
            raise ValueError("quadratic-form pairing needs a Lorentzian cone")
        return matvec(cone.Q, xi)
    return tuple(xi)


def in_dual_interior(cone: ConeRef, functional: Sequence[Fraction]) -> bool:
    if isinstance(cone, QuadCone):
        return cone.functional_in_dual_interior(functional)
    if not cone.is_full_dimensional() or cone.lineality_basis:
        return False
    return all(dot(g, functional) > 0 for g in cone.generators)


def _check_invariance(cone: ConeRef, group: GroupSpec) -> None:
    for i, name in enumerate(group.names):
        if not preserves_cone(group.word([(i, 1)]), cone):
            raise NotInvariantError(f"generator {name} does not preserve the cone")


def _dirichlet_normals(group: GroupSpec, functional: Vec, depth: int) -> list:
    normals = []
    for w in word_bfs(group, depth).elements:
        if w.is_identity():
            continue
        n = sub(matvec(transpose(w.matrix), functional), functional)
        if not is_zero(n):
            normals.append(primitive_integer_ray(n))
    return sorted(set(normals))


def _rational_root_in_unit(qa: Fraction, qb: Fraction, qc: Fraction):
    """Rational root of qa t^2 + qb t + qc in (0, 1], if one exists."""
    if qa == 0:
        roots = [-qc / qb] if qb != 0 else []
    else:
        disc = qb * qb - 4 * qa * qc
        if disc < 0:
            return None
        num, den = disc.numerator, disc.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn != num or rd * rd != den:
            return None
        s = Fraction(rn, rd)
        roots = [(-qb - s) / (2 * qa), (-qb + s) / (2 * qa)]
    inside = [t for t in roots if 0 < t <= 1]
    return min(inside) if inside else None


def _truncate_to_lorentz(p: PolyCone, cone: QuadCone, max_rounds: int = 16) -> PolyCone:
    """Cut ``p`` back into the closed Lorentzian cone by tangent half-spaces.

    Each edge leaving the cone is cut at its crossing with the isotropic
    boundary; the half-space ``<x, e>_Q >= 0`` at an isotropic ``e`` supports
    the positive cone. Irrational crossings cannot be cut exactly.
    """
    for _ in range(max_rounds):
        if p.lineality_basis or not p.generators:
            raise WorkbenchError("Dirichlet cone is not pointed; increase depth")
        outside = [g for g in p.generators if not cone.contains(g)]
        if not outside:
            return p
        inside = [g for g in p.generators if cone.contains(g)]
        cuts = set()
        for u in inside:
            for v in outside:
                d = sub(v, u)
                t = _rational_root_in_unit(cone.q(d), 2 * cone.pair(u, d), cone.q(u))
                if t is None:
                    continue
                e = add(u, scale(t, d))
                if is_zero(e) or not cone.contains(e):
                    continue
                cuts.add(primitive_integer_ray(matvec(cone.Q, e)))
        if not cuts:
            raise WorkbenchError(
                "Dirichlet cone leaves the closed cone across an irrational boundary; increase depth"
            )
        p = cone_from_facets(list(p.facets) + sorted(cuts), p.dim)
    raise WorkbenchError("could not truncate the Dirichlet cone into the closed cone")


def dirichlet_domain(
    cone: ConeRef,
    group: GroupSpec,
    xi: Sequence,
    depth: int,
    pairing: Optional[str] = None,
) -> DomainCandidate:
    """Truncated Dirichlet domain of ``xi`` (status unverified)."""
    xi = vec(xi)
    pairing = pairing or default_pairing(cone)
    if len(xi) != cone.dim or group.dim != cone.dim:
        raise ValueError("dimension mismatch between cone, group and xi")
    if lineality_space(cone):
        raise DegenerateConeError("cone degenerate: use lift_degenerate")
    if isinstance(cone, PolyCone) and not cone.is_full_dimensional():
        raise WorkbenchError("cone is not full-dimensional")
    _check_invariance(cone, group)
    functional = _functional(cone, pairing, xi)
    if not in_dual_interior(cone, functional):
        raise XiRejected("xi is not in the interior of the dual cone")
    fixers = stabilizer_search(group.transposed(), functional, depth)
    if fixers:
        raise XiRejected(f"xi has nontrivial stabilizer at depth {depth}: {fixers[0]}")

    normals = _dirichlet_normals(group, functional, depth)
    if isinstance(cone, PolyCone):
        pi = cone_from_facets(list(cone.facets) + normals, cone.dim)
    else:
        pi = _truncate_to_lorentz(cone_from_facets(normals, cone.dim), cone)
    log.debug("dirichlet depth %d: %d normals, %d facets", depth, len(normals), len(pi.facets))
    return DomainCandidate(pi, xi, depth, group, cone, pairing)


def _pair(functional: Vec, x: Vec) -> Fraction:
    return dot(x, functional)


def _in_domain(cand: DomainCandidate, x: Vec) -> bool:
    return cand.pi.contains(x)


def reduce_point(cand: DomainCandidate, x: Sequence, budget: int = 10_000, fallback_depth: Optional[int] = None) -> ReductionTrace:
    """Move ``x`` into the candidate domain by a group element.

    Greedy descent on ``<x, xi>``: apply the letter with the smallest new
    pairing value while it strictly decreases (ties: lowest generator index,
    direct before inverse). If the local minimum is not in the domain, a
    breadth-first search over words finishes the job.
    """
    x = vec(x)
    group = cand.group
    if not cplus_membership(cand.cone, x):
        raise ValueError("point is not in C+ of the cone")
    functional = cand.functional
    ident = group.identity_word()
    if is_zero(x) or _in_domain(cand, x):
        return ReductionTrace(x, ident, x, 0)

    letters = group.letters()
    mats = [group.letter_matrix(l) for l in letters]
    applied = []
    y = x
    value = _pair(functional, y)
    spent = 0
    while True:
        if spent + len(letters) > budget:
            w = group.word(free_reduce(reversed(applied)))
            return ReductionTrace(x, w, y, spent, complete=False)
        best = None
        for letter, m in zip(letters, mats):
            z = matvec(m, y)
            v = _pair(functional, z)
            spent += 1
            if v < value and (best is None or v < best[0]):
                best = (v, letter, z)
        if best is None:
            break
        value, letter, y = best
        applied.append(letter)

    greedy_letters = free_reduce(reversed(applied))
    if _in_domain(cand, y):
        return ReductionTrace(x, group.word(greedy_letters), y, spent)

    depth = cand.depth if fallback_depth is None else fallback_depth
    for w in word_bfs(group, max(depth, 1)).elements:
        if spent >= budget:
            break
        z = w.act(y)
        spent += 1
        if _in_domain(cand, z):
            return ReductionTrace(x, group.word(free_reduce(w.letters + greedy_letters)), z, spent)
    return ReductionTrace(x, group.word(greedy_letters), y, spent, complete=False)


def sample_cone(cone: ConeRef, n: int, seed: int = 42, bound: int = 100, max_den: int = 7) -> list:
    """``n`` seeded pseudo-random rational points of the open cone.

    Polyhedral cones: positive rational combinations of the generators plus
    signed multiples of the lineality basis. Lorentzian cones: rejection
    sampling from a rational box, half of the draws shifted along the
    selector.
    """
    rng = random.Random(seed)

    def rat(lo, hi):
        den = rng.randint(1, max_den)
        return Fraction(rng.randint(lo * den, hi * den), den)

    out = []
    if isinstance(cone, PolyCone):
        if not cone.generators and not cone.lineality_basis:
            return [tuple(Fraction(0) for _ in range(cone.dim))] * n
        while len(out) < n:
            x = vsum([scale(rat(0, bound) + Fraction(1, max_den), g) for g in cone.generators], cone.dim)
            for w in cone.lineality_basis:
                x = add(x, scale(rat(-bound, bound), w))
            out.append(x)
        return out
    h = cone.selector
    while len(out) < n:
        x = tuple(rat(-bound, bound) for _ in range(cone.dim))
        if rng.random() < 0.5:
            x = add(x, scale(rat(0, bound), h))
        if cone.contains_interior(x):
            out.append(x)
    return out


def stabilizer_of_domain(cand: DomainCandidate, depth: int) -> list:
    """Non-identity words of length <= depth with g(Pi) = Pi."""
    pi = cand.pi
    return [
        w
        for w in word_bfs(cand.group, depth).elements
        if not w.is_identity() and pi.transform(w.matrix).same_set(pi)
    ]


def _refuted(depth, samples, seed, **counterexample) -> Status:
    return Status(REFUTED, depth, samples, seed, counterexample)


def verify_weak_domain(cand: DomainCandidate, depth: int = 4, samples: int = 500, seed: int = 42) -> Status:
    """Depth- and sample-truncated check of the weak fundamental domain axioms.

    Translate condition: every word g of length <= depth has g(Pi) = Pi or
    g(Pi) disjoint from Int(Pi) (exact LP). Covering: ``samples`` seeded
    points of the open cone reduce into Pi. Also checked: Pi lies in C+, and
    for lifted domains that the stabilizer of Pi is exactly the set of words
    acting trivially on V/W.
    """
    if cand.status.refuted:
        return cand.status
    pi = cand.pi
    words = word_bfs(cand.group, depth).elements
    for w in words:
        if w.is_identity():
            continue
        image = pi.transform(w.matrix)
        if image.same_set(pi):
            continue
        pt = common_interior_point(image, pi)
        if pt is not None:
            log.info("translate %s overlaps Int(Pi) at %s", w, pt)
            return _refuted(depth, samples, seed, reason="translate-overlaps-interior", word=w, point=pt)

    for v in pi.spanning_set():
        if not cplus_membership(cand.cone, v):
            return _refuted(depth, samples, seed, reason="not-in-cplus", point=v)

    for x in sample_cone(cand.cone, samples, seed):
        trace = reduce_point(cand, x, fallback_depth=depth)
        if not trace.complete:
            return _refuted(depth, samples, seed, reason="sample-not-covered", point=x)

    if cand.quotient is not None:
        stab = {w.letters for w in stabilizer_of_domain(cand, depth)}
        trivial = {w.letters for w in acting_trivially(cand, depth)}
        if stab != trivial:
            return _refuted(depth, samples, seed, reason="stabilizer-mismatch",
                            stabilizer=sorted(stab), trivial_on_quotient=sorted(trivial))
    return Status(VERIFIED, depth, samples, seed)


def acting_trivially(cand: DomainCandidate, depth: int) -> list:
    """Non-identity words of length <= depth inducing the identity on V/W."""
    if cand.quotient is None:
        return []
    q = cand.quotient.quotient
    r = len(q.projection)
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))
    return [w for w in word_bfs(cand.group, depth).elements
            if not w.is_identity() and q.induced(w.matrix) == ident]


def lift_degenerate(cone: ConeRef, group: GroupSpec, xi_quotient: Sequence, depth: int) -> DomainCandidate:
    """Fundamental domain ``Pi' + W`` for a cone with nonzero lineality W.

    The domain is built in V/W for the induced action and lifted along the
    lattice splitting; the stabilizer of the lift is the kernel of the
    induced action.
    """
    w = lineality_space(cone)
    if not w:
        raise WorkbenchError("cone is non-degenerate: use dirichlet_domain")
    for i, name in enumerate(group.names):
        g = group.generators[i]
        if not all(in_span(w, matvec(g, v)) for v in w):
            raise NotInvariantError(f"W not Γ-invariant (generator {name})")
    _check_invariance(cone, group)
    quo = project_quotient(cone, w)
    r = len(quo.projection)
    qgroup = GroupSpec(r, tuple(quo.induced(g) for g in group.generators), group.names)
    xi_quotient = vec(xi_quotient)
    if len(xi_quotient) != r:
        raise ValueError(f"xi_quotient must have length {r} (dimension of V/W)")

    if r == 0:
        qpi = PolyCone(0, (), (), ())
        qcand = DomainCandidate(qpi, (), depth, qgroup, quo.cone, STANDARD)
    else:
        qcand = dirichlet_domain(quo.cone, qgroup, xi_quotient, depth, STANDARD)
    lifted = [quo.lift_point(g) for g in qcand.pi.generators]
    lifted_lin = [quo.lift_point(v) for v in qcand.pi.lineality_basis]
    pi = _from_spanning(lifted, list(w) + lifted_lin, cone.dim)
    xi_v = matvec(transpose(quo.projection, cone.dim), xi_quotient) if r else tuple(Fraction(0) for _ in range(cone.dim))
    return DomainCandidate(pi, xi_v, depth, group, cone, STANDARD, Status(), LiftData(quo, qgroup, qcand))


def _is_boundary_facet(cand: DomainCandidate, normal: Vec) -> bool:
    face = cand.pi.face(normal)
    z = face.interior_point()
    cone = cand.cone
    if isinstance(cone, QuadCone):
        return not is_zero(z) and cone.q(z) == 0
    return any(dot(z, m) == 0 for m in cone.facets)


def side_pairings(cand: DomainCandidate, depth: int) -> PairingReport:
    """Words carrying Pi across its interior facets to an adjacent translate.

    Each unordered facet pair is reported once, with the smallest word in
    canonical order; ``facet`` is mapped onto ``image_facet`` by ``gamma``.
    """
    if cand.status.refuted:
        raise WorkbenchError("candidate has been refuted")
    pi = cand.pi
    words = [w for w in word_bfs(cand.group, depth).elements if not w.is_identity()]
    stab = {w.matrix for w in stabilizer_of_domain(cand, depth)}
    boundary, unmatched, found = [], [], {}
    for n in pi.facets:
        if _is_boundary_facet(cand, n):
            boundary.append(n)
            continue
        face = pi.face(n)
        match = None
        for w in words:
            if w.matrix in stab:
                continue
            image = pi.transform(w.matrix)
            if image.intersect(pi).same_set(face):
                match = w
                break
        if match is None:
            unmatched.append(n)
            continue
        source = next(
            m for m in pi.facets
            if pi.face(m).transform(match.matrix).same_set(face)
        )
        pair_key = frozenset((source, n))
        prev = found.get(pair_key)
        if prev is None or match.key < prev.gamma.key:
            found[pair_key] = SidePairing(source, match, n)
    pairings = sorted(found.values(), key=lambda p: (p.gamma.key, p.facet))
    return PairingReport(tuple(pairings), tuple(boundary), tuple(unmatched))


def certify_polyhedral_type(
    cone: ConeRef,
    group: GroupSpec,
    pi: PolyCone,
    depth: int = 6,
    samples: int = 1000,
    seed: int = 42,
    xi: Optional[Sequence] = None,
) -> Status:
    """Sampling certificate that the translates of ``pi`` cover the open cone.

    Each seeded sample must be moved into ``pi`` by a word; its reduced image
    must lie in C+.
    """
    for v in pi.spanning_set():
        if not cplus_membership(cone, v):
            raise WorkbenchError("pi is not contained in C+ of the cone")
    pairing = default_pairing(cone)
    if xi is None:
        xi = default_xi(cone)
    cand = DomainCandidate(pi, vec(xi), depth, group, cone, pairing)
    for x in sample_cone(cone, samples, seed):
        trace = reduce_point(cand, x, fallback_depth=depth)
        if not trace.complete:
            return _refuted(depth, samples, seed, reason="sample-not-covered", point=x)
        if not cplus_membership(cone, trace.output):
            return _refuted(depth, samples, seed, reason="image-not-in-cplus", point=x)
    return Status(VERIFIED, depth, samples, seed)


def default_xi(cone: ConeRef) -> Vec:
    """A canonical dual-interior point: the selector, or the sum of facet normals."""
    if isinstance(cone, QuadCone):
        return cone.selector
    return vsum(cone.facets, cone.dim)


def with_status(cand: DomainCandidate, status: Status) -> DomainCandidate:
    return replace(cand, status=status)
