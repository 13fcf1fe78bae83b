import random
from fractions import Fraction as F

import pytest

from conebench.cones import QuadCone, _from_spanning, cone_from_facets, cone_from_generators, cplus_membership
from conebench.domains import (
    DegenerateConeError,
    DomainCandidate,
    NotInvariantError,
    WorkbenchError,
    XiRejected,
    acting_trivially,
    certify_polyhedral_type,
    dirichlet_domain,
    lift_degenerate,
    reduce_point,
    sample_cone,
    side_pairings,
    stabilizer_of_domain,
    verify_weak_domain,
    with_status,
)
from conebench.exact import dot, matvec, sub, vec
from conebench.groups import GroupSpec, word_bfs

QUADRANT = [[1, 0], [0, 1]]
SWAP = [[0, 1], [1, 0]]
T = [[1, 1], [0, 1]]


def gens_set(c):
    return set(c.generators)


def vs(*rows):
    return {vec(r) for r in rows}


@pytest.fixture(scope="module")
def fib(fib_spec):
    return dirichlet_domain(fib_spec.cone, fib_spec.group, vec([1, 0]), 2)


@pytest.fixture(scope="module")
def shear(shear_spec):
    return lift_degenerate(shear_spec.cone, shear_spec.group, vec([1]), 3)


# construction ---------------------------------------------------------------

def test_fibonacci_dirichlet(fib):
    assert gens_set(fib.pi) == vs([3, 1], [2, -1])
    assert set(fib.pi.facets) == vs([1, -3], [1, 2])
    assert fib.status.kind == "unverified"


def test_fibonacci_normals_by_hand(fib_spec):
    q, m = fib_spec.cone.Q, fib_spec.group.generators[0]
    xi = vec([1, 0])
    assert matvec(q, sub(matvec(m, xi), xi)) == (F(1, 2), F(-3, 2))


def test_trivial_group_keeps_quadrant():
    cone = cone_from_generators(QUADRANT)
    g = GroupSpec(2, (), ())
    for depth in (0, 1, 5):
        assert dirichlet_domain(cone, g, vec([1, 1]), depth).pi.same_set(cone)


def test_degenerate_cone_guard():
    plane = cone_from_facets([], 2)
    g = GroupSpec.build([[[-1, 0], [0, -1]]], ["N"])
    with pytest.raises(DegenerateConeError, match="cone degenerate: use lift_degenerate"):
        dirichlet_domain(plane, g, vec([1, 0]), 2)


def test_xi_outside_dual_interior(fib_spec):
    with pytest.raises(XiRejected):
        dirichlet_domain(fib_spec.cone, fib_spec.group, vec([1, 1]), 2)
    with pytest.raises(XiRejected):
        dirichlet_domain(cone_from_generators(QUADRANT), GroupSpec.build([SWAP]), vec([1, 0]), 2)


def test_xi_with_stabilizer_rejected():
    g = GroupSpec.build([SWAP], ["S"])
    with pytest.raises(XiRejected, match="stabilizer"):
        dirichlet_domain(cone_from_generators(QUADRANT), g, vec([1, 1]), 2)


def test_non_invariant_group_rejected():
    with pytest.raises(NotInvariantError):
        dirichlet_domain(cone_from_generators(QUADRANT), GroupSpec.build([T]), vec([1, 1]), 2)


def test_swap_chamber_is_strict_domain():
    cone = cone_from_generators(QUADRANT)
    g = GroupSpec.build([SWAP], ["S"])
    cand = dirichlet_domain(cone, g, vec([2, 1]), 3)
    # {x : <x, xi> <= <x, S xi>}
    assert gens_set(cand.pi) == vs([0, 1], [1, 1])
    assert verify_weak_domain(cand, 3, 100).verified
    assert stabilizer_of_domain(cand, 3) == []
    rep = side_pairings(cand, 3)
    assert [str(p.gamma) for p in rep.pairings] == ["S"]
    assert rep.pairings[0].facet == rep.pairings[0].image_facet
    assert len(rep.boundary_facets) == 1


def test_monotone_in_depth(fib_spec):
    prev = None
    for depth in range(1, 6):
        pi = dirichlet_domain(fib_spec.cone, fib_spec.group, vec([1, 0]), depth).pi
        if prev is not None:
            assert pi.is_subset(prev)
        prev = pi


def test_basepoint_inequalities_hold_on_pi(fib):
    q = fib.cone.Q
    xi = fib.xi
    for x in fib.pi.generators:
        for w in word_bfs(fib.group, 4).elements:
            # <x, xi>_Q <= <x, g xi>_Q
            assert dot(x, matvec(q, xi)) <= dot(x, matvec(q, w.act(xi)))


def test_rank3_reflection_chamber():
    from conebench import io

    spec = io.spec_from_json(io.load_fixture("lorentz-rank3-reflective"))
    cand = dirichlet_domain(spec.cone, spec.group, spec.xi, 2, spec.pairing)
    assert gens_set(cand.pi) == vs([1, 0, 0], [1, 1, 0], [2, 1, 1])
    assert all(cplus_membership(spec.cone, g) for g in cand.pi.generators)


# reduction ------------------------------------------------------------------

def test_reduce_example(fib):
    tr = reduce_point(fib, vec([13, 8]))
    assert str(tr.word) == "M⁻³"
    assert tr.output == vec([1, 0])
    assert tr.word.act(tr.input) == tr.output
    assert tr.complete


def test_reduce_matches_bfs_oracle(fib):
    x = vec([13, 8])
    hits = [w for w in word_bfs(fib.group, 6).elements if fib.pi.contains(w.act(x))]
    assert str(hits[0]) == "M⁻³"


@pytest.mark.parametrize("x", [[3, 1], [0, 0]])
def test_reduce_trivial_cases(fib, x):
    tr = reduce_point(fib, vec(x))
    assert tr.word.is_identity()
    assert tr.output == vec(x)


def test_reduce_rejects_points_outside(fib):
    with pytest.raises(ValueError):
        reduce_point(fib, vec([1, 1]))


def test_reduce_budget_exhausted(fib):
    tr = reduce_point(fib, vec([610, 377]), budget=3)
    assert not tr.complete


def test_reduction_idempotent_and_equivariant(fib):
    rng = random.Random(5)
    elems = word_bfs(fib.group, 3).elements
    for x in sample_cone(fib.cone, 60, seed=11):
        out = reduce_point(fib, x).output
        assert reduce_point(fib, out).word.is_identity()
        g = rng.choice(elems)
        out2 = reduce_point(fib, g.act(x)).output
        if fib.pi.contains_interior(out):
            assert out2 == out
        else:
            assert any(w.act(out) == out2 for w in elems + word_bfs(fib.group, 8).elements)


# verification ---------------------------------------------------------------

def test_verify_fibonacci(fib):
    status = verify_weak_domain(fib, 4, 500, 42)
    assert status.verified
    assert (status.depth, status.samples, status.seed) == (4, 500, 42)
    assert stabilizer_of_domain(fib, 4) == []


def test_verify_classical_domain(fib):
    cand = DomainCandidate(cone_from_generators([[1, 0], [2, 1]]), fib.xi, 4, fib.group, fib.cone, fib.pairing)
    assert verify_weak_domain(cand, 4, 500, 42).verified


def test_verify_refutes_quadrant(fib):
    quadrant = cone_from_generators(QUADRANT)
    cand = DomainCandidate(quadrant, fib.xi, 4, fib.group, fib.cone, fib.pairing)
    status = verify_weak_domain(cand, 4, 500, 42)
    assert status.refuted
    ce = status.counterexample
    assert ce["reason"] == "translate-overlaps-interior"
    assert str(ce["word"]) == "M"
    p = ce["point"]
    assert quadrant.contains_interior(p) and quadrant.transform(ce["word"].matrix).contains_interior(p)
    # a refutation is never downgraded
    assert verify_weak_domain(with_status(cand, status), 4, 500, 42) is status


def test_translates_disjoint_from_interior(fib):
    for w in word_bfs(fib.group, 4).elements:
        if w.is_identity():
            continue
        meet = fib.pi.transform(w.matrix).intersect(fib.pi)
        assert not meet.is_full_dimensional()


def test_verify_flags_uncovered_samples(fib):
    thin = cone_from_generators([[3, 1], [5, 2]])
    cand = DomainCandidate(thin, fib.xi, 2, fib.group, fib.cone, fib.pairing)
    status = verify_weak_domain(cand, 2, 50, 42)
    assert status.refuted and status.counterexample["reason"] == "sample-not-covered"


def test_verify_flags_domain_outside_cplus(fib):
    wide = cone_from_generators([[1, 1], [1, -1]])
    cand = DomainCandidate(wide, fib.xi, 0, GroupSpec(2, (), ()), fib.cone, fib.pairing)
    status = verify_weak_domain(cand, 0, 10, 42)
    assert status.refuted and status.counterexample["reason"] == "not-in-cplus"


def test_sampling_is_seeded(fib):
    assert sample_cone(fib.cone, 20, 3) == sample_cone(fib.cone, 20, 3)
    assert sample_cone(fib.cone, 20, 3) != sample_cone(fib.cone, 20, 4)
    assert all(fib.cone.contains_interior(x) for x in sample_cone(fib.cone, 50, 1))


# degenerate cones -------------------------------------------------------------

def test_shear_lift(shear):
    half = cone_from_generators([[1, 0], [-1, 0], [0, 1]])
    assert shear.pi.same_set(half)
    lift = shear.quotient
    assert lift.quotient.cone.dim == 1
    assert lift.candidate.pi.same_set(cone_from_generators([[1]]))
    stab = [str(w) for w in stabilizer_of_domain(shear, 3)]
    assert stab == ["T", "T⁻¹", "T²", "T⁻²", "T³", "T⁻³"]
    assert stab == [str(w) for w in acting_trivially(shear, 3)]
    assert verify_weak_domain(shear, 3, 200, 42).verified


def test_lift_projects_onto_quotient_domain(shear):
    q = shear.quotient.quotient
    qpi = shear.quotient.candidate.pi
    image = _from_spanning([q.project(g) for g in shear.pi.spanning_set()], [], q.cone.dim)
    assert image.same_set(qpi)
    w = q.kernel_basis
    assert _from_spanning([q.lift_point(g) for g in qpi.generators], list(w), 2).same_set(shear.pi)


def test_lift_whole_plane():
    plane = cone_from_facets([], 2)
    g = GroupSpec.build([[[-1, 0], [0, -1]]], ["N"])
    cand = lift_degenerate(plane, g, (), 3)
    assert cand.pi.same_set(plane)
    assert [str(w) for w in stabilizer_of_domain(cand, 3)] == ["N"]
    assert verify_weak_domain(cand, 3, 50).verified


def test_lift_rejects_non_invariant_w():
    half = cone_from_generators([[1, 0], [-1, 0], [0, 1]])
    with pytest.raises(NotInvariantError, match="W not Γ-invariant"):
        lift_degenerate(half, GroupSpec.build([SWAP], ["S"]), vec([1]), 2)


def test_lift_rejects_non_degenerate_cone():
    with pytest.raises(WorkbenchError):
        lift_degenerate(cone_from_generators(QUADRANT), GroupSpec(2, (), ()), vec([1]), 2)


def test_lift_three_dimensional():
    # W = x-axis; quotient is a quadrant with the swap of the last two coordinates
    cone = _from_spanning([vec([0, 1, 0]), vec([0, 0, 1])], [vec([1, 0, 0])], 3)
    g = GroupSpec.build([[[1, 1, 0], [0, 0, 1], [0, 1, 0]]], ["S"])
    cand = lift_degenerate(cone, g, vec([2, 1]), 3)
    assert len(cand.quotient.quotient.projection) == 2
    assert verify_weak_domain(cand, 3, 100).verified
    # S^2 shears along W: nontrivial on V, trivial on V/W
    stab = [str(w) for w in stabilizer_of_domain(cand, 3)]
    assert stab == ["S²", "S⁻²"]
    assert stab == [str(w) for w in acting_trivially(cand, 3)]


# side pairings ----------------------------------------------------------------

def test_fibonacci_pairing(fib):
    rep = side_pairings(fib, 4)
    assert len(rep.pairings) == 1 and not rep.unmatched_facets and not rep.boundary_facets
    p = rep.pairings[0]
    assert str(p.gamma) == "M"
    assert p.gamma.act(vec([2, -1])) == vec([3, 1])
    src, dst = fib.pi.face(p.facet), fib.pi.face(p.image_facet)
    assert src.transform(p.gamma.matrix).same_set(dst)


def test_trivial_group_pairings():
    cone = cone_from_generators(QUADRANT)
    cand = dirichlet_domain(cone, GroupSpec(2, (), ()), vec([1, 1]), 2)
    rep = side_pairings(cand, 2)
    assert rep.pairings == () and len(rep.boundary_facets) == 2


def test_shear_pairings(shear):
    rep = side_pairings(shear, 3)
    assert rep.pairings == () and len(rep.boundary_facets) == 1 and rep.unmatched_facets == ()


# polyhedral type --------------------------------------------------------------

def test_certify_classical(fib):
    status = certify_polyhedral_type(fib.cone, fib.group, cone_from_generators([[1, 0], [2, 1]]), 6, 1000, 42)
    assert status.verified


def test_certify_single_ray_refuted(fib):
    status = certify_polyhedral_type(fib.cone, fib.group, cone_from_generators([[1, 0]]), 6, 1000, 42)
    assert status.refuted
    assert status.counterexample["reason"] == "sample-not-covered"
    assert fib.cone.contains_interior(status.counterexample["point"])


def test_certify_trivial_group():
    cone = cone_from_generators([[1, 0], [1, 3]])
    assert certify_polyhedral_type(cone, GroupSpec(2, (), ()), cone, 0, 100, 42).verified


def test_certify_requires_pi_in_cplus(fib):
    with pytest.raises(WorkbenchError):
        certify_polyhedral_type(fib.cone, fib.group, cone_from_generators(QUADRANT))


def test_quadcone_sampler_reaches_near_boundary():
    cone = QuadCone(2, (vec([1, 0]), vec([0, -1])), vec([1, 0]))
    pts = sample_cone(cone, 300, 42)
    assert min(cone.q(x) / (x[0] * x[0]) for x in pts) < F(1, 10)
