import pytest

from krss.bredon import (
    ZBAR, BredonError, chain_complex, cochain_complex, induced_map, mackey_of_degree,
    reduced_cohomology, reduced_homology, restriction, ro_graded,
)
from krss.equivcw import identity_map, orbit0, orbit_plus, parse_space, quotient, s00, smash, sphere
from krss.exactalg import FGAbelianGroup, homology_at
from krss.mackey import burnside, constant, constant_op

Z = FGAbelianGroup.free(1)


def s(g):
    return str(g)


def test_point_cohomology():
    assert s(reduced_cohomology(s00(), 0)) == "Z"
    assert reduced_cohomology(s00(), 1).is_zero()


def test_s11_cochains_cancel():
    assert reduced_cohomology(sphere(1, 1), 0).is_zero()
    assert reduced_cohomology(sphere(1, 1), 1).is_zero()


def test_orbit_reduced_h0():
    assert s(reduced_cohomology(orbit0(), 0)) == "Z"


def test_s11_homology_is_cokernel_of_transfer():
    assert s(reduced_homology(sphere(1, 1), 0)) == "Z/2"


def test_point_homology():
    assert s(reduced_homology(s00(), 0)) == "Z"


@pytest.mark.parametrize("q", range(1, 7))
def test_h_q_minus_1_q_vanishes(q):
    assert reduced_homology(sphere(q, q), 1).is_zero()
    assert ro_graded("pt", q - 1, q).is_zero()


@pytest.mark.parametrize("p,q,want", [
    (0, 0, "Z"), (1, 1, "Z/2"), (0, -2, "Z"), (2, 3, "0"), (0, 2, "Z"), (-1, -4, "Z/2"), (2, 2, "Z/2"),
])
def test_ro_graded_point(p, q, want):
    assert s(ro_graded("pt", p, q)) == want


def test_ro_graded_orbit():
    assert s(ro_graded("orbit", 0, -5)) == "Z"
    assert ro_graded("orbit", 1, 3).is_zero()


@pytest.mark.parametrize("c", [1, 2])
@pytest.mark.parametrize("p,q", [(0, -2), (-1, -4), (0, -3), (1, -1), (-2, -5)])
def test_suspension_invariance(c, p, q):
    # H^{p,q}(pt) = H~^{p+2c, q+c}(S^{c,c} ∧ S^{c,0})
    x = smash(sphere(c, c), sphere(c, 0))
    assert ro_graded(x, p + 2 * c, q + c) == ro_graded("pt", p, q)


def test_weight_zero_is_quotient_cohomology():
    # H^{p,0}(X) = H^p(X/Z2) on a free-ish complex
    x = smash(sphere(2, 2), sphere(1, 0))
    for p in range(5):
        q = quotient(x)
        assert reduced_cohomology(x, p) == _cohomology(q, p)


def _cohomology(chains, n):
    from krss.exactalg import IntChainComplex

    dual = IntChainComplex(dict(chains.ranks), {k - 1: chains.d(k).transpose() for k in chains.ranks}, step=1)
    return homology_at(dual, n)


def test_general_space_positive_weight_needs_shape():
    x = parse_space("smash(S(1,1), S(2,1))")
    assert ro_graded(x, 3, 2) == ro_graded("pt", 0, 0)


def test_torsion_mackey_rejected():
    with pytest.raises(BredonError):
        cochain_complex(sphere(1, 1), constant(FGAbelianGroup.cyclic(2)))


def test_identity_induces_identity():
    f = induced_map(identity_map(sphere(2, 1)), ZBAR, 1, 0)
    assert f.is_iso()


@pytest.mark.parametrize("n", range(-4, 5))
def test_restriction_by_weight(n):
    r = restriction(n)
    assert abs(r.matrix[0, 0]) == (1 if n >= 0 else 2)


def test_mackey_of_degree_types():
    from krss.mackey import isomorphic

    assert isomorphic(mackey_of_degree(0, 2), constant(Z))
    assert isomorphic(mackey_of_degree(0, -2), constant_op(Z))
    assert mackey_of_degree(0, 0).validate() == []


def test_other_coefficients_assemble():
    for m in (constant_op(Z), burnside()):
        for x in (sphere(2, 2), orbit_plus(sphere(1, 1))):
            cochain_complex(x, m)
            chain_complex(x, m)
    assert str(ro_graded("pt", 0, 0, burnside())) == "Z ⊕ Z"
