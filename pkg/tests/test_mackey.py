import pytest

from krss.exactalg import FGAbelianGroup, GroupHom, IntMatrix
from krss.mackey import MackeyZ2, burnside, by_name, constant, constant_op, isomorphic

Z = FGAbelianGroup.free(1)


def test_constant_is_valid_with_index_transfer():
    m = constant(Z)
    assert m.validate() == []
    assert m.res.matrix.to_rows() == [[1]]
    assert m.tr.matrix.to_rows() == [[2]]
    assert m.is_cohomological()


def test_constant_op_swaps_roles():
    m = constant_op(Z)
    assert m.validate() == []
    assert m.res.matrix.to_rows() == [[2]]
    assert m.tr.matrix.to_rows() == [[1]]


def test_burnside_values():
    a = burnside()
    assert a.validate() == []
    assert a.m_fixed == FGAbelianGroup.free(2)
    # res(a, b) = a + 2b, tr(a) = (0, a)
    assert a.res((1, 0)) == (1,) and a.res((0, 1)) == (2,)
    assert a.tr((1,)) == (0, 1)


def test_constant_zero():
    m = constant(FGAbelianGroup.zero())
    assert m.validate() == []
    assert m.m_free.is_zero() and m.m_fixed.is_zero()


def test_identity_transfer_violates_double_coset():
    one = GroupHom.identity(Z)
    bad = MackeyZ2(Z, Z, one, one, one, name="broken")
    problems = bad.validate()
    assert problems
    assert any("coset" in str(p) or "res" in str(p) for p in problems)


def test_bad_involution_is_reported():
    neg = GroupHom.scalar(Z, -1)
    two = GroupHom.scalar(Z, 2)
    m = MackeyZ2(Z, Z, neg, GroupHom.identity(Z), two)
    assert m.validate()


def test_selectors_and_isomorphism():
    assert isomorphic(by_name("Z"), constant(Z))
    assert not isomorphic(by_name("Z"), by_name("Zop"))
    with pytest.raises(ValueError):
        by_name("Q")


def test_torsion_values_flagged_not_free():
    z2 = FGAbelianGroup.cyclic(2)
    m = constant(z2)
    assert m.validate() == []
    assert not m.is_free()
