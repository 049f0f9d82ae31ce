import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krss.exactalg import (
    ChainComplexError, ChainMap, FGAbelianGroup, GroupHom, IntChainComplex, IntMatrix,
    assembles_to, group_from_presentation, homology_at, homology_of_groups, induced_on_homology,
    kernel_basis, mapping_cone, possible_extensions, smith_normal_form,
)

Z = FGAbelianGroup.free(1)
Z2 = FGAbelianGroup.cyclic(2)


def laplace_det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * laplace_det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(n) if rows[0][j])


def determinantal_factors(rows, nrows, ncols):
    """Invariant factors from gcds of k x k minors."""
    out, prev = [], 1
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for ri in itertools.combinations(range(nrows), k):
            for ci in itertools.combinations(range(ncols), k):
                g = math.gcd(g, laplace_det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


small = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows, r, c


@st.composite
def unimodular(draw, n):
    m = IntMatrix.identity(n)
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i == j:
            continue
        k = draw(st.integers(-3, 3))
        e = dict(IntMatrix.identity(n).items())
        e[(i, j)] = k
        m = IntMatrix(n, n, e) @ m
    return m


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_matches_determinantal_divisors(data):
    rows, r, c = data
    m = IntMatrix.from_rows(rows, c)
    u, s, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = [s[i, i] for i in range(min(r, c)) if s[i, i]]
    assert all(e == 0 for (i, j), e in s.items() if i != j)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == determinantal_factors(rows, r, c)


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=3), st.data())
def test_smith_invariant_under_unimodular_change(data, draw):
    rows, r, c = data
    m = IntMatrix.from_rows(rows, c)
    p = draw.draw(unimodular(r))
    q = draw.draw(unimodular(c))
    assert smith_normal_form(p @ m @ q)[1] == smith_normal_form(m)[1]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_basis_is_saturated_kernel(data):
    rows, r, c = data
    m = IntMatrix.from_rows(rows, c)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    rank = len(determinantal_factors(rows, r, c))
    assert k.cols == c - rank
    # saturated: the kernel columns have trivial invariant factors
    if k.cols:
        kr = k.to_rows()
        assert determinantal_factors(kr, k.rows, k.cols) == [1] * k.cols


def test_group_from_presentation_and_parse():
    g = group_from_presentation(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert g == FGAbelianGroup.cyclic(6)
    assert str(FGAbelianGroup.parse("Z ⊕ Z/2")) == "Z ⊕ Z/2"
    assert str(FGAbelianGroup.zero()) == "0"
    assert FGAbelianGroup.parse("Z/4").order() == 4


def test_homology_of_groups_kernel_of_surjection():
    # Z --(1)--> Z/2: kernel is 2Z, still abstractly Z
    d = GroupHom(Z, Z2, IntMatrix.from_rows([[1]]))
    sq = homology_of_groups(GroupHom.zero(FGAbelianGroup.zero(), Z), d)
    assert sq.group == Z
    assert sq.lifts.to_rows() in ([[2]], [[-2]])
    tgt = homology_of_groups(d, GroupHom.zero(Z2, FGAbelianGroup.zero()))
    assert tgt.group.is_zero()


def test_extensions_of_z2_by_z2():
    exts = possible_extensions(Z2, Z2)
    assert exts == {FGAbelianGroup.cyclic(4), FGAbelianGroup.parse("Z/2 ⊕ Z/2")}
    assert assembles_to([Z, Z2], Z)  # 2Z inside Z
    assert not assembles_to([Z2, Z], Z)
    assert assembles_to([], FGAbelianGroup.zero())


def circle():
    return IntChainComplex({0: 1, 1: 1}, {1: IntMatrix(1, 1)})


def test_homology_of_rp2():
    c = IntChainComplex({0: 1, 1: 1, 2: 1}, {2: IntMatrix.from_rows([[2]])})
    assert [str(homology_at(c, n)) for n in range(3)] == ["Z", "Z/2", "0"]


def test_dd_nonzero_rejected():
    with pytest.raises(ChainComplexError):
        IntChainComplex({0: 1, 1: 1, 2: 1}, {1: IntMatrix.from_rows([[1]]), 2: IntMatrix.from_rows([[1]])})


def test_induced_map_degree_two():
    c = circle()
    f = ChainMap(c, c, {0: IntMatrix.from_rows([[1]]), 1: IntMatrix.from_rows([[2]])})
    assert induced_on_homology(f, 1).matrix.to_rows() == [[2]]
    cone = mapping_cone(f)
    assert str(homology_at(cone, 1)) == "Z/2"
    assert homology_at(cone, 0).is_zero()
