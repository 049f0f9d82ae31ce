from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krss.equivcw import (
    CWError, EquivMap, fixed_subcomplex, orbit0, orbit_plus, parse_space, projection, quotient,
    s00, s10, s11, smash, sphere, swap, transfer,
)
from krss.exactalg import FGAbelianGroup, IntChainComplex, IntMatrix, homology_at


def groups(c: IntChainComplex, top: int) -> list[str]:
    return [str(homology_at(c, n)) for n in range(top + 1)]


def rp_homology(n: int, k: int) -> FGAbelianGroup:
    """Reduced homology of RP^n by hand."""
    if k <= 0 or k > n:
        return FGAbelianGroup.zero()
    if k == n and n % 2 == 1:
        return FGAbelianGroup.free(1)
    return FGAbelianGroup.cyclic(2) if k % 2 == 1 else FGAbelianGroup.zero()


def test_small_spheres():
    x = sphere(1, 1)
    assert sorted(x.dims) == [0, 0, 1, 1]
    assert sum(1 for c in x.cells(0) if x.is_fixed(c)) == 1  # v1; v0 is the basepoint
    assert len(x.reps(1)) == 1 and not x.is_fixed(x.reps(1)[0])
    y = sphere(1, 0)
    assert y.dims == (0, 1) and y.is_fixed(1)
    z = sphere(2, 2)
    assert len(z.cells(1)) == 4 and len(z.cells(2)) == 4


def test_bad_sphere_rejected():
    with pytest.raises(CWError):
        sphere(1, 2)
    with pytest.raises(CWError):
        sphere(-1, 0)


def test_smash_unit_and_s2():
    x = sphere(2, 1)
    u = smash(x, s00())
    assert sorted(u.dims) == sorted(x.dims)
    assert groups(u.reduced_chains(), 3) == groups(x.reduced_chains(), 3)
    assert groups(smash(s10(), s10()).reduced_chains(), 3) == ["0", "0", "Z", "0"]


def test_quotient_of_s22_is_suspended_rp1():
    assert groups(quotient(sphere(2, 2)), 3) == ["0", "0", "Z", "0"]


def test_quotient_of_s33_has_z2_in_cohomology_degree_3():
    # H~_2 = Z/2 so the torsion sits in cohomological degree 3
    h = groups(quotient(sphere(3, 3)), 3)
    assert h == ["0", "0", "Z/2", "0"]


def test_quotient_trivial_action():
    assert groups(quotient(sphere(3, 0)), 4) == ["0", "0", "0", "Z", "0"]


def test_orbit_plus_free():
    o = orbit0()
    assert all(not o.is_fixed(c) for c in range(o.ncells) if c != o.basepoint)
    assert groups(quotient(o), 1) == ["Z", "0"]


def test_parse_space():
    assert parse_space("S(2,1)") == sphere(2, 1)
    assert parse_space("pt") == s00()
    assert parse_space("orbit(S(1,1))").shape == ("orbit", 1, 1)
    assert parse_space("smash(S(1,0), S(1,1))").shape == ("pt", 2, 1)
    for bad in ("S(1,", "cube(1)", "S(1,2)"):
        with pytest.raises(CWError):
            parse_space(bad)


def test_site_maps_are_dual_pairs():
    assert projection().dual is transfer()
    assert transfer().dual is projection()
    assert swap().dual is swap()


def test_non_equivariant_map_rejected():
    pt, orb = s00(), orbit0()
    with pytest.raises(CWError):
        EquivMap(orb, pt, {1: {1: 1}})  # only one of the free points hits v


factors = st.lists(st.sampled_from(["s10", "s11"]), min_size=1, max_size=4)


@settings(max_examples=30, deadline=None)
@given(factors)
def test_random_smash_invariants(names):
    parts = [s10() if n == "s10" else s11() for n in names]
    x = reduce(smash, parts)
    assert x.violations() == []
    p, q = len(names), names.count("s11")
    top = p + 1
    want = ["0"] * (top + 1)
    want[p] = "Z"
    assert groups(x.reduced_chains(), top) == want
    fixed = ["0"] * (top + 1)
    fixed[p - q] = "Z"
    assert groups(fixed_subcomplex(x), top) == fixed
    # X/Z2 = suspension^{p-q+1} of RP^{q-1}
    shift = p - q + 1
    if q:
        quot = [str(rp_homology(q - 1, k - shift)) for k in range(top + 1)]
    else:
        quot = want
    assert groups(quotient(x), top) == quot


@settings(max_examples=20, deadline=None)
@given(factors, factors)
def test_smash_commutes_up_to_homology(a, b):
    pa = reduce(smash, [s10() if n == "s10" else s11() for n in a])
    pb = reduce(smash, [s10() if n == "s10" else s11() for n in b])
    top = len(a) + len(b) + 1
    ab, ba = smash(pa, pb), smash(pb, pa)
    assert groups(quotient(ab), top) == groups(quotient(ba), top)
    assert groups(fixed_subcomplex(ab), top) == groups(fixed_subcomplex(ba), top)


def test_orbit_plus_shape_and_quotient_is_underlying():
    x = sphere(2, 1)
    o = orbit_plus(x)
    assert groups(quotient(o), 3) == groups(x.reduced_chains(), 3)
