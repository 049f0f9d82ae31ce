import pytest

from krss import coeffring as cr
from krss.coeffring import EtaleMono, NegFree, NegTor, OrbitMono, PosMono, RingElement
from krss.exactalg import FGAbelianGroup
from krss.mackey import constant, constant_op, isomorphic

Z = FGAbelianGroup.free(1)
Z2 = FGAbelianGroup.cyclic(2)


def mono(m, c=1):
    return RingElement.mono(m, c)


def oracle_pt(p, q):
    if (p - q) % 2 == 0 and q >= p > 0:
        return "Z/2"
    if p == 0 and q % 2 == 0:
        return "Z"
    if (p - q) % 2 == 1 and q + 1 < p <= 0:
        return "Z/2"
    return "0"


def test_basis_bijects_with_nonzero_spots():
    for p in range(-10, 11):
        for q in range(-10, 11):
            assert str(cr.group_at("pt", p, q)) == oracle_pt(p, q), (p, q)


@pytest.mark.parametrize("theory,p,q,group,gen", [
    ("pt", 3, 5, "Z/2", "xy^3"),
    ("pt", 0, -3, "Z/2", "θ"),
    ("pt", -2, -7, "Z/2", "θ/xy^2"),
    ("etale", 0, -2, "Z", "x^-1"),
    ("orbit", 0, 7, "Z", "u^7"),
    ("orbit", 1, 7, "0", None),
])
def test_group_at_examples(theory, p, q, group, gen):
    assert str(cr.group_at(theory, p, q)) == group
    g = cr.generator_at(theory, p, q)
    assert (None if g is None else str(g)) == gen


def test_degrees():
    assert PosMono(1, 3).degree == cr.Bidegree(3, 5)
    assert NegFree(2).degree == cr.Bidegree(0, -4)
    assert NegTor(1, 2).degree == cr.Bidegree(-2, -7)
    assert EtaleMono(-1, 2).degree == cr.Bidegree(2, 0)


def test_products():
    one = RingElement.one("pt")
    assert cr.x() * cr.alpha(1) == one * 2
    y = cr.y()
    assert y * mono(PosMono(0, 2)) == mono(PosMono(0, 3))
    assert (y * 2).is_zero()
    assert cr.alpha(1) * cr.alpha(1) == cr.alpha(2) * 2
    assert (cr.theta() * cr.theta()).is_zero()
    assert (cr.alpha(1) * cr.theta()).is_zero()
    assert (y * cr.alpha(1)).is_zero()
    assert mono(PosMono(1, 1)) * cr.theta(2, 3) == cr.theta(1, 2)
    assert (mono(PosMono(3, 0)) * cr.theta(2, 0)).is_zero()
    assert mono(PosMono(3, 0)) * cr.alpha(1) == mono(PosMono(2, 0)) * 2


def test_x_multiplication_bijections():
    x = cr.x()
    for a in range(0, 6):
        for b in range(0, 4):
            assert x * cr.theta(a + 1, b) == cr.theta(a, b)
    for a in range(1, 6):
        assert x * cr.alpha(a + 1) == cr.alpha(a)


def test_etale_and_orbit_rings():
    xe = cr.x("etale")
    xinv = mono(EtaleMono(-1, 0))
    assert xe * xinv == RingElement.one("etale")
    assert (cr.y("etale") * 2).is_zero()
    assert cr.u(3) * cr.u(-5) == cr.u(-2)


def test_mixed_theories_rejected():
    with pytest.raises(ValueError):
        cr.x() * cr.x("etale")


def test_restrict_to_orbit():
    r = cr.restrict_to_orbit
    assert r(cr.x()) == cr.u(2)
    assert r(cr.alpha(1)) == cr.u(-2) * 2
    assert r(cr.theta()).is_zero()
    assert r(cr.y()).is_zero()


def test_compare_to_etale():
    c = cr.compare_to_etale
    assert c(mono(PosMono(2, 1))) == mono(EtaleMono(2, 1))
    assert c(cr.alpha(2)) == mono(EtaleMono(-2, 0), 2)
    assert c(cr.theta(1, 2)).is_zero()


@pytest.mark.parametrize("n", [-3, -1, 0, 1, 4])
def test_mackey_at(n):
    want = constant(Z) if n >= 0 else constant_op(Z)
    assert isomorphic(cr.mackey_at("pt-pair", 0, 2 * n), want)
    assert isomorphic(cr.mackey_at("etale-pair", 0, 2 * n), constant(Z))


def test_mackey_at_refuses_other_degrees():
    with pytest.raises(ValueError):
        cr.mackey_at("pt", 1, 2)
    with pytest.raises(ValueError):
        cr.mackey_at("pt", 0, 3)


def test_verify_against_bredon():
    assert cr.verify_against_bredon(-8, 8, -8, 8) == []
    assert cr.verify_against_bredon(1, 0, 1, 0) == []


@pytest.mark.parametrize("n", range(0, 6))
def test_fixed_set_homotopy(n):
    got = {k: str(g) for k, g in cr.fixed_point_homotopy(n, "pt").items()}
    want = {k: "Z/2" for k in range(n, 2 * n) if k % 2 == n % 2}
    if n % 2 == 0:
        want[2 * n] = "Z"
    assert got == want


@pytest.mark.parametrize("n", range(0, 6))
def test_homotopy_fixed_set(n):
    got = {k: str(g) for k, g in cr.fixed_point_homotopy(n, "etale").items()}
    want = {k: "Z/2" for k in range(0, 2 * n) if k % 2 == n % 2}
    if n % 2 == 0:
        want[2 * n] = "Z"
    assert got == want


def test_element_arithmetic():
    e = cr.x() + cr.y() * 3
    assert e - cr.x() == cr.y()
    assert str(RingElement.zero("pt")) == "0"
    assert hash(e) == hash(cr.y() + cr.x())
