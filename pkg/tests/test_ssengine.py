import json

import pytest

from krss import coeffring as cr
from krss import krtower as kt
from krss.coeffring import NegFree, NegTor, PosMono, RingElement
from krss.exactalg import FGAbelianGroup, GroupHom, IntMatrix
from krss.ssengine import (
    Cell, LeakError, LeibnizError, Page, Spot, Window, abutment_graded, adams_action,
    adams_commutes, install, leibniz_close, page_from_dict, turn_page,
)

Z = FGAbelianGroup.free(1)
Z2 = FGAbelianGroup.cyclic(2)
W = Window(-4, 4, -6, 6)


def two_cell_page(src_group, tgt_group, entry, r=3):
    s, t = Spot(0, 0), Spot(r, 1 - r)
    cells = {s: Cell(src_group, ("a",)), t: Cell(tgt_group, ("b",))}
    d = GroupHom(src_group, tgt_group, IntMatrix.from_rows([[entry]]))
    return Page(r, W, cells, {s: d})


def test_surjection_onto_z2():
    e4 = turn_page(two_cell_page(Z, Z2, 1))
    assert e4.r == 4
    assert e4.group((0, 0)) == Z
    assert e4.cells[Spot(0, 0)].reps in (("2a",), ("-2a",))
    assert e4.group((3, -2)).is_zero()


def test_multiplication_by_two_on_z():
    e4 = turn_page(two_cell_page(Z, Z, 2))
    assert e4.group((0, 0)).is_zero()
    assert str(e4.group((3, -2))) == "Z/2"


def test_zero_differentials_turn_trivially():
    page = two_cell_page(Z, Z2, 0)
    nxt = turn_page(page)
    assert {s: c.group for s, c in nxt.cells.items()} == {s: c.group for s, c in page.cells.items()}
    again = turn_page(nxt)
    assert {s: c.group for s, c in again.cells.items()} == {s: c.group for s, c in nxt.cells.items()}


def test_leaving_the_window_is_an_error():
    s = Spot(3, 0)
    cells = {s: Cell(Z, ("a",))}
    with pytest.raises(LeakError):
        Page(3, W, cells, {s: GroupHom(Z, FGAbelianGroup.zero(), IntMatrix(0, 1))})


def test_dd_nonzero_rejected():
    a, b, c = Spot(-3, 2), Spot(0, 0), Spot(3, -2)
    cells = {a: Cell(Z, ("a",)), b: Cell(Z, ("b",)), c: Cell(Z, ("c",))}
    one = IntMatrix.from_rows([[1]])
    with pytest.raises(ValueError, match="d∘d"):
        Page(3, W, cells, {a: GroupHom(Z, Z, one), b: GroupHom(Z, Z, one)})


def test_missing_partner_outside_window_is_flagged():
    s = Spot(4, 0)
    page = Page(3, W, {s: Cell(Z, ("a",))})
    nxt = turn_page(page)
    assert s in nxt.indeterminate
    known = Page(3, W, {s: Cell(Z, ("a",))}, e2_zero=lambda _: True)
    assert s not in turn_page(known).indeterminate


def pt_e3(window=Window(-6, 6, -14, 14)):
    model = kt._Model(kt.Space(), kt.Variant())
    e2 = kt._base_e2(model, window)
    return Page(3, window, e2.cells, e2_zero=e2.e2_zero), model.ring()


def test_leibniz_close_from_two_seeds():
    page, ring = pt_e3()
    c = leibniz_close(page, kt.d3_closed_form().seeds, ring)
    assert c.d(PosMono(1, 5)) == RingElement.mono(PosMono(0, 8))
    assert c.d(PosMono(2, 0)).is_zero()
    assert c.d(NegFree(1)).is_zero()
    assert c.d(NegTor(0, 4)) == RingElement.mono(NegTor(1, 1))
    assert c.d(NegTor(1, 2)).is_zero()
    assert c.unreachable == []
    assert c.how[PosMono(1, 0)] == "seed"


def test_inconsistent_seeds_raise_with_witness():
    page, ring = pt_e3()
    seeds = [(cr.x(), RingElement.mono(PosMono(0, 3))),
             (RingElement.mono(PosMono(2, 0)), RingElement.mono(PosMono(1, 3)))]
    with pytest.raises(LeibnizError) as info:
        leibniz_close(page, seeds, ring)
    assert info.value.witness


def test_install_builds_homomorphisms():
    page, ring = pt_e3()
    c = leibniz_close(page, kt.d3_closed_form().seeds, ring)
    e3 = install(page, c, ring)
    d = e3.d((0, -4))
    assert d.matrix.to_rows() == [[1]]
    assert e3.d((0, -8)).is_zero()


def test_adams_action():
    page, _ = pt_e3(Window(-2, 2, -4, 0))
    psi = adams_action(3, page)
    assert psi[Spot(0, -4)].matrix.to_rows() == [[9]]
    assert psi[Spot(0, 0)].matrix.to_rows() == [[1]]
    psi2 = adams_action(2, page)
    assert psi2[Spot(1, -2)].is_zero()


def test_adams_action_rejects_odd_rows():
    page = Page(3, W, {Spot(0, -1): Cell(Z, ("a",))})
    with pytest.raises(ValueError):
        adams_action(3, page)


def test_adams_commutes_finds_a_bad_square():
    # d: Z(row -4) -> Z(row -6) by 1 cannot commute with 9 vs 27
    s, t = Spot(0, -4), Spot(3, -6)
    page = Page(3, W, {s: Cell(Z, ("a",)), t: Cell(Z, ("b",))},
                {s: GroupHom(Z, Z, IntMatrix.from_rows([[1]]))})
    assert adams_commutes(3, page) == [s]
    assert adams_commutes(3, page, torsion_sources_only=True) == []


@pytest.mark.parametrize("n,text", [(0, "n=0: w0:Z"), (-1, "n=-1: w1:Z/2"), (-3, "n=-3: 0"),
                                    (-4, "n=-4: w2:Z")])
def test_abutment_examples(n, text):
    run = kt.cached_run("pt")
    assert str(abutment_graded(run.e4, n)) == text


def test_json_round_trip():
    run = kt.cached_run("pt")
    doc = json.loads(run.e4.dumps())
    cells = page_from_dict(doc)
    assert {s: g for s, (g, _) in cells.items()} == {s: c.group for s, c in run.e4.cells.items()}
    assert doc["r"] == 4
    e3 = run.e3.to_dict()
    assert {"from": [0, -4], "to": [3, -6], "matrix": [[1]]} in e3["differentials"]


def test_resolve_zero_drops_cells():
    page = two_cell_page(Z, Z2, 1).mark([Spot(3, -2)], "tail")
    out = page.resolve([Spot(3, -2)], "periodic", zero=True)
    assert Spot(3, -2) not in out.cells
    assert not out.differentials
    assert not out.indeterminate
