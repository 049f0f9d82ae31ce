"""The KR spectral sequence and its étale variant.

``E_2^{p,q} = H^{p,-q/2}(X; Z-bar)`` converging to ``KR^{p+q}(X)``; only
even rows are populated, so every even-length differential vanishes and
the first possible one is ``d_3``.  Over the point ``d_3`` is generated by
two seeds, ``d_3(x) = y^3`` and ``d_3(theta/y^3) = theta/x``; the étale
variant (coefficients ``Z[x, 1/x, y]/(2y)``) needs only the first.

Column certification.  A column ``n`` of E_4 is read off only when its
whole support is known and no ``d_r`` with ``r >= 4`` can hit or leave it:

* pt: the support of column ``n`` is bounded by the closed form, so a
  large enough window holds it completely.
* orbit: everything sits at ``p = 0``.
* étale pt: columns are infinite.  Multiplication by ``x^{-2} y^8`` is a
  d_3-cycle of total degree 0 and an isomorphism for ``p >= 1``, so
  ``E_4^{p} = E_4^{p+8}`` along a column for ``p >= 4``; zero values on
  one full period certify the whole tail.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from . import coeffring as cr
from .coeffring import EtaleMono, NegFree, NegTor, OrbitMono, PosMono, RingElement
from .exactalg import FGAbelianGroup, GroupHom, IntMatrix, assembles_to
from .ssengine import (
    AbutmentGraded, Cell, Closure, ModuleStructure, Page, Spot, Window,
    abutment_graded, adams_commutes, install, leibniz_close, turn_page,
)

Z = FGAbelianGroup.free(1)
Z2 = FGAbelianGroup.cyclic(2)
ZERO = FGAbelianGroup.zero()

KR, KR_ET = "KR", "KR_ET"

# KO^{-N} for N mod 8
_KO = (Z, Z2, Z2, ZERO, Z, ZERO, ZERO, ZERO)


def ko(n: int) -> FGAbelianGroup:
    """``KO^n(pt)``."""
    return _KO[(-n) % 8]


def ku(n: int) -> FGAbelianGroup:
    return Z if n % 2 == 0 else ZERO


@dataclass(frozen=True)
class Variant:
    kind: str = KR
    mode: str = "stable"

    def __post_init__(self):
        if self.kind not in (KR, KR_ET):
            raise ValueError(f"unknown variant {self.kind!r}")
        if self.mode not in ("stable", "unstable"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def parse(cls, kind: str, mode: str = "stable") -> "Variant":
        k = {"kr": KR, "kret": KR_ET, "KR": KR, "KR_ET": KR_ET}.get(kind)
        if k is None:
            raise ValueError(f"unknown variant {kind!r}; use kr or kret")
        return cls(k, mode)


@dataclass(frozen=True)
class Space:
    """``site ∧ S^{c,d}`` with ``site`` the point or the free orbit."""

    site: str = "pt"
    c: int = 0
    d: int = 0

    @classmethod
    def parse(cls, text: str) -> "Space":
        t = text.replace(" ", "")
        if t in ("pt", "orbit"):
            return cls(t)
        m = re.fullmatch(r"S\((\d+),(\d+)\)", t)
        if m:
            c, d = int(m.group(1)), int(m.group(2))
            if d > c:
                raise ValueError("S(c,d) needs c >= d")
            return cls("pt", c, d)
        raise ValueError(f"unsupported space {text!r}; use pt, orbit or S(c,d)")

    def __str__(self):
        if self.c == self.d == 0:
            return self.site
        return f"S({self.c},{self.d})" if self.site == "pt" else f"orbit∧S({self.c},{self.d})"


def _theory(space: Space, variant: Variant) -> str:
    if space.site == "orbit":
        return "orbit"
    return "etale" if variant.kind == KR_ET else "pt"


def default_window(nmax: int = 12) -> Window:
    m = nmax + 8
    return Window(-m, m, -2 * m - 2, 2 * m + 2)


def in_unstable_region(s) -> bool:
    return s[0] + s[1] <= 0 and s[1] <= 0


class _Model:
    """Generators, spots and module structure for one (space, variant)."""

    def __init__(self, space: Space, variant: Variant):
        self.space, self.variant = space, variant
        self.theory = _theory(space, variant)

    def in_region(self, s) -> bool:
        return in_unstable_region(s) if self.variant.mode == "unstable" else True

    def generator_at(self, s):
        p, q = s
        if q % 2 or not self.in_region(s):
            return None
        return cr.generator_at(self.theory, p, -q // 2)

    def spot_of(self, m) -> Spot:
        deg = m.degree
        return Spot(deg.p, -2 * deg.q)

    def e2_zero(self, s) -> bool:
        return self.generator_at(s) is None

    def ring(self) -> ModuleStructure:
        t = self.theory
        if t == "pt":
            factors = (cr.x("pt"), cr.y("pt"))
        elif t == "etale":
            factors = (cr.x("etale"), cr.y("etale"), RingElement.mono(EtaleMono(-1, 0)))
        else:
            factors = (cr.u(1), cr.u(-1))
        return ModuleStructure(cr.multiply, factors, self.spot_of, self.generator_at, RingElement.one(t))


def _base_e2(model: "_Model", window: Window) -> Page:
    cells = {}
    for s in window.spots():
        g = model.generator_at(s)
        if g is not None:
            cells[s] = Cell(FGAbelianGroup.cyclic(g.order).named(str(g)), (RingElement.mono(g),))
    return Page(2, window, cells, e2_zero=model.e2_zero)


def e2_page(space: Space | str = "pt", variant: Variant | None = None, window: Window | None = None) -> Page:
    """E_2 page on a window; unstable mode keeps only ``p + q <= 0, q <= 0``.

    For ``S^{c,d}`` the page is that of the site moved by ``(c, -2d)``.
    """
    space = Space.parse(space) if isinstance(space, str) else space
    variant = variant or Variant()
    window = window or default_window()
    if space.c == space.d == 0:
        return _base_e2(_Model(space, variant), window)
    return run_to_einfty(space, variant, window=window).e2


# ---------------------------------------------------------------------------
# d_3


@dataclass(frozen=True)
class D3Rule:
    seeds: tuple
    formula: object  # monomial -> RingElement

    def __call__(self, m) -> RingElement:
        return self.formula(m)


def _d3_pt(m) -> RingElement:
    if isinstance(m, PosMono):
        if m.a % 2 == 0:
            return RingElement.zero("pt")
        return RingElement.mono(PosMono(m.a - 1, m.b + 3))
    if isinstance(m, NegTor):
        # coefficient a+1 mod 2: forced by Leibniz against x * theta/(x^{a+1} y^b)
        if m.b >= 3 and m.a % 2 == 0:
            return RingElement.mono(NegTor(m.a + 1, m.b - 3))
        return RingElement.zero("pt")
    return RingElement.zero("pt")


def _d3_etale(m) -> RingElement:
    if m.a % 2 == 0:
        return RingElement.zero("etale")
    return RingElement.mono(EtaleMono(m.a - 1, m.b + 3))


def _d3_orbit(m) -> RingElement:
    return RingElement.zero("orbit")


def d3_closed_form(variant: Variant | str = KR, site: str = "pt") -> D3Rule:
    kind = variant.kind if isinstance(variant, Variant) else variant
    if site == "orbit":
        return D3Rule((), _d3_orbit)
    if kind == KR:
        seeds = (
            (cr.x("pt"), RingElement.mono(PosMono(0, 3))),
            (RingElement.mono(NegTor(0, 3)), RingElement.mono(NegTor(1, 0))),
        )
        return D3Rule(seeds, _d3_pt)
    seeds = (
        (cr.x("etale"), RingElement.mono(EtaleMono(0, 3))),
        # y comes from the point, where its d_3 lands in a zero group
        (cr.y("etale"), RingElement.zero("etale")),
    )
    return D3Rule(seeds, _d3_etale)


# ---------------------------------------------------------------------------
# running


@dataclass
class Run:
    space: Space
    variant: Variant
    e2: Page
    e3: Page
    e4: Page
    closure: Closure
    certified: dict = field(default_factory=dict)  # column -> reason or None
    columns: dict = field(default_factory=dict)  # column -> AbutmentGraded

    @property
    def einfty(self) -> Page:
        return self.e4

    def page(self, r) -> Page:
        if r in (2,):
            return self.e2
        if r == 3:
            return self.e3
        return self.e4


def _pt_column_support(n: int, theory: str) -> tuple[int, int] | None:
    """Bounds on p for nonzero E_2 cells on the line p + q = n (None if unbounded)."""
    if theory == "pt":
        lo, hi = min(0, 3 - n), max(0, -n)
        return lo, hi
    if theory == "orbit":
        return 0, 0
    return None


def run_to_einfty(space: Space | str = "pt", variant: Variant | None = None, nmax: int = 12,
                  window: Window | None = None) -> Run:
    """E_2 through E_4 with certified columns ``|n| <= nmax``."""
    space = Space.parse(space) if isinstance(space, str) else space
    variant = variant or Variant()
    if space.c or space.d:
        return _suspended_run(space, variant, nmax, window)
    window = window or default_window(nmax)
    model = _Model(space, variant)
    e2 = _base_e2(model, window)
    for s in e2.cells:
        if s.q % 2:
            raise AssertionError("odd row populated")
    # d_2 vanishes by parity, so E_3 = E_2
    e3 = Page(3, window, e2.cells, e2_zero=e2.e2_zero)
    rule = d3_closed_form(variant, space.site)
    # the truncation is a quotient of the multiplicative stable sequence, so
    # the Leibniz rule is applied there and the exiting differentials dropped
    stable = _Model(space, Variant(variant.kind)) if variant.mode == "unstable" else model
    ring = stable.ring()
    full = _base_e2(stable, window) if stable is not model else e3
    full = Page(3, window, full.cells, e2_zero=full.e2_zero)
    closure = leibniz_close(full, rule.seeds, ring)
    for m, v in closure.values.items():
        if v != rule(m):
            raise AssertionError(f"Leibniz closure gives d3({m}) = {v}, closed form {rule(m)}")
    full = install(full, closure, ring)
    if stable is not model:
        cut = full.restrict(model.in_region)
        e3 = Page(3, window, e3.cells, cut.differentials, cut.indeterminate, e3.e2_zero, cut.notes)
    else:
        e3 = full
    e4 = turn_page(e3)
    run = Run(space, variant, e2, e3, e4, closure)
    _certify(run, model, nmax)
    return run


def _shift_page(page: Page, dp: int, dq: int, r: int | None = None) -> Page:
    w = page.window
    cells = {Spot(s.p + dp, s.q + dq): c for s, c in page.cells.items()}
    diffs = {Spot(s.p + dp, s.q + dq): d for s, d in page.differentials.items()}
    ind = frozenset(Spot(s.p + dp, s.q + dq) for s in page.indeterminate)
    notes = {Spot(s.p + dp, s.q + dq): v for s, v in page.notes.items()}
    zero = page.e2_zero
    shifted_zero = (lambda s: zero(Spot(s[0] - dp, s[1] - dq))) if zero else None
    return Page(page.r, Window(w.pmin + dp, w.pmax + dp, w.qmin + dq, w.qmax + dq), cells, diffs, ind,
                shifted_zero, notes)


def _suspended_run(space: Space, variant: Variant, nmax: int, window: Window | None) -> Run:
    """Suspension by ``S^{c,d}`` moves every page by ``(c, -2d)`` and commutes with the differentials."""
    dp, dq = space.c, -2 * space.d
    shift = dp + dq
    base_window = None
    if window is not None:
        base_window = Window(window.pmin - dp, window.pmax - dp, window.qmin - dq, window.qmax - dq)
    base = run_to_einfty(Space(space.site), Variant(variant.kind), nmax + abs(shift), base_window)
    e2 = _shift_page(base.e2, dp, dq)
    e3 = _shift_page(base.e3, dp, dq)
    e4 = _shift_page(base.e4, dp, dq)
    run = Run(space, variant, e2, e3, e4, base.closure)
    if variant.mode == "unstable":
        keep = in_unstable_region
        zero = e2.e2_zero
        e2 = e2.restrict(keep)
        e2 = Page(2, e2.window, e2.cells, e2_zero=lambda s: not keep(s) or zero(s))
        e3 = Page(3, e2.window, e2.cells, e3.restrict(keep).differentials, e2_zero=e2.e2_zero)
        e4 = turn_page(e3)
        run.e2, run.e3, run.e4 = e2, e3, e4
        for n in range(-nmax, nmax + 1):
            b = n - shift
            reason = base.certified.get(b, "outside computed range")
            run.certified[n] = reason
            run.columns[n] = abutment_graded(e4, n) if reason is None else AbutmentGraded(n, (), True)
        return run
    for n in range(-nmax, nmax + 1):
        b = n - shift
        reason = base.certified.get(b, "outside computed range")
        run.certified[n] = reason
        if reason is None:
            g = base.columns[b]
            run.columns[n] = AbutmentGraded(n, tuple((w - space.d, p + dp, grp) for w, p, grp in g.pieces))
        else:
            run.columns[n] = AbutmentGraded(n, (), True)
    return run


def _certify(run: Run, model: _Model, nmax: int):
    e4 = run.e4
    w = e4.window
    cols = range(-nmax - 1, nmax + 2)
    support: dict[int, tuple[int, int] | None] = {}
    base = _pt_column_support
    for n in cols:
        if model.theory == "etale":
            support[n] = None
            continue
        if model.variant.mode == "unstable" and n > 0:
            support[n] = (0, -1)  # empty by truncation
            continue
        support[n] = base(n, model.theory)
    if model.theory == "etale":
        period, start = 8, 4
        resolved = []
        for n in cols:
            span = [Spot(p, n - p) for p in range(start, start + period)]
            if all(s in w and s not in e4.indeterminate and e4.group(s).is_zero() for s in span):
                tail = [s for s in e4.column(n) if s.p >= start]
                resolved.extend(tail)
                support[n] = (0, start - 1)
        e4 = e4.resolve(resolved, "x^-2 y^8 periodicity", zero=True)
        run.e4 = e4
    for n in range(-nmax, nmax + 1):
        reason = _column_reason(e4, n, support)
        run.certified[n] = reason
        run.columns[n] = abutment_graded(e4, n) if reason is None else AbutmentGraded(n, (), True)


def _column_reason(e4: Page, n: int, support) -> str | None:
    """None when column n is certified, else why not."""
    for k in (n - 1, n, n + 1):
        b = support.get(k)
        if b is None:
            return f"support of column {k} unknown"
        lo, hi = b
        for p in range(lo, hi + 1):
            s = Spot(p, k - p)
            if s not in e4.window:
                return f"column {k} leaves the window at {tuple(s)}"
            if s in e4.indeterminate:
                return f"spot {tuple(s)} indeterminate: {e4.notes.get(s, '')}"
    # no d_r, r >= 4, into or out of the column
    here = [s for s in e4.column(n) if not e4.group(s).is_zero()]
    right = [s for s in e4.column(n + 1) if not e4.group(s).is_zero()]
    left = [s for s in e4.column(n - 1) if not e4.group(s).is_zero()]
    for s in here:
        for t in right:
            if t.p - s.p >= 4:
                return f"possible d_{t.p - s.p} from {tuple(s)} to {tuple(t)}"
        for t in left:
            if s.p - t.p >= 4:
                return f"possible d_{s.p - t.p} from {tuple(t)} to {tuple(s)}"
    return None


def matches(graded: AbutmentGraded, target: FGAbelianGroup) -> bool:
    if graded.indeterminate:
        return False
    return assembles_to(graded.groups, target)


def reference(space: Space, n: int) -> FGAbelianGroup:
    """KO or KU value shifted by the suspension."""
    m = n - space.c + 2 * space.d
    return ku(m) if space.site == "orbit" else ko(m)


# ---------------------------------------------------------------------------
# étale comparison


@dataclass
class Comparison:
    e2_commutes: bool
    witnesses: list
    spot_maps: dict  # spot -> GroupHom on E_4
    verdicts: dict  # n -> "iso" | "iso-by-extension" | "undetermined" | "uncertified"
    pt: Run
    etale: Run


def _coords(elt: RingElement, cell: Cell) -> list[int]:
    """Coefficients of ``elt`` on the monomial generators of an E_2 cell."""
    return [elt.terms.get(next(iter(r.terms)), 0) for r in cell.reps]


def etale_comparison(nmax: int = 12) -> Comparison:
    """Compare the KR and étale KR sequences of the point through ``x -> x, y -> y``."""
    pt = run_to_einfty("pt", Variant(KR), nmax)
    et = run_to_einfty("pt", Variant(KR_ET), nmax)
    rho = cr.compare_to_etale
    d_pt, d_et = d3_closed_form(KR), d3_closed_form(KR_ET)
    witnesses = []
    for s, cell in pt.e3.cells.items():
        (m,) = cell.reps[0].terms
        lhs = rho(d_pt(m))
        img = rho(cell.reps[0])
        rhs = RingElement.zero("etale")
        for em, c in img.terms.items():
            rhs = rhs + d_et(em) * c
        if lhs != rhs:
            witnesses.append((tuple(s), str(m)))
    maps = {}
    for s, cell in pt.e4.cells.items():
        tcell = et.e4.cells.get(s)
        if tcell is None:
            maps[s] = GroupHom.zero(cell.group, ZERO)
            continue
        e2cell = et.e2.cells[s]
        cols = []
        for rep in cell.reps:
            img = rho(rep)
            vec = _coords(img, e2cell)
            cols.append(list(tcell.classify(vec)))
        maps[s] = GroupHom(cell.group, tcell.group, IntMatrix.from_columns(cols, tcell.group.ngens))
    verdicts = {}
    for n in range(-nmax, nmax + 1):
        if pt.certified.get(n) or et.certified.get(n):
            verdicts[n] = "uncertified"
            continue
        verdicts[n] = _column_verdict(n, pt, et, maps)
    return Comparison(not witnesses, witnesses, maps, verdicts, pt, et)


def _column_verdict(n, pt: Run, et: Run, maps) -> str:
    src = [s for s in pt.e4.column(n) if not pt.e4.group(s).is_zero()]
    tgt = [s for s in et.e4.column(n) if not et.e4.group(s).is_zero()]
    if set(src) == set(tgt) and all(maps[s].is_iso() for s in src):
        return "iso"
    # Z -> Z with the deepest piece mapping by m and torsion pieces of total order m above it
    ref = ko(n)
    if ref == Z and len(tgt) == 1 and tgt[0] in src and et.e4.group(tgt[0]) == Z and pt.e4.group(tgt[0]) == Z:
        s0 = tgt[0]
        mult = abs(maps[s0].matrix[0, 0])
        others = [s for s in src if s != s0]
        if mult and all(s.p < s0.p for s in others) and all(pt.e4.group(s).is_torsion() for s in others):
            tors = 1
            for s in others:
                tors *= pt.e4.group(s).order()
            if tors == mult:
                return "iso-by-extension"
    return "undetermined"


def descent_degrees(nmax: int = 12) -> list[int]:
    """Degrees where the comparison must be an isomorphism: n <= 0 or n divisible by 4."""
    return [n for n in range(-nmax, nmax + 1) if n <= 0 or n % 4 == 0]


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightPiece:
    weight: int
    group: FGAbelianGroup
    eigenvalue: str


def weight_filtration_report(space: Space | str = "pt", variant: Variant | None = None, n: int = 0,
                             k: int | None = None) -> list[WeightPiece] | None:
    """Graded pieces of column n with the Adams eigenvalue ``k^weight``; None if uncertified."""
    run = _cached_run(str(space), variant or Variant(), max(12, abs(n)))
    col = run.columns.get(n)
    if col is None or col.indeterminate:
        return None
    out = []
    for w, _, g in col.pieces:
        ev = f"k^{w}" if k is None else str(k ** w)
        out.append(WeightPiece(w, g, ev))
    return out


@lru_cache(maxsize=16)
def _cached_run(space: str, variant: Variant, nmax: int) -> Run:
    return run_to_einfty(space, variant, nmax)


def cached_run(space: str = "pt", variant: Variant | None = None, nmax: int = 12) -> Run:
    return _cached_run(space, variant or Variant(), nmax)


def adams_compatible(k: int, variant: Variant, nmax: int = 12) -> list:
    """Spots of the unstable E_3 page where ``psi^k`` fails to commute with ``d_3``."""
    run = cached_run("pt", Variant(variant.kind, "unstable"), nmax)
    return adams_commutes(k, run.e3)
