"""Windowed bigraded spectral sequences.

A :class:`Page` holds the groups of one page on a finite rectangle of
spots, the differentials ``d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}`` and a
set of spots whose value is not determined by the data at hand.  Nothing
outside the window is guessed: a spot whose differential partner lies
outside the window (and is not known to vanish there) becomes
indeterminate on the next page.

Cells remember representatives (any objects supporting ``+`` and integer
scaling, typically ring elements) and a classifier that takes a vector
of E_2 coordinates to coordinates on the current page.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .exactalg import FGAbelianGroup, GroupHom, IntMatrix, homology_of_groups


class Spot(NamedTuple):
    p: int
    q: int

    def shift(self, dp: int, dq: int) -> "Spot":
        return Spot(self.p + dp, self.q + dq)


class LeakError(ValueError):
    """A differential points outside the window."""


class LeibnizError(ValueError):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Window:
    pmin: int
    pmax: int
    qmin: int
    qmax: int

    def __contains__(self, s) -> bool:
        p, q = s
        return self.pmin <= p <= self.pmax and self.qmin <= q <= self.qmax

    def spots(self) -> list[Spot]:
        return [Spot(p, q) for q in range(self.qmin, self.qmax + 1) for p in range(self.pmin, self.pmax + 1)]


@dataclass(frozen=True, eq=False)
class Cell:
    group: FGAbelianGroup
    reps: tuple
    from_e2: Callable[[Sequence[int]], tuple[int, ...]] | None = None

    def classify(self, e2_vec: Sequence[int]) -> tuple[int, ...]:
        """Coordinates here of a permanent cycle given in E_2 coordinates."""
        if self.from_e2 is None:
            return self.group.reduce(e2_vec)
        return self.from_e2(list(e2_vec))


@dataclass(frozen=True, eq=False)
class Page:
    r: int
    window: Window
    cells: Mapping[Spot, Cell]
    differentials: Mapping[Spot, GroupHom] = field(default_factory=dict)
    indeterminate: frozenset = frozenset()
    e2_zero: Callable[[Spot], bool] | None = None
    notes: Mapping[Spot, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("pages start at r = 2")
        for s in self.cells:
            if s not in self.window:
                raise ValueError(f"cell {s} lies outside the window")
        for s, d in self.differentials.items():
            t = self.target(s)
            if t not in self.window:
                raise LeakError(f"differential from {tuple(s)} leaves the window at {tuple(t)}")
            if d.domain != self.group(s) or d.codomain != self.group(t):
                raise ValueError(f"differential at {tuple(s)} does not match its cells")
        for s, d in self.differentials.items():
            t = self.target(s)
            nxt = self.differentials.get(t)
            if nxt is not None and not (nxt @ d).is_zero():
                raise ValueError(f"d∘d != 0 starting at {tuple(s)}")

    @property
    def step(self) -> tuple[int, int]:
        return self.r, 1 - self.r

    def target(self, s: Spot) -> Spot:
        return Spot(*s).shift(*self.step)

    def source(self, s: Spot) -> Spot:
        return Spot(s[0] - self.r, s[1] - 1 + self.r)

    def group(self, s) -> FGAbelianGroup:
        c = self.cells.get(Spot(*s))
        return c.group if c else FGAbelianGroup.zero()

    def d(self, s) -> GroupHom:
        s = Spot(*s)
        m = self.differentials.get(s)
        if m is None:
            return GroupHom.zero(self.group(s), self.group(self.target(s)))
        return m

    def is_known_zero(self, s) -> bool:
        """True when the spot is determinately zero on this page."""
        s = Spot(*s)
        if s in self.window:
            return s not in self.indeterminate and self.group(s).is_zero()
        return self.e2_zero is not None and self.e2_zero(s)

    def column(self, n: int) -> list[Spot]:
        """Spots of the window on the line p + q = n, highest filtration first."""
        out = [Spot(p, n - p) for p in range(self.window.pmax, self.window.pmin - 1, -1)]
        return [s for s in out if s in self.window]

    def with_differentials(self, diffs: Mapping[Spot, GroupHom], unknown: Iterable[Spot] = ()) -> "Page":
        notes = dict(self.notes)
        for s in unknown:
            notes[Spot(*s)] = "differential unknown"
        return replace(self, differentials=dict(diffs), notes=notes)

    def mark(self, spots: Iterable[Spot], reason: str) -> "Page":
        notes = dict(self.notes)
        for s in spots:
            notes[Spot(*s)] = reason
        return replace(self, indeterminate=self.indeterminate | {Spot(*s) for s in spots}, notes=notes)

    def resolve(self, spots: Iterable[Spot], reason: str, zero: bool = False) -> "Page":
        """Clear indeterminacy for spots whose value is certified by an outside argument.

        With ``zero`` the spots are also certified to vanish and their cells are dropped.
        """
        spots = {Spot(*s) for s in spots}
        notes = dict(self.notes)
        for s in spots:
            notes[s] = reason
        cells = {s: c for s, c in self.cells.items() if not (zero and s in spots)}
        diffs = {s: d for s, d in self.differentials.items()
                 if not (zero and (s in spots or self.target(s) in spots))}
        return replace(self, cells=cells, differentials=diffs,
                       indeterminate=self.indeterminate - spots, notes=notes)

    def restrict(self, keep: Callable[[Spot], bool]) -> "Page":
        cells = {s: c for s, c in self.cells.items() if keep(s)}
        diffs = {s: d for s, d in self.differentials.items() if keep(s) and keep(self.target(s))}
        return replace(self, cells=cells, differentials=diffs,
                       indeterminate=frozenset(s for s in self.indeterminate if keep(s)))

    def to_dict(self) -> dict:
        cells = []
        for s in sorted(self.cells, key=lambda s: (s.q, s.p)):
            c = self.cells[s]
            cells.append({"p": s.p, "q": s.q, "group": str(c.group), "gens": [str(g) for g in c.reps]})
        diffs = []
        for s in sorted(self.differentials, key=lambda s: (s.q, s.p)):
            d = self.differentials[s]
            if d.is_zero():
                continue
            t = self.target(s)
            diffs.append({"from": [s.p, s.q], "to": [t.p, t.q], "matrix": d.matrix.to_rows()})
        ind = [[s.p, s.q] for s in sorted(self.indeterminate, key=lambda s: (s.q, s.p))]
        return {"r": self.r, "cells": cells, "differentials": diffs, "indeterminate": ind}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False)


def page_from_dict(data: Mapping) -> dict:
    """Cell data of a JSON dump, keyed by spot (groups parsed back)."""
    return {Spot(c["p"], c["q"]): (FGAbelianGroup.parse(c["group"]), tuple(c["gens"])) for c in data["cells"]}


# ---------------------------------------------------------------------------
# page turning


def _combine(reps: Sequence, vec: Sequence[int]):
    out = None
    for r, c in zip(reps, vec):
        if not c:
            continue
        term = r * c if not isinstance(r, str) else (r if c == 1 else f"{c}{r}")
        if out is None:
            out = term
        elif isinstance(out, str):
            out = f"{out} + {term}"
        else:
            out = out + term
    return out if out is not None else 0


def turn_page(page: Page) -> Page:
    """Homology of ``page`` with respect to its differentials."""
    cells: dict[Spot, Cell] = {}
    indet = set(page.indeterminate)
    notes = dict(page.notes)
    unknown = {s for s, why in page.notes.items() if why == "differential unknown"}
    for s, cell in page.cells.items():
        src, tgt = page.source(s), page.target(s)
        for partner, label in ((src, "incoming"), (tgt, "outgoing")):
            if partner not in page.window and not page.is_known_zero(partner):
                indet.add(s)
                notes[s] = f"{label} partner {tuple(partner)} outside window"
            elif partner in page.indeterminate:
                indet.add(s)
                notes.setdefault(s, f"{label} partner {tuple(partner)} indeterminate")
        if s in unknown or src in unknown:
            indet.add(s)
        incoming = page.d(src) if src in page.window else GroupHom.zero(FGAbelianGroup.zero(), cell.group)
        outgoing = page.d(s) if tgt in page.window else GroupHom.zero(cell.group, FGAbelianGroup.zero())
        sq = homology_of_groups(incoming, outgoing)
        if sq.group.is_zero():
            continue
        reps = tuple(_combine(cell.reps, sq.lifts.column(k)) for k in range(sq.group.ngens))
        prev = cell.classify

        def from_e2(vec, prev=prev, sq=sq):
            return sq.classify(prev(vec))

        cells[s] = Cell(sq.group, reps, from_e2)
    # spots that are zero can still be indeterminate only if they already were
    indet = {s for s in indet if s in page.window}
    return Page(page.r + 1, page.window, cells, {}, frozenset(indet), page.e2_zero, notes)


# ---------------------------------------------------------------------------
# multiplicative closure


@dataclass(frozen=True)
class ModuleStructure:
    """How the page's generators multiply.

    ``spot_of`` sends a basis monomial to its spot, ``generator_at`` gives
    the E_2 basis monomial at a spot (or None where the group is zero,
    inside or outside the window), ``factors`` are the ring elements
    used to factor or divide generators, and ``unit`` is the identity.
    """

    multiply: Callable
    factors: tuple
    spot_of: Callable
    generator_at: Callable
    unit: object = None


@dataclass
class Closure:
    r: int
    values: dict
    how: dict
    unreachable: list

    def d(self, m):
        return self.values.get(m)


def _single(e):
    """``(monomial, coefficient)`` for a one-term element."""
    if len(e.terms) != 1:
        return None
    ((m, c),) = e.terms.items()
    return m, c


def leibniz_close(page: Page, seeds: Iterable[tuple], ring: ModuleStructure) -> Closure:
    """Propagate ``d_r`` from seeds by the Leibniz rule over the page's generators.

    Seeds are ``(generator, image)`` ring elements.  A generator whose
    target group is zero gets ``d = 0``.  Products are handled forward
    (``d(ab) = d(a) b ± a d(b)``) and backward when multiplication by the
    factor is injective on the relevant target group.  Generators not
    reachable this way are listed in ``unreachable``.
    """
    r = page.r
    mul = ring.multiply

    def tgt(m):
        s = ring.spot_of(m)
        return Spot(s[0] + r, s[1] + 1 - r)

    def sign(g):
        return -1 if ring.spot_of(g)[0] % 2 else 1

    basis = []
    for s, cell in sorted(page.cells.items()):
        for rep in cell.reps:
            one = _single(rep)
            if one is None or one[1] != 1:
                raise ValueError(f"generator at {tuple(s)} is not a basis monomial")
            basis.append(one[0])
    values: dict = {}
    how: dict = {}

    def record(m, v, why):
        if m in values:
            if values[m] != v:
                raise LeibnizError(f"d({m}) is {values[m]} by {how[m]} but {v} by {why}", (m, why))
            return False
        values[m] = v
        how[m] = why
        return True

    if ring.unit is not None:
        u = _single(ring.unit)[0]
        record(u, _zero_of(u), "unit")
    for g, img in seeds:
        m = _single(g)[0]
        if ring.generator_at(ring.spot_of(m)) is None:
            continue  # seed lives outside this page
        if ring.generator_at(tgt(m)) is None and not img.is_zero():
            raise LeibnizError(f"seed d({m}) = {img} lands in a zero group", (m, "seed"))
        record(m, img, "seed")
    everything = set(basis) | {m for m in values if ring.generator_at(ring.spot_of(m)) is not None}
    for m in everything:
        if ring.generator_at(tgt(m)) is None:
            record(m, _zero_of(m), "zero target")

    factors = [(_single(f)[0], f) for f in ring.factors]
    changed = True
    while changed:
        changed = False
        for m in sorted(everything, key=_key):
            if m in values:
                continue
            me = _elt(m)
            sm = ring.spot_of(m)
            for fm, f in factors:
                if fm not in values:
                    continue
                sf = ring.spot_of(fm)
                # forward: m = f * m'
                mp = ring.generator_at(Spot(sm[0] - sf[0], sm[1] - sf[1]))
                if mp is not None and mp in values and mul(f, _elt(mp)) == me:
                    v = mul(values[fm], _elt(mp)) + mul(f, values[mp]) * sign(fm)
                    changed |= record(m, v, f"d({fm}·{mp})")
                    break
                # backward: f * m = m'' with d(m'') known
                prod = mul(f, me)
                one = _single(prod) if not prod.is_zero() else None
                if one is None or one[1] != 1 or one[0] not in values:
                    continue
                mpp = one[0]
                rhs = values[mpp] - mul(values[fm], me)
                v = _divide(f, rhs, tgt(m), ring)
                if v is not None:
                    changed |= record(m, v * sign(fm), f"d({mpp})/{fm}")
                    break
    # consistency sweep over every factorization with all parts known
    for m in everything:
        if m not in values:
            continue
        me = _elt(m)
        sm = ring.spot_of(m)
        for fm, f in factors:
            if fm not in values:
                continue
            sf = ring.spot_of(fm)
            mp = ring.generator_at(Spot(sm[0] - sf[0], sm[1] - sf[1]))
            if mp is None or mp not in values or mul(f, _elt(mp)) != me:
                continue
            v = mul(values[fm], _elt(mp)) + mul(f, values[mp]) * sign(fm)
            if v != values[m]:
                raise LeibnizError(f"Leibniz fails on {fm}·{mp}: {v} != {values[m]}", (fm, mp))
    unreachable = sorted((m for m in basis if m not in values), key=_key)
    return Closure(r, values, how, unreachable)


def _elt(m):
    from .coeffring import RingElement

    return RingElement.mono(m)


def _zero_of(m):
    from .coeffring import RingElement

    return RingElement.zero(m.theory)


def _key(m):
    return (type(m).__name__, tuple(getattr(m, f) for f in m.__dataclass_fields__))


def _divide(f, rhs, target: Spot, ring: ModuleStructure):
    """Solve ``f * v = rhs`` for ``v`` in the group at ``target`` when f· is injective there."""
    t = ring.generator_at(target)
    if t is None:
        return rhs if rhs.is_zero() else None
    te = _elt(t)
    ft = ring.multiply(f, te)
    if ft.is_zero():
        return None
    one = _single(ft)
    if one is None:
        return None
    big, c = one
    o_small, o_big = t.order, big.order
    if o_small == 0 and o_big != 0:
        return None
    e = rhs.terms.get(big, 0)
    if any(m != big for m in rhs.terms):
        return None
    if o_big == 0:
        if e % c:
            return None
        k = e // c
    else:
        sols = [k for k in range(o_small or o_big) if (c * k - e) % o_big == 0]
        # injective: c must be a unit modulo the small order
        if o_small and len([k for k in range(o_small) if (c * k) % o_big == 0]) != 1:
            return None
        if len(sols) != 1:
            return None
        k = sols[0]
    return te * k


def install(page: Page, closure: Closure, ring: ModuleStructure) -> Page:
    """Turn a closure into group homomorphisms on the page."""
    diffs = {}
    unknown = []
    for s, cell in page.cells.items():
        t = page.target(s)
        cols = []
        ok = True
        tcell = page.cells.get(t)
        for rep in cell.reps:
            m = _single(rep)[0]
            v = closure.values.get(m)
            if v is None:
                ok = False
                break
            if v.is_zero():
                cols.append([0] * (tcell.group.ngens if tcell else 0))
                continue
            if t not in page.window or tcell is None:
                ok = False
                break
            col = []
            for trep in tcell.reps:
                tm = _single(trep)[0]
                col.append(v.terms.get(tm, 0))
            rest = {m2 for m2 in v.terms if m2 not in {_single(x)[0] for x in tcell.reps}}
            if rest:
                raise ValueError(f"d({m}) = {v} is not supported on the target cell")
            cols.append(col)
        if not ok:
            unknown.append(s)
            continue
        if tcell is None or t not in page.window:
            continue
        diffs[s] = GroupHom(cell.group, tcell.group, IntMatrix.from_columns(cols, tcell.group.ngens))
    return page.with_differentials(diffs, unknown)


# ---------------------------------------------------------------------------
# Adams operations


def adams_action(k: int, page: Page) -> dict[Spot, GroupHom]:
    """``psi^k`` acting on row ``q`` as multiplication by ``k^{-q/2}``."""
    out = {}
    for s, cell in page.cells.items():
        if s.q % 2:
            raise ValueError(f"odd row at {tuple(s)}: the action needs even q")
        w = -s.q // 2
        if w < 0:
            raise ValueError(f"k^{w} is not integral at {tuple(s)}; the action lives on q <= 0")
        out[s] = GroupHom.scalar(cell.group, k ** w)
    return out


def adams_commutes(k: int, page: Page, torsion_sources_only: bool = False) -> list[Spot]:
    """Spots where ``d ∘ psi^k != psi^k ∘ d``."""
    psi = adams_action(k, page)
    bad = []
    for s, d in page.differentials.items():
        if torsion_sources_only and not page.group(s).is_torsion():
            continue
        t = page.target(s)
        if d @ psi[s] != psi[t] @ d:
            bad.append(s)
    return bad


# ---------------------------------------------------------------------------
# abutment


@dataclass(frozen=True)
class AbutmentGraded:
    degree: int
    pieces: tuple  # (weight, filtration p, group), deepest filtration first
    indeterminate: bool = False

    @property
    def groups(self) -> list[FGAbelianGroup]:
        return [g for _, _, g in self.pieces]

    @property
    def weights(self) -> list[int]:
        return [w for w, _, _ in self.pieces]

    def __str__(self):
        if self.indeterminate:
            return f"n={self.degree}: indeterminate"
        if not self.pieces:
            return f"n={self.degree}: 0"
        body = ", ".join(f"w{w}:{g}" for w, _, g in self.pieces)
        return f"n={self.degree}: {body}"


def abutment_graded(einfty: Page, n: int) -> AbutmentGraded:
    """Graded pieces on the line ``p + q = n`` with weight ``-q/2``.

    Only spots inside the window are read; callers certify that the line's
    support lies inside it.
    """
    spots = einfty.column(n)
    if any(s in einfty.indeterminate for s in spots):
        return AbutmentGraded(n, (), True)
    pieces = []
    for s in spots:
        g = einfty.group(s)
        if not g.is_zero():
            pieces.append((-s.q // 2, s.p, g))
    return AbutmentGraded(n, tuple(pieces))
