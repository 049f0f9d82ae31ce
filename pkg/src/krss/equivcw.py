"""Finite based Z/2-CW complexes as signed combinatorial data.

A complex is a list of cells with dimensions, a signed involution
``tau`` (cell -> (cell, sign)) and a sparse cellular boundary.  Orbits
are derived from ``tau``; a free orbit is represented by its lowest
cell index.  Spheres are built as smash products of the two one-cell
generators ``S^{1,0}`` and ``S^{1,1}``.

Cell ``0`` is always the basepoint.  Boundary coefficients on the
basepoint are kept for the small generators but play no role: every
chain computation here works with reduced chains.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .exactalg import ChainMap, IntChainComplex, IntMatrix


class CWError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CWZ2:
    """A based Z/2-CW complex.

    ``shape`` optionally records an equivalence ``X ~ D ∧ S^{a,b}`` with
    ``D`` the point (``"pt"``) or the free orbit (``"orbit"``).  The
    cohomology dispatcher uses it to reach positive weights by duality.
    """

    dims: tuple[int, ...]
    tau: tuple[tuple[int, int], ...]
    boundary: tuple[tuple[tuple[int, int], ...], ...]
    names: tuple[str, ...] = ()
    shape: tuple[str, int, int] | None = None
    basepoint: int = 0
    _by_dim: dict = field(default_factory=dict, repr=False, compare=False)
    _faces: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.dims)
        if len(self.tau) != n or len(self.boundary) != n:
            raise CWError("dims, tau and boundary must have the same length")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"c{i}" for i in range(n)))
        by_dim: dict[int, list[int]] = {}
        for i, d in enumerate(self.dims):
            if i != self.basepoint:
                by_dim.setdefault(d, []).append(i)
        self._by_dim.update(by_dim)
        b = self.basepoint
        self._faces.extend({f: v for f, v in bd if f != b} for bd in self.boundary)

    # -- structure ---------------------------------------------------------

    @property
    def ncells(self) -> int:
        return len(self.dims)

    def cells(self, n: int) -> list[int]:
        """Non-basepoint cells of dimension ``n`` in index order."""
        return self._by_dim.get(n, [])

    @property
    def dimensions(self) -> list[int]:
        return sorted(self._by_dim)

    def is_fixed(self, c: int) -> bool:
        return self.tau[c][0] == c

    def rep(self, c: int) -> int:
        return min(c, self.tau[c][0])

    def orbit_offset(self, c: int) -> tuple[int, int]:
        """``(k, s)`` with ``c = s * tau^k(rep(c))``."""
        r = self.rep(c)
        if r == c:
            return 0, 1
        return 1, self.tau[r][1]

    def reps(self, n: int) -> list[int]:
        """Fixed cells and free-orbit representatives of dimension ``n``."""
        return [c for c in self.cells(n) if self.rep(c) == c]

    def d(self, c: int) -> dict[int, int]:
        """Reduced boundary of a cell (read-only)."""
        return self._faces[c]

    def boundary_matrix(self, n: int) -> IntMatrix:
        """Reduced cellular boundary ``C_n -> C_{n-1}`` in the order of :meth:`cells`."""
        src, tgt = self.cells(n), self.cells(n - 1)
        pos = {c: i for i, c in enumerate(tgt)}
        data = {}
        for j, c in enumerate(src):
            for f, v in self.d(c).items():
                data[pos[f], j] = v
        return IntMatrix(len(tgt), len(src), data)

    def reduced_chains(self) -> IntChainComplex:
        """Underlying non-equivariant reduced cellular chains."""
        ranks = {n: len(self.cells(n)) for n in self.dimensions}
        return IntChainComplex(ranks, {n: self.boundary_matrix(n) for n in self.dimensions})

    # -- invariants --------------------------------------------------------

    def violations(self) -> list[str]:
        out = []
        b = self.basepoint
        if self.tau[b] != (b, 1) or self.dims[b] != 0 or self.boundary[b]:
            out.append("basepoint must be a fixed 0-cell with empty boundary")
        for c in range(self.ncells):
            img, s = self.tau[c]
            if s not in (1, -1):
                out.append(f"cell {c}: involution sign {s}")
                continue
            if self.dims[img] != self.dims[c]:
                out.append(f"cell {c}: involution changes dimension")
            back, s2 = self.tau[img]
            if back != c or s * s2 != 1:
                out.append(f"cell {c}: involution does not square to the identity")
            if img == c and s == -1:
                out.append(f"cell {c}: reversed by the involution")
            for f, _ in self.boundary[c]:
                if self.dims[f] != self.dims[c] - 1:
                    out.append(f"cell {c}: face {f} has the wrong dimension")
        if out:
            return out
        for c in range(self.ncells):
            dc = self.d(c)
            if self.is_fixed(c):
                bad = [f for f in dc if not self.is_fixed(f)]
                if bad:
                    out.append(f"fixed cell {c} has free face {bad[0]}")
            # d d = 0
            dd: dict[int, int] = {}
            for f, v in dc.items():
                for g, w in self.d(f).items():
                    dd[g] = dd.get(g, 0) + v * w
            if any(dd.values()):
                out.append(f"cell {c}: boundary of boundary is nonzero")
            # tau d = d tau
            img, s = self.tau[c]
            lhs: dict[int, int] = {}
            for f, v in dc.items():
                fi, fs = self.tau[f]
                lhs[fi] = lhs.get(fi, 0) + fs * v
            rhs = {f: s * v for f, v in self.d(img).items()}
            if {k: v for k, v in lhs.items() if v} != rhs:
                out.append(f"cell {c}: involution does not commute with the boundary")
        return out

    def validate(self) -> "CWZ2":
        bad = self.violations()
        if bad:
            raise CWError("; ".join(bad[:5]))
        return self


def _make(dims, tau, boundary, names=(), shape=None) -> CWZ2:
    bnd = tuple(tuple(sorted((f, v) for f, v in b.items() if v)) for b in boundary)
    return CWZ2(tuple(dims), tuple(tuple(t) for t in tau), bnd, tuple(names), shape).validate()


# ---------------------------------------------------------------------------
# builders


@lru_cache(maxsize=None)
def s00() -> CWZ2:
    """``S^0``: basepoint and one fixed point."""
    return _make([0, 0], [(0, 1), (1, 1)], [{}, {}], ["*", "v"], ("pt", 0, 0))


@lru_cache(maxsize=None)
def s10() -> CWZ2:
    return _make([0, 1], [(0, 1), (1, 1)], [{}, {}], ["*", "e"], ("pt", 1, 0))


@lru_cache(maxsize=None)
def s11() -> CWZ2:
    # d e = v1 - v0, tau e = +e'
    return _make(
        [0, 0, 1, 1],
        [(0, 1), (1, 1), (3, 1), (2, 1)],
        [{}, {}, {1: 1, 0: -1}, {1: 1, 0: -1}],
        ["v0", "v1", "e", "e'"],
        ("pt", 1, 1),
    )


@lru_cache(maxsize=None)
def sphere(p: int, q: int) -> CWZ2:
    """``S^{p,q}``: underlying ``S^p`` with ``q`` sign coordinates."""
    if not (p >= q >= 0):
        raise CWError(f"sphere({p},{q}) needs p >= q >= 0")
    if p == 0:
        return s00()
    if q > 0:
        return smash(sphere(p - 1, q - 1), s11()) if p > 1 else s11()
    return smash(sphere(p - 1, 0), s10()) if p > 1 else s10()


def _shape_smash(a, b):
    if a is None or b is None:
        return None
    if a[0] == "orbit" and b[0] == "orbit":
        return None
    site = "orbit" if "orbit" in (a[0], b[0]) else "pt"
    return (site, a[1] + b[1], a[2] + b[2])


@lru_cache(maxsize=128)
def smash(x: CWZ2, y: CWZ2) -> CWZ2:
    """Smash product with Koszul signs and the diagonal action."""
    xc = [c for c in range(x.ncells) if c != x.basepoint]
    yc = [c for c in range(y.ncells) if c != y.basepoint]
    index = {}
    dims, names = [0], ["*"]
    for a in xc:
        for b in yc:
            index[a, b] = len(dims)
            dims.append(x.dims[a] + y.dims[b])
            names.append(f"{x.names[a]}^{y.names[b]}")
    tau = [(0, 1)] * len(dims)
    boundary: list[dict[int, int]] = [{} for _ in dims]
    for (a, b), i in index.items():
        ta, sa = x.tau[a]
        tb, sb = y.tau[b]
        tau[i] = (index[ta, tb], sa * sb)
        bd: dict[int, int] = {}
        for f, v in x.d(a).items():
            k = index[f, b]
            bd[k] = bd.get(k, 0) + v
        sign = -1 if x.dims[a] % 2 else 1
        for g, w in y.d(b).items():
            k = index[a, g]
            bd[k] = bd.get(k, 0) + sign * w
        boundary[i] = bd
    return _make(dims, tau, boundary, names, _shape_smash(x.shape, y.shape))


def orbit_plus(x: CWZ2) -> CWZ2:
    """``Z/2_+ ∧ X`` with the swap action on the two copies."""
    xc = [c for c in range(x.ncells) if c != x.basepoint]
    index = {}
    dims, names = [0], ["*"]
    for g in (0, 1):
        for a in xc:
            index[g, a] = len(dims)
            dims.append(x.dims[a])
            names.append(f"{g}.{x.names[a]}")
    tau = [(0, 1)] * len(dims)
    boundary: list[dict[int, int]] = [{} for _ in dims]
    for (g, a), i in index.items():
        tau[i] = (index[1 - g, a], 1)
        boundary[i] = {index[g, f]: v for f, v in x.d(a).items()}
    shape = None
    if x.shape is not None and x.shape[0] == "pt":
        shape = ("orbit", x.shape[1], x.shape[2])
    return _make(dims, tau, boundary, names, shape)


def quotient(x: CWZ2) -> IntChainComplex:
    """Reduced cellular chains of the orbit space ``X/Z2``."""
    ranks, diffs = {}, {}
    for n in x.dimensions:
        ranks[n] = len(x.reps(n))
    for n in x.dimensions:
        src, tgt = x.reps(n), x.reps(n - 1)
        pos = {c: i for i, c in enumerate(tgt)}
        data: dict[tuple[int, int], int] = {}
        for j, c in enumerate(src):
            for f, v in x.d(c).items():
                k, s = x.orbit_offset(f)
                key = (pos[x.rep(f)], j)
                data[key] = data.get(key, 0) + (s if k else 1) * v
        diffs[n] = IntMatrix(len(tgt), len(src), {k: v for k, v in data.items() if v})
    return IntChainComplex(ranks, diffs)


def fixed_subcomplex(x: CWZ2) -> IntChainComplex:
    """Reduced cellular chains of the fixed set."""
    ranks, diffs = {}, {}
    for n in x.dimensions:
        ranks[n] = sum(1 for c in x.cells(n) if x.is_fixed(c))
    for n in x.dimensions:
        src = [c for c in x.cells(n) if x.is_fixed(c)]
        tgt = [c for c in x.cells(n - 1) if x.is_fixed(c)]
        pos = {c: i for i, c in enumerate(tgt)}
        data = {(pos[f], j): v for j, c in enumerate(src) for f, v in x.d(c).items()}
        diffs[n] = IntMatrix(len(tgt), len(src), data)
    return IntChainComplex(ranks, diffs)


# ---------------------------------------------------------------------------
# equivariant cellular maps


@dataclass(frozen=True, eq=False)
class EquivMap:
    """Based cellular map given on reduced chains, cell -> {target cell: coefficient}.

    ``dual`` is the Spanier-Whitehead dual map, when known; it is needed
    to push induced maps into positive weights.
    """

    source: CWZ2
    target: CWZ2
    images: Mapping[int, Mapping[int, int]]
    dual: "EquivMap | None" = None

    def __post_init__(self):
        x, y = self.source, self.target
        for c, img in self.images.items():
            if c == x.basepoint:
                raise CWError("the basepoint must map to the basepoint")
            for t in img:
                if t == y.basepoint or y.dims[t] != x.dims[c]:
                    raise CWError(f"cell {c} is sent to cell {t} of the wrong dimension")
        for c in range(x.ncells):
            if c == x.basepoint:
                continue
            # chain map
            lhs: dict[int, int] = {}
            for t, v in self.image(c).items():
                for g, w in y.d(t).items():
                    lhs[g] = lhs.get(g, 0) + v * w
            rhs: dict[int, int] = {}
            for f, v in x.d(c).items():
                for t, w in self.image(f).items():
                    rhs[t] = rhs.get(t, 0) + v * w
            if _clean(lhs) != _clean(rhs):
                raise CWError(f"not a chain map at cell {c}")
            # equivariance
            ci, cs = x.tau[c]
            lhs = {}
            for t, v in self.image(c).items():
                ti, ts = y.tau[t]
                lhs[ti] = lhs.get(ti, 0) + ts * v
            rhs = {t: cs * v for t, v in self.image(ci).items()}
            if _clean(lhs) != _clean(rhs):
                raise CWError(f"not equivariant at cell {c}")

    def image(self, c: int) -> dict[int, int]:
        return dict(self.images.get(c, {}))

    def chain_map(self) -> ChainMap:
        """Underlying map of reduced chains."""
        x, y = self.source, self.target
        maps = {}
        for n in x.dimensions:
            pos = {c: i for i, c in enumerate(y.cells(n))}
            data = {(pos[t], j): v for j, c in enumerate(x.cells(n)) for t, v in self.image(c).items()}
            maps[n] = IntMatrix(len(y.cells(n)), len(x.cells(n)), data)
        return ChainMap(x.reduced_chains(), y.reduced_chains(), maps)


def _clean(d):
    return {k: v for k, v in d.items() if v}


@lru_cache(maxsize=64)
def identity_map(x: CWZ2) -> EquivMap:
    imgs = {c: {c: 1} for c in range(x.ncells) if c != x.basepoint}
    m = EquivMap(x, x, imgs)
    object.__setattr__(m, "dual", m)
    return m


@lru_cache(maxsize=64)
def smash_maps(f: EquivMap, g: EquivMap) -> EquivMap:
    """``f ∧ g`` on the cells of :func:`smash`; the dual is ``Df ∧ Dg`` when both are known."""
    m = _smash_maps(f, g)
    if f.dual is not None and g.dual is not None:
        if f.dual is f and g.dual is g:
            object.__setattr__(m, "dual", m)
        else:
            d = _smash_maps(f.dual, g.dual)
            object.__setattr__(m, "dual", d)
            object.__setattr__(d, "dual", m)
    return m


def _smash_maps(f: EquivMap, g: EquivMap) -> EquivMap:
    src = smash(f.source, g.source)
    tgt = smash(f.target, g.target)

    def index(x, y):
        xc = [c for c in range(x.ncells) if c != x.basepoint]
        yc = [c for c in range(y.ncells) if c != y.basepoint]
        return {(a, b): 1 + i * len(yc) + j for i, a in enumerate(xc) for j, b in enumerate(yc)}

    si, ti = index(f.source, g.source), index(f.target, g.target)
    images = {}
    for (a, b), i in si.items():
        img: dict[int, int] = {}
        for ta, va in f.image(a).items():
            for tb, vb in g.image(b).items():
                k = ti[ta, tb]
                img[k] = img.get(k, 0) + va * vb
        images[i] = _clean(img)
    return EquivMap(src, tgt, images)


@lru_cache(maxsize=None)
def orbit0() -> CWZ2:
    """``Z/2_+``: a free pair of points and the basepoint."""
    return orbit_plus(s00())


@lru_cache(maxsize=None)
def _site_maps():
    pt, orb = s00(), orbit0()
    proj = EquivMap(orb, pt, {1: {1: 1}, 2: {1: 1}})
    trans = EquivMap(pt, orb, {1: {1: 1, 2: 1}})
    swap = EquivMap(orb, orb, {1: {2: 1}, 2: {1: 1}})
    object.__setattr__(proj, "dual", trans)
    object.__setattr__(trans, "dual", proj)
    object.__setattr__(swap, "dual", swap)
    return proj, trans, swap


def projection() -> EquivMap:
    """Orbit collapse ``Z/2_+ -> S^0``."""
    return _site_maps()[0]


def transfer() -> EquivMap:
    """Stable wrong-way map ``S^0 -> Z/2_+``, one point to the sum of both."""
    return _site_maps()[1]


def swap() -> EquivMap:
    """The Weyl action on ``Z/2_+``."""
    return _site_maps()[2]


# ---------------------------------------------------------------------------
# expression grammar: S(p,q), orbit(E), smash(E,E), pt

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


def parse_space(text: str) -> CWZ2:
    """Build a complex from ``S(p,q)``, ``orbit(E)``, ``smash(E,E)`` or ``pt``."""
    toks = []
    for num, word, sym in _TOKEN.findall(text.strip()):
        if num:
            toks.append(("num", int(num)))
        elif word:
            toks.append(("word", word))
        elif sym.strip():
            toks.append(("sym", sym))
    pos = 0

    def take(kind=None, value=None):
        nonlocal pos
        if pos >= len(toks):
            raise CWError(f"unexpected end of expression {text!r}")
        t = toks[pos]
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            raise CWError(f"unexpected token {t[1]!r} in {text!r}")
        pos += 1
        return t[1]

    def expr() -> CWZ2:
        w = take("word")
        if w == "pt":
            return s00()
        take("sym", "(")
        if w == "S":
            p = take("num")
            take("sym", ",")
            q = take("num")
            out = sphere(p, q)
        elif w == "orbit":
            out = orbit_plus(expr())
        elif w == "smash":
            a = expr()
            take("sym", ",")
            out = smash(a, expr())
        else:
            raise CWError(f"unknown constructor {w!r}")
        take("sym", ")")
        return out

    out = expr()
    if pos != len(toks):
        raise CWError(f"trailing input in {text!r}")
    return out
