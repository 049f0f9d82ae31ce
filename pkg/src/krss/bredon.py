"""Bredon (co)chains with Z/2 Mackey coefficients and the RO(Z/2)-graded dispatcher.

Each fixed cell contributes a copy of ``m_fixed`` and each free orbit a
copy of ``m_free`` (at its lowest-index representative).  Boundary
coefficients become blocks built from ``id``, ``t_star``, ``res`` and
``tr``.  Mackey values must be free abelian so that the blocks assemble
into an integer complex.

Bidegree convention: ``H^{p,q}`` has dimension ``p`` and weight ``q``.
Negative weights are reached by suspending with ``S^{-q,-q}`` and taking
cohomology; positive weights use the duality ``D(S^{q,q}) = S^{-q,-q}``
and take Bredon homology of ``S^{q,q}``.
"""

from __future__ import annotations

from functools import lru_cache

from .equivcw import (
    CWZ2, EquivMap, identity_map, orbit0, orbit_plus, projection, s00, smash,
    smash_maps, sphere, swap, transfer,
)
from .exactalg import (
    ChainMap, FGAbelianGroup, GroupHom, IntChainComplex, IntMatrix,
    homology_at, induced_on_homology,
)
from .mackey import MackeyZ2, constant


class BredonError(ValueError):
    pass


Z = FGAbelianGroup.free(1)
ZBAR = constant(Z)


def _check(m: MackeyZ2):
    if not m.is_free():
        raise BredonError(f"Mackey functor {m} has torsion values; only free values are supported")
    bad = m.validate()
    if bad:
        raise BredonError(f"invalid Mackey functor: {bad[0]}")


class _Blocks:
    """Offsets of the Mackey blocks of a complex in each dimension."""

    def __init__(self, x: CWZ2, m: MackeyZ2):
        self.x, self.m = x, m
        self.offset: dict[int, int] = {}
        self.rank: dict[int, int] = {}
        for n in x.dimensions:
            k = 0
            for c in x.reps(n):
                self.offset[c] = k
                k += (m.m_fixed if x.is_fixed(c) else m.m_free).ngens
            self.rank[n] = k

    def size(self, c: int) -> int:
        return (self.m.m_fixed if self.x.is_fixed(c) else self.m.m_free).ngens


def _put(data, r0, c0, block: IntMatrix, scale: int = 1):
    for (i, j), v in block.items():
        key = (r0 + i, c0 + j)
        nv = data.get(key, 0) + scale * v
        if nv:
            data[key] = nv
        else:
            data.pop(key, None)


def _free_block(m: MackeyZ2, k: int, s: int) -> IntMatrix:
    """Block for a free face ``s * tau^k(rep)``."""
    if k == 0:
        return IntMatrix.identity(m.m_free.ngens)
    return m.t_star.matrix.scale(s)


def _block(m: MackeyZ2, src_fixed: bool, tgt_fixed: bool, k: int, s: int, covariant: bool) -> IntMatrix:
    """Matrix for a cellular incidence between a source block and a target block.

    ``covariant`` means chains (the incidence goes from the source cell to
    the face); otherwise cochains, where the block pulls back along it.
    """
    if src_fixed and tgt_fixed:
        return IntMatrix.identity(m.m_fixed.ngens)
    if not src_fixed and not tgt_fixed:
        return _free_block(m, k, s)
    if not src_fixed and tgt_fixed:
        # free cell over a fixed cell
        return m.tr.matrix if covariant else m.res.matrix
    # fixed cell over a free pair
    return m.res.matrix if covariant else m.tr.matrix


def _chain_data(x: CWZ2, m: MackeyZ2, covariant: bool):
    b = _Blocks(x, m)
    diffs = {}
    for n in x.dimensions:
        data: dict[tuple[int, int], int] = {}
        for rho in x.reps(n):
            rf = x.is_fixed(rho)
            for face, c in x.d(rho).items():
                rep = x.rep(face)
                ff = x.is_fixed(rep)
                if rf and not ff:
                    raise BredonError(f"fixed cell {rho} has a free face")
                k, s = x.orbit_offset(face)
                blk = _block(m, rf, ff, k, s, covariant)
                if covariant:
                    _put(data, b.offset[rep], b.offset[rho], blk, c)
                else:
                    _put(data, b.offset[rho], b.offset[rep], blk, c)
        rows, cols = (b.rank.get(n - 1, 0), b.rank[n]) if covariant else (b.rank[n], b.rank.get(n - 1, 0))
        key = n if covariant else n - 1
        diffs[key] = IntMatrix(rows, cols, data)
    return b, diffs


def cochain_complex(x: CWZ2, m: MackeyZ2) -> IntChainComplex:
    """Reduced Bredon cochains ``C^n(X; M)``."""
    _check(m)
    b, diffs = _chain_data(x, m, covariant=False)
    return IntChainComplex(dict(b.rank), diffs, step=1)


def chain_complex(x: CWZ2, m: MackeyZ2) -> IntChainComplex:
    """Reduced Bredon chains ``C_n(X; M)``."""
    _check(m)
    b, diffs = _chain_data(x, m, covariant=True)
    return IntChainComplex(dict(b.rank), diffs, step=-1)


@lru_cache(maxsize=256)
def _cochains(x: CWZ2, m: MackeyZ2) -> IntChainComplex:
    return cochain_complex(x, m)


@lru_cache(maxsize=256)
def _chains(x: CWZ2, m: MackeyZ2) -> IntChainComplex:
    return chain_complex(x, m)


def reduced_cohomology(x: CWZ2, n: int, m: MackeyZ2 = ZBAR) -> FGAbelianGroup:
    return homology_at(_cochains(x, m), n)


def reduced_homology(x: CWZ2, n: int, m: MackeyZ2 = ZBAR) -> FGAbelianGroup:
    return homology_at(_chains(x, m), n)


# ---------------------------------------------------------------------------
# RO(Z/2)-graded groups


@lru_cache(maxsize=None)
def _site_sphere(site: str, w: int) -> CWZ2:
    if site == "pt":
        return sphere(w, w)
    if site == "orbit":
        return orbit_plus(sphere(w, w))
    raise BredonError(f"unknown site {site!r}; use 'pt' or 'orbit'")


def ro_graded(site, p: int, q: int, m: MackeyZ2 = ZBAR) -> FGAbelianGroup:
    """``H^{p,q}`` of the point, the free orbit, or a based complex (reduced).

    ``site`` is ``"pt"``, ``"orbit"`` or a :class:`CWZ2`.  A complex is
    handled directly for ``q <= 0``; for ``q > 0`` it must carry a known
    ``shape`` so that duality applies.
    """
    if isinstance(site, CWZ2):
        if q <= 0:
            x = site if q == 0 else smash(site, sphere(-q, -q))
            return reduced_cohomology(x, p - q, m)
        if site.shape is None:
            raise BredonError("positive weights need a complex of known shape (sphere or orbit of a sphere)")
        base, a, b = site.shape
        return ro_graded(base, p - a, q - b, m)
    if q <= 0:
        return reduced_cohomology(_site_sphere(site, -q), p - q, m)
    return reduced_homology(_site_sphere(site, q), q - p, m)


def induced_map(f: EquivMap, m: MackeyZ2, p: int, q: int) -> GroupHom:
    """``f^*: H^{p,q}(target) -> H^{p,q}(source)`` on reduced groups.

    For ``q <= 0`` this is the cochain map of ``f ∧ S^{-q,-q}``.  For
    ``q > 0`` it is the chain map of ``Df ∧ S^{q,q}``, so ``f`` must
    carry its dual.
    """
    _check(m)
    if q <= 0:
        g = smash_maps(f, identity_map(sphere(-q, -q))) if q < 0 else f
        return induced_on_homology(_cochain_map(g, m), p - q)
    if f.dual is None:
        raise BredonError("positive weights need the dual of the map")
    g = smash_maps(f.dual, identity_map(sphere(q, q)))
    return induced_on_homology(_chain_map(g, m), q - p)


def _map_data(f: EquivMap, m: MackeyZ2, covariant: bool):
    x, y = f.source, f.target
    bx, by = _Blocks(x, m), _Blocks(y, m)
    maps = {}
    for n in x.dimensions:
        data: dict[tuple[int, int], int] = {}
        for sigma in x.reps(n):
            sf = x.is_fixed(sigma)
            for t, c in f.image(sigma).items():
                rep = y.rep(t)
                tf = y.is_fixed(rep)
                k, s = y.orbit_offset(t)
                if sf and not tf:
                    # both cells of the orbit appear; count only the representative
                    if k:
                        continue
                blk = _block(m, sf, tf, k, s, covariant)
                if covariant:
                    _put(data, by.offset[rep], bx.offset[sigma], blk, c)
                else:
                    _put(data, bx.offset[sigma], by.offset[rep], blk, c)
        if covariant:
            maps[n] = IntMatrix(by.rank.get(n, 0), bx.rank[n], data)
        else:
            maps[n] = IntMatrix(bx.rank[n], by.rank.get(n, 0), data)
    return maps


def _cochain_map(f: EquivMap, m: MackeyZ2) -> ChainMap:
    return ChainMap(_cochains(f.target, m), _cochains(f.source, m), _map_data(f, m, covariant=False))


def _chain_map(f: EquivMap, m: MackeyZ2) -> ChainMap:
    return ChainMap(_chains(f.source, m), _chains(f.target, m), _map_data(f, m, covariant=True))


def mackey_of_degree(p: int, q: int, m: MackeyZ2 = ZBAR) -> MackeyZ2:
    """The Mackey functor ``Z/2/H ↦ H^{p,q}(Z/2/H; M)`` from induced maps."""
    res = induced_map(projection(), m, p, q)
    tr = induced_map(transfer(), m, p, q)
    t = induced_map(swap(), m, p, q)
    return MackeyZ2(res.codomain, res.domain, t, res, tr, name=f"H^{{{p},{q}}}")


def restriction(n: int, m: MackeyZ2 = ZBAR) -> GroupHom:
    """Restriction ``H^{0,2n}(pt) -> H^{0,2n}(Z/2)`` along the orbit projection."""
    return induced_map(projection(), m, 0, 2 * n)


__all__ = [
    "BredonError", "ZBAR", "chain_complex", "cochain_complex", "ro_graded",
    "induced_map", "mackey_of_degree", "restriction", "reduced_cohomology",
    "reduced_homology", "s00", "orbit0",
]
