"""Integer chain complexes, their homology, and induced maps.

Complexes may be large (thousands of cells for smash powers of
representation spheres), so homology is computed after a sparse
elimination of unit entries.  The elimination is a chain homotopy
equivalence; both directions are tracked so that classes can be lifted
back to the original cells and original cycles can be classified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .groups import FGAbelianGroup, GroupHom, SubQuotient, subquotient
from .matrix import IntMatrix, kernel_basis


class ChainComplexError(ValueError):
    pass


class ChainMapError(ValueError):
    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True, eq=False)
class IntChainComplex:
    """Free graded abelian group with differentials ``d[n]: C_n -> C_{n+step}``.

    ``step`` is ``-1`` for chain complexes and ``+1`` for cochain complexes.
    Absent degrees have rank 0, absent differentials are zero.
    """

    ranks: Mapping[int, int]
    diffs: Mapping[int, IntMatrix] = field(default_factory=dict)
    step: int = -1
    labels: Mapping[int, tuple] | None = None

    def __post_init__(self):
        if self.step not in (-1, 1):
            raise ChainComplexError("step must be +1 or -1")
        ranks = {n: r for n, r in self.ranks.items() if r}
        object.__setattr__(self, "ranks", ranks)
        diffs = {}
        for n, d in self.diffs.items():
            want = (self.rank(n + self.step), self.rank(n))
            if d.shape != want:
                raise ChainComplexError(f"differential in degree {n} has shape {d.shape}, expected {want}")
            if not d.is_zero():
                diffs[n] = d
        object.__setattr__(self, "diffs", diffs)
        for n, d in diffs.items():
            nxt = diffs.get(n + self.step)
            if nxt is not None and not (nxt @ d).is_zero():
                raise ChainComplexError(f"d∘d != 0 starting in degree {n}")

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> IntMatrix:
        m = self.diffs.get(n)
        if m is None:
            return IntMatrix.zeros(self.rank(n + self.step), self.rank(n))
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, r in self.ranks.items())

    @cached_property
    def _reduced(self) -> "_Reduction":
        return _Reduction(self)

    def homology(self, n: int) -> "Homology":
        return self._reduced.homology(n)


def homology(c: IntChainComplex, n: int) -> "Homology":
    return c.homology(n)


def homology_at(c: IntChainComplex, n: int) -> FGAbelianGroup:
    """``ker d_n / im d_{n-step}`` in canonical form (zero outside the support)."""
    return c.homology(n).group


class Homology:
    """Homology in one degree with generator lifts and a classifier for cycles."""

    def __init__(self, degree: int, group: FGAbelianGroup, lifts: IntMatrix, classify):
        self.degree = degree
        self.group = group
        self.lifts = lifts
        self._classify = classify

    def classify(self, cycle: Iterable[int]) -> tuple[int, ...]:
        return self._classify(list(cycle))

    def lift(self, coords: Iterable[int]) -> list[int]:
        return self.lifts.apply(coords)

    def __repr__(self):
        return f"Homology(degree={self.degree}, group={self.group})"


class _Reduction:
    def __init__(self, c: IntChainComplex):
        self.c = c
        s = c.step
        # d_n stored both ways: cols[n][a] = {b: v}, rows[n][b] = {a: v}
        cols: dict[int, dict[int, dict[int, int]]] = {}
        rows: dict[int, dict[int, dict[int, int]]] = {}
        for n in c.degrees:
            cols[n] = {a: {} for a in range(c.rank(n))}
            rows[n] = {}
        for n in c.degrees:
            rws = {b: {} for b in range(c.rank(n + s))}
            for (b, a), v in c.d(n).items():
                cols[n][a][b] = v
                rws[b][a] = v
            rows[n] = rws
        self.cols, self.rows = cols, rows
        self.F = {n: {a: {a: 1} for a in range(c.rank(n))} for n in c.degrees}
        self.G = {n: {a: {a: 1} for a in range(c.rank(n))} for n in c.degrees}
        self._eliminate()
        self._cache: dict[int, Homology] = {}

    def _eliminate(self):
        s = self.c.step
        cols, rows = self.cols, self.rows
        changed = True
        while changed:
            changed = False
            for n in sorted(cols):
                order = sorted(cols[n], key=lambda a: (len(cols[n][a]), a))
                for a in order:
                    col = cols[n].get(a)
                    if not col:
                        continue
                    best = None
                    for b, v in col.items():
                        if v in (1, -1):
                            key = (len(rows[n][b]), b)
                            if best is None or key < best[0]:
                                best = (key, b)
                    if best is None:
                        continue
                    self._cancel(n, a, best[1])
                    changed = True

    def _cancel(self, n: int, a: int, b: int):
        s = self.c.step
        cols, rows, F, G = self.cols, self.rows, self.F, self.G
        u = cols[n][a][b]
        beta = {x: v for x, v in rows[n][b].items() if x != a}
        gamma = {y: v for y, v in cols[n][a].items() if y != b}
        # d_n' = delta - gamma u^-1 beta
        for x, bv in beta.items():
            colx = cols[n][x]
            for y, gv in gamma.items():
                nv = colx.get(y, 0) - gv * u * bv
                if nv:
                    colx[y] = nv
                    rows[n][y][x] = nv
                else:
                    colx.pop(y, None)
                    rows[n][y].pop(x, None)
        for y in cols[n][a]:
            rows[n][y].pop(a, None)
        del cols[n][a]
        for x in rows[n][b]:
            if x in cols[n]:
                cols[n][x].pop(b, None)
        del rows[n][b]
        # the differential into C_n loses row a
        m = n - s
        if m in rows and a in rows[m]:
            for x in rows[m][a]:
                cols[m][x].pop(a, None)
            del rows[m][a]
        # the differential out of C_{n+s} loses column b
        p = n + s
        if p in cols and b in cols[p]:
            for y in cols[p][b]:
                rows[p][y].pop(b, None)
            del cols[p][b]
        # projection rows and inclusion columns
        Fb = F[p].pop(b)
        for y, gv in gamma.items():
            _axpy(F[p][y], -gv * u, Fb)
        del F[n][a]
        Ga = G[n].pop(a)
        for x, bv in beta.items():
            _axpy(G[n][x], -u * bv, Ga)
        del G[p][b]

    def homology(self, n: int) -> Homology:
        if n in self._cache:
            return self._cache[n]
        c, s = self.c, self.c.step
        cells = sorted(self.F.get(n, {}))
        if not cells:
            h = Homology(n, FGAbelianGroup(), IntMatrix.zeros(c.rank(n), 0), lambda v: ())
            self._cache[n] = h
            return h
        pos = {a: i for i, a in enumerate(cells)}
        out_cells = sorted(self.F.get(n + s, {}))
        opos = {b: i for i, b in enumerate(out_cells)}
        d_out = {}
        for a in cells:
            for b, v in self.cols.get(n, {}).get(a, {}).items():
                d_out[opos[b], pos[a]] = v
        d_out = IntMatrix(len(out_cells), len(cells), d_out)
        in_cells = sorted(self.F.get(n - s, {}))
        ipos = {x: i for i, x in enumerate(in_cells)}
        d_in = {}
        for x in in_cells:
            for a, v in self.cols.get(n - s, {}).get(x, {}).items():
                d_in[pos[a], ipos[x]] = v
        d_in = IntMatrix(len(cells), len(in_cells), d_in)
        sq: SubQuotient = subquotient(FGAbelianGroup.free(len(cells)), kernel_basis(d_out), d_in)
        G, F = self.G[n], self.F[n]
        lift_cols = []
        for k in range(sq.group.ngens):
            reduced = sq.lifts.column(k)
            full: dict[int, int] = {}
            for a, coef in zip(cells, reduced):
                if coef:
                    _axpy(full, coef, G[a])
            lift_cols.append(full)
        lifts = IntMatrix.from_columns(lift_cols, c.rank(n))

        def classify(vec: list[int]) -> tuple[int, ...]:
            if len(vec) != c.rank(n):
                raise ValueError("cycle has the wrong length")
            red = [sum(coef * vec[o] for o, coef in F[a].items()) for a in cells]
            return sq.classify(red)

        h = Homology(n, sq.group, lifts, classify)
        self._cache[n] = h
        return h


def _axpy(dst: dict[int, int], k: int, src: Mapping[int, int]):
    for i, v in src.items():
        nv = dst.get(i, 0) + k * v
        if nv:
            dst[i] = nv
        else:
            dst.pop(i, None)


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: IntChainComplex
    target: IntChainComplex
    maps: Mapping[int, IntMatrix]

    def __post_init__(self):
        if self.source.step != self.target.step:
            raise ChainMapError("source and target have opposite directions", 0)
        s = self.source.step
        for n, m in self.maps.items():
            if m.shape != (self.target.rank(n), self.source.rank(n)):
                raise ChainMapError(f"component in degree {n} has shape {m.shape}", n)
        degrees = set(self.source.degrees) | set(self.target.degrees)
        for n in sorted(degrees):
            lhs = self.target.d(n) @ self.f(n)
            rhs = self.f(n + s) @ self.source.d(n)
            if lhs != rhs:
                raise ChainMapError(f"map does not commute with the differential in degree {n}", n)

    def f(self, n: int) -> IntMatrix:
        m = self.maps.get(n)
        if m is None:
            return IntMatrix.zeros(self.target.rank(n), self.source.rank(n))
        return m

    @classmethod
    def identity(cls, c: IntChainComplex) -> "ChainMap":
        return cls(c, c, {n: IntMatrix.identity(c.rank(n)) for n in c.degrees})

    def compose(self, inner: "ChainMap") -> "ChainMap":
        degs = set(inner.source.degrees)
        return ChainMap(inner.source, self.target, {n: self.f(n) @ inner.f(n) for n in degs})


def induced_on_homology(f: ChainMap, n: int) -> GroupHom:
    src = f.source.homology(n)
    tgt = f.target.homology(n)
    fn = f.f(n)
    cols = [tgt.classify(fn.apply(src.lifts.column(k))) for k in range(src.group.ngens)]
    return GroupHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens))


def mapping_cone(f: ChainMap) -> IntChainComplex:
    """``Cone_n = A_{n+step} ⊕ B_n`` with ``d(a, b) = (-d a, f a + d b)``."""
    a, b, s = f.source, f.target, f.source.step
    degs = {n - s for n in a.degrees} | set(b.degrees)
    ranks = {n: a.rank(n + s) + b.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        top = -a.d(n + s)
        ra, rb = a.rank(n + 2 * s), b.rank(n + s)
        m = IntMatrix.block_diag(top, b.d(n))
        # lower-left block: f_{n+s}: A_{n+s} -> B_{n+s}
        data = dict(m.items())
        for (i, j), v in f.f(n + s).items():
            data[ra + i, j] = v
        diffs[n] = IntMatrix(ra + rb, a.rank(n + s) + b.rank(n), data)
    return IntChainComplex(ranks, diffs, s)
