"""Sparse immutable integer matrices and the Smith normal form."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class IntMatrix:
    """A rows x cols matrix of Python integers, stored sparsely.

    Instances are treated as immutable; every operation returns a new
    matrix.  Zero entries are never stored.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        clean = {}
        if data:
            for (i, j), v in data.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
                v = int(v)
                if v:
                    clean[i, j] = v
        self._data = clean
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        data = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                if v:
                    data[i, j] = v
        return cls(len(rows), ncols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diag(cls, entries: Iterable[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        entries = list(entries)
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        return cls(rows, cols, {(i, i): v for i, v in enumerate(entries)})

    @classmethod
    def from_columns(cls, columns: Iterable[Mapping[int, int] | Iterable[int]], rows: int) -> "IntMatrix":
        data = {}
        j = -1
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, Mapping) else enumerate(col)
            for i, v in items:
                if v:
                    data[i, j] = v
        return cls(rows, j + 1, data)

    # access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data.get((i, j), 0)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(sorted(self._data.items()))

    def nnz(self) -> int:
        return len(self._data)

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._data.items():
            out[i][j] = v
        return out

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in self.to_rows())

    def column(self, j: int) -> list[int]:
        return [self._data.get((i, j), 0) for i in range(self.rows)]

    def row(self, i: int) -> list[int]:
        return [self._data.get((i, j), 0) for j in range(self.cols)]

    def column_dicts(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.cols)]
        for (i, j), v in self._data.items():
            cols[j][i] = v
        return cols

    def is_zero(self) -> bool:
        return not self._data

    # algebra ----------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other._data.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], int] = {}
        for (i, k), a in self._data.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, vec: Iterable[int]) -> list[int]:
        vec = list(vec)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [0] * self.rows
        for (i, j), v in self._data.items():
            out[i] += v * vec[j]
        return out

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self._data)
        for k, v in other._data.items():
            out[k] = out.get(k, 0) + v
        return IntMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {k: -v for k, v in self._data.items()})

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {k: c * v for k, v in self._data.items()})

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._data.items()})

    T = property(transpose)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntMatrix":
        rows, cols = list(rows), list(cols)
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        out = {}
        for (i, j), v in self._data.items():
            if i in rpos and j in cpos:
                out[rpos[i], cpos[j]] = v
        return IntMatrix(len(rows), len(cols), out)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        out = dict(self._data)
        for (i, j), v in other._data.items():
            out[i, j + self.cols] = v
        return IntMatrix(self.rows, self.cols + other.cols, out)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        out = dict(self._data)
        for (i, j), v in other._data.items():
            out[i + self.rows, j] = v
        return IntMatrix(self.rows + other.rows, self.cols, out)

    @staticmethod
    def block_diag(*blocks: "IntMatrix") -> "IntMatrix":
        out = {}
        r0 = c0 = 0
        for b in blocks:
            for (i, j), v in b._data.items():
                out[i + r0, j + c0] = v
            r0 += b.rows
            c0 += b.cols
        return IntMatrix(r0, c0, out)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    # dunder -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, frozenset(self._data.items())))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self._data)})"


# ---------------------------------------------------------------------------
# Smith normal form


class _SNF:
    """Dense Smith reduction tracking both transforms and their inverses."""

    def __init__(self, m: IntMatrix):
        self.r, self.c = m.rows, m.cols
        self.a = m.to_rows()
        self.u = _eye(self.r)
        self.uinv = _eye(self.r)
        self.v = _eye(self.c)
        self.vinv = _eye(self.c)

    # elementary operations; each keeps u @ m @ v == a and the inverses in step

    def swap_rows(self, i, j):
        if i == j:
            return
        a, u, ui = self.a, self.u, self.uinv
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for row in ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.v:
            row[i], row[j] = row[j], row[i]
        vi = self.vinv
        vi[i], vi[j] = vi[j], vi[i]

    def add_row(self, dst, src, q):
        # row_dst += q * row_src
        if not q:
            return
        for mat in (self.a, self.u):
            rd, rs = mat[dst], mat[src]
            for k, x in enumerate(rs):
                if x:
                    rd[k] += q * x
        for row in self.uinv:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(self, dst, src, q):
        # col_dst += q * col_src
        if not q:
            return
        for mat in (self.a, self.v):
            for row in mat:
                if row[src]:
                    row[dst] += q * row[src]
        vd, vs = self.vinv[dst], self.vinv[src]
        for k, x in enumerate(vd):
            if x:
                vs[k] -= q * x

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.u[i] = [-x for x in self.u[i]]
        for row in self.uinv:
            row[i] = -row[i]

    def run(self):
        a = self.a
        r, c = self.r, self.c
        t = 0
        while t < min(r, c):
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            self.swap_rows(t, i)
            self.swap_cols(t, j)
            while True:
                p = a[t][t]
                dirty = False
                for i in range(t + 1, r):
                    if a[i][t]:
                        self.add_row(i, t, -(a[i][t] // p))
                        if a[i][t]:
                            dirty = True
                for j in range(t + 1, c):
                    if a[t][j]:
                        self.add_col(j, t, -(a[t][j] // p))
                        if a[t][j]:
                            dirty = True
                if dirty:
                    # a smaller remainder exists in row/column t; move it to the pivot
                    best = (abs(p), t, t)
                    for i in range(t + 1, r):
                        if a[i][t] and abs(a[i][t]) < best[0]:
                            best = (abs(a[i][t]), i, t)
                    for j in range(t + 1, c):
                        if a[t][j] and abs(a[t][j]) < best[0]:
                            best = (abs(a[t][j]), t, j)
                    self.swap_rows(t, best[1])
                    self.swap_cols(t, best[2])
                    continue
                bad = None
                for i in range(t + 1, r):
                    for j in range(t + 1, c):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if a[t][t] < 0:
                self.negate_row(t)
            t += 1
        self.rank = t
        return self


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


class SmithForm:
    """Result of :func:`smith_decomposition`: ``u @ m @ v == s``."""

    __slots__ = ("u", "s", "v", "uinv", "vinv", "rank", "diagonal")

    def __init__(self, u, s, v, uinv, vinv, rank):
        self.u, self.s, self.v = u, s, v
        self.uinv, self.vinv = uinv, vinv
        self.rank = rank
        self.diagonal = tuple(s[i, i] for i in range(rank))


def smith_decomposition(m: IntMatrix) -> SmithForm:
    red = _SNF(m).run()
    return SmithForm(
        IntMatrix.from_rows(red.u, m.rows),
        IntMatrix.from_rows(red.a, m.cols),
        IntMatrix.from_rows(red.v, m.cols),
        IntMatrix.from_rows(red.uinv, m.rows),
        IntMatrix.from_rows(red.vinv, m.cols),
        red.rank,
    )


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular ``U``, ``V`` and diagonal ``S`` with ``U @ m @ V == S``.

    The diagonal of ``S`` is non-negative and forms a divisibility chain.
    The output depends only on ``m``.
    """
    f = smith_decomposition(m)
    return f.u, f.s, f.v


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel of ``m`` (a saturated lattice)."""
    f = smith_decomposition(m)
    return f.v.submatrix(range(m.cols), range(f.rank, m.cols))


class Lattice:
    """A sublattice of Z^n given by a basis (the columns of ``basis``)."""

    def __init__(self, basis: IntMatrix):
        self.basis = basis
        self._f = smith_decomposition(basis)
        if self._f.rank != basis.cols:
            raise ValueError("lattice generators are not independent")

    @classmethod
    def spanned_by(cls, gens: IntMatrix) -> "Lattice":
        """Lattice spanned by arbitrary (possibly dependent) generator columns."""
        f = smith_decomposition(gens)
        cols = []
        for k in range(f.rank):
            d = f.diagonal[k]
            cols.append([d * f.uinv[i, k] for i in range(gens.rows)])
        return cls(IntMatrix.from_columns(cols, gens.rows))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def coords(self, z: Iterable[int]) -> list[int]:
        """Coordinates of ``z`` in the basis; raises ValueError if ``z`` is outside."""
        f = self._f
        uz = f.u.apply(z)
        y = []
        for k, d in enumerate(f.diagonal):
            q, rem = divmod(uz[k], d)
            if rem:
                raise ValueError("vector is not in the lattice")
            y.append(q)
        if any(uz[f.rank:]):
            raise ValueError("vector is not in the lattice")
        return f.v.apply(y)

    def contains(self, z: Iterable[int]) -> bool:
        try:
            self.coords(z)
        except ValueError:
            return False
        return True
