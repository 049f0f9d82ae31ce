"""Finitely generated abelian groups, homomorphisms and subquotients.

A group is stored in invariant-factor form ``Z/d_1 + ... + Z/d_k + Z^r``.
Elements are integer vectors over the generators, torsion generators
first; a coordinate on ``Z/d`` is only meaningful modulo ``d``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .matrix import IntMatrix, Lattice, kernel_basis, smith_decomposition


@dataclass(frozen=True)
class FGAbelianGroup:
    torsion: tuple[int, ...] = ()
    free_rank: int = 0
    generator_names: tuple[str, ...] | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        tors = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", tors)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in tors:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be >= 2")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {tors} do not form a divisibility chain")
        if self.generator_names is not None and len(self.generator_names) != self.ngens:
            raise ValueError("one name per generator expected")

    @classmethod
    def zero(cls) -> "FGAbelianGroup":
        return cls()

    @classmethod
    def free(cls, rank: int = 1, names: Sequence[str] | None = None) -> "FGAbelianGroup":
        return cls((), rank, tuple(names) if names else None)

    @classmethod
    def cyclic(cls, order: int, name: str | None = None) -> "FGAbelianGroup":
        """``Z/order``; order 0 means ``Z`` and order 1 the zero group."""
        if order == 1:
            return cls()
        names = (name,) if name else None
        if order == 0:
            return cls((), 1, names)
        return cls((abs(order),), 0, names)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each generator, 0 standing for infinite order."""
        return self.torsion + (0,) * self.free_rank

    def is_zero(self) -> bool:
        return self.ngens == 0

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        """Number of elements; 0 for infinite groups."""
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def named(self, *names: str) -> "FGAbelianGroup":
        return FGAbelianGroup(self.torsion, self.free_rank, tuple(names))

    def reduce(self, vec: Iterable[int]) -> tuple[int, ...]:
        vec = list(vec)
        if len(vec) != self.ngens:
            raise ValueError("element has the wrong length")
        return tuple(x % d if d else x for x, d in zip(vec, self.orders))

    def is_zero_element(self, vec: Iterable[int]) -> bool:
        return not any(self.reduce(vec))

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix.diag(self.torsion, self.ngens, len(self.torsion))

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "FGAbelianGroup":
        """Inverse of ``str``: accepts ``0``, ``Z``, ``Z/2``, ``Z ⊕ Z/2`` ..."""
        text = text.strip()
        if text == "0":
            return cls()
        free, tors = 0, []
        for part in text.replace("+", "⊕").split("⊕"):
            part = part.strip()
            if part == "Z":
                free += 1
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group summand {part!r}")
        return canonical_group(tors, free)

    def __add__(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        return canonical_group(self.torsion + other.torsion, self.free_rank + other.free_rank)


def canonical_group(orders: Iterable[int], free_rank: int = 0) -> FGAbelianGroup:
    """Direct sum of cyclic groups ``Z/d`` (``d == 0`` meaning ``Z``) in canonical form."""
    orders = list(orders)
    free = free_rank + sum(1 for d in orders if d == 0)
    tors = [abs(d) for d in orders if d not in (0, 1, -1)]
    rel = IntMatrix.diag(tors)
    g = presentation(rel).group
    return FGAbelianGroup(g.torsion, g.free_rank + free)


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    """Cokernel of ``relations: Z^cols -> Z^rows`` with explicit coordinates.

    ``project`` sends a vector of Z^rows to group coordinates and
    ``lifts`` (rows x ngens) holds a representative of each generator.
    """

    group: FGAbelianGroup
    project_matrix: IntMatrix
    lifts: IntMatrix

    def project(self, vec: Iterable[int]) -> tuple[int, ...]:
        return self.group.reduce(self.project_matrix.apply(vec))


def presentation(relations: IntMatrix) -> Presentation:
    f = smith_decomposition(relations)
    n = relations.rows
    keep_tors, keep_free = [], []
    for k in range(n):
        d = f.diagonal[k] if k < f.rank else 0
        if d == 1:
            continue
        (keep_free if d == 0 else keep_tors).append((k, d))
    keep = keep_tors + keep_free
    group = FGAbelianGroup(tuple(d for _, d in keep_tors), len(keep_free))
    proj = f.u.submatrix([k for k, _ in keep], range(n))
    lifts = f.uinv.submatrix(range(n), [k for k, _ in keep])
    return Presentation(group, proj, lifts)


def group_from_presentation(relations: IntMatrix) -> FGAbelianGroup:
    """Cokernel of the relation matrix (columns are relations, rows generators)."""
    return presentation(relations).group


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """Homomorphism between canonical groups, as a matrix on their generators."""

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: FGAbelianGroup, codomain: FGAbelianGroup, matrix: IntMatrix):
        if matrix.shape != (codomain.ngens, domain.ngens):
            raise ValueError(
                f"matrix shape {matrix.shape} does not fit {domain} -> {codomain}"
            )
        orders = codomain.orders
        data = {}
        for (i, j), v in matrix.items():
            if orders[i]:
                v %= orders[i]
            if v:
                data[i, j] = v
        for j, d in enumerate(domain.orders):
            if d and any((d * data.get((i, j), 0)) % e if e else d * data.get((i, j), 0)
                         for i, e in enumerate(orders)):
                raise ValueError(f"generator {j} of order {d} has an image of larger order")
        self.domain = domain
        self.codomain = codomain
        self.matrix = IntMatrix(matrix.rows, matrix.cols, data)

    @classmethod
    def from_rows(cls, domain, codomain, rows) -> "GroupHom":
        return cls(domain, codomain, IntMatrix.from_rows(rows, domain.ngens))

    @classmethod
    def identity(cls, g: FGAbelianGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, a: FGAbelianGroup, b: FGAbelianGroup) -> "GroupHom":
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens))

    @classmethod
    def scalar(cls, g: FGAbelianGroup, c: int) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens).scale(c))

    def __call__(self, vec: Iterable[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(vec))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise ValueError("cannot compose: codomain/domain mismatch")
        return GroupHom(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __matmul__(self, inner: "GroupHom") -> "GroupHom":
        return self.compose(inner)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("cannot add homomorphisms with different (co)domains")
        return GroupHom(self.domain, self.codomain, self.matrix + other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, -self.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)

    def scale(self, c: int) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, self.matrix.scale(c))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.domain, self.codomain, self.matrix) == (other.domain, other.codomain, other.matrix)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.matrix))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def kernel(self) -> "SubQuotient":
        return homology_of_groups(GroupHom.zero(FGAbelianGroup(), self.domain), self)

    def image(self) -> "SubQuotient":
        """The image, as a subgroup of the codomain."""
        gens = self.matrix
        return subquotient(self.codomain, gens, IntMatrix.zeros(self.codomain.ngens, 0))

    def cokernel(self) -> "SubQuotient":
        return homology_of_groups(self, GroupHom.zero(self.codomain, FGAbelianGroup()))

    def is_injective(self) -> bool:
        return self.kernel().group.is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().group.is_zero()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self):
        return f"GroupHom({self.domain} -> {self.codomain}, {self.matrix!r})"


# ---------------------------------------------------------------------------
# subquotients


class SubQuotient:
    """``L / M`` for lattices ``M ⊆ L`` inside the generator space of an ambient group.

    ``lifts`` holds a representative (ambient coordinates) per generator and
    :meth:`classify` expresses an element of ``L`` in group coordinates.
    """

    def __init__(self, ambient_rank: int, num: Lattice | None, pres: Presentation):
        self.ambient_rank = ambient_rank
        self._num = num
        self._pres = pres
        self.group = pres.group
        if num is None:
            self.lifts = IntMatrix.zeros(ambient_rank, 0)
        else:
            self.lifts = num.basis @ pres.lifts

    def classify(self, vec: Iterable[int]) -> tuple[int, ...]:
        if self._num is None:
            return ()
        return self._pres.project(self._num.coords(vec))

    def lift(self, coords: Iterable[int]) -> list[int]:
        return self.lifts.apply(coords)


def subquotient(ambient: FGAbelianGroup, num_gens: IntMatrix, den_gens: IntMatrix) -> SubQuotient:
    """Subgroup generated by ``num_gens`` modulo ``den_gens`` and the ambient relations.

    Both arguments are matrices whose columns are vectors of ambient coordinates.
    """
    n = ambient.ngens
    rel = ambient.relation_matrix()
    num_all = num_gens.hstack(rel) if rel.cols else num_gens
    if num_all.cols == 0 or num_all.is_zero():
        return SubQuotient(n, None, Presentation(FGAbelianGroup(), IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0)))
    num = Lattice.spanned_by(num_all)
    den_all = den_gens.hstack(rel) if rel.cols else den_gens
    cols = [num.coords(den_all.column(j)) for j in range(den_all.cols)]
    den_in_num = IntMatrix.from_columns(cols, num.dim)
    return SubQuotient(n, num, presentation(den_in_num))


def kernel_lattice_of(hom: GroupHom) -> IntMatrix:
    """Generators (columns) of the preimage of 0, in domain coordinates."""
    m = hom.matrix
    rel = hom.codomain.relation_matrix()
    big = m.hstack(rel) if rel.cols else m
    k = kernel_basis(big)
    return k.submatrix(range(hom.domain.ngens), range(k.cols))


def homology_of_groups(incoming: GroupHom, outgoing: GroupHom) -> SubQuotient:
    """``ker(outgoing) / im(incoming)`` at the middle group."""
    if incoming.codomain != outgoing.domain:
        raise ValueError("maps are not composable")
    mid = outgoing.domain
    for j in range(incoming.domain.ngens):
        img = incoming.matrix.column(j)
        if not outgoing.codomain.is_zero_element(outgoing.matrix.apply(img)):
            raise ValueError("composite of the two maps is not zero")
    return subquotient(mid, kernel_lattice_of(outgoing), incoming.matrix)


# ---------------------------------------------------------------------------
# extensions


def possible_extensions(sub: FGAbelianGroup, quotient: FGAbelianGroup) -> set[FGAbelianGroup]:
    """All groups ``E`` fitting in ``0 -> sub -> E -> quotient -> 0``.

    Every extension is presented by the generators of ``sub`` plus one
    generator ``g_i`` per cyclic summand ``Z/m_i`` of the quotient, with
    ``m_i g_i`` equal to some element of ``sub``; only the class of that
    element modulo ``m_i sub`` matters, which makes the search finite.
    """
    s = sub.ngens
    choices = []
    for m in quotient.torsion:
        # representatives of sub / m sub
        ranges = [range(m) if d == 0 else range(math.gcd(d, m)) for d in sub.orders]
        choices.append(list(itertools.product(*ranges)))
    results = set()
    for pick in itertools.product(*choices):
        q = len(quotient.torsion)
        nrows = s + q + quotient.free_rank
        cols = []
        for j, d in enumerate(sub.orders):
            if d:
                col = [0] * nrows
                col[j] = d
                cols.append(col)
        for i, (m, elt) in enumerate(zip(quotient.torsion, pick)):
            col = [0] * nrows
            col[s + i] = m
            for j, x in enumerate(elt):
                col[j] -= x
            cols.append(col)
        results.add(group_from_presentation(IntMatrix.from_columns(cols, nrows)))
    return results


def assembles_to(pieces: Sequence[FGAbelianGroup], target: FGAbelianGroup) -> bool:
    """Whether a filtration with successive quotients ``pieces`` can have total group ``target``.

    ``pieces`` runs from the deepest filtration stage (the subgroup) outwards.
    """
    current = {FGAbelianGroup()}
    for piece in pieces:
        nxt = set()
        for sub in current:
            nxt |= possible_extensions(sub, piece)
        current = nxt
    return target in current
