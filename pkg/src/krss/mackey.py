"""Mackey functors for the group Z/2.

A Z/2 Mackey functor is stored as the value ``m_free`` at the free orbit,
the value ``m_fixed`` at the point orbit, the involution ``t_star`` on
``m_free``, restriction ``res: m_fixed -> m_free`` and transfer
``tr: m_free -> m_fixed``.  The covariant involution is the same map as
the contravariant one, so only one is stored.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .exactalg import FGAbelianGroup, GroupHom, IntMatrix


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.axiom}: fails on generator {self.witness} ({self.detail})"


@dataclass(frozen=True)
class MackeyZ2:
    m_free: FGAbelianGroup
    m_fixed: FGAbelianGroup
    t_star: GroupHom
    res: GroupHom
    tr: GroupHom
    name: str = ""

    def __post_init__(self):
        checks = [
            (self.t_star, self.m_free, self.m_free, "t_star"),
            (self.res, self.m_fixed, self.m_free, "res"),
            (self.tr, self.m_free, self.m_fixed, "tr"),
        ]
        for hom, dom, cod, label in checks:
            if hom.domain != dom or hom.codomain != cod:
                raise ValueError(f"{label} has the wrong domain or codomain")

    def validate(self) -> list[Violation]:
        return validate(self)

    def is_valid(self) -> bool:
        return not validate(self)

    def is_cohomological(self) -> bool:
        """``tr ∘ res`` is multiplication by 2 on the fixed value."""
        return self.tr @ self.res == GroupHom.scalar(self.m_fixed, 2)

    def is_free(self) -> bool:
        return not self.m_free.torsion and not self.m_fixed.torsion

    def __str__(self):
        return self.name or f"Mackey({self.m_free} <-> {self.m_fixed})"


def _first_failure(lhs: GroupHom, rhs: GroupHom):
    diff = lhs - rhs
    for j in range(lhs.domain.ngens):
        col = diff.matrix.column(j)
        if not lhs.codomain.is_zero_element(col):
            w = [0] * lhs.domain.ngens
            w[j] = 1
            return tuple(w), lhs.matrix.column(j), rhs.matrix.column(j)
    return None


def validate(m: MackeyZ2) -> list[Violation]:
    """Check the four Z/2 Mackey identities, returning every failure with a witness."""
    free, fixed = m.m_free, m.m_fixed
    idf = GroupHom.identity(free)
    identities = [
        ("involution t_star∘t_star = id", m.t_star @ m.t_star, idf),
        ("restriction t_star∘res = res", m.t_star @ m.res, m.res),
        ("transfer tr∘t_star = tr", m.tr @ m.t_star, m.tr),
        ("double coset res∘tr = id + t_star", m.res @ m.tr, idf + m.t_star),
    ]
    out = []
    for label, lhs, rhs in identities:
        bad = _first_failure(lhs, rhs)
        if bad is not None:
            w, got, want = bad
            out.append(Violation(label, w, f"got {got}, expected {want}"))
    return out


def constant(a: FGAbelianGroup) -> MackeyZ2:
    """Constant Mackey functor: restriction is the identity, transfer is multiplication by 2."""
    n = a.ngens
    return MackeyZ2(
        a, a,
        GroupHom.identity(a),
        GroupHom.identity(a),
        GroupHom(a, a, IntMatrix.identity(n).scale(2)),
        name="Z" if a == FGAbelianGroup.free(1) else f"const({a})",
    )


def constant_op(a: FGAbelianGroup) -> MackeyZ2:
    """The dual of :func:`constant`: restriction is 2, transfer the identity."""
    n = a.ngens
    return MackeyZ2(
        a, a,
        GroupHom.identity(a),
        GroupHom(a, a, IntMatrix.identity(n).scale(2)),
        GroupHom.identity(a),
        name="Zop" if a == FGAbelianGroup.free(1) else f"const_op({a})",
    )


def burnside() -> MackeyZ2:
    """Burnside ring functor: ``res(a, b) = a + 2b`` and ``tr(a) = (0, a)``."""
    z = FGAbelianGroup.free(1)
    z2 = FGAbelianGroup.free(2)
    return MackeyZ2(
        z, z2,
        GroupHom.identity(z),
        GroupHom.from_rows(z2, z, [[1, 2]]),
        GroupHom.from_rows(z, z2, [[0], [1]]),
        name="A",
    )


SELECTORS = {
    "Z": lambda: constant(FGAbelianGroup.free(1)),
    "Zop": lambda: constant_op(FGAbelianGroup.free(1)),
    "A": burnside,
}


def by_name(name: str) -> MackeyZ2:
    try:
        return SELECTORS[name]()
    except KeyError:
        raise ValueError(f"unknown Mackey functor {name!r}; choose from {sorted(SELECTORS)}") from None


def _automorphisms(g: FGAbelianGroup):
    """Automorphisms of a group with at most one generator."""
    if g.ngens == 0:
        return [GroupHom.identity(g)]
    if g.ngens > 1:
        raise NotImplementedError("isomorphism testing needs cyclic values")
    (d,) = g.orders
    units = [1, -1] if d == 0 else [u for u in range(1, d) if math.gcd(u, d) == 1]
    return [GroupHom.scalar(g, u) for u in units]


def isomorphic(a: MackeyZ2, b: MackeyZ2) -> bool:
    """Isomorphism test for Mackey functors whose two values are cyclic."""
    if a.m_free != b.m_free or a.m_fixed != b.m_fixed:
        return False
    for phi_free, phi_fixed in itertools.product(_automorphisms(a.m_free), _automorphisms(a.m_fixed)):
        if (phi_free @ a.t_star == b.t_star @ phi_free
                and phi_free @ a.res == b.res @ phi_fixed
                and phi_fixed @ a.tr == b.tr @ phi_free):
            return True
    return False
