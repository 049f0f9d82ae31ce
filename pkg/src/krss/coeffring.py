"""Closed-form coefficient rings.

Three theories are modelled, each with a canonical basis monomial in
every nonzero bidegree (p = dimension, q = weight):

``pt``     H^{*,*}(pt; Z-bar): x^a y^b at (b, 2a+b), alpha_a = 2/x^a at
           (0, -2a), and theta/(x^a y^b) at (-b, -3-2a-b).
``orbit``  H^{*,*}(Z/2; Z-bar) = Z[u, 1/u] with u at (0, 1).
``etale``  Z[x, 1/x, y]/(2y), the Borel (homotopy fixed point) analog.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .exactalg import FGAbelianGroup
from .mackey import MackeyZ2, constant, constant_op

THEORIES = ("pt", "orbit", "etale")


@dataclass(frozen=True, order=True)
class Bidegree:
    p: int
    q: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p + other.p, self.q + other.q)

    def __iter__(self):
        return iter((self.p, self.q))


# -- basis monomials ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class PosMono:
    """x^a y^b."""

    a: int
    b: int
    theory = "pt"

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("exponents must be nonnegative")

    @property
    def degree(self) -> Bidegree:
        return Bidegree(self.b, 2 * self.a + self.b)

    @property
    def order(self) -> int:
        return 2 if self.b else 0

    def __str__(self):
        return _xy(self.a, self.b)


@dataclass(frozen=True, order=True)
class NegFree:
    """alpha_a = 2/x^a."""

    a: int
    theory = "pt"

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("alpha_a needs a >= 1")

    @property
    def degree(self) -> Bidegree:
        return Bidegree(0, -2 * self.a)

    order = 0

    def __str__(self):
        return "α" if self.a == 1 else f"α{self.a}"


@dataclass(frozen=True, order=True)
class NegTor:
    """theta / (x^a y^b)."""

    a: int
    b: int
    theory = "pt"

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("exponents must be nonnegative")

    @property
    def degree(self) -> Bidegree:
        return Bidegree(-self.b, -3 - 2 * self.a - self.b)

    order = 2

    def __str__(self):
        den = _xy(self.a, self.b)
        return "θ" if den == "1" else f"θ/{den}"


@dataclass(frozen=True, order=True)
class EtaleMono:
    """x^a y^b with a of either sign."""

    a: int
    b: int
    theory = "etale"

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("y exponent must be nonnegative")

    @property
    def degree(self) -> Bidegree:
        return Bidegree(self.b, 2 * self.a + self.b)

    @property
    def order(self) -> int:
        return 2 if self.b else 0

    def __str__(self):
        return _xy(self.a, self.b)


@dataclass(frozen=True, order=True)
class OrbitMono:
    """u^n."""

    n: int
    theory = "orbit"

    @property
    def degree(self) -> Bidegree:
        return Bidegree(0, self.n)

    order = 0

    def __str__(self):
        return _pow("u", self.n) or "1"


def _pow(v, k):
    if k == 0:
        return ""
    return v if k == 1 else f"{v}^{k}"


def _xy(a, b):
    return (_pow("x", a) + _pow("y", b)) or "1"


# -- basis per bidegree -----------------------------------------------------


def generator_at(theory: str, p: int, q: int):
    """The basis monomial spanning the group in bidegree (p, q), or None."""
    if theory == "pt":
        if p > 0 and q >= p and (q - p) % 2 == 0:
            return PosMono((q - p) // 2, p)
        if p == 0 and q % 2 == 0:
            return PosMono(q // 2, 0) if q >= 0 else NegFree(-q // 2)
        if p <= 0 and (p - q) % 2 == 1 and q + 1 < p:
            return NegTor((p - q - 3) // 2, -p)
        return None
    if theory == "etale":
        if p >= 0 and (q - p) % 2 == 0:
            return EtaleMono((q - p) // 2, p)
        return None
    if theory == "orbit":
        return OrbitMono(q) if p == 0 else None
    raise ValueError(f"unknown theory {theory!r}; choose from {THEORIES}")


def group_at(theory: str, p: int, q: int) -> FGAbelianGroup:
    """``Z``, ``Z/2`` or ``0`` in bidegree (p, q), with the generator named."""
    g = generator_at(theory, p, q)
    if g is None:
        return FGAbelianGroup.zero()
    return FGAbelianGroup.cyclic(g.order).named(str(g))


def basis_in_window(theory: str, pmin: int, pmax: int, qmin: int, qmax: int) -> list:
    out = []
    for q in range(qmin, qmax + 1):
        for p in range(pmin, pmax + 1):
            g = generator_at(theory, p, q)
            if g is not None:
                out.append(g)
    return out


# -- products -----------------------------------------------------------------


def _pt_product(m1, m2):
    """``(coefficient, monomial)`` for a product of pt basis monomials, or None for 0."""
    if isinstance(m2, PosMono) and not isinstance(m1, PosMono):
        m1, m2 = m2, m1
    if isinstance(m1, NegTor) and isinstance(m2, NegFree):
        m1, m2 = m2, m1
    if isinstance(m1, PosMono):
        a, b = m1.a, m1.b
        if isinstance(m2, PosMono):
            return 1, PosMono(a + m2.a, b + m2.b)
        if isinstance(m2, NegFree):
            # x^a alpha_c; any y kills it (degree bookkeeping)
            if b:
                return None
            c = m2.a
            return (1, NegFree(c - a)) if c > a else (2, PosMono(a - c, 0))
        if isinstance(m2, NegTor):
            if a <= m2.a and b <= m2.b:
                return 1, NegTor(m2.a - a, m2.b - b)
            return None
    if isinstance(m1, NegFree) and isinstance(m2, NegFree):
        # derived: x-multiplication is injective on H^{0,-2k}
        return 2, NegFree(m1.a + m2.a)
    # derived: alpha*theta and theta*theta land in zero or torsion-free groups
    return None


def mono_product(m1, m2):
    t1, t2 = m1.theory, m2.theory
    if t1 != t2:
        raise ValueError(f"cannot multiply {t1} and {t2} classes")
    if t1 == "pt":
        r = _pt_product(m1, m2)
    elif t1 == "etale":
        r = 1, EtaleMono(m1.a + m2.a, m1.b + m2.b)
    else:
        r = 1, OrbitMono(m1.n + m2.n)
    if r is None:
        return None
    c, m = r
    if m.order:
        c %= m.order
    return (c, m) if c else None


class RingElement:
    """Finite combination of basis monomials of one theory."""

    __slots__ = ("theory", "terms")

    def __init__(self, theory: str, terms: Mapping | Iterable = ()):
        if theory not in THEORIES:
            raise ValueError(f"unknown theory {theory!r}")
        self.theory = theory
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            if m.theory != theory:
                raise ValueError(f"{m} is not a {theory} monomial")
            acc[m] = acc.get(m, 0) + c
        clean = {}
        for m, c in acc.items():
            if m.order:
                c %= m.order
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def mono(cls, m, c: int = 1) -> "RingElement":
        return cls(m.theory, {m: c})

    @classmethod
    def one(cls, theory: str) -> "RingElement":
        return cls.mono(generator_at(theory, 0, 0))

    @classmethod
    def zero(cls, theory: str) -> "RingElement":
        return cls(theory)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[Bidegree]:
        return {m.degree for m in self.terms}

    def _same(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.theory != self.theory:
            raise ValueError(f"mixed theories {self.theory} and {other.theory}")
        return other

    def __add__(self, other):
        other = self._same(other)
        merged = list(self.terms.items()) + list(other.terms.items())
        return RingElement(self.theory, merged)

    def __neg__(self):
        return RingElement(self.theory, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.theory, {m: c * other for m, c in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.theory == other.theory and self.terms == other.terms

    def __hash__(self):
        return hash((self.theory, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (m.degree, str(m))):
            c = self.terms[m]
            parts.append(str(m) if c == 1 else f"{c}{m}" if str(m) != "1" else str(c))
        return " + ".join(parts)

    __repr__ = __str__


def multiply(e1: RingElement, e2: RingElement) -> RingElement:
    if e1.theory != e2.theory:
        raise ValueError(f"mixed theories {e1.theory} and {e2.theory}")
    acc = []
    for m1, c1 in e1.terms.items():
        for m2, c2 in e2.terms.items():
            r = mono_product(m1, m2)
            if r is not None:
                acc.append((r[1], r[0] * c1 * c2))
    return RingElement(e1.theory, acc)


# -- named classes ------------------------------------------------------------


def x(theory: str = "pt") -> RingElement:
    return RingElement.mono(PosMono(1, 0) if theory == "pt" else EtaleMono(1, 0))


def y(theory: str = "pt") -> RingElement:
    return RingElement.mono(PosMono(0, 1) if theory == "pt" else EtaleMono(0, 1))


def alpha(a: int = 1) -> RingElement:
    return RingElement.mono(NegFree(a))


def theta(a: int = 0, b: int = 0) -> RingElement:
    return RingElement.mono(NegTor(a, b))


def u(n: int = 1) -> RingElement:
    return RingElement.mono(OrbitMono(n))


# -- maps out of the pt ring --------------------------------------------------


def _linear(e: RingElement, theory: str, rule) -> RingElement:
    acc = []
    for m, c in e.terms.items():
        r = rule(m)
        if r is not None:
            acc.append((r[1], r[0] * c))
    return RingElement(theory, acc)


def _require_pt(e: RingElement):
    if e.theory != "pt":
        raise ValueError("expected a class of the point")


def restrict_to_orbit(e: RingElement) -> RingElement:
    """Ring map ``H(pt) -> H(Z/2)``; normalized by ``x -> u^2``."""
    _require_pt(e)

    def rule(m):
        if isinstance(m, PosMono):
            return None if m.b else (1, OrbitMono(2 * m.a))
        if isinstance(m, NegFree):
            return 2, OrbitMono(-2 * m.a)
        return None

    return _linear(e, "orbit", rule)


def compare_to_etale(e: RingElement) -> RingElement:
    """Ring map into ``Z[x, 1/x, y]/(2y)``."""
    _require_pt(e)

    def rule(m):
        if isinstance(m, PosMono):
            return 1, EtaleMono(m.a, m.b)
        if isinstance(m, NegFree):
            return 2, EtaleMono(-m.a, 0)
        return None

    return _linear(e, "etale", rule)


# -- Mackey structure ---------------------------------------------------------


def mackey_at(theory: str, p: int, q: int) -> MackeyZ2:
    """Mackey functor in degree (0, 2n) for ``pt`` (paired with the orbit) or ``etale``."""
    if p != 0 or q % 2:
        raise ValueError(f"Mackey structure is only specified in degrees (0, 2n), not ({p},{q})")
    z = FGAbelianGroup.free(1)
    if theory in ("pt", "pt-pair"):
        return constant(z) if q >= 0 else constant_op(z)
    if theory in ("etale", "etale-pair"):
        return constant(z)
    raise ValueError(f"unknown theory {theory!r} for Mackey structure")


# -- cross-checks -------------------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    site: str
    p: int
    q: int
    closed: str
    computed: str


def verify_against_bredon(pmin: int, pmax: int, qmin: int, qmax: int,
                          sites: Iterable[str] = ("pt", "orbit")) -> list[Mismatch]:
    """Compare the closed forms with Bredon computations on a window."""
    from .bredon import ro_graded

    out = []
    for site in sites:
        for q in range(qmin, qmax + 1):
            for p in range(pmin, pmax + 1):
                want = group_at(site, p, q)
                got = ro_graded(site, p, q)
                if want != got:
                    out.append(Mismatch(site, p, q, str(want), str(got)))
    return out


def fixed_point_homotopy(n: int, theory: str = "pt") -> dict[int, FGAbelianGroup]:
    """Nonzero ``pi_k`` of the fixed set (``pt``) or homotopy fixed set (``etale``) of K(Z(n), 2n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = {}
    for k in range(0, 2 * n + 1):
        g = group_at(theory, 2 * n - k, n)
        if not g.is_zero():
            out[k] = g
    return out
