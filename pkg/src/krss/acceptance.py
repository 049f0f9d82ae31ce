"""Acceptance criteria as runnable checks, grouped into suites.

Each criterion returns a :class:`Result` with a one-line detail and, on
failure, a witness (usually a bidegree).  Oracles here are written
independently of the module under test wherever that is possible: the
point's coefficients come from the case formula, RP^n groups from the
alternating-boundary cellular complex.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

from . import bredon
from . import coeffring as cr
from . import krtower as kt
from .exactalg import FGAbelianGroup, IntChainComplex, IntMatrix, homology_at
from .mackey import constant, constant_op, isomorphic

Z = FGAbelianGroup.free(1)
Z2 = FGAbelianGroup.cyclic(2)
ZERO = FGAbelianGroup.zero()


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    witness: object = None
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" witness={self.witness}" if self.witness is not None and not self.passed else ""
        return f"{tag} criterion {self.number}: {self.name}: {self.detail}{extra}"


# ---------------------------------------------------------------------------
# oracles


def closed_form_pt(p: int, q: int) -> FGAbelianGroup:
    """The four-case formula for ``H^{p,q}`` of the point."""
    if (p - q) % 2 == 0 and q >= p > 0:
        return Z2
    if p == 0 and q % 2 == 0:
        return Z
    if (p - q) % 2 == 1 and q + 1 < p <= 0:
        return Z2
    return ZERO


def closed_form_orbit(p: int, q: int) -> FGAbelianGroup:
    """``Z[u, 1/u]`` with ``u`` in degree (0, 1)."""
    return Z if p == 0 else ZERO


def rp_chains(n: int) -> IntChainComplex:
    """Cellular chains of RP^n: one cell per dimension, boundary 0 or 2 alternately."""
    ranks = {k: 1 for k in range(n + 1)}
    diffs = {}
    for k in range(1, n + 1):
        diffs[k] = IntMatrix(1, 1, {(0, 0): 2} if k % 2 == 0 else {})
    return IntChainComplex(ranks, diffs, step=-1)


def rp_cochains(n: int) -> IntChainComplex:
    ranks = {k: 1 for k in range(n + 1)}
    diffs = {}
    for k in range(0, n):
        # transpose of the boundary out of dimension k + 1
        diffs[k] = IntMatrix(1, 1, {(0, 0): 2} if (k + 1) % 2 == 0 else {})
    return IntChainComplex(ranks, diffs, step=1)


def rp_reduced_homology(n: int, k: int) -> FGAbelianGroup:
    if k < 0 or k > n:
        return ZERO
    if k == 0:
        return ZERO  # reduced
    return homology_at(rp_chains(n), k)


def rp_reduced_cohomology(n: int, k: int) -> FGAbelianGroup:
    if k < 0 or k > n:
        return ZERO
    if k == 0:
        return ZERO
    return homology_at(rp_cochains(n), k)


def ko(n: int) -> FGAbelianGroup:
    return (Z, Z2, Z2, ZERO, Z, ZERO, ZERO, ZERO)[(-n) % 8]


def ku(n: int) -> FGAbelianGroup:
    return Z if n % 2 == 0 else ZERO


# ---------------------------------------------------------------------------
# criteria


def criterion_1(r: int = 8) -> Result:
    bad = []
    for q in range(-r, r + 1):
        for p in range(-r, r + 1):
            for site, oracle in (("pt", closed_form_pt), ("orbit", closed_form_orbit)):
                got = bredon.ro_graded(site, p, q)
                if got != oracle(p, q):
                    bad.append((site, p, q, str(got), str(oracle(p, q))))
    n = 2 * (2 * r + 1) ** 2
    return Result(1, "coefficient table", not bad, f"{n - len(bad)}/{n} spots agree",
                  bad[0] if bad else None)


def criterion_2(r: int = 4) -> Result:
    bad = []
    for n in range(-r, r + 1):
        res = bredon.restriction(n)
        k = abs(res.matrix[0, 0]) if res.matrix.rows and res.matrix.cols else 0
        want = 1 if n >= 0 else 2
        if k != want:
            bad.append(((0, 2 * n), f"restriction is x{k}, expected x{want}"))
            continue
        m = bredon.mackey_of_degree(0, 2 * n)
        problems = m.validate()
        if problems:
            bad.append(((0, 2 * n), f"Mackey axiom fails: {problems[0]}"))
            continue
        ref = constant(Z) if n >= 0 else constant_op(Z)
        if not isomorphic(m, ref):
            bad.append(((0, 2 * n), f"not isomorphic to {ref}"))
            continue
        et = cr.mackey_at("etale", 0, 2 * n)
        if et.validate() or not et.res.is_iso():
            bad.append(((0, 2 * n), "etale restriction is not an isomorphism"))
    detail = f"{2 * r + 1 - len(bad)}/{2 * r + 1} degrees (0, 2n) agree, point and etale"
    return Result(2, "Mackey structure per degree", not bad, detail, bad[0] if bad else None)


@lru_cache(maxsize=None)
def _prod(m1, m2):
    return cr.mono_product(m1, m2)


def _times(c, m, m2):
    """``c * m * m2`` as ``(coefficient, monomial)`` or None."""
    if m is None:
        return None
    r = _prod(m, m2)
    if r is None:
        return None
    k = c * r[0]
    if r[1].order:
        k %= r[1].order
    return (k, r[1]) if k else None


def criterion_3(r: int = 10) -> Result:
    bad = []
    checked = 0
    for theory in ("pt", "etale", "orbit"):
        basis = cr.basis_in_window(theory, -r, r, -r, r)
        for a in basis:
            for b in basis:
                ab = _prod(a, b)
                if ab != _prod(b, a):
                    bad.append(("commutativity", theory, str(a), str(b)))
                for c in basis:
                    checked += 1
                    left = _times(ab[0], ab[1], c) if ab else None
                    bc = _prod(b, c)
                    right = _times(bc[0], bc[1], a) if bc else None
                    if left != right:
                        bad.append(("associativity", theory, str(a), str(b), str(c)))
    x, y = cr.x(), cr.y()
    rel = [
        ("2y = 0", (y * 2).is_zero()),
        ("x alpha = 2", x * cr.alpha(1) == cr.RingElement.one("pt") * 2),
    ]
    for n in range(0, 6):
        rel.append((f"x theta_{n + 1} = theta_{n}", x * cr.theta(n + 1) == cr.theta(n)))
    for name, ok in rel:
        if not ok:
            bad.append(("relation", name))
    basis = cr.basis_in_window("pt", -r, r, -r, r)
    elems = [cr.RingElement.mono(m) for m in basis]
    for f in (cr.restrict_to_orbit, cr.compare_to_etale):
        if f(cr.RingElement.one("pt")) != cr.RingElement.one("orbit" if f is cr.restrict_to_orbit else "etale"):
            bad.append(("unit", f.__name__))
        for a in elems:
            fa = f(a)
            for b in elems:
                if f(a * b) != fa * f(b) or f(a + b) != fa + f(b):
                    bad.append(("ring map", f.__name__, str(a), str(b)))
    return Result(3, "ring soundness", not bad, f"{checked} triples, {len(rel)} relations, 2 ring maps",
                  bad[0] if bad else None)


def _column_mismatches(run, reference, nmax=12):
    bad = []
    for n in range(-nmax, nmax + 1):
        if run.certified.get(n) is not None:
            bad.append((n, f"uncertified: {run.certified[n]}"))
        elif not kt.matches(run.columns[n], reference(n)):
            bad.append((n, f"graded {run.columns[n]} does not assemble to {reference(n)}"))
    return bad


def criterion_4(nmax: int = 12) -> Result:
    run = kt.cached_run("pt", kt.Variant(kt.KR), nmax)
    bad = []
    # E_2 against the Bredon groups
    for s, cell in run.e2.cells.items():
        if abs(s.p) <= 8 and abs(s.q // 2) <= 8 and cell.group != bredon.ro_graded("pt", s.p, -s.q // 2):
            bad.append((tuple(s), "E_2 differs from Bredon"))
    if run.closure.unreachable:
        edge = [m for m in run.closure.unreachable]
        bad.append(("closure", f"{len(edge)} generators unreachable from the seeds"))
    bad += _column_mismatches(run, ko, nmax)
    weights = {0: [0], -1: [1], -2: [2], -4: [2], -8: [4]}
    for n, want in weights.items():
        got = run.columns[n].weights
        if got != want:
            bad.append((n, f"weights {got}, expected {want}"))
    return Result(4, "KR sequence of the point", not bad,
                  f"{2 * nmax + 1} columns vs KO, weights at {sorted(weights)}", bad[0] if bad else None)


def criterion_5(nmax: int = 12) -> Result:
    run = kt.cached_run("orbit", kt.Variant(kt.KR), nmax)
    bad = [(tuple(s), "off p = 0") for s in run.e2.cells if s.p != 0]
    bad += [(tuple(s), "nonzero differential") for s, d in run.e3.differentials.items() if not d.is_zero()]
    bad += [(tuple(s), "E_4 differs from E_2") for s in run.e2.cells if run.e4.group(s) != run.e2.group(s)]
    bad += _column_mismatches(run, ku, nmax)
    return Result(5, "orbit collapse", not bad, f"{2 * nmax + 1} columns vs KU", bad[0] if bad else None)


def criterion_6(nmax: int = 12) -> Result:
    et = kt.cached_run("pt", kt.Variant(kt.KR_ET), nmax)
    bad = _column_mismatches(et, ko, nmax)
    comp = kt.etale_comparison(nmax)
    if not comp.e2_commutes:
        bad.append(("d3", comp.witnesses[0]))
    for n in kt.descent_degrees(nmax):
        v = comp.verdicts[n]
        if v not in ("iso", "iso-by-extension"):
            bad.append((n, f"comparison {v}"))
    iso = sum(1 for n in kt.descent_degrees(nmax) if comp.verdicts[n] in ("iso", "iso-by-extension"))
    return Result(6, "etale sequence and descent", not bad,
                  f"KO match on {2 * nmax + 1} columns, comparison iso in {iso}/{len(kt.descent_degrees(nmax))} "
                  "descent degrees", bad[0] if bad else None)


def criterion_7(nmax: int = 12) -> Result:
    bad = []
    count = 0
    for v in (kt.KR, kt.KR_ET):
        run = kt.cached_run("pt", kt.Variant(v), nmax)
        for s, d in run.e3.differentials.items():
            count += 1
            if not d.image().group.is_torsion():
                bad.append((v, tuple(s), "image not torsion"))
        for k in (3, 5):
            for s in kt.adams_compatible(k, kt.Variant(v), nmax):
                bad.append((v, k, tuple(s)))
    return Result(7, "rational collapse and Adams compatibility", not bad,
                  f"{count} differentials torsion, psi^3 and psi^5 commute with d3", bad[0] if bad else None)


def criterion_8(qmax: int = 6, r: int = 8) -> Result:
    bad = []
    for q in range(1, qmax + 1):
        for s in range(-r, r + 1):
            got = bredon.ro_graded("pt", s, -q)
            want = rp_reduced_cohomology(q - 1, s + q - 1)
            if got != want:
                bad.append(((s, -q), str(got), str(want)))
            got = bredon.ro_graded("pt", s, q)
            if s <= q - 1:
                want = rp_reduced_homology(q - 1, q - 1 - s)
            else:
                want = Z2 if s == q else ZERO
            if got != want:
                bad.append(((s, q), str(got), str(want)))
    n = 2 * qmax * (2 * r + 1)
    return Result(8, "RP column oracle", not bad, f"{n - len(bad)}/{n} spots agree", bad[0] if bad else None)


def _page_diff(a, b, keep: Callable = lambda s: True):
    spots = sorted(s for s in set(a.cells) | set(b.cells) if keep(s))
    out = [s for s in spots if a.group(s) != b.group(s)]
    for s in set(a.differentials) | set(b.differentials):
        if keep(s) and a.d(s).matrix != b.d(s).matrix:
            out.append(s)
    return out


def criterion_9(nmax: int = 12) -> Result:
    bad = []
    cells = 0
    for site in ("pt", "orbit"):
        st = kt.cached_run(site, kt.Variant(kt.KR), nmax)
        un = kt.cached_run(site, kt.Variant(kt.KR, "unstable"), nmax)
        for r in (2, 3, 4):
            a, b = un.page(r), st.page(r).restrict(kt.in_unstable_region)
            cells += len(a.cells)
            bad += [(site, r, tuple(s)) for s in _page_diff(a, b)]
    # the etale tower agrees strictly below the fringe p + q = 0
    st = kt.cached_run("pt", kt.Variant(kt.KR_ET), nmax)
    un = kt.cached_run("pt", kt.Variant(kt.KR_ET, "unstable"), nmax)
    below = lambda s: s[0] + s[1] < 0
    for r in (2, 3, 4):
        a, b = un.page(r), st.page(r).restrict(kt.in_unstable_region)
        bad += [("etale", r, tuple(s)) for s in _page_diff(a, b, below)]
    return Result(9, "truncation consistency", not bad, f"{cells} KR cells compared on pages 2-4",
                  bad[0] if bad else None)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}
SUITES = {
    "coeffs": (1, 2, 8),
    "ring": (3,),
    "ss": (4, 5, 7, 9),
    "etale": (6,),
    "all": tuple(range(1, 10)),
}


def run_criterion(n: int) -> Result:
    t = time.perf_counter()
    try:
        res = CRITERIA[n]()
    except Exception as exc:  # a crash is a failure with the exception as witness
        res = Result(n, CRITERIA[n].__name__, False, "raised", f"{type(exc).__name__}: {exc}")
    res.seconds = round(time.perf_counter() - t, 2)
    return res


def run_suite(name: str) -> list[Result]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [run_criterion(n) for n in SUITES[name]]


def report_json(results: list[Result]) -> str:
    rows = []
    for r in results:
        d = asdict(r)
        d["witness"] = None if r.witness is None else str(r.witness)
        rows.append(d)
    return json.dumps({"passed": all(r.passed for r in results), "criteria": rows}, indent=1) + "\n"


__all__ = [
    "CRITERIA", "Result", "SUITES", "closed_form_orbit", "closed_form_pt", "report_json",
    "rp_reduced_cohomology", "rp_reduced_homology", "run_criterion", "run_suite",
]
