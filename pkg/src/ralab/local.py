"""Diagnostics for local algebras presented at the origin.

Rings are ``Q[X]/L`` with ``L`` inside the maximal ideal ``m = (X)``; the
statements computed here (dimension, annihilators, socle, regularity) are
the ones that survive localization at ``m`` for such graded models.
"""

from __future__ import annotations

from dataclasses import dataclass

from ralab.ideals import Ideal, PresentedRing, ideal_quotient, intersect, krull_dim
from ralab.linalg import nullspace, rref
from ralab.poly import DEGREVLEX, Poly
from ralab.report import Report, check


class NotArtinian(ValueError):
    pass


class LocalAlgebra:
    def __init__(self, ring: PresentedRing):
        self.ring = ring
        for r in ring.relations:
            if r.constant_coeff():
                raise ValueError(f"relation {r} is not inside the maximal ideal")
        self.dim = krull_dim(ring.relation_ideal)
        self._basis = None
        self._tables = None

    @property
    def artinian(self) -> bool:
        return self.dim == 0

    def maximal_ideal(self) -> Ideal:
        return Ideal(self.ring, self.ring.gens())

    def basis(self) -> list[tuple]:
        """Standard monomials (finite exactly when the ring is Artinian)."""
        if not self.artinian:
            raise NotArtinian(f"Krull dimension {self.dim}")
        if self._basis is None:
            lms = [p.leading_term()[0] for p in self.ring.relation_ideal.groebner()]
            n = self.ring.free.nvars
            # every variable has a pure power among the leading monomials
            bound = sum(max((m[i] for m in lms if sum(m) == m[i]), default=0) for i in range(n))
            self._basis = self.ring.standard_monomials(bound)
            self._basis.sort(key=DEGREVLEX.key)
        return self._basis

    def basis_polys(self) -> list[Poly]:
        return [self.ring.free.monomial(e) for e in self.basis()]

    def coords(self, f) -> list:
        f = self.ring.nf(f)
        idx = {e: i for i, e in enumerate(self.basis())}
        v = [0] * len(idx)
        for e, c in f.terms.items():
            v[idx[e]] = c
        return v

    def multiplication_matrix(self, f) -> list[list]:
        """Column ``j`` holds the coordinates of ``f * basis_j``."""
        cols = [self.coords(self.ring(f) * b) for b in self.basis_polys()]
        return [list(r) for r in zip(*cols)] if cols else []

    def tables(self) -> dict[str, list[list]]:
        if self._tables is None:
            self._tables = {n: self.multiplication_matrix(self.ring.var(n))
                            for n in self.ring.names}
        return self._tables

    def from_coords(self, v) -> Poly:
        return Poly(self.ring.free, {e: c for e, c in zip(self.basis(), v) if c})


def artinian_basis(L: LocalAlgebra) -> tuple[list[Poly], int]:
    b = L.basis_polys()
    return b, len(b)


def _echelon_polys(L: LocalAlgebra, vecs) -> list[Poly]:
    if not vecs:
        return []
    red, piv = rref(vecs)
    return [L.from_coords(r) for r in red[:len(piv)]]


def annihilator(f, L: LocalAlgebra) -> Ideal:
    """``(0 : f)``; by linear algebra when Artinian, else as ``(L : f)``."""
    f = L.ring(f)
    if L.artinian:
        M = L.multiplication_matrix(f)
        vecs = nullspace(M, len(L.basis()))
        return Ideal(L.ring, _echelon_polys(L, vecs))
    if L.ring.is_zero(f):
        return Ideal(L.ring, [1])
    return ideal_quotient(L.ring.relation_ideal, f)


def socle(L: LocalAlgebra) -> list[Poly]:
    """Basis of ``(0 : m)``."""
    if not L.artinian:
        raise NotArtinian(f"Krull dimension {L.dim}")
    rows = []
    for M in L.tables().values():
        rows.extend(M)
    vecs = nullspace(rows, len(L.basis())) if rows else \
        [[int(i == j) for i in range(len(L.basis()))] for j in range(len(L.basis()))]
    return _echelon_polys(L, vecs)


@dataclass
class SocleReport:
    socle: list[Poly]
    gorenstein: bool


def socle_and_gorenstein(L: LocalAlgebra) -> SocleReport:
    s = socle(L)
    return SocleReport(s, len(s) == 1)


def depth_zero_witness(L: LocalAlgebra) -> Poly | None:
    """A nonzero ``f`` with ``m f = 0``, if any."""
    rel = L.ring.relation_ideal
    if L.artinian:
        s = socle(L)
        return s[0] if s else None
    col = None
    for x in L.ring.gens():
        q = ideal_quotient(rel, x)
        col = q if col is None else intersect(col, q)
    for g in col.groebner():
        if not rel.contains(g):
            return L.ring.nf(g)
    return None


def is_regular_element(L: LocalAlgebra, f) -> bool:
    rel = L.ring.relation_ideal
    f = L.ring(f)
    if L.ring.is_zero(f):
        return False
    return ideal_quotient(rel, f).issubset(rel)


def depth_and_cm_report(L: LocalAlgebra, candidate=None, id: str = "local-report") -> Report:
    """Dimension, a depth-zero witness and a Cohen-Macaulay verdict.

    CM is certified for dimension 0, and for dimension 1 when ``candidate``
    is a certified regular element of the maximal ideal; a depth-zero
    witness in positive dimension certifies not-CM.
    """
    wit = [("dim", L.dim)]
    checks = []
    regular = None
    if candidate is not None:
        c = L.ring(candidate)
        if c.constant_coeff():
            raise ValueError("candidate must lie in the maximal ideal")
        regular = is_regular_element(L, c)
        wit.append((f"(L : {c}) = L", regular))
        checks.append(check("candidate regular", regular, [("candidate", c)]))
    w = depth_zero_witness(L)
    if w is not None:
        wit.append(("depth-0 witness", w))
        ann = annihilator(w, L)
        gens = ann.minimal_generators_mod_relations()
        wit.append((f"ann({w})", [str(g) for g in gens]))
    if L.dim == 0:
        verdict = "CM"
    elif L.dim == 1 and regular:
        verdict = "CM"
    elif L.dim >= 1 and w is not None:
        verdict = "not CM"
    else:
        verdict = "unknown"
    wit.append(("verdict", verdict))
    status = "unknown" if verdict == "unknown" else "pass"
    return Report(id, "local-report", status, wit, checks=checks)
