"""Derivations, local nilpotency, exponential maps and bounded invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ralab.groebner import ResourceLimitError
from ralab.ideals import PresentedRing
from ralab.linalg import nullspace, rref
from ralab.poly import DEGREVLEX, Poly, qq
from ralab.report import Report, check
from ralab.subalgebra import SubAlgebra

MAX_MONOMIALS = 4000


class NotLocallyNilpotent(ValueError):
    """An exponential map was requested from a derivation not verified nilpotent."""


class Derivation:
    """A derivation of a presented ring, given on the variables.

    Variables without an image map to 0 (so base variables are fixed and the
    derivation is R-linear unless told otherwise).  Well-definedness on the
    quotient is checked at construction.
    """

    def __init__(self, ring: PresentedRing, images: Mapping[str, object] | None = None):
        self.ring = ring
        images = dict(images or {})
        unknown = set(images) - set(ring.names)
        if unknown:
            raise ValueError(f"images given for unknown variables {sorted(unknown)}")
        self.images = {n: ring.nf(ring(images.get(n, 0))) for n in ring.names}
        for r in ring.relations:
            if not ring.is_zero(self._leibniz(r)):
                raise ValueError(f"derivation does not preserve the relation {r}")

    def _leibniz(self, f: Poly) -> Poly:
        out = self.ring.free.zero()
        for n in self.ring.names:
            d = self.images[n]
            if d:
                df = f.diff(n)
                if df:
                    out = out + df * d
        return out

    def __call__(self, f) -> Poly:
        return self.ring.nf(self._leibniz(self.ring(f)))

    def image(self, name: str) -> Poly:
        return self.images[name]

    def power(self, f, n: int) -> Poly:
        f = self.ring.nf(self.ring(f))
        for _ in range(n):
            f = self(f)
        return f

    def __repr__(self):
        body = ", ".join(f"{n} -> {g}" for n, g in self.images.items())
        return f"Derivation({body})"


def apply_derivation(D: Derivation, f) -> Poly:
    return D(f)


@dataclass
class LndReport:
    verdict: str                      # "verified" or "unknown"
    orders: dict[str, int] = field(default_factory=dict)
    cap: int = 0
    stuck: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.verdict == "verified"


def check_lnd(D: Derivation, cap: int = 8) -> LndReport:
    """Semi-decide local nilpotency on the variables.

    The order of a variable is the least ``n`` with ``D^n(var) = 0``; if some
    variable survives ``cap`` applications the verdict is ``unknown``.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    orders = {}
    stuck = []
    for name in D.ring.names:
        f = D.ring.nf(D.ring.var(name))
        for n in range(1, cap + 1):
            f = D(f)
            if not f:
                orders[name] = n
                break
        else:
            stuck.append(name)
    if stuck:
        return LndReport("unknown", orders, cap, stuck)
    return LndReport("verified", orders, cap)


class ExpMap:
    """A ring map ``B -> B[tag]`` given on variables.

    Construction checks that setting the tag to 0 gives back the identity.
    """

    def __init__(self, ring: PresentedRing, images: Mapping[str, object] | Sequence,
                 tag: str | None = None):
        self.ring = ring
        self.tag = tag or ring.free.fresh_names("T", 1)[0]
        self.ext = ring.extend([self.tag])
        if isinstance(images, Mapping):
            seq = [images.get(n, self.ext.var(n)) for n in ring.names]
        else:
            seq = list(images)
        self.images = tuple(self.ext.nf(self.ext(g)) for g in seq)
        for n, g in zip(ring.names, self.images):
            at0 = g.substitute({self.tag: self.ext.free.zero()}, self.ext.free)
            if not self.ext.equal(at0, self.ext.var(n)):
                raise ValueError(f"tag at 0 does not restore {n}")
        bad = [r for r in ring.relations
               if not self.ext.is_zero(self.ext(r).substitute(list(self.images) + [self.ext.var(self.tag)]))]
        if bad:
            raise ValueError(f"map does not preserve the relation {bad[0]}")

    def image(self, name: str) -> Poly:
        return self.images[self.ring.names.index(name)]

    def __call__(self, f) -> Poly:
        f = self.ext(self.ring(f))
        return self.ext.nf(f.substitute(list(self.images) + [self.ext.var(self.tag)]))

    def is_identity(self) -> bool:
        return all(self.ext.equal(g, self.ext.var(n)) for n, g in zip(self.ring.names, self.images))

    def __repr__(self):
        body = ", ".join(f"{n} -> {g}" for n, g in zip(self.ring.names, self.images))
        return f"ExpMap({body}; tag {self.tag})"


def exp_from_lnd(D: Derivation, cap: int = 32) -> ExpMap:
    """``phi = sum D^n / n! * T^n`` on the variables; axioms re-checked."""
    rep = check_lnd(D, cap)
    if not rep.verified:
        raise NotLocallyNilpotent(
            f"derivation not verified locally nilpotent within {cap} steps: {rep.stuck}")
    ring = D.ring
    tag = ring.free.fresh_names("T", 1)[0]
    ext = ring.extend([tag])
    t = ext.var(tag)
    images = {}
    for name in ring.names:
        f = ring.nf(ring.var(name))
        acc = ext.free.zero()
        n = 0
        while f:
            acc = acc + ext(f) * (t ** n) * qq(1) / math.factorial(n)
            f = D(f)
            n += 1
        images[name] = acc
    phi = ExpMap(ring, images, tag)
    verdict = check_exp_axioms(phi)
    if not verdict.passed:
        raise AssertionError(f"exponential of an LND failed the axioms: {verdict.witnesses}")
    return phi


def check_exp_axioms(phi: ExpMap) -> Report:
    """Check ``phi|_{U=0} = id`` and ``phi_V phi_U = phi_{V+U}`` on every variable."""
    ring = phi.ring
    u = ring.free.fresh_names("U", 1, [phi.tag])[0]
    v = ring.free.fresh_names("V", 1, [phi.tag, u])[0]
    two = ring.extend([u, v])
    U, V = two.var(u), two.var(v)

    def at(g: Poly, tagval: Poly) -> Poly:
        images = [two.var(n) for n in ring.names] + [tagval]
        return g.substitute(images, two.free)

    phi_U = [two.nf(at(g, U)) for g in phi.images]
    phi_V = [two.nf(at(g, V)) for g in phi.images]
    zero = two.free.zero()
    for n, g in zip(ring.names, phi.images):
        if not two.equal(at(g, zero), two.var(n)):
            return Report("exp-axioms", "exp", "fail",
                          [("axiom", "(i) tag at 0 is identity"), ("generator", n),
                           ("image at 0", two.nf(at(g, zero)))])
    for i, n in enumerate(ring.names):
        lhs = phi_U[i].substitute(phi_V + [U, V], two.free)
        rhs = at(phi.images[i], U + V)
        diff = two.nf(lhs - rhs)
        if diff:
            return Report("exp-axioms", "exp", "fail",
                          [("axiom", "(ii) phi_V phi_U = phi_(V+U)"), ("generator", n),
                           ("difference", diff)])
    return Report("exp-axioms", "exp", "pass",
                  [("generators", len(ring.names))])


def _monomial_basis(ring: PresentedRing, d: int) -> list[tuple]:
    basis = ring.standard_monomials(d)
    if len(basis) > MAX_MONOMIALS:
        raise ResourceLimitError(f"{len(basis)} monomials of degree <= {d}; cap {MAX_MONOMIALS}")
    return basis


def _kernel_basis(ring, basis, images, target_order):
    cols = sorted({m for p in images for m in p.terms}, key=target_order, reverse=True)
    idx = {m: i for i, m in enumerate(cols)}
    mat = [[0] * len(basis) for _ in cols]
    for j, p in enumerate(images):
        for m, c in p.terms.items():
            mat[idx[m]][j] = c
    vecs = nullspace(mat, len(basis))
    if not vecs:
        return []
    red, piv = rref(vecs)
    out = []
    for row in red[:len(piv)]:
        out.append(Poly(ring.free, {e: c for e, c in zip(basis, row) if c}))
    out.sort(key=lambda p: DEGREVLEX.key(p.leading_term()[0]))
    return out


def invariants_upto(source: Derivation | ExpMap, d: int) -> list[Poly]:
    """Echelon basis of the fixed elements of degree <= ``d``.

    For a derivation these solve ``D(f) = 0``, for an exponential map
    ``phi(f) = f``; unknowns are coefficients on standard monomials.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    ring = source.ring
    basis = _monomial_basis(ring, d)
    mons = [ring.free.monomial(e) for e in basis]
    if isinstance(source, Derivation):
        images = [source(m) for m in mons]
        key = DEGREVLEX.key
    else:
        ext = source.ext
        images = [source(m) - ext.nf(ext(m)) for m in mons]
        key = DEGREVLEX.key
    return _kernel_basis(ring, basis, images, key)


def same_span(a: list[Poly], b: list[Poly]) -> bool:
    """Whether two lists of polynomials span the same Q-vector space."""
    mons = sorted({m for p in a + b for m in p.terms}, key=DEGREVLEX.key, reverse=True)
    if not mons:
        return True

    def rows(ps):
        return [[p.terms.get(m, 0) for m in mons] for p in ps]

    ra = rref(rows(a))[0][:len(rref(rows(a))[1])] if a else []
    rb = rref(rows(b))[0][:len(rref(rows(b))[1])] if b else []
    return ra == rb


def in_span(f: Poly, basis: list[Poly]) -> bool:
    return same_span(basis, basis + [f])


@dataclass
class GeneratorGuess:
    generators: list[Poly]
    covered: bool
    uncovered: list[Poly]


def generator_guess(ring: PresentedRing, basis: list[Poly]) -> GeneratorGuess:
    """Greedy low-degree algebra generators for the span of ``basis``.

    Elements are visited by degree; each one not already in the algebra
    generated by the chosen ones (over the base) is added.
    """
    chosen: list[Poly] = []
    for f in sorted(basis, key=lambda p: (p.total_degree(), DEGREVLEX.key(p.leading_term()[0]))):
        if f.is_constant():
            continue
        base_only = not (f.support() - set(ring.base_vars))
        if base_only:
            continue
        if chosen and SubAlgebra(ring, chosen).member(f):
            continue
        chosen.append(f)
    uncovered = []
    if chosen:
        A = SubAlgebra(ring, chosen)
        uncovered = [f for f in basis if not A.member(f)]
    return GeneratorGuess(chosen, not uncovered, uncovered)


@dataclass
class TranslationResult:
    phi: ExpMap
    report: Report
    least_m: int
    k: dict[str, int]


def exp_translation(ring: PresentedRing, Agens: Sequence, F, a, m: int,
                    max_k: int = 12, max_m: int = 12) -> TranslationResult:
    """Exponential map fixing ``Agens`` with ``F -> F + a^m * U``.

    For each non-base variable ``g`` the least ``k`` with ``a^k g`` in the
    algebra generated by ``Agens`` and ``F`` is found; ``phi(g)`` is then that
    expression evaluated at ``F + a^m U`` and divided by ``a^k``, which must be
    exact coefficient by coefficient in ``U``.  The least sufficient ``m`` is
    reported alongside the verdict for the given ``m``.
    """
    F = ring.nf(ring(F))
    a = ring.nf(ring(a))
    if not a:
        raise ValueError("a must be nonzero")
    Agens = [ring.nf(ring(g)) for g in Agens]
    A = SubAlgebra(ring, Agens)
    AF = SubAlgebra(ring, Agens + [F])
    if AF.trdeg() != A.trdeg() + 1:
        raise ValueError("F is algebraic over the given generators")
    ftag = AF.tags[-1]
    rows = {}
    ks = {}
    for name in ring.non_base_vars:
        g = ring.var(name)
        for k in range(max_k + 1):
            res = AF.member(a ** k * g)
            if res:
                break
        else:
            raise ValueError(f"no power a^k with k <= {max_k} puts {name} in A[F]")
        ks[name] = k
        expr = res.expression
        coeffs = []
        j = 0
        deriv = expr
        while deriv:
            coeffs.append(AF.evaluate(deriv) * (qq(1) / math.factorial(j)))
            deriv = deriv.diff(ftag)
            j += 1
        rows[name] = coeffs

    def works(mm: int) -> dict[str, list[Poly]] | None:
        out = {}
        for name, coeffs in rows.items():
            k = ks[name]
            ak = a ** k
            quot = []
            for j, c in enumerate(coeffs):
                q = ring.divide(c * a ** (mm * j), ak)
                if q is None:
                    return None
                quot.append(q)
            out[name] = quot
        return out

    least = None
    for mm in range(max_m + 1):
        if works(mm) is not None:
            least = mm
            break
    got = works(m)
    tag = ring.free.fresh_names("U", 1)[0]
    ext = ring.extend([tag])
    U = ext.var(tag)
    if got is None:
        rep = Report("exp-translation", "exp", "fail",
                     [("m", m), ("least sufficient m", least if least is not None else "none"),
                      ("reason", "phi(B) not inside B[U]")])
        return TranslationResult(None, rep, least if least is not None else -1, ks)
    images = {}
    for name, quot in got.items():
        images[name] = sum((ext(q) * U ** j for j, q in enumerate(quot)), ext.free.zero())
    phi = ExpMap(ring, images, tag)
    checks = [check_exp_axioms(phi)]
    fixed = all(phi.ext.equal(phi(g), phi.ext(g)) for g in Agens)
    checks.append(check("fixes A", fixed))
    fimg = phi(F)
    want = phi.ext(F) + phi.ext(a) ** m * phi.ext.var(tag)
    checks.append(check("F -> F + a^m U", phi.ext.equal(fimg, want), [("phi(F)", fimg)]))
    status = "pass" if all(c.passed for c in checks) else "fail"
    wit = [("m", m), ("least sufficient m", least),
           ("k", ", ".join(f"{n}:{k}" for n, k in ks.items()))]
    for n in ring.non_base_vars:
        wit.append((f"phi({n})", phi.image(n)))
    if status == "fail":
        wit.append(("failed", ", ".join(c.id for c in checks if not c.passed)))
    return TranslationResult(phi, Report("exp-translation", "exp", status, wit, checks=checks),
                             least, ks)
