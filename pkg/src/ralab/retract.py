"""Retractions, symmetric algebras of ideals, invertibility, patching and prime images."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ralab import groebner as gb
from ralab.ideals import (EMPTY_DIM, Ideal, PresentedRing, RingMap, eliminate,
                          ideal_quotient, intersect, krull_dim, saturate)
from ralab.linalg import nullspace
from ralab.poly import DEGREVLEX, MonomialOrder, Poly, PolyRing
from ralab.report import Report, bundle, check
from ralab.subalgebra import SubAlgebra


class IdempotencyError(ValueError):
    def __init__(self, variable: str, once: Poly, twice: Poly):
        self.variable = variable
        self.once = once
        self.twice = twice
        super().__init__(f"pi(pi({variable})) = {twice} differs from pi({variable}) = {once}")


class NormalizationFailed(ValueError):
    """``F = lambda*G + mu`` with ``mu != 0``, or no such relation was found."""


class LambdaNotUnit(ValueError):
    """The ratio ``lambda = a / y^m`` is not a unit of the doubly localized base."""


class DecompositionFailed(ValueError):
    def __init__(self, message: str, witness: str = ""):
        self.witness = witness
        super().__init__(f"{message}: {witness}" if witness else message)


# -- retractions -----------------------------------------------------------------

@dataclass
class Retraction:
    map: RingMap
    image_gens: tuple[Poly, ...]
    certificate: list[tuple[str, Poly]]

    @property
    def ring(self) -> PresentedRing:
        return self.map.source

    def __call__(self, f) -> Poly:
        return self.map(f)


def verify_retraction(m: RingMap) -> Retraction:
    """Certify ``pi(pi(x)) = pi(x)`` for every variable ``x``."""
    if m.source.names != m.target.names:
        raise ValueError("a retraction must be an endomorphism")
    cert = []
    for name, img in zip(m.source.names, m.images):
        twice = m(img)
        if not m.target.equal(twice, img):
            raise IdempotencyError(name, img, twice)
        cert.append((name, img))
    return Retraction(m, m.images, cert)


def retract_image(r: Retraction) -> SubAlgebra:
    """The image ``pi(B)`` as a subalgebra; images lying in the base are dropped."""
    ring = r.ring
    base = set(ring.base_vars)
    gens = []
    for g in r.image_gens:
        if not g or not (g.support() - base):
            continue
        if any(ring.equal(g, h) for h in gens):
            continue
        gens.append(g)
    return SubAlgebra(ring, gens)


# -- symmetric algebras and invertibility ------------------------------------------

@dataclass
class SymPresentation:
    base: PresentedRing
    ideal_gens: tuple[Poly, ...]
    tvars: tuple[str, ...]
    relations: Ideal

    @property
    def linear_relations(self) -> list[Poly]:
        return list(self.relations.generators)


def sym_of_ideal(base: PresentedRing, gens: Sequence, stem: str = "t") -> SymPresentation:
    """``Sym_R(I)`` presented by ``t_i`` and the linear syzygies of the generators.

    Syzygies come from the Rees ideal: eliminate ``s`` from ``<t_i - g_i s>``
    and keep the reduced basis elements of degree one in the ``t_i`` under an
    order ranking ``t``-degree first.
    """
    gens = [base.nf(base(g)) for g in gens]
    if any(not g for g in gens):
        raise ValueError("ideal generators must be nonzero")
    taken = set(base.names)
    while any(f"{stem}{i + 1}" in taken for i in range(len(gens))):
        stem += "_"
    tv = tuple(f"{stem}{i + 1}" for i in range(len(gens)))
    (s,) = base.free.fresh_names("s_", 1, tv)
    big = PolyRing(base.names + tv + (s,))
    polys = [big.var(t) - g.to_ring(big) * big.var(s) for t, g in zip(tv, gens)]
    polys += [r.to_ring(big) for r in base.relations]
    sidx = [big.index[s]]
    step1 = gb.buchberger([p.terms for p in polys], MonomialOrder.elimination(sidx).key)
    rees = PolyRing(base.names + tv)
    kept = [Poly(big, p) for p in step1 if all(not e[sidx[0]] for e in p)]
    kept = [p.to_ring(rees) for p in kept]
    tidx = [rees.index[t] for t in tv]
    step2 = gb.buchberger([p.terms for p in kept], MonomialOrder.elimination(tidx).key)
    linear = []
    for p in step2:
        tdeg = {sum(e[i] for i in tidx) for e in p}
        if tdeg == {1}:
            linear.append(Poly(rees, p))
    ring = PresentedRing(rees, base.relations, DEGREVLEX, base.base_vars)
    return SymPresentation(base, tuple(gens), tv, Ideal(ring, linear))


@dataclass
class InvertibilityCertificate:
    ideal: Ideal
    witness: Poly
    inverse: Ideal
    verdict: str

    @property
    def invertible(self) -> bool:
        return self.verdict == "invertible"


def colon_ideal(I: Ideal, J: Ideal) -> Ideal:
    """``(I : J)`` as the intersection of ``(I : g)`` over generators of ``J``."""
    out = None
    for g in J.generators:
        if I.ring.is_zero(g):
            continue
        q = ideal_quotient(I, g)
        out = q if out is None else intersect(out, q)
    return out if out is not None else Ideal(I.ring, [1])


def is_invertible(I: Ideal, R: PresentedRing | None = None, witness=None) -> InvertibilityCertificate:
    """Decide ``I * (fR : I) = fR`` for a nonzero ``f`` in ``I``."""
    R = R or I.ring
    if witness is None:
        nz = [g for g in I.generators if not R.is_zero(g)]
        if not nz:
            raise ValueError("the zero ideal is not invertible")
        f = nz[0]
    else:
        f = R(witness)
        if R.is_zero(f) or not I.contains(f):
            raise ValueError("witness must be a nonzero element of the ideal")
    fR = Ideal(R, [f])
    Q = colon_ideal(fR, I)
    prod = I * Q
    ok = prod.issubset(fR) and fR.issubset(prod)
    return InvertibilityCertificate(I, f, Q, "invertible" if ok else "not-invertible")


def filtration_pieces(ring: PresentedRing, I: Ideal, e: int) -> list[Poly]:
    """A basis of ``I`` intersected with elements of degree <= ``e``."""
    basis = ring.standard_monomials(e)
    mons = [ring.free.monomial(m) for m in basis]
    images = [I.normal_form(m) for m in mons]
    cols = sorted({m for p in images for m in p.terms}, key=DEGREVLEX.key, reverse=True)
    idx = {m: i for i, m in enumerate(cols)}
    mat = [[0] * len(basis) for _ in cols]
    for j, p in enumerate(images):
        for m, c in p.terms.items():
            mat[idx[m]][j] = c
    out = []
    for v in nullspace(mat, len(basis)):
        out.append(ring.nf(Poly(ring.free, {m: c for m, c in zip(basis, v) if c})))
    return [p for p in out if p]


def degree_additive(ring: PresentedRing) -> bool:
    """Whether degrees add under multiplication (the associated graded ring is a domain).

    Holds for free rings, and for a single relation whose top-degree form is
    irreducible over Q.
    """
    if ring.is_free():
        return True
    rel = [p for p in ring.relation_ideal.groebner()]
    if len(rel) != 1:
        return False
    top = rel[0].homogeneous_components()[rel[0].total_degree()]
    import sympy
    syms = sympy.symbols(ring.names)
    expr = sympy.Add(*[sympy.Rational(int(c.numerator), int(c.denominator))
                       * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
                       for e, c in top.terms.items()])
    _, factors = sympy.factor_list(expr, *syms)
    return len(factors) == 1 and factors[0][1] == 1


@dataclass
class PrincipalityReport:
    verdict: str                 # "principal", "not principal up to degree d", "unknown"
    degree: int
    minimal_degree: int | None
    lowest_piece: list[Poly] = field(default_factory=list)
    generator: Poly | None = None


def principal_upto(I: Ideal, d: int = 6) -> PrincipalityReport:
    """Bounded principality test on the degree filtration.

    If degrees add, a principal generator has the least degree ``e0`` of a
    nonzero element of ``I``, and the degree-``e0`` piece of ``I`` is then
    spanned by it.  So it suffices to inspect that one piece.
    """
    ring = I.ring
    if not degree_additive(ring):
        return PrincipalityReport("unknown", d, None)
    if I.is_unit():
        return PrincipalityReport("principal", d, 0, [ring.free.one()], ring.free.one())
    for e in range(d + 1):
        piece = filtration_pieces(ring, I, e)
        if piece:
            if len(piece) == 1:
                g = piece[0]
                if Ideal(ring, [g]).issubset(I) and I.issubset(Ideal(ring, [g])):
                    return PrincipalityReport("principal", d, e, piece, g)
            return PrincipalityReport(f"not principal up to degree {d}", d, e, piece)
    return PrincipalityReport(f"not principal up to degree {d}", d, None)


# -- localization helpers ------------------------------------------------------------

def is_regular_mod(y, x, C: PresentedRing) -> bool:
    """Whether ``y`` is a nonzerodivisor on ``C / xC``, i.e. ``(xC : y) = xC``."""
    y = C.nf(C(y))
    x = C.nf(C(x))
    if not x or not y:
        raise ValueError("x and y must be nonzero")
    xC = Ideal(C, [x])
    return ideal_quotient(xC, y).issubset(xC)


def _algebra_ring(A) -> PresentedRing:
    return A.presented_ring() if isinstance(A, SubAlgebra) else A


def compute_Mn(A, a, x, n: int) -> Ideal:
    """``M_n = a^n A_x`` intersected with ``A``, computed as ``(a^n A : x^inf)``."""
    ring = _algebra_ring(A)
    a = ring.nf(ring(a))
    x = ring.nf(ring(x))
    if not a or not x:
        raise ValueError("a and x must be nonzero")
    if n == 0:
        return Ideal(ring, [1])
    sat, _ = saturate(Ideal(ring, [a ** n]), x)
    return sat


# -- the patching pipeline ---------------------------------------------------------

@dataclass
class PatchData:
    A: SubAlgebra
    x: Poly
    y: Poly
    F: Poly
    G: Poly
    N: int = 2
    normalize: bool = True
    max_power: int = 20


def _power_in(alg: SubAlgebra, elem: Poly, mult: Poly, bound: int):
    """Least ``k <= bound`` with ``mult^k * elem`` in ``alg``, with its expression."""
    for k in range(bound + 1):
        res = alg.member(mult ** k * elem)
        if res:
            return k, res.expression
    return None, None


def verify_patch_decomposition(p: PatchData, pi: Retraction) -> Report:
    """Run the patching argument on concrete data and certify each step.

    Raises NormalizationFailed, LambdaNotUnit or DecompositionFailed when a
    step cannot be certified; otherwise returns a report (pass or fail of the
    final containment checks) carrying every certificate.
    """
    B = p.A.ambient
    A = p.A
    Ar = A.presented_ring()
    R = B.base_ring()
    x = B.nf(B(p.x))
    y = B.nf(B(p.y))
    checks = []
    wit = []

    # preconditions
    image_ok = all(B.equal(pi(g), g) for g in A.generators)
    checks.append(check("A inside pi(B)", image_ok))
    reg = is_regular_mod(R(y.to_ring(R.free)), R(x.to_ring(R.free)), R) if R.names else True
    checks.append(check("y regular mod x", reg, [("x", x), ("y", y)]))

    # (1) normalization
    F, G = B.nf(B(p.F)), B.nf(B(p.G))
    sF, sG = pi(F), pi(G)
    if p.normalize:
        F, G = B.nf(F - sF), B.nf(G - sG)
        if sF or sG:
            wit.append(("normalization shift", f"F by {sF}, G by {sG}"))
    elif sF or sG:
        raise NormalizationFailed(f"pi(F) = {sF}, pi(G) = {sG}; mu = pi(F) - lambda*pi(G) is nonzero")

    # (2) F = lambda*G + mu over A_xy
    AG = SubAlgebra(B, list(A.generators) + [G])
    gtag = AG.tags[-1]
    k, expr = _power_in(AG, F, x * y, p.max_power)
    if k is None:
        raise NormalizationFailed(f"no (xy)^k * F in A[G] for k <= {p.max_power}")
    parts = expr.coeffs_in(gtag)
    if max(parts) > 1:
        raise NormalizationFailed(f"F is not affine in G over A_xy: {expr}")
    mu_num = AG.evaluate(parts.get(0, expr.ring.zero()))
    lam_num = AG.evaluate(parts.get(1, expr.ring.zero()))
    if mu_num:
        raise NormalizationFailed(f"mu = ({mu_num})/(xy)^{k} is nonzero")
    if not lam_num:
        raise LambdaNotUnit("lambda = 0")
    m = None
    a = None
    for mm in range(p.max_power + 1):
        q = B.divide(lam_num * y ** mm, (x * y) ** k)
        if q is not None and not (q.support() - set(B.base_vars)):
            m, a = mm, q
            break
    if m is None:
        raise LambdaNotUnit(f"lambda = ({lam_num})/(xy)^{k} is not a/y^m with a in R")
    aR = R(a.to_ring(R.free))
    xyR = R((x * y).to_ring(R.free))
    cert = None
    for n in range(p.max_power + 1):
        b = R.divide(xyR ** n, aR)
        if b is not None:
            cert = (b, n)
            break
    if cert is None:
        raise LambdaNotUnit(f"no b in R with a*b = (xy)^n, n <= {p.max_power}")
    wit += [("lambda", f"({a})/({y})^{m}"), ("a", a), ("m", m),
            ("unit certificate", f"a * ({cert[0]}) = (xy)^{cert[1]}")]
    checks.append(check("mu = 0", True))
    checks.append(check("F = lambda*G", B.is_zero(F * y ** m - a * G)))

    # (3) M_0..M_N
    ax = Ar(a.to_ring(Ar.free))
    xa = Ar(x.to_ring(Ar.free))
    Ms = [compute_Mn(Ar, ax, xa, n) for n in range(p.N + 1)]
    for n, M in enumerate(Ms):
        wit.append((f"M{n}", [str(g) for g in M.groebner()]))

    # (4a) M_n T^n inside B, with T = G / y^m
    ok_a = True
    bad = None
    for n, M in enumerate(Ms):
        for g in M.generators:
            c = A.evaluate(g.to_ring(A.tag_ring))
            if B.divide(c * G ** n, y ** (m * n)) is None:
                ok_a, bad = False, (n, g)
                break
        if not ok_a:
            break
    checks.append(check("M_n T^n inside B", ok_a,
                        [("witness", f"M{bad[0]} generator {bad[1]}")] if bad else []))

    # (4b) T-expansions of the generators of B have coefficients in M_n
    AF = SubAlgebra(B, list(A.generators) + [F])
    ftag = AF.tags[-1]
    ok_b = True
    bad = None
    for name in B.non_base_vars:
        kx, e = _power_in(AF, B.var(name), x, p.max_power)
        if kx is None:
            raise DecompositionFailed(f"{name} not in A_x[F] within x^{p.max_power}")
        for j, ej in e.coeffs_in(ftag).items():
            if j > p.N:
                continue
            c = (ej.to_ring(Ar.free) * ax ** j)
            target = Ms[j].scaled(xa ** kx)
            if not target.contains(c):
                ok_b, bad = False, f"coefficient of T^{j} in {name}: ({c})/({xa})^{kx}"
                break
        if not ok_b:
            break
    if not ok_b:
        raise DecompositionFailed("T-expansion coefficient outside M_n", bad)
    checks.append(check("T-expansion coefficients in M_n", ok_b))

    # I = M_1 intersected with R, its invertibility and the Sym relations
    I = None
    if len(Ms) > 1:
        cut = eliminate(Ms[1], A.tags) if A.tags else Ms[1]
        I = Ideal(R, [g.to_ring(R.free) for g in cut.generators])
        inv = is_invertible(I, R)
        wit.append(("I", [str(g) for g in I.groebner()]))
        wit.append(("I invertible", inv.verdict))
        checks.append(check("I invertible", inv.invertible))
        gens = [g for g in I.groebner()]
        sym = sym_of_ideal(R, gens)
        images = []
        for g in gens:
            q = B.divide(B(g.to_ring(B.free)) * G, y ** m)
            images.append(q)
        ok_sym = all(q is not None for q in images)
        if ok_sym:
            subst = {t: q for t, q in zip(sym.tvars, images)}
            for rel in sym.linear_relations:
                val = rel.substitute([subst[n] if n in subst else B.var(n)
                                      for n in rel.ring.names], B.free)
                if not B.is_zero(val):
                    ok_sym = False
                    break
        checks.append(check("Sym relations vanish on I*T", ok_sym))
    status = "pass" if all(c.passed for c in checks) else "fail"
    if status == "fail":
        wit.append(("failed", ", ".join(c.id for c in checks if not c.passed)))
    rep = Report("patch-verify", "patch-verify", status, wit, checks=checks)
    rep.M = Ms
    rep.I = I
    return rep


# -- primes, contraction and generator counts ---------------------------------------

def height(ring: PresentedRing, I: Ideal) -> int:
    """``dim ring - dim ring/I``; matches the height for the equidimensional examples here."""
    return krull_dim(ring.relation_ideal) - krull_dim(I)


def factor_witness(f: Poly) -> tuple[Poly, Poly] | None:
    """A factorization ``f = g*h`` into non-units found by trying variable divisors."""
    from ralab.ideals import exact_division
    for name in f.ring.names:
        v = f.ring.var(name)
        q = exact_division(f, v)
        if q is not None and not q.is_constant():
            return v, q
    return None


def prime_image_analysis(pi: Retraction, p) -> Report:
    """Classify ``pB`` contracted to ``A = pi(B)``: zero, ``pi(p)A``, or ``pi(p)`` a unit."""
    B = pi.ring
    p = B.nf(B(p))
    if not p:
        raise ValueError("p must be nonzero")
    A = retract_image(pi)
    Ar = A.presented_ring()
    q = A.contract(Ideal(B, [p]))
    pp = pi(p)
    qgens = [str(g) for g in q.groebner()]
    wit = [("p", p), ("pi(p)", pp), ("pB cap A", qgens)]
    if Ideal(B, [pp]).is_unit():
        h_q = height(Ar, q)
        h_p = height(B, Ideal(B, [p]))
        wit += [("height(pB cap A)", h_q), ("height(pB)", h_p)]
        rep = Report("prime-image", "prime-image", "pass", wit,
                     notes=["branch: precondition-violated (pi(p) is a unit)"])
        rep.branch = "precondition-violated"
        rep.contraction = q
        return rep
    if q.is_zero() or not q.minimal_generators_mod_relations():
        fw = factor_witness(pp)
        if fw:
            wit.append(("pi(p) reducible", f"({fw[0]})*({fw[1]})"))
        rep = Report("prime-image", "prime-image", "pass", wit, notes=["branch: zero"])
        rep.branch = "zero"
        rep.contraction = q
        return rep
    res = A.member(pp)
    principal = Ideal(Ar, [res.expression]) if res else None
    ok = principal is not None and principal.issubset(q) and q.issubset(principal)
    if ok:
        rep = Report("prime-image", "prime-image", "pass", wit, notes=["branch: principal"])
    else:
        wit.append(("violation", "pB cap A is neither 0 nor pi(p)A"))
        rep = Report("prime-image", "prime-image", "fail", wit)
    rep.branch = "principal" if ok else "none"
    rep.contraction = q
    return rep


def going_down_witness(B: PresentedRing, A: SubAlgebra, p) -> tuple[int, int, Ideal]:
    """Heights of ``pB`` and of its contraction; a flat extension needs the second <= the first."""
    P = Ideal(B, [B(p)])
    q = A.contract(P)
    return height(B, P), height(A.presented_ring(), q), q


def mu_graded(J: Ideal, weights: Sequence[int] | None = None) -> int:
    """Minimal number of homogeneous generators by graded Nakayama."""
    return len(minimal_homogeneous_generators(J, weights))


def minimal_homogeneous_generators(J: Ideal, weights: Sequence[int] | None = None) -> list[Poly]:
    ring = J.ring
    gens = [ring.nf(g) for g in J.generators]
    gens = [g for g in gens if g]
    for g in gens:
        if not g.is_homogeneous(weights):
            raise ValueError(f"generator {g} is not homogeneous")
    for r in ring.relations:
        if not r.is_homogeneous(weights):
            raise ValueError(f"relation {r} is not homogeneous")

    def wdeg(g):
        e = next(iter(g.terms))
        return sum(e) if weights is None else sum(w * x for w, x in zip(weights, e))

    kept: list[Poly] = []
    for g in sorted(gens, key=lambda g: (wdeg(g), DEGREVLEX.key(g.leading_term()[0]))):
        if kept and Ideal(ring, kept).contains(g):
            continue
        kept.append(g)
    return kept


def tag_weights(A: SubAlgebra) -> list[int]:
    """Grading on ``A``'s presentation: each tag gets the degree of its generator."""
    w = []
    for n in A.tag_ring.names:
        if n in A.tags:
            g = A.generators[A.tags.index(n)]
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
            w.append(g.total_degree())
        else:
            w.append(0)
    return w
