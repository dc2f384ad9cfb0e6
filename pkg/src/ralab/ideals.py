"""Presented rings Q[x]/L, ideals, and the ideal-theoretic toolkit.

Every ideal of a presented ring is handled through its preimage in the free
ring, so one Groebner engine serves base rings, subrings and quotients alike.
"""

from __future__ import annotations

import itertools
import threading
from typing import Iterable, Mapping, Sequence

from ralab import groebner as gb
from ralab.groebner import Limits, ResourceLimitError
from ralab.linalg import solve
from ralab.poly import DEGREVLEX, MonomialOrder, Poly, PolyRing, monomials_upto

__all__ = [
    "PresentedRing", "Ideal", "RingMap", "ResourceLimitError",
    "normal_form", "groebner", "ideal_quotient", "saturate", "eliminate",
    "krull_dim", "EMPTY_DIM",
]

#: dimension reported for the unit ideal (the empty variety)
EMPTY_DIM = -1


class PresentedRing:
    """The ring ``Q[variables] / relations`` with designated base variables."""

    def __init__(self, variables: PolyRing | Iterable[str], relations: Iterable = (),
                 order: MonomialOrder = DEGREVLEX, base: Iterable[str] = ()):
        self.free = variables if isinstance(variables, PolyRing) else PolyRing(variables)
        rels = []
        for r in relations:
            r = self.free(r)
            if r:
                rels.append(r)
        self.relations = tuple(rels)
        self.order = order
        self.base_vars = tuple(base)
        for b in self.base_vars:
            if b not in self.free.index:
                raise ValueError(f"base variable {b!r} is not a ring variable")
        self._rel_ideal = None

    # -- construction ---------------------------------------------------------
    @property
    def names(self) -> tuple[str, ...]:
        return self.free.names

    @property
    def non_base_vars(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n not in self.base_vars)

    def __call__(self, x) -> Poly:
        """Coerce into the free ring (not reduced; see :meth:`nf`)."""
        return self.free(x)

    def var(self, name: str) -> Poly:
        return self.free.var(name)

    def gens(self) -> list[Poly]:
        return self.free.gens()

    def extend(self, names: Iterable[str], base: Iterable[str] | None = None) -> "PresentedRing":
        """Adjoin free variables; relations and base carry over."""
        return PresentedRing(self.free.extend(names), self.relations, self.order,
                             self.base_vars if base is None else base)

    def with_order(self, order: MonomialOrder) -> "PresentedRing":
        return PresentedRing(self.free, self.relations, order, self.base_vars)

    def __repr__(self):
        rel = ", ".join(map(str, self.relations))
        return f"PresentedRing({list(self.names)}, [{rel}], base={list(self.base_vars)})"

    # -- relations -------------------------------------------------------------
    @property
    def relation_ideal(self) -> "Ideal":
        if self._rel_ideal is None:
            self._rel_ideal = Ideal(self, ())
        return self._rel_ideal

    def nf(self, f) -> Poly:
        """Normal form modulo the relations (canonical representative)."""
        return self.relation_ideal.normal_form(self.free(f))

    def is_zero(self, f) -> bool:
        return not self.nf(f)

    def equal(self, f, g) -> bool:
        return not self.nf(self.free(f) - self.free(g))

    def is_free(self) -> bool:
        return not self.relations

    def standard_monomials(self, degree: int) -> list[tuple]:
        """Exponents of degree <= ``degree`` not divisible by a relation leading term.

        Under a degree-compatible order these span the elements of filtration
        degree <= ``degree``.
        """
        lms = [p.leading_term(self.order)[0] for p in self.relation_ideal.groebner()]
        return [e for e in monomials_upto(self.free.nvars, degree)
                if not any(all(a <= b for a, b in zip(m, e)) for m in lms)]

    def base_ring(self) -> "PresentedRing":
        """The base ring R: base variables modulo the relations that live on them."""
        if not self.base_vars:
            return PresentedRing((), ())
        if not self.non_base_vars:
            return self
        cut = eliminate(self.relation_ideal, self.non_base_vars)
        return PresentedRing(self.base_vars, cut.generators)

    def divide(self, f, g, slack: int = 8) -> Poly | None:
        """Some ``h`` with ``g*h == f`` in this ring, or None.

        Free rings use exact multivariate division.  With relations the quotient
        is found by linear algebra over standard monomials, widening the degree
        window up to ``deg f + slack``.
        """
        f = self.nf(f)
        g = self.nf(g)
        if not g:
            raise ZeroDivisionError("division by zero in presented ring")
        if not f:
            return self.free.zero()
        if self.is_free():
            return exact_division(f, g)
        df = f.total_degree()
        dg = g.total_degree()
        for d in range(max(df - dg, 0), df + slack + 1):
            basis = self.standard_monomials(d)
            images = [self.nf(g * self.free.monomial(e)) for e in basis]
            cols = sorted({m for p in images for m in p.terms} | set(f.terms),
                          key=self.order.key, reverse=True)
            idx = {m: i for i, m in enumerate(cols)}
            mat = [[0] * len(basis) for _ in cols]
            for j, p in enumerate(images):
                for m, c in p.terms.items():
                    mat[idx[m]][j] = c
            rhs = [0] * len(cols)
            for m, c in f.terms.items():
                rhs[idx[m]] = c
            x = solve(mat, rhs)
            if x is not None:
                h = Poly(self.free, {e: c for e, c in zip(basis, x) if c})
                return self.nf(h)
        return None


def exact_division(f: Poly, g: Poly) -> Poly | None:
    """Quotient ``f / g`` in a free polynomial ring, or None when not exact."""
    key = DEGREVLEX.key
    lg, cg = g.leading_term()
    rem = dict(f.terms)
    q = {}
    while rem:
        m = max(rem, key=key)
        if not all(a <= b for a, b in zip(lg, m)):
            return None
        c = rem[m] / cg
        s = tuple(a - b for a, b in zip(m, lg))
        q[s] = c
        for e, v in g.terms.items():
            e2 = tuple(a + b for a, b in zip(e, s))
            w = rem.get(e2, 0) - c * v
            if w:
                rem[e2] = w
            else:
                rem.pop(e2, None)
    return Poly(f.ring, q)


class Ideal:
    """An ideal of a :class:`PresentedRing`, given by generators.

    Groebner bases are computed for the preimage (generators plus relations)
    in the free ring and cached per monomial order.
    """

    def __init__(self, ring: PresentedRing, generators: Iterable = ()):
        self.ring = ring
        gens = []
        for g in generators:
            g = ring.free(g)
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self._gb: dict[MonomialOrder, tuple[Poly, ...]] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    # -- Groebner data ---------------------------------------------------------
    def groebner(self, order: MonomialOrder | None = None,
                 limits: Limits | None = None) -> tuple[Poly, ...]:
        order = order or self.ring.order
        got = self._gb.get(order)
        if got is not None:
            return got
        polys = [g.terms for g in self.generators] + [r.terms for r in self.ring.relations]
        basis = gb.buchberger(polys, order.key, limits)
        result = tuple(Poly(self.ring.free, p) for p in basis)
        with self._lock:
            self._gb.setdefault(order, result)
        return self._gb[order]

    def _reducer(self, order):
        key = order.key
        return [(p.leading_term(order)[0], p.terms) for p in self.groebner(order)], key

    def normal_form(self, f, order: MonomialOrder | None = None) -> Poly:
        order = order or self.ring.order
        basis, key = self._reducer(order)
        return Poly(self.ring.free, gb.reduce(self.ring.free(f).terms, basis, key))

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f) -> bool:
        return self.contains(f)

    def is_unit(self) -> bool:
        basis = self.groebner()
        return len(basis) == 1 and basis[0].is_constant()

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(g) for g in self.generators)

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators) and all(
            other.contains(r) for r in self.ring.relations)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.ring.names != other.ring.names:
            return False
        return self.reduced_basis_strings() == other.reduced_basis_strings()

    __hash__ = None

    def reduced_basis_strings(self) -> list[str]:
        return [str(p) for p in self.groebner(DEGREVLEX)]

    def minimal_generators_mod_relations(self) -> list[Poly]:
        """Reduced Groebner basis elements that are not already relations."""
        rel = self.ring.relation_ideal
        return [p for p in self.groebner() if not rel.contains(p)]

    # -- algebra ---------------------------------------------------------------
    def __add__(self, other: "Ideal | Iterable") -> "Ideal":
        extra = other.generators if isinstance(other, Ideal) else other
        return Ideal(self.ring, self.generators + tuple(extra))

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def power(self, n: int) -> "Ideal":
        out = Ideal(self.ring, [1])
        for _ in range(n):
            out = out * self
        return out

    def scaled(self, f) -> "Ideal":
        f = self.ring.free(f)
        return Ideal(self.ring, [f * g for g in self.generators])

    def intersect(self, other: "Ideal") -> "Ideal":
        return intersect(self, other)

    def quotient(self, f) -> "Ideal":
        return ideal_quotient(self, f)

    def saturate(self, x):
        return saturate(self, x)

    def dimension(self) -> int:
        return krull_dim(self)


def normal_form(f, ideal: Ideal, order: MonomialOrder | None = None) -> Poly:
    return ideal.normal_form(f, order)


def groebner(ideal: Ideal, order: MonomialOrder | None = None) -> list[Poly]:
    return list(ideal.groebner(order))


def _elimination_gb(ring: PresentedRing, polys: Sequence[Poly], drop: Iterable[str],
                    limits: Limits | None = None) -> list[Poly]:
    drop = set(drop)
    idx = [ring.free.index[n] for n in drop]
    order = MonomialOrder.elimination(idx)
    basis = gb.buchberger([p.terms for p in polys if p], order.key, limits)
    out = []
    for p in basis:
        if all(not e[i] for e in p for i in idx):
            out.append(Poly(ring.free, p))
    return out


def eliminate(ideal: Ideal, variables: Iterable[str]) -> Ideal:
    """``ideal`` intersected with the subring on the remaining variables.

    The result lives in a free :class:`PresentedRing` on the remaining
    variables; relations of the source ring that survive are among its
    generators.
    """
    variables = [v for v in variables]
    ring = ideal.ring
    for v in variables:
        if v not in ring.free.index:
            raise ValueError(f"unknown variable {v!r}")
    if not variables:
        return Ideal(PresentedRing(ring.free, (), DEGREVLEX, ring.base_vars),
                     list(ideal.generators) + list(ring.relations))
    polys = list(ideal.generators) + list(ring.relations)
    kept = _elimination_gb(ring, polys, variables)
    rest = [n for n in ring.names if n not in set(variables)]
    sub = PresentedRing(rest, (), DEGREVLEX, [b for b in ring.base_vars if b in rest])
    return Ideal(sub, [p.to_ring(sub.free) for p in kept])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    (t,) = ring.free.fresh_names("s_", 1)
    big = ring.extend([t])
    tv = big.var(t)
    polys = [tv * big(g) for g in I.generators] + [(1 - tv) * big(g) for g in J.generators]
    polys += [big(r) for r in ring.relations]
    kept = _elimination_gb(big, polys, [t])
    return Ideal(ring, [p.to_ring(ring.free) for p in kept])


def ideal_quotient(ideal: Ideal, f) -> Ideal:
    """``(I : f) = {g : g f in I}``, via ``I`` intersected with ``<f>``."""
    ring = ideal.ring
    f = ring.nf(f)
    if not f:
        raise ValueError("ideal quotient by zero is undefined")
    # (I + L) meets <f> in the free ring; every element there is a multiple of f
    (t,) = ring.free.fresh_names("s_", 1)
    big = ring.extend([t])
    tv = big.var(t)
    polys = [tv * big(g) for g in list(ideal.generators) + list(ring.relations)]
    polys.append((1 - tv) * big(f))
    kept = _elimination_gb(big, polys, [t])
    gens = []
    for g in (p.to_ring(ring.free) for p in kept):
        q = exact_division(g, f)
        if q is None:
            raise AssertionError("intersection element not divisible by f")
        gens.append(q)
    return Ideal(ring, gens)


def saturate(ideal: Ideal, x) -> tuple[Ideal, int]:
    """``(I : x^inf)`` by the inverse-variable trick, plus the stabilizing exponent.

    The exponent is the least ``k`` with ``x^k * (I : x^inf)`` inside ``I``,
    so ``k`` successive quotients by ``x`` reach the saturation.
    """
    ring = ideal.ring
    x = ring.nf(x)
    if not x:
        raise ValueError("saturation by zero is undefined")
    (w,) = ring.free.fresh_names("w_", 1)
    big = ring.extend([w])
    polys = [big(g) for g in ideal.generators] + [big(r) for r in ring.relations]
    polys.append(big.var(w) * big(x) - 1)
    kept = _elimination_gb(big, polys, [w])
    sat = Ideal(ring, [p.to_ring(ring.free) for p in kept])
    k = 0
    for g in sat.generators:
        j = 0
        h = g
        while not ideal.contains(h):
            h = h * x
            j += 1
        k = max(k, j)
    return sat, k


def krull_dim(ideal: Ideal) -> int:
    """Dimension of ``ring / ideal`` from maximal independent sets of the LT ideal.

    Returns :data:`EMPTY_DIM` for the unit ideal.
    """
    basis = ideal.groebner(DEGREVLEX)
    n = ideal.ring.free.nvars
    if any(p.is_constant() for p in basis):
        return EMPTY_DIM
    supports = [frozenset(i for i, x in enumerate(p.leading_term(DEGREVLEX)[0]) if x)
                for p in basis]
    return max_independent_size(n, supports)


def max_independent_size(n: int, supports: Sequence[frozenset]) -> int:
    """Largest variable set containing no leading-monomial support."""
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


class RingMap:
    """A ring homomorphism given by images of the source variables.

    Images are normal forms in ``target``; well-definedness (every source
    relation maps to zero) is checked at construction.
    """

    def __init__(self, source: PresentedRing, target: PresentedRing,
                 images: Mapping[str, object] | Sequence, base_fixing: bool = False,
                 check: bool = True):
        self.source = source
        self.target = target
        if isinstance(images, Mapping):
            unknown = set(images) - set(source.names)
            if unknown:
                raise ValueError(f"images given for unknown variables {sorted(unknown)}")
            seq = []
            for n in source.names:
                if n in images:
                    seq.append(images[n])
                elif n in target.free.index:
                    seq.append(target.var(n))
                else:
                    raise ValueError(f"no image for variable {n!r}")
        else:
            seq = list(images)
        if len(seq) != len(source.names):
            raise ValueError("need one image per source variable")
        self.images = tuple(target.nf(target.free(g)) for g in seq)
        self.base_fixing = base_fixing
        if check:
            if base_fixing:
                for b in source.base_vars:
                    if not target.equal(self.image(b), target.var(b)):
                        raise ValueError(f"map does not fix base variable {b}")
            bad = self.first_bad_relation()
            if bad is not None:
                raise ValueError(f"map is not well defined: relation {bad} is not sent to 0")

    def image(self, name: str) -> Poly:
        return self.images[self.source.free.index[name]]

    def first_bad_relation(self):
        for r in self.source.relations:
            if not self.target.is_zero(self.apply_free(r)):
                return r
        return None

    def apply_free(self, f) -> Poly:
        f = self.source.free(f)
        return f.substitute(list(self.images), self.target.free)

    def __call__(self, f) -> Poly:
        return self.target.nf(self.apply_free(f))

    def compose(self, inner: "RingMap") -> "RingMap":
        """``self`` after ``inner``."""
        return RingMap(inner.source, self.target, [self(g) for g in inner.images],
                       check=False)

    def is_endomorphism(self) -> bool:
        return self.source.names == self.target.names

    def __repr__(self):
        body = ", ".join(f"{n} -> {g}" for n, g in zip(self.source.names, self.images))
        return f"RingMap({body})"
