"""Subalgebras given by generators: membership, contraction, presentation.

Everything goes through the graph ideal ``<t_i - g_i> + relations`` in the
ambient ring extended by one tag per generator, with the non-base ambient
variables eliminated.  Base variables stay alongside the tags, so
``A = R[g_1, ..., g_m]`` is an algebra over the base ring ``R``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ralab import groebner as gb
from ralab.ideals import EMPTY_DIM, Ideal, PresentedRing, eliminate, krull_dim
from ralab.poly import DEGREVLEX, MonomialOrder, Poly, PolyRing


@dataclass(frozen=True)
class MemberResult:
    """Outcome of a membership query; ``expression`` lives in :attr:`SubAlgebra.tag_ring`."""

    member: bool
    expression: Poly | None = None

    def __bool__(self):
        return self.member


@dataclass(frozen=True)
class PresentationResult:
    kernel: Ideal
    dimension: int


class SubAlgebra:
    def __init__(self, ambient: PresentedRing, generators: Iterable, tag_stem: str = "t"):
        self.ambient = ambient
        gens = []
        for g in generators:
            g = ambient.nf(ambient(g))
            if not g:
                raise ValueError("subalgebra generators must be nonzero")
            gens.append(g)
        self.generators = tuple(gens)
        stem = tag_stem
        taken = set(ambient.names)
        while any(f"{stem}{i + 1}" in taken for i in range(len(gens))):
            stem += "_"
        self.tags = tuple(f"{stem}{i + 1}" for i in range(len(gens)))
        self.base_vars = ambient.base_vars
        self.eliminated = ambient.non_base_vars
        self.big = PresentedRing(ambient.free.extend(self.tags), ambient.relations,
                                 DEGREVLEX, ambient.base_vars)
        self.kept_names = self.base_vars + self.tags
        self.tag_ring = PolyRing(self.kept_names)
        idx = [self.big.free.index[n] for n in self.eliminated]
        self.order = MonomialOrder.elimination(idx)
        self.graph = Ideal(self.big, [self.big.var(t) - self.big(g)
                                      for t, g in zip(self.tags, self.generators)])
        self._presentation = None

    def __repr__(self):
        body = ", ".join(str(g) for g in self.generators)
        return f"SubAlgebra([{body}])"

    # -- helpers ----------------------------------------------------------------
    def _kept_only(self, p: Poly) -> bool:
        return not (p.support() & set(self.eliminated))

    def evaluate(self, expression: Poly) -> Poly:
        """Map an element of the tag ring back to the ambient ring."""
        images = {t: g for t, g in zip(self.tags, self.generators)}
        for b in self.base_vars:
            images[b] = self.ambient.var(b)
        return self.ambient.nf(expression.substitute(
            [images[n] for n in self.tag_ring.names], self.ambient.free))

    def contains_generators_of(self, other: "SubAlgebra") -> bool:
        return all(self.member(g).member for g in other.generators)

    # -- operations ---------------------------------------------------------------
    def member(self, f) -> MemberResult:
        """Decide ``f in A``; on success return an expression in the tags.

        The expression is re-evaluated and compared with ``f`` before it is
        returned.
        """
        f = self.ambient.nf(self.ambient(f))
        r = self.graph.normal_form(self.big(f), self.order)
        if not self._kept_only(r):
            return MemberResult(False)
        expr = r.to_ring(self.tag_ring)
        if not self.ambient.equal(self.evaluate(expr), f):
            raise AssertionError("membership expression failed round-trip")
        return MemberResult(True, expr)

    def __contains__(self, f) -> bool:
        return self.member(f).member

    def presentation(self) -> PresentationResult:
        """Kernel of ``base[tags] -> ambient`` and the Krull dimension of the image."""
        if self._presentation is None:
            basis = self.graph.groebner(self.order)
            kept = [p.to_ring(self.tag_ring) for p in basis if self._kept_only(p)]
            ring = PresentedRing(self.tag_ring, (), DEGREVLEX, self.base_vars)
            kernel = Ideal(ring, kept)
            self._presentation = PresentationResult(kernel, krull_dim(kernel))
        return self._presentation

    def presented_ring(self) -> PresentedRing:
        """``base[tags] / kernel``, the algebra ``A`` as a presented ring."""
        k = self.presentation().kernel
        return PresentedRing(self.tag_ring, k.generators, DEGREVLEX, self.base_vars)

    def contract(self, ideal: Ideal) -> Ideal:
        """``I`` intersected with ``A``, as an ideal of :meth:`presented_ring`."""
        if ideal.ring.names != self.ambient.names:
            raise ValueError("ideal does not live in the ambient ring")
        gens = [self.big(g) for g in ideal.generators] + list(self.graph.generators)
        gens += list(self.big.relations)
        basis = gb.buchberger([p.terms for p in gens if p], self.order.key)
        kept = [Poly(self.big.free, p) for p in basis]
        kept = [p.to_ring(self.tag_ring) for p in kept if self._kept_only(p)]
        return Ideal(self.presented_ring(), kept)

    def expand(self, ideal: Ideal) -> Ideal:
        """Extension ``J B`` of an ideal ``J`` of :meth:`presented_ring`."""
        return Ideal(self.ambient, [self.evaluate(g) for g in ideal.generators])

    def trdeg(self) -> int:
        """Transcendence degree over the base (over Q when there is no base)."""
        dim = self.presentation().dimension
        if not self.base_vars:
            return dim
        base = self.ambient.base_ring()
        base_dim = krull_dim(base.relation_ideal)
        if dim == EMPTY_DIM or base_dim == EMPTY_DIM:
            raise ValueError("trdeg of the zero ring is undefined")
        return dim - base_dim

    def algebraic_witness_check(self, f, relation: Poly | str, extra: str = "e") -> str:
        """Check a supplied algebraic relation for ``f`` over ``A``.

        ``relation`` lives in the tag ring extended by ``extra``.  Returns
        ``"algebraic, outside A"``, ``"inside A"`` or ``"witness invalid"``.
        """
        ring = PolyRing(self.kept_names + (extra,))
        rel = ring(relation)
        if not rel:
            raise ValueError("relation must be nonzero")
        f = self.ambient.nf(self.ambient(f))
        images = []
        for n in ring.names:
            if n == extra:
                images.append(f)
            elif n in self.tags:
                images.append(self.generators[self.tags.index(n)])
            else:
                images.append(self.ambient.var(n))
        if not self.ambient.is_zero(rel.substitute(images, self.ambient.free)):
            return "witness invalid"
        if self.member(f):
            return "inside A"
        return "algebraic, outside A"

    def factorial_closure_witness_check(self, a, b) -> str:
        """``"pass"``, ``"fail"`` or ``"vacuous"`` for the pair ``(a, b)``."""
        a = self.ambient(a)
        b = self.ambient(b)
        if self.ambient.is_zero(a * b):
            raise ValueError("a*b must be nonzero")
        if not self.member(a * b):
            return "vacuous"
        return "pass" if self.member(a) and self.member(b) else "fail"


def member(f, A: SubAlgebra) -> MemberResult:
    return A.member(f)


def contract_ideal(I: Ideal, A: SubAlgebra) -> Ideal:
    return A.contract(I)


def presentation(A: SubAlgebra) -> PresentationResult:
    return A.presentation()


def trdeg(A: SubAlgebra) -> int:
    return A.trdeg()


__all__ = ["SubAlgebra", "MemberResult", "PresentationResult", "member",
           "contract_ideal", "presentation", "trdeg", "eliminate"]
