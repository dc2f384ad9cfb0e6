"""Truncated power series and coordinate straightening of idempotent jet maps.

A jet of order ``N`` is a polynomial with every term of total degree above
``N`` dropped.  A :class:`JetMap` sends each variable to a jet without
constant term, so it preserves the maximal ideal and composition is well
defined modulo degree ``N + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ralab.linalg import inverse, left_kernel, rank, row_space
from ralab.poly import Poly, PolyRing, mul_terms
from ralab.report import Report, check

DEFAULT_ORDER = 6


class NotACoordinateSystem(ValueError):
    """The linear part of a jet map is singular."""


class JetIdempotencyError(ValueError):
    pass


class Jet:
    """A polynomial modulo terms of total degree > ``N``."""

    __slots__ = ("poly", "N")

    def __init__(self, poly: Poly, N: int):
        self.poly = poly.truncate(N)
        self.N = N

    @property
    def ring(self):
        return self.poly.ring

    def _other(self, o):
        if isinstance(o, Jet):
            if o.N != self.N:
                raise ValueError("jet orders differ")
            return o.poly
        return self.ring(o) if not isinstance(o, Poly) else o

    def __add__(self, o):
        return Jet(self.poly + self._other(o), self.N)

    __radd__ = __add__

    def __sub__(self, o):
        return Jet(self.poly - self._other(o), self.N)

    def __neg__(self):
        return Jet(-self.poly, self.N)

    def __mul__(self, o):
        other = self._other(o)
        return Jet(Poly(self.ring, mul_terms(self.poly.terms, other.terms, self.N)), self.N)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Jet) and o.N == self.N and o.poly == self.poly

    def __hash__(self):
        return hash((self.poly, self.N))

    def __repr__(self):
        return f"Jet({self.poly}, N={self.N})"


class JetMap:
    """Images of the variables of ``ring`` as jets of order ``N`` with zero constant term."""

    def __init__(self, ring: PolyRing, images: Sequence | dict, N: int = DEFAULT_ORDER):
        self.ring = ring
        self.N = N
        if isinstance(images, dict):
            seq = [images.get(n, ring.var(n)) for n in ring.names]
        else:
            seq = list(images)
        if len(seq) != ring.nvars:
            raise ValueError("need one image per variable")
        imgs = []
        for n, g in zip(ring.names, seq):
            g = g if isinstance(g, Poly) else ring(g)
            g = g.to_ring(ring).truncate(N)
            if g.constant_coeff():
                raise ValueError(f"image of {n} has a constant term")
            imgs.append(g)
        self.images = tuple(imgs)

    @classmethod
    def identity(cls, ring: PolyRing, N: int = DEFAULT_ORDER) -> "JetMap":
        return cls(ring, ring.gens(), N)

    def apply(self, f: Poly) -> Poly:
        """Substitute the images into ``f`` and truncate."""
        return f.substitute(list(self.images), self.ring, truncate=self.N).truncate(self.N)

    def linear_part(self) -> list[list]:
        n = self.ring.nvars
        rows = []
        for g in self.images:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(g.coefficient(e))
            rows.append(row)
        return rows

    def __eq__(self, other):
        return (isinstance(other, JetMap) and self.N == other.N
                and self.ring == other.ring and self.images == other.images)

    def __hash__(self):
        return hash((self.images, self.N))

    def __repr__(self):
        body = ", ".join(f"{n} -> {g}" for n, g in zip(self.ring.names, self.images))
        return f"JetMap({body}; N={self.N})"


def jet_compose(outer: JetMap, inner: JetMap) -> JetMap:
    """Component ``i`` is ``outer_i`` evaluated at the images of ``inner``."""
    if outer.N != inner.N or outer.ring != inner.ring:
        raise ValueError("jet maps must share order and variables")
    return JetMap(outer.ring, [inner.apply(g) for g in outer.images], outer.N)


def invert_coords(m: JetMap) -> JetMap:
    """The jet map ``g`` with ``m_i(g) = X_i`` for all ``i``, modulo degree ``N + 1``.

    Writing ``m = L X + h`` with ``h`` of order >= 2, iterate
    ``g <- L^{-1} (X - h(g))``; each pass fixes one more degree.
    """
    ring = m.ring
    n = ring.nvars
    L = m.linear_part()
    Linv = inverse(L) if n else []
    if Linv is None:
        raise NotACoordinateSystem(f"linear part has rank {rank(L)} < {n}")
    lin = [Poly(ring, {e: c for e, c in g.terms.items() if sum(e) == 1}) for g in m.images]
    h = [g - l for g, l in zip(m.images, lin)]
    X = ring.gens()

    def apply_Linv(vec):
        out = []
        for i in range(n):
            p = ring.zero()
            for j in range(n):
                if Linv[i][j]:
                    p = p + vec[j] * Linv[i][j]
            out.append(p)
        return out

    g = apply_Linv(X)
    for _ in range(m.N):
        gm = JetMap(ring, g, m.N)
        hg = [gm.apply(hi) for hi in h]
        g = apply_Linv([x - v for x, v in zip(X, hg)])
    inv = JetMap(ring, g, m.N)
    ident = JetMap.identity(ring, m.N)
    if jet_compose(m, inv) != ident or jet_compose(inv, m) != ident:
        raise AssertionError("reversion failed to converge")
    return inv


@dataclass
class JetSplit:
    d: int
    P: list[list]
    Z: list[Poly]
    Y: list[Poly]
    image_in_Y: list[Poly]
    report: Report


def _forms(ring, rows):
    out = []
    for r in rows:
        p = ring.zero()
        for c, x in zip(r, ring.gens()):
            if c:
                p = p + x * c
        out.append(p)
    return out


def jet_decompose(pi: JetMap, N: int | None = None) -> JetSplit:
    """Coordinates ``Y`` in which an idempotent jet map becomes a coordinate projection.

    ``Y_i = pi(Z_i)`` for linear forms ``Z_i`` spanning the image of the
    linear part and ``Y_i = Z_i - pi(Z_i)`` for ``Z_i`` spanning its kernel.
    The report certifies that ``Y`` is a coordinate system, that ``pi`` fixes
    ``Y_1..Y_d`` and kills the rest, and that every ``pi(X_j)`` is a series
    in ``Y_1..Y_d`` alone.
    """
    if N is not None and N != pi.N:
        pi = JetMap(pi.ring, pi.images, N)
    ring = pi.ring
    n = ring.nvars
    if jet_compose(pi, pi) != pi:
        raise JetIdempotencyError("pi o pi differs from pi modulo the truncation")
    P = pi.linear_part()
    top = row_space(P)
    bottom = left_kernel(P)
    d = len(top)
    Z = _forms(ring, top) + _forms(ring, bottom)
    Y = [pi.apply(z) for z in Z[:d]] + [z - pi.apply(z) for z in Z[d:]]
    checks = []
    ymap = JetMap(ring, Y, pi.N)
    try:
        back = invert_coords(ymap)
        checks.append(check("Y is a coordinate system", True))
    except NotACoordinateSystem as e:
        back = None
        checks.append(check("Y is a coordinate system", False, [("reason", str(e))]))
    bad = [i for i in range(d) if pi.apply(Y[i]) != Y[i]]
    checks.append(check("pi(Y_i) = Y_i for i <= d", not bad,
                        [("witness", f"Y{bad[0] + 1}")] if bad else []))
    bad = [i for i in range(d, n) if pi.apply(Y[i])]
    checks.append(check("pi(Y_i) = 0 for i > d", not bad,
                        [("witness", f"Y{bad[0] + 1}")] if bad else []))
    yn = [f"Y{i + 1}" for i in range(n)]
    yring = PolyRing(yn)
    image_in_Y = []
    outside = None
    if back is not None:
        # X_j = back_j(Y), so pi(X_j) = pi_j(back(Y)); rename X_i -> Y_i
        for name, g in zip(ring.names, jet_compose(pi, back).images):
            q = Poly(yring, g.terms)
            image_in_Y.append(q)
            if outside is None and q.support() - set(yn[:d]):
                outside = (name, q)
    checks.append(check("pi(X_j) depends on Y_1..Y_d only", back is not None and outside is None,
                        [("witness", f"pi({outside[0]}) = {outside[1]}")] if outside else []))
    status = "pass" if all(c.passed for c in checks) else "fail"
    wit = [("N", pi.N), ("d", d)] + [(yn[i], Y[i]) for i in range(n)]
    wit.append(("A", "Q[[" + ", ".join(yn[:d]) + "]]"))
    if status == "fail":
        wit.append(("failed", ", ".join(c.id for c in checks if not c.passed)))
    rep = Report("jet-decompose", "jet-decompose", status, wit, checks=checks,
                 notes=["flatness of B over A follows from the coordinate form; "
                        "not checked separately"])
    return JetSplit(d, P, Z, Y, image_in_Y, rep)


def conjugated_jet_projection(ring: PolyRing, coords: JetMap, d: int, fs: list[Poly]) -> JetMap:
    """``pi = s^{-1} pi0 s`` for a jet coordinate change ``s`` (given by ``coords``).

    In coordinates ``Y = coords(X)`` the map ``pi0`` fixes ``Y_1..Y_d`` and
    sends ``Y_i`` (``i > d``) to ``fs[i - d]`` written in the first ``d``
    variables.  Builds test instances with known rank.
    """
    N = coords.N
    n = ring.nvars
    back = invert_coords(coords)
    # pi0 as a jet map in Y-coordinates (variables of ring stand for Y)
    pi0 = JetMap(ring, list(ring.gens()[:d]) +
                 [f.substitute(ring.gens()[:d] + [ring.zero()] * (n - d), ring) for f in fs], N)
    # pi(X) = back(pi0(coords(X)))
    return jet_compose(jet_compose(back, pi0), coords)
