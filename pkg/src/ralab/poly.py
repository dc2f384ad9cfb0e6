"""Sparse multivariate polynomials over the rationals.

A :class:`PolyRing` is a variable context (ordered names).  A :class:`Poly`
stores its terms as a dict mapping exponent tuples to nonzero rationals.
Quotient rings, normal forms and ideals live in :mod:`ralab.ideals`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction

_SCALARS = (int, Fraction, type(QQ(1)))


def qq(x) -> "QQ":
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to the coefficient type."""
    if isinstance(x, str):
        return QQ(Fraction(x))
    return QQ(x)


def format_rational(c) -> str:
    c = qq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class MonomialOrder:
    """A monomial order on exponent tuples.

    ``degrevlex`` and ``lex`` compare variables in declaration order.  A
    ``block`` order puts the variables listed in ``block`` in a first block
    (compared by degrevlex) that dominates the remaining variables, which is
    what elimination needs.
    """

    __slots__ = ("kind", "block", "key")

    def __init__(self, kind: str = "degrevlex", block: Iterable[int] = ()):
        if kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = tuple(sorted(set(block)))
        if kind == "lex":
            self.key = _lex_key
        elif kind == "degrevlex":
            self.key = _grevlex_key
        else:
            first = self.block
            rest_of = frozenset(first)

            def key(e):
                a = [e[i] for i in first]
                b = [x for i, x in enumerate(e) if i not in rest_of]
                return (sum(a), tuple(-x for x in reversed(a)),
                        sum(b), tuple(-x for x in reversed(b)))

            self.key = key

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def degrevlex(cls) -> "MonomialOrder":
        return cls("degrevlex")

    @classmethod
    def elimination(cls, indices: Iterable[int]) -> "MonomialOrder":
        return cls("block", indices)

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.block == other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder.elimination({list(self.block)})"
        return f"MonomialOrder.{self.kind}()"


def _lex_key(e):
    return e


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


DEGREVLEX = MonomialOrder.degrevlex()


class PolyRing:
    """Free polynomial ring Q[names]; the variable context for :class:`Poly`."""

    __slots__ = ("names", "nvars", "index", "_zero_exp")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({list(self.names)})"

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            return x.to_ring(self)
        if isinstance(x, str):
            from ralab.session.polyparse import parse_poly
            return parse_poly(x, self)
        return self.constant(x)

    def constant(self, c) -> "Poly":
        c = qq(c)
        return Poly(self, {self._zero_exp: c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.constant(1)

    def var(self, name: str) -> "Poly":
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): QQ(1)})

    def gens(self) -> list["Poly"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        c = qq(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def extend(self, names: Iterable[str]) -> "PolyRing":
        return PolyRing(self.names + tuple(names))

    def fresh_names(self, stem: str, count: int, avoid: Iterable[str] = ()) -> list[str]:
        """Return ``count`` names built from ``stem`` that clash with nothing here."""
        taken = set(self.names) | set(avoid)
        out = []
        i = 1
        while len(out) < count:
            cand = stem if (count == 1 and i == 1) else f"{stem}{i}"
            if cand not in taken:
                out.append(cand)
                taken.add(cand)
            i += 1
        return out


class Poly:
    """An element of a free polynomial ring; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object] | None = None):
        self.ring = ring
        self.terms = dict(terms) if terms else {}

    # -- construction helpers -------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, _SCALARS):
            return self.ring.constant(other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            c = qq(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.ring, mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            c = qq(other)
            if not c:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = self.ring.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get(self.ring._zero_exp, QQ(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.names[i])
        return used

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        degs = {_wdeg(e, weights) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self, weights: Sequence[int] | None = None) -> dict[int, "Poly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(_wdeg(e, weights), {})[e] = c
        return {d: Poly(self.ring, t) for d, t in sorted(parts.items())}

    def truncate(self, n: int) -> "Poly":
        """Drop every term of total degree > n."""
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) <= n})

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_coeff(self, order: MonomialOrder = DEGREVLEX):
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Poly":
        if not self.terms:
            return self
        return self * (1 / self.leading_coeff(order))

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), QQ(0))

    def coeffs_in(self, name: str) -> dict[int, "Poly"]:
        """Split as a polynomial in one variable: ``{power: coefficient}``."""
        i = self.ring.index[name]
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly(self.ring, t) for k, t in sorted(out.items())}

    # -- calculus and substitution -------------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                t[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly(self.ring, t)

    def to_ring(self, ring: PolyRing) -> "Poly":
        """Re-express in another variable context, matching variables by name."""
        if ring == self.ring:
            return self if ring is self.ring else Poly(ring, self.terms)
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(ring.index.get(n))
        t = {}
        for e, c in self.terms.items():
            new = [0] * ring.nvars
            for i, x in enumerate(e):
                if x:
                    j = pos[i]
                    if j is None:
                        raise ValueError(
                            f"variable {self.ring.names[i]} not in {ring.names}")
                    new[j] = x
            t[tuple(new)] = c
        return Poly(ring, t)

    def substitute(self, images: Mapping[str, "Poly"] | Sequence["Poly"],
                   ring: PolyRing | None = None, truncate: int | None = None) -> "Poly":
        """Evaluate at polynomial images of the variables.

        ``images`` is either a sequence aligned with the variables or a mapping
        by name (missing names map to themselves, which requires the target
        ring to contain them).  ``truncate`` drops terms above that total degree
        after every multiplication.
        """
        if isinstance(images, Mapping):
            target = ring
            if target is None:
                given = [v for v in images.values() if isinstance(v, Poly)]
                target = given[0].ring if given else self.ring
            images = [images[n] if n in images else target.var(n) for n in self.ring.names]
        images = list(images)
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = ring or (images[0].ring if images else self.ring)
        images = [g if isinstance(g, Poly) else target.constant(g) for g in images]
        cache: list[dict[int, dict]] = [dict() for _ in images]

        def power(i, k):
            got = cache[i].get(k)
            if got is None:
                if k == 1:
                    got = images[i].terms
                else:
                    half = power(i, k // 2)
                    got = mul_terms(half, half, truncate)
                    if k % 2:
                        got = mul_terms(got, images[i].terms, truncate)
                cache[i][k] = got
            return got

        acc: dict = {}
        zero = target._zero_exp
        for e, c in self.terms.items():
            term = {zero: c}
            for i, k in enumerate(e):
                if k:
                    term = mul_terms(term, power(i, k), truncate)
                    if not term:
                        break
            for m, v in term.items():
                s = acc.get(m, 0) + v
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return Poly(target, acc)

    # -- printing ------------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}"
                for n, k in zip(self.ring.names, e) if k)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _wdeg(e, weights):
    if weights is None:
        return sum(e)
    return sum(w * x for w, x in zip(weights, e))


def mul_terms(a: dict, b: dict, truncate: int | None = None) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for e1, c1 in a.items():
        d1 = sum(e1) if truncate is not None else 0
        for e2, c2 in b.items():
            if truncate is not None and d1 + sum(e2) > truncate:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def monomials_upto(nvars: int, degree: int) -> list[tuple]:
    """All exponent tuples of total degree <= degree, highest degree first."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for k in range(left, -1, -1):
            rec(prefix + (k,), left - k, slots - 1)

    for d in range(degree, -1, -1):
        if nvars == 0:
            if d == 0:
                out.append(())
            continue
        rec((), d, nvars)
    return out
