"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ("+" | "-")? term (("+" | "-") term)*
    term   := factor (("*" factor) | ("/" factor))*
    factor := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Division is only by nonzero constants.  Parsing yields a name-keyed sparse
form (:class:`Expr`) that needs no ring; :func:`parse_poly` then places it in
a :class:`~ralab.poly.PolyRing`.
"""

from __future__ import annotations

from ralab.poly import QQ, Poly, PolyRing, format_rational, qq
from ralab.session.lexer import SessionSyntaxError, TokenStream, tokenize

MAX_POWER = 64
MAX_TERMS = 20000
MAX_DEPTH = 100


class Expr:
    """A polynomial as ``{((name, exp), ...): coeff}`` with sorted, positive exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c):
        return cls({(): qq(c)})

    @classmethod
    def var(cls, name):
        return cls({((name, 1),): QQ(1)})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Expr(t)

    def __neg__(self):
        return Expr({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                d = dict(k1)
                for n, e in k2:
                    d[n] = d.get(n, 0) + e
                k = tuple(sorted(d.items()))
                t[k] = t.get(k, 0) + v1 * v2
        return Expr(t)

    def is_constant(self):
        return all(k == () for k in self.terms)

    def constant(self):
        return self.terms.get((), QQ(0))

    def variables(self) -> set[str]:
        return {n for k in self.terms for n, _ in k}

    def __eq__(self, other):
        return isinstance(other, Expr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_poly(self, ring: PolyRing) -> Poly:
        t = {}
        for k, v in self.terms.items():
            e = [0] * ring.nvars
            for n, p in k:
                e[ring.index[n]] += p
            e = tuple(e)
            t[e] = t.get(e, 0) + v
        return Poly(ring, {e: c for e, c in t.items() if c})

    @classmethod
    def from_poly(cls, p: Poly) -> "Expr":
        t = {}
        for e, c in p.terms.items():
            t[tuple((n, x) for n, x in zip(p.ring.names, e) if x)] = c
        return cls({tuple(sorted(k)): v for k, v in t.items()})

    def __str__(self):
        if not self.terms:
            return "0"

        def key(item):
            k = item[0]
            return (-sum(e for _, e in k), k)

        parts = []
        for k, c in sorted(self.terms.items(), key=key):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in k)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if parts:
                parts.append((" - " if neg else " + ") + body)
            else:
                parts.append(("-" if neg else "") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Expr({str(self)!r})"


def _check_size(e: Expr, tok) -> Expr:
    if len(e.terms) > MAX_TERMS:
        raise SessionSyntaxError(f"polynomial has more than {MAX_TERMS} terms", tok.line, tok.col)
    return e


def parse_expr_tokens(ts: TokenStream, depth: int = 0) -> Expr:
    sign = None
    if ts.at("+") or ts.at("-"):
        sign = ts.next().text
    acc = _term(ts, depth)
    if sign == "-":
        acc = -acc
    while ts.at("+") or ts.at("-"):
        op = ts.next().text
        t = _term(ts, depth)
        acc = acc + t if op == "+" else acc - t
    return acc


def _term(ts, depth):
    acc = _factor(ts, depth)
    while ts.at("*") or ts.at("/"):
        op = ts.next()
        f = _factor(ts, depth)
        if op.text == "*":
            acc = _check_size(acc * f, op)
        else:
            if not f.is_constant() or not f.constant():
                raise SessionSyntaxError("division only by a nonzero constant",
                                         op.line, op.col)
            acc = acc * Expr.const(1 / f.constant())
    return acc


def _factor(ts, depth):
    base = _atom(ts, depth)
    if ts.at("^"):
        hat = ts.next()
        tok = ts.expect_kind("INT", "integer exponent")
        k = int(tok.text)
        if k > MAX_POWER:
            raise SessionSyntaxError(f"exponent {k} exceeds {MAX_POWER}", tok.line, tok.col)
        out = Expr.const(1)
        for _ in range(k):
            out = _check_size(out * base, hat)
        return out
    return base


def _atom(ts, depth):
    t = ts.peek
    if t.kind == "INT":
        ts.next()
        return Expr.const(int(t.text))
    if t.kind == "NAME":
        ts.next()
        return Expr.var(t.text)
    if ts.at("("):
        if depth >= MAX_DEPTH:
            raise SessionSyntaxError("expression nested too deeply", t.line, t.col)
        ts.next()
        e = parse_expr_tokens(ts, depth + 1)
        ts.expect(")")
        return e
    ts.fail("expected a number, variable or '('", ["INT", "NAME", "'('"])


def parse_expr(text: str) -> Expr:
    ts = TokenStream(tokenize(text))
    e = parse_expr_tokens(ts)
    if ts.peek.kind != "EOF":
        ts.fail("unexpected trailing input", ["'+'", "'-'", "'*'", "'/'", "'^'"])
    return e


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parse ``text`` as an element of ``ring``; unknown names are an error."""
    e = parse_expr(text)
    unknown = e.variables() - set(ring.names)
    if unknown:
        raise ValueError(f"unknown variable(s) {sorted(unknown)} for ring {list(ring.names)}")
    return e.to_poly(ring)
