"""Parser for ``.ral`` session files.

::

    file       := decl*
    decl       := ring | subalg | derivation | map | ideal | task
    ring       := "ring" NAME "=" "Q" "[" names "]" ("/" "(" polys ")")? ("base" names)?
    subalg     := "subalgebra" NAME "of" NAME "=" "[" polys "]"
    derivation := "derivation" NAME "on" NAME "{" (VAR "->" poly),* "}"
    map        := "map" NAME ":" NAME "->" NAME "{" (VAR "->" poly),* "}"
    ideal      := "ideal" NAME "in" NAME "=" "(" polys ")"
    task       := "task" (NAME ":")? KIND "(" (arg ("," arg)*)? ")"
    arg        := (NAME "=")? (poly | "[" polys "]")

``#`` starts a comment.  After parsing, every reference is resolved and
every polynomial is checked against the variables of its ring.
"""

from __future__ import annotations

from ralab.poly import qq
from ralab.session import polyparse
from ralab.session.ast import (DerivationDecl, IdealDecl, MapDecl, RingDecl, SessionAst, Span,
                               SubalgebraDecl, TaskDecl)
from ralab.session.lexer import SessionSyntaxError, TokenStream, tokenize
from ralab.session.polyparse import Expr

KEYWORDS = ("ring", "subalgebra", "derivation", "map", "ideal", "task")

# positional parameter types per task kind (alternatives tried in order) and keywords
SIGNATURES: dict[str, tuple[list[list[str]], dict[str, str]]] = {
    "check-retraction": ([["map"]], {}),
    "lnd": ([["derivation"]], {"cap": "int"}),
    "exp": ([["derivation"], ["subalgebra", "poly", "poly"]], {"cap": "int", "m": "int"}),
    "invariants": ([["derivation"]], {"degree": "int"}),
    "kernel": ([["derivation"]], {"degree": "int"}),
    "graded-decompose": ([["map"]], {}),
    "jet-decompose": ([["map"]], {"order": "int"}),
    "patch-verify": ([["subalgebra", "map", "poly", "poly", "poly", "poly"]],
                     {"N": "int", "normalize": "int"}),
    "prime-image": ([["map", "poly"]], {}),
    "local-report": ([["ring"]], {"candidate": "poly"}),
    "member": ([["poly", "subalgebra"]], {}),
    "contract": ([["ideal", "subalgebra"]], {}),
    "trdeg": ([["subalgebra"]], {}),
    "invertible": ([["ideal"]], {"witness": "poly", "degree": "int"}),
    "mu": ([["ideal"]], {}),
    "sym": ([["ideal"]], {}),
}
TASK_KINDS = tuple(SIGNATURES)

_DECL_TYPE = {RingDecl: "ring", SubalgebraDecl: "subalgebra", DerivationDecl: "derivation",
              MapDecl: "map", IdealDecl: "ideal"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.ts = TokenStream(tokenize(text))

    def poly(self) -> Expr:
        return polyparse.parse_expr_tokens(self.ts)

    def polys(self, close: str) -> tuple[Expr, ...]:
        out = []
        if self.ts.at(close):
            return ()
        out.append(self.poly())
        while self.ts.accept(","):
            if self.ts.at(close):
                break
            out.append(self.poly())
        return tuple(out)

    def names(self) -> tuple[str, ...]:
        out = [self.ts.expect_kind("NAME", "NAME").text]
        while self.ts.accept(","):
            out.append(self.ts.expect_kind("NAME", "NAME").text)
        return tuple(out)

    def name(self) -> str:
        return self.ts.expect_kind("NAME", "NAME").text

    def images(self):
        self.ts.expect("{")
        out = []
        while not self.ts.at("}"):
            var = self.name()
            self.ts.expect("->")
            out.append((var, self.poly()))
            if not self.ts.accept(","):
                break
        self.ts.expect("}")
        return tuple(out)

    # -- declarations ------------------------------------------------------------
    def span(self, tok, end_pos):
        return Span(tok.line, tok.col, tok.pos, end_pos)

    def file(self) -> SessionAst:
        decls = []
        while self.ts.peek.kind != "EOF":
            decls.append(self.decl())
        return SessionAst(tuple(decls))

    def decl(self):
        ts = self.ts
        t = ts.peek
        if t.kind != "NAME" or t.text not in KEYWORDS:
            ts.fail("expected a declaration", [repr(k) for k in KEYWORDS])
        ts.next()
        kw = t.text
        if kw == "ring":
            name = self.name()
            ts.expect("=")
            q = ts.expect_kind("NAME", "'Q'")
            if q.text != "Q":
                raise SessionSyntaxError("only the rationals Q are supported", q.line, q.col, ["'Q'"])
            ts.expect("[")
            variables = self.names()
            ts.expect("]")
            rels = ()
            if ts.accept("/"):
                ts.expect("(")
                rels = self.polys(")")
                ts.expect(")")
            base = ()
            if ts.accept("base"):
                base = self.names()
            node = RingDecl(name, variables, rels, base, None)
        elif kw == "subalgebra":
            name = self.name()
            ts.expect("of")
            ring = self.name()
            ts.expect("=")
            ts.expect("[")
            gens = self.polys("]")
            ts.expect("]")
            node = SubalgebraDecl(name, ring, gens, None)
        elif kw == "derivation":
            name = self.name()
            ts.expect("on")
            ring = self.name()
            node = DerivationDecl(name, ring, self.images(), None)
        elif kw == "map":
            name = self.name()
            ts.expect(":")
            src = self.name()
            ts.expect("->")
            tgt = self.name()
            node = MapDecl(name, src, tgt, self.images(), None)
        elif kw == "ideal":
            name = self.name()
            ts.expect("in")
            ring = self.name()
            ts.expect("=")
            ts.expect("(")
            gens = self.polys(")")
            ts.expect(")")
            node = IdealDecl(name, ring, gens, None)
        else:
            node = self.task()
        end = self.ts.tokens[self.ts.i - 1]
        return _with_span(node, self.span(t, end.pos + len(end.text)))

    def task(self):
        ts = self.ts
        label = None
        first = self.kind_name()
        if ts.accept(":"):
            label = first
            first = self.kind_name()
        kind = first
        if kind not in SIGNATURES:
            t = ts.tokens[ts.i - 1]
            raise SessionSyntaxError(f"unknown task kind {kind!r}", t.line, t.col,
                                     [repr(k) for k in TASK_KINDS])
        ts.expect("(")
        args, kwargs = [], []
        while not ts.at(")"):
            if (ts.peek.kind == "NAME" and ts.tokens[ts.i + 1].kind == "SYM"
                    and ts.tokens[ts.i + 1].text == "="):
                key = ts.next().text
                ts.next()
                kwargs.append((key, self.arg()))
            else:
                if kwargs:
                    ts.fail("positional argument after keyword argument")
                args.append(self.arg())
            if not ts.accept(","):
                break
        ts.expect(")")
        return TaskDecl(kind, tuple(args), tuple(kwargs), label, None)

    def kind_name(self) -> str:
        parts = [self.name()]
        while self.ts.at("-") and self.ts.tokens[self.ts.i + 1].kind == "NAME" \
                and self.ts.peek.pos + 1 == self.ts.tokens[self.ts.i + 1].pos:
            self.ts.next()
            parts.append(self.name())
        return "-".join(parts)

    def arg(self):
        if self.ts.accept("["):
            xs = self.polys("]")
            self.ts.expect("]")
            return tuple(xs)
        return self.poly()


def _with_span(node, span):
    return type(node)(**{**{k: getattr(node, k) for k in node.__dataclass_fields__}, "span": span})


# -- validation -------------------------------------------------------------------

def _err(node, message, expected=()):
    sp = node.span
    line, col = (sp.line, sp.col) if sp else (1, 1)
    raise SessionSyntaxError(message, line, col, expected)


def as_ref(e) -> str | None:
    if isinstance(e, Expr) and len(e.terms) == 1:
        (k, c), = e.terms.items()
        if c == 1 and len(k) == 1 and k[0][1] == 1:
            return k[0][0]
    return None


def as_int(e) -> int | None:
    if isinstance(e, Expr) and e.is_constant():
        c = qq(e.constant())
        if c.denominator == 1:
            return int(c.numerator)
    return None


def ring_variables(named, name: str) -> tuple[str, ...]:
    d = named[name]
    if isinstance(d, RingDecl):
        return d.variables
    if isinstance(d, (SubalgebraDecl, DerivationDecl, IdealDecl)):
        return ring_variables(named, d.ring)
    if isinstance(d, MapDecl):
        return ring_variables(named, d.source)
    raise KeyError(name)


def validate(ast: SessionAst) -> SessionAst:
    named: dict = {}
    for d in ast.declarations:
        if isinstance(d, TaskDecl):
            if d.label is not None:
                if d.label in named:
                    _err(d, f"duplicate name {d.label!r}")
                named[d.label] = d
            _check_task(d, named)
            continue
        if d.name in named:
            _err(d, f"duplicate name {d.name!r}")
        if isinstance(d, RingDecl):
            if len(set(d.variables)) != len(d.variables):
                _err(d, "duplicate variable in ring")
            _vars_ok(d, d.relations, d.variables)
            for b in d.base:
                if b not in d.variables:
                    _err(d, f"base name {b!r} is not a ring variable")
        else:
            refs = {"ring": getattr(d, "ring", None)}
            if isinstance(d, MapDecl):
                refs = {"source": d.source, "target": d.target}
            for r in refs.values():
                want = (RingDecl, SubalgebraDecl) if isinstance(d, IdealDecl) else (RingDecl,)
                if r not in named or not isinstance(named[r], want):
                    _err(d, f"unresolved reference {r!r}")
            if isinstance(d, (SubalgebraDecl, IdealDecl)):
                _vars_ok(d, d.generators, ring_variables(named, d.ring))
            elif isinstance(d, DerivationDecl):
                _images_ok(d, d.images, named[d.ring].variables, named[d.ring].variables)
            elif isinstance(d, MapDecl):
                _images_ok(d, d.images, named[d.source].variables, named[d.target].variables)
        named[d.name] = d
    return ast


def _vars_ok(node, exprs, variables):
    allowed = set(variables)
    for e in exprs:
        bad = e.variables() - allowed
        if bad:
            _err(node, f"unresolved reference {sorted(bad)[0]!r}")


def _images_ok(node, images, keys, variables):
    seen = set()
    for v, e in images:
        if v not in keys:
            _err(node, f"unresolved reference {v!r}")
        if v in seen:
            _err(node, f"duplicate image for {v!r}")
        seen.add(v)
    _vars_ok(node, [e for _, e in images], variables)


def _check_task(t: TaskDecl, named):
    alts, kw = SIGNATURES[t.kind]
    problems = []
    for sig in alts:
        if len(sig) != len(t.args):
            problems.append(f"{t.kind}({', '.join(sig)})")
            continue
        ctx = None
        ok = True
        for typ, a in zip(sig, t.args):
            if typ not in ("poly", "int"):
                r = as_ref(a)
                if r is None or r not in named or _DECL_TYPE.get(type(named[r])) != typ:
                    ok = False
                    break
                if ctx is None:
                    ctx = ring_variables(named, r)
        if not ok:
            problems.append(f"{t.kind}({', '.join(sig)})")
            continue
        for typ, a in zip(sig, t.args):
            if typ == "poly":
                if isinstance(a, tuple):
                    _err(t, "expected a polynomial, got a list")
                _vars_ok(t, [a], ctx or ())
        break
    else:
        _err(t, f"arguments do not match {t.kind}", problems)
    for k, v in t.kwargs:
        if k not in kw:
            _err(t, f"unknown keyword {k!r} for {t.kind}", sorted(kw))
        if kw[k] == "int" and as_int(v) is None:
            _err(t, f"keyword {k!r} needs an integer")
        if kw[k] == "poly":
            ctx = ring_variables(named, as_ref(t.args[0])) if t.args else ()
            _vars_ok(t, [v], ctx)


def parse_session(text: str) -> SessionAst:
    """Parse and validate session text; every error carries a line and column."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SessionSyntaxError(f"input is not UTF-8 ({e.reason})", 1, e.start + 1)
    return validate(_Parser(text).file())
