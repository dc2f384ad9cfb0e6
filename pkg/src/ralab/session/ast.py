"""Session syntax tree and its canonical printer.

Spans are kept for error messages but excluded from equality, so
``parse(print(tree)) == tree`` compares content only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ralab.session.polyparse import Expr


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    start: int
    end: int


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple[str, ...]
    relations: tuple[Expr, ...] = ()
    base: tuple[str, ...] = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class SubalgebraDecl:
    name: str
    ring: str
    generators: tuple[Expr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class DerivationDecl:
    name: str
    ring: str
    images: tuple[tuple[str, Expr], ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple[tuple[str, Expr], ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class IdealDecl:
    name: str
    ring: str
    generators: tuple[Expr, ...]
    span: Span | None = _span()


Arg = Union[Expr, tuple]     # a polynomial/reference/integer, or a bracketed list of them


@dataclass(frozen=True)
class TaskDecl:
    kind: str
    args: tuple[Arg, ...] = ()
    kwargs: tuple[tuple[str, Arg], ...] = ()
    label: str | None = None
    span: Span | None = _span()

    def kwarg(self, key, default=None):
        for k, v in self.kwargs:
            if k == key:
                return v
        return default


Decl = Union[RingDecl, SubalgebraDecl, DerivationDecl, MapDecl, IdealDecl, TaskDecl]


@dataclass(frozen=True)
class SessionAst:
    declarations: tuple[Decl, ...]

    def named(self) -> dict[str, Decl]:
        return {d.name: d for d in self.declarations if not isinstance(d, TaskDecl)}

    @property
    def tasks(self) -> list[TaskDecl]:
        return [d for d in self.declarations if isinstance(d, TaskDecl)]


def _polys(xs) -> str:
    return ", ".join(str(x) for x in xs)


def _images(pairs) -> str:
    if not pairs:
        return "{}"
    return "{ " + ", ".join(f"{v} -> {e}" for v, e in pairs) + " }"


def _arg(a) -> str:
    if isinstance(a, tuple):
        return "[" + _polys(a) + "]"
    return str(a)


def print_decl(d: Decl) -> str:
    if isinstance(d, RingDecl):
        s = f"ring {d.name} = Q[{', '.join(d.variables)}]"
        if d.relations:
            s += f" / ({_polys(d.relations)})"
        if d.base:
            s += f" base {', '.join(d.base)}"
        return s
    if isinstance(d, SubalgebraDecl):
        return f"subalgebra {d.name} of {d.ring} = [{_polys(d.generators)}]"
    if isinstance(d, DerivationDecl):
        return f"derivation {d.name} on {d.ring} {_images(d.images)}"
    if isinstance(d, MapDecl):
        return f"map {d.name} : {d.source} -> {d.target} {_images(d.images)}"
    if isinstance(d, IdealDecl):
        return f"ideal {d.name} in {d.ring} = ({_polys(d.generators)})"
    if isinstance(d, TaskDecl):
        parts = [_arg(a) for a in d.args] + [f"{k}={_arg(v)}" for k, v in d.kwargs]
        label = f"{d.label}: " if d.label else ""
        return f"task {label}{d.kind}({', '.join(parts)})"
    raise TypeError(f"unknown declaration {d!r}")


def print_session(ast: SessionAst) -> str:
    return "".join(print_decl(d) + "\n" for d in ast.declarations)
