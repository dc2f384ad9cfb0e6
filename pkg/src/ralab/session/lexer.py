"""Tokenizer shared by the polynomial and session parsers."""

from __future__ import annotations

from dataclasses import dataclass


class SessionError(Exception):
    """Base class for session-language errors."""


class SessionSyntaxError(SessionError):
    """A syntax error at a 1-based ``line``/``col`` with the set of expected tokens."""

    def __init__(self, message: str, line: int, col: int, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        self.message = message
        where = f"line {line}, column {col}"
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{extra}")


@dataclass(frozen=True)
class Token:
    kind: str      # NAME, INT, SYM, EOF
    text: str
    line: int
    col: int
    pos: int


_SYMBOLS = ("->", "+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}", ",", "=", ":")


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    line = 1
    col = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start, scol = i, col
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            while i < n and text[i].isascii() and (text[i].isalnum() or text[i] in "_'"):
                i += 1
            out.append(Token("NAME", text[start:i], line, scol, start))
        elif ch.isascii() and ch.isdigit():
            while i < n and text[i].isascii() and text[i].isdigit():
                i += 1
            out.append(Token("INT", text[start:i], line, scol, start))
        else:
            for s in _SYMBOLS:
                if text.startswith(s, i):
                    i += len(s)
                    out.append(Token("SYM", s, line, scol, start))
                    break
            else:
                raise SessionSyntaxError(f"unexpected character {ch!r}", line, col)
        col += i - start
    out.append(Token("EOF", "", line, col, n))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek
        return t.kind in ("SYM", "NAME") and t.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def fail(self, message: str, expected=()):
        t = self.peek
        got = "end of input" if t.kind == "EOF" else repr(t.text)
        raise SessionSyntaxError(f"{message}, got {got}", t.line, t.col, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}", [repr(text)])
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.peek.kind != kind:
            self.fail(f"expected {what}", [what])
        return self.next()
