"""The ``.ral`` session language: lexer, parser, printer and task runner."""

from ralab.session.lexer import SessionSyntaxError, SessionError
from ralab.session.polyparse import parse_poly, parse_expr

__all__ = ["SessionSyntaxError", "SessionError", "parse_poly", "parse_expr"]
