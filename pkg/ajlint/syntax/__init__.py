from ajlint.syntax.nodes import SyntaxTree, shape, walk
from ajlint.syntax.parser import parse_program, parse_source
from ajlint.syntax.tokens import Span, Token, TokenKind, tokenize
from ajlint.syntax.unparse import unparse

__all__ = [
    "Span", "SyntaxTree", "Token", "TokenKind",
    "parse_program", "parse_source", "shape", "tokenize", "unparse", "walk",
]
