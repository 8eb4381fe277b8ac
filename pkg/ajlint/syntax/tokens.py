"""Lexer for AJML source files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import List

from ajlint.errors import LexError


class TokenKind(str, Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    LITERAL = "literal"
    PUNCTUATION = "punctuation"
    END = "end"


KEYWORDS = frozenset({
    "class", "aspect", "privileged", "private", "public", "implements",
    "before", "after", "around", "pointcut", "declare", "parents",
    "if", "else", "while", "return", "new", "this", "proceed",
    "int", "boolean", "void",
})

# Keyword-shaped literals are reported with the literal kind.
LITERAL_WORDS = frozenset({"true", "false", "null"})

# Longest operators first so that ".." wins over "." and "==" over "=".
PUNCTUATION = (
    "..", "==", "!=", "<=", ">=", "&&", "||",
    "{", "}", "(", ")", ";", ",", ".", ":", "=", "<", ">",
    "+", "-", "*", "/", "%", "!",
)

_TOKEN_RE = re.compile(
    r"""
    (?P<newline>\r\n|\n)
  | (?P<space>[ \t\r\f]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<open_comment>/\*)
  | (?P<identifier>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<integer>[0-9]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<open_string>")
  | (?P<punctuation>""" + "|".join(re.escape(p) for p in PUNCTUATION) + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True, order=True)
class Span:
    """Source region; lines and columns are 1-based, the end column is exclusive."""

    file: str
    line: int
    column: int
    end_line: int
    end_column: int

    @property
    def length(self) -> int:
        if self.end_line != self.line:
            raise ValueError("length is only defined for single-line spans")
        return self.end_column - self.column

    def contains(self, other: "Span") -> bool:
        return (
            self.file == other.file
            and (self.line, self.column) <= (other.line, other.column)
            and (other.end_line, other.end_column) <= (self.end_line, self.end_column)
        )

    def to(self, other: "Span") -> "Span":
        """Span running from the start of ``self`` to the end of ``other``."""
        return Span(self.file, self.line, self.column, other.end_line, other.end_column)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span
    offset: int

    def is_(self, lexeme: str) -> bool:
        return self.kind in (TokenKind.KEYWORD, TokenKind.PUNCTUATION, TokenKind.LITERAL) and self.lexeme == lexeme

    def describe(self) -> str:
        if self.kind is TokenKind.END:
            return "end of input"
        return repr(self.lexeme)


def tokenize(source: str, file_name: str) -> List[Token]:
    """
    Split AJML source text into tokens.

    Comments and whitespace produce no tokens but are counted for spans. The returned
    list always ends with an END token.

    Args:
        source: The decoded source text
        file_name: Name recorded in every span

    Returns:
        The ordered token list

    Raises:
        LexError: on an unterminated block comment or string literal, or an illegal character
    """
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0

    while pos < len(source):
        column = pos - line_start + 1
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise LexError(
                f"illegal character {source[pos]!r}",
                Span(file_name, line, column, line, column + 1),
            )

        group = match.lastgroup
        text = match.group()
        if group == "open_comment":
            raise LexError("unterminated block comment", Span(file_name, line, column, line, column + 2))
        if group == "open_string":
            raise LexError("unterminated string literal", Span(file_name, line, column, line, column + 1))

        if group == "newline":
            line, line_start = line + 1, match.end()
        elif group == "block_comment":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rindex("\n") + 1
        elif group not in ("space", "line_comment"):
            span = Span(file_name, line, column, line, column + len(text))
            tokens.append(Token(_kind_of(group, text), text, span, pos))
        pos = match.end()

    column = pos - line_start + 1
    tokens.append(Token(TokenKind.END, "", Span(file_name, line, column, line, column), pos))
    return tokens


def _kind_of(group: str, text: str) -> TokenKind:
    if group == "identifier":
        if text in KEYWORDS:
            return TokenKind.KEYWORD
        if text in LITERAL_WORDS:
            return TokenKind.LITERAL
        return TokenKind.IDENTIFIER
    if group in ("integer", "string"):
        return TokenKind.LITERAL
    return TokenKind.PUNCTUATION


def decode_string(lexeme: str) -> str:
    """Value of a string literal lexeme (quotes stripped, escapes applied)."""
    escapes = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}
    body = lexeme[1:-1]
    out, i = [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(escapes.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)
