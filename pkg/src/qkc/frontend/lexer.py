"""Tokenizer for the ``.qk`` kernel language."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({"qbit", "cbit", "shared", "double", "const", "int", "kernel", "for", "in", "pi"})

KEYWORD = "keyword"
IDENT = "identifier"
INT = "integer"
FLOAT = "float"
PUNCT = "punctuation"
EOF = "eof"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>      [ \t\r\n]+ | //[^\n]* )
  | (?P<float>   \d+\.\d+(?:[eE][+-]?\d+)? | \d+[eE][+-]?\d+ )
  | (?P<int>     \d+ )
  | (?P<name>    [A-Za-z_][A-Za-z0-9_]* )
  | (?P<punct>   \.\. | [()\[\]{};,=+\-*/%] )
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    offset: int

    @property
    def end(self) -> int:
        return self.offset + len(self.text)

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.column})"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; the list always ends with an ``eof`` token.

    Whitespace and ``//`` comments are skipped but keep their place: the gaps
    between consecutive token offsets hold exactly the skipped text.
    """
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(source[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "name":
                kind = KEYWORD if text in KEYWORDS else IDENT
            elif kind == "int":
                kind = INT
            elif kind == "punct":
                kind = PUNCT
            else:
                kind = FLOAT
            tokens.append(Token(kind, text, line, pos - line_start + 1, pos))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token(EOF, "", line, pos - line_start + 1, pos))
    return tokens
