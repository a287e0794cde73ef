"""A small lex-style tokenizer driven by a rule file.

The rule file holds one rule per line: a regular expression, whitespace,
then either a token name (bare or quoted) or a lone ``;`` meaning "match
and discard".  Blank lines and lines starting with ``#`` are ignored.

Tokenizing scans left to right, always taking the longest match; ties go
to the earliest rule in the file.  Any stretch of input no rule matches
raises :class:`LexError` — the file is rejected as a whole rather than
guessed at.  A zero-width end-of-input token is appended to every
successful result.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

from .grammar import EOF, _unquote


class LexError(Exception):
    def __init__(self, message: str, offset: int, line: int, col: int):
        self.offset = offset
        self.line = line
        self.col = col
        super().__init__(f"line {line} col {col}: {message}")


class LexSpecError(Exception):
    """A problem in the rule file, with its line number."""


@dataclass(frozen=True)
class Token:
    """A lexed token: a type plus the source span it covers.

    Tokens synthesized during error repair carry ``inserted=True`` and a
    zero-width span at the point of the error; they have a type but no
    text of their own.
    """

    type: str
    start: int
    end: int
    inserted: bool = False

    def lexeme(self, src: str) -> str:
        return "" if self.inserted else src[self.start : self.end]


class LineIndex:
    """Offset -> 1-based (line, col) lookups over one source text."""

    def __init__(self, src: str):
        self._starts = [0] + [m.end() for m in re.finditer(r"\n", src)]

    def line_col(self, offset: int) -> tuple[int, int]:
        i = bisect_right(self._starts, offset) - 1
        return i + 1, offset - self._starts[i] + 1


_NAME_RE = re.compile(r"[A-Za-z_.][A-Za-z_0-9.]*$")


class LexSpec:
    def __init__(self, rules: list[tuple[re.Pattern, str | None]]):
        self.rules = rules

    @classmethod
    def parse(cls, text: str) -> "LexSpec":
        rules: list[tuple[re.Pattern, str | None]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.rsplit(None, 1)
            if len(parts) != 2:
                raise LexSpecError(f"line {lineno}: expected 'pattern NAME' or 'pattern ;'")
            pattern, name = parts
            try:
                rx = re.compile(pattern)
            except re.error as e:
                raise LexSpecError(f"line {lineno}: bad pattern: {e}") from None
            if rx.match(""):
                raise LexSpecError(
                    f"line {lineno}: pattern {pattern!r} can match the empty "
                    "string, which would stall the tokenizer"
                )
            if name == ";":
                token: str | None = None
            elif name.startswith("'") and name.endswith("'") and len(name) >= 3:
                token = _unquote(name)
            elif _NAME_RE.match(name):
                token = name
            else:
                raise LexSpecError(f"line {lineno}: bad token name {name!r}")
            if token == EOF:
                raise LexSpecError(f"line {lineno}: token name {EOF!r} is reserved")
            rules.append((rx, token))
        if not rules:
            raise LexSpecError("no rules in lexer file")
        return cls(rules)

    def token_names(self) -> list[str]:
        seen: list[str] = []
        for _, name in self.rules:
            if name is not None and name not in seen:
                seen.append(name)
        return seen

    def lex(self, src: str) -> list[Token]:
        toks: list[Token] = []
        pos = 0
        n = len(src)
        while pos < n:
            best_len = -1
            best_name: str | None = None
            for rx, name in self.rules:
                m = rx.match(src, pos)
                if m is not None and m.end() - pos > best_len:
                    best_len = m.end() - pos
                    best_name = name
            if best_len <= 0:
                line, col = LineIndex(src).line_col(pos)
                raise LexError(f"no rule matches {src[pos:pos+10]!r}", pos, line, col)
            if best_name is not None:
                toks.append(Token(best_name, pos, pos + best_len))
            pos += best_len
        toks.append(Token(EOF, n, n))
        return toks
