import functools
import pathlib

import pytest

from lrfix import LexSpec, build_tables, parse_grammar
from lrfix.lexer import Token
from lrfix.lrtable import StateTable

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
INPUTS = FIXTURES / "inputs"


@functools.lru_cache(maxsize=None)
def grammar_of(stem: str):
    return parse_grammar((FIXTURES / f"{stem}.y").read_text(encoding="utf-8"))


@functools.lru_cache(maxsize=None)
def lexspec_of(stem: str) -> LexSpec:
    return LexSpec.parse((FIXTURES / f"{stem}.l").read_text(encoding="utf-8"))


@functools.lru_cache(maxsize=None)
def table_of(stem: str, merge: bool = True) -> StateTable:
    return build_tables(grammar_of(stem), merge=merge)


def toks_of(stem: str, text: str) -> list[Token]:
    return lexspec_of(stem).lex(text)


def synth_toks(table: StateTable, names: list[str]) -> list[Token]:
    """Token stream straight from type names, when no source text exists."""
    toks = [Token(n, i, i + 1) for i, n in enumerate(names)]
    toks.append(Token(table.tokens[-1], len(names), len(names)))
    return toks


def first_error(table: StateTable, tok_ids: list[int]):
    """Drive the raw tables to the first error; (stack, offset) or None."""
    from lrfix.parser import lr_step

    stack = [0]
    idx = 0
    while True:
        tok = table.tokens[tok_ids[idx]]
        step = lr_step(table, stack, tok)
        if step[0] == "error":
            return stack, idx
        if step[0] == "accept":
            return None
        if step[0] == "shift":
            idx += 1


@pytest.fixture(scope="session")
def calc():
    return table_of("calc")


@pytest.fixture(scope="session")
def calc_lex():
    return lexspec_of("calc")


@pytest.fixture(scope="session")
def stmt():
    return table_of("stmt")


@pytest.fixture(scope="session")
def stmt_lex():
    return lexspec_of("stmt")
