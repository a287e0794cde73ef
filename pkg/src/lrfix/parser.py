"""Driving the tables: LR parsing with pluggable error recovery.

The main loop is a textbook LR driver over the packed action/goto arrays.
What happens at an error cell is delegated to a *recoverer*:

* ``"none"``  — report the error and stop;
* ``"panic"`` — pop states / skip tokens until the parse can resynchronize;
* ``"cpctplus"`` / ``"cpctplus-rev"`` — search for the complete set of
  minimum-cost repair sequences, report them all, and apply the
  best-ranked one so the parse can continue.

All recoverers share one wall-clock budget per file: the time spent inside
recovery (not ordinary parsing) is accumulated, and once it exceeds
``RecoveryParams.timeout_s`` every later error fails fast.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .grammar import EOF
from .lexer import LineIndex, Token
from .lrtable import ACCEPT_CELL, ERROR_CELL, StateTable

# A reduce chain that runs this long without shifting can only be a bug in
# table construction (e.g. an epsilon cycle); stop instead of spinning.
REDUCE_CHAIN_LIMIT = 100_000


class ParserInternalError(Exception):
    pass


# ---------------------------------------------------------------------------
# Repairs.


@dataclass(frozen=True)
class Repair:
    """One edit in a repair sequence.

    ``kind`` is "insert", "delete" or "shift"; ``token`` is the token type
    being inserted, and None for the other kinds (they act on the next
    real token in the input).
    """

    kind: str
    token: Optional[str] = None

    def __str__(self) -> str:
        return f"Insert {self.token}" if self.kind == "insert" else self.kind.capitalize()


def render_repairs(seq: list[Repair], src: str, toks: list[Token], offset: int) -> str:
    """Human-readable form of one sequence, e.g. ``Insert +, Shift 3``.

    Insert shows the token type; Delete and Shift show the text of the
    input token they consume, walking forward from the error point.
    """
    parts = []
    i = offset
    for r in seq:
        if r.kind == "insert":
            parts.append(f"Insert {r.token}")
        elif r.kind == "delete":
            parts.append(f"Delete {toks[i].lexeme(src)}")
            i += 1
        else:
            parts.append(f"Shift {toks[i].lexeme(src)}")
            i += 1
    return ", ".join(parts)


@dataclass
class RecoveryParams:
    """Tuning knobs shared by the repair-searching recoverers."""

    n_shifts: int = 3          # trailing shifts that count as resynchronized
    n_try: int = 250           # tokens a candidate repair is test-parsed over
    timeout_s: float = 0.5     # total recovery budget per file
    insert_cost: Optional[Callable[[str], int]] = None  # per-token insert cost
    deterministic: bool = False  # stable report ordering (see cpctplus.rank)

    def __post_init__(self) -> None:
        if self.n_shifts < 1:
            raise ValueError("n_shifts must be at least 1")
        if self.n_try < self.n_shifts:
            raise ValueError("n_try must be at least n_shifts")

    def cost_of_insert(self, token: str) -> int:
        return 1 if self.insert_cost is None else self.insert_cost(token)


@dataclass
class RecoveryReport:
    """What one error location produced."""

    offset: int
    line: int
    col: int
    recoverer: str
    success: bool
    sequences: list[list[Repair]] = field(default_factory=list)
    applied: Optional[list[Repair]] = None
    cost: Optional[int] = None
    skipped: int = 0     # input tokens discarded (panic)
    popped: int = 0      # stack entries discarded (panic)


@dataclass
class RunStats:
    error_locations: int = 0
    costs: list[int] = field(default_factory=list)
    skipped: int = 0           # tokens discarded by repairs or panic
    real_tokens: int = 0
    recovery_time_s: float = 0.0
    success: bool = True

    @property
    def tokens_skipped_pct(self) -> float:
        if self.real_tokens == 0:
            return 0.0
        return 100.0 * self.skipped / self.real_tokens


# ---------------------------------------------------------------------------
# Parse trees.


class Node:
    __slots__ = ("rule", "children")

    def __init__(self, rule: str, children: list):
        self.rule = rule
        self.children = children

    def __repr__(self) -> str:
        return f"Node({self.rule}, {len(self.children)} children)"


def tree_text(root: Union[Node, Token], src: str) -> str:
    """Indented one-node-per-line rendering of a parse tree."""
    lines: list[str] = []

    def walk(n, depth: int) -> None:
        pad = "  " * depth
        if isinstance(n, Node):
            lines.append(f"{pad}{n.rule}")
            for c in n.children:
                walk(c, depth + 1)
        else:
            text = n.lexeme(src)
            suffix = " (inserted)" if n.inserted else f" {text}" if text != n.type else ""
            lines.append(f"{pad}{n.type}{suffix}")

    walk(root, 0)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Single-step interface (used by tests and the repair oracle).


def lr_step(table: StateTable, stack: list[int], token: str):
    """Apply one action for ``token`` to ``stack`` (mutating it).

    Returns the action as a tuple: ("shift", s), ("reduce", p), ("accept",)
    or ("error",).  A reduce pops the handle and pushes the goto state; a
    shift pushes the target state.
    """
    cell = table.act[stack[-1]][table.token_index[token]]
    if cell == ERROR_CELL:
        return ("error",)
    if cell == ACCEPT_CELL:
        return ("accept",)
    arg = cell >> 2
    if cell & 3 == 2:
        stack.append(arg)
        return ("shift", arg)
    arity = table.prod_arity[arg]
    if arity:
        del stack[-arity:]
    stack.append(table.goto[stack[-1]][table.prod_rule[arg]])
    return ("reduce", arg)


# ---------------------------------------------------------------------------
# Panic recovery.


def panic_recover(table: StateTable, stack: list[int], tok_ids: list[int], offset: int):
    """Pop and skip until some stack suffix can act on some later token.

    For each remaining token in turn, scan the stack from the top down
    looking for a state with a non-error action on that token; if none
    exists, give up on the token and try the next one.  Returns the
    shortened stack and new offset, or None when even end-of-input cannot
    be acted on from any stack suffix.
    """
    act = table.act
    for j in range(offset, len(tok_ids)):
        t = tok_ids[j]
        for k in range(len(stack), 0, -1):
            if act[stack[k - 1]][t] != ERROR_CELL:
                return stack[:k], j
    return None


# ---------------------------------------------------------------------------
# The parser.


@dataclass
class ParseResult:
    tree: Optional[Union[Node, Token]]
    reports: list[RecoveryReport]
    stats: RunStats

    @property
    def success(self) -> bool:
        return self.stats.success


def _reduce(table: StateTable, stack: list[int], forest: list, prod: int) -> None:
    arity = table.prod_arity[prod]
    if arity:
        children = forest[-arity:]
        del forest[-arity:]
        del stack[-arity:]
    else:
        children = []
    forest.append(Node(table.productions[prod].lhs, children))
    goto = table.goto[stack[-1]][table.prod_rule[prod]]
    if goto < 0:
        raise ParserInternalError(
            f"no goto from state {stack[-1]} on {table.productions[prod].lhs}"
        )
    stack.append(goto)


def parse(
    table: StateTable,
    toks: list[Token],
    src: str = "",
    recoverer: str = "cpctplus",
    params: Optional[RecoveryParams] = None,
) -> ParseResult:
    if params is None:
        params = RecoveryParams()
    act = table.act
    tok_ids = [table.token_index[t.type] for t in toks]
    lines = LineIndex(src)

    stack = [0]
    forest: list = []
    idx = 0
    reports: list[RecoveryReport] = []
    stats = RunStats(real_tokens=len(toks) - 1)
    reduce_guard = 0

    def fail(report: RecoveryReport) -> ParseResult:
        reports.append(report)
        stats.success = False
        return ParseResult(None, reports, stats)

    while True:
        cell = act[stack[-1]][tok_ids[idx]]
        low = cell & 3
        if low == 2:  # shift
            stack.append(cell >> 2)
            forest.append(toks[idx])
            idx += 1
            reduce_guard = 0
        elif low == 3:  # reduce
            _reduce(table, stack, forest, cell >> 2)
            reduce_guard += 1
            if reduce_guard > REDUCE_CHAIN_LIMIT:
                raise ParserInternalError("reduce chain did not terminate")
        elif cell == ACCEPT_CELL:
            tree = forest[-1] if forest else None
            return ParseResult(tree, reports, stats)
        else:  # error
            stats.error_locations += 1
            line, col = lines.line_col(toks[idx].start)
            budget = params.timeout_s - stats.recovery_time_s
            report = RecoveryReport(toks[idx].start, line, col, recoverer, False)
            if recoverer == "none" or budget <= 0:
                return fail(report)
            t0 = time.monotonic()
            if recoverer == "panic":
                outcome = panic_recover(table, stack, tok_ids, idx)
                stats.recovery_time_s += time.monotonic() - t0
                if outcome is None:
                    return fail(report)
                new_stack, new_idx = outcome
                report.success = True
                report.skipped = new_idx - idx
                report.popped = len(stack) - len(new_stack)
                stats.skipped += report.skipped
                del forest[max(len(new_stack) - 1, 0) :]
                stack = new_stack
                idx = new_idx
                reports.append(report)
                reduce_guard = 0
                continue
            if recoverer in ("cpctplus", "cpctplus-rev"):
                from . import cpctplus  # late import: cpctplus imports Repair from here

                found = cpctplus.repair_search(
                    table, stack, tok_ids, idx, params,
                    rank_reversed=(recoverer == "cpctplus-rev"),
                    budget_s=budget,
                )
                stats.recovery_time_s += time.monotonic() - t0
                if found is None:
                    return fail(report)
                report.success = True
                report.sequences = found.sequences
                report.applied = found.applied
                report.cost = found.cost
                stats.costs.append(found.cost)
                reports.append(report)
                idx = _apply_repairs(
                    table, stack, forest, toks, tok_ids, idx, found.applied, stats
                )
                reduce_guard = 0
                continue
            raise ValueError(f"unknown recoverer {recoverer!r}")


def _apply_repairs(
    table: StateTable,
    stack: list[int],
    forest: list,
    toks: list[Token],
    tok_ids: list[int],
    idx: int,
    applied: list[Repair],
    stats: RunStats,
) -> int:
    """Replay the chosen repair sequence on the live stack, then hand the
    parse loop back its new input position."""
    act = table.act
    err_off = toks[idx].start
    for r in applied:
        if r.kind == "delete":
            stats.skipped += 1
            idx += 1
            continue
        if r.kind == "insert":
            t_id = table.token_index[r.token]
            leaf = Token(r.token, err_off, err_off, inserted=True)
        else:  # shift: consume the real token
            t_id = tok_ids[idx]
            leaf = toks[idx]
            idx += 1
        guard = 0
        while True:
            cell = act[stack[-1]][t_id]
            if cell & 3 == 3:
                _reduce(table, stack, forest, cell >> 2)
                guard += 1
                if guard > REDUCE_CHAIN_LIMIT:
                    raise ParserInternalError("reduce chain did not terminate")
                continue
            if cell & 3 == 2:
                stack.append(cell >> 2)
                forest.append(leaf)
                break
            raise ParserInternalError(
                f"repair replay diverged from search at state {stack[-1]}"
            )
    return idx
