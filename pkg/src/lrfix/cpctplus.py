"""Minimum-cost repair search for LR parse errors.

Starting from the parser's stack at the point of failure, the search
explores sequences of three edits — insert a token, delete the next input
token, or shift it unchanged — looking for every cheapest way to get the
parse moving again.  Inserts and deletes cost 1 (insert cost is pluggable
per token type), shifts cost 0.  A branch *succeeds* when its
configuration either sits on an accept action or has just shifted
``n_shifts`` input tokens in a row: genuine repairs let real input flow
again, so demanding a run of shifts filters out edits that only thrash.

The frontier is kept in cost-ordered buckets (a Dijkstra-style queue on a
uniform cost grid).  Within a bucket, configurations that *compatible*
paths reached — same parser stack, same input position, same trailing
shift run, same just-deleted flag — are merged rather than explored
twice: the repair sequences that led there are grafted onto the surviving
configuration as a parent-pointer DAG, so every sequence can still be
reported even though only one configuration is expanded.  Configuration
hashing deliberately covers only the stack and input position (a subset
of the compatibility relation), so dictionary probes are cheap and the
equality test settles the rest.

Once the cheapest success cost is known, the rest of that bucket is
drained so the *complete* set of minimum-cost sequences is collected, and
everything costlier is dropped.  Success configurations are then ranked
by how far ahead the input each can parse (up to ``n_try`` tokens;
reaching accept counts as the full distance): the furthest-parsing ones
survive, the best-ordered sequence is applied, the rest are reported.
``rank_reversed=True`` inverts that choice — keeping the worst - which
exists to measure how much the ranking itself buys.

Three shift-move flavours are kept around because they make instructive
baselines (see ``shift_style``):

* 1 — one greedy move that shifts up to ``n_shifts`` tokens;
* 2 — the greedy move, plus a reduce-only move when reductions fired;
* 3 (default) — single-token shift plus the reduce-only move.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .cactus import Cactus
from .lrtable import ACCEPT_CELL, StateTable
from .parser import ParserInternalError, RecoveryParams, Repair, REDUCE_CHAIN_LIMIT

# Repair codes, kept as small ints in the hot path.
SHIFT_C = 0
DELETE_C = 1
MARK_C = 2          # internal "reductions happened here" marker; never reported
INSERT_BASE = 3     # INSERT_BASE + token ordinal


class _RepairNode:
    """One edge of the repair DAG: a repair code plus the path before it.

    ``merged`` collects the repair nodes of configurations that were folded
    into this one; expanding a node therefore yields its own sequence and
    every merged alternative.
    """

    __slots__ = ("repair", "parent", "merged")

    def __init__(self, repair: int, parent: Optional["_RepairNode"]):
        self.repair = repair
        self.parent = parent
        self.merged: Optional[list] = None

    def add_merged(self, other: "_RepairNode") -> None:
        if other is self:
            return
        if self.merged is None:
            self.merged = [other]
        else:
            self.merged.append(other)


class _Config:
    __slots__ = ("stack", "offset", "cost", "rm", "tail", "after_delete", "_h")

    def __init__(self, stack: Cactus, offset: int, cost: int, rm, tail: int, after_delete: bool):
        self.stack = stack
        self.offset = offset
        self.cost = cost
        self.rm = rm
        self.tail = tail                # trailing shift count of the main path
        self.after_delete = after_delete  # last repair was a delete
        self._h = hash((stack, offset))

    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other: "_Config") -> bool:
        return (
            self.offset == other.offset
            and self.tail == other.tail
            and self.after_delete == other.after_delete
            and self.stack == other.stack
        )


@dataclass
class SearchOutcome:
    cost: int
    sequences: list[list[Repair]]   # ranked; trailing shifts pruned
    applied: list[Repair]           # == sequences[0]
    success_configs: int
    merges: int


@dataclass
class RawSearch:
    """Pre-ranking view of a search: everything at minimum cost."""

    cost: int
    sequences: set[tuple[Repair, ...]]
    success_configs: int
    merges: int


class _Search:
    def __init__(
        self,
        table: StateTable,
        stack: list[int],
        tok_ids: list[int],
        offset: int,
        params: RecoveryParams,
        budget_s: float,
        shift_style: int,
        merge: bool,
    ):
        self.table = table
        self.act = table.act
        self.goto = table.goto
        self.arity = table.prod_arity
        self.prule = table.prod_rule
        self.eof = table.eof
        self.tok_ids = tok_ids
        self.params = params
        self.deadline = time.monotonic() + budget_s
        self.shift_style = shift_style
        self.merge = merge
        self.insert_cost = [params.cost_of_insert(t) for t in table.tokens]
        self.n_terms = len(table.tokens) - 1  # EOF is last and never inserted

        node = Cactus()
        for s in stack:
            node = node.push(s)
        self.start = _Config(node, offset, 0, None, 0, False)
        self.todo: list[dict] = [{self.start: self.start}]
        self.recorded: dict = {}  # (offset, main chain) -> _Config
        self.merges = 0
        self.c_max: Optional[int] = None

    # -- shared LR micro-steps ------------------------------------------------

    def _reduce_to_action(self, stack: Cactus, t: int):
        """Reduce under lookahead ``t`` until the action is shift, accept or
        error; returns (stack, action cell, reductions applied)."""
        act, goto, arity, prule = self.act, self.goto, self.arity, self.prule
        n = 0
        while True:
            cell = act[stack.value][t]
            if cell & 3 != 3:
                return stack, cell, n
            p = cell >> 2
            popped = stack.drop(arity[p])
            g = goto[popped.value][prule[p]]
            if g < 0:
                raise ParserInternalError("missing goto during repair search")
            stack = popped.push(g)
            n += 1
            if n > REDUCE_CHAIN_LIMIT:
                raise ParserInternalError("reduce chain did not terminate")

    # -- frontier maintenance ---------------------------------------------------

    def _insert_cfg(self, cfg: _Config) -> None:
        if self.c_max is not None and cfg.cost > self.c_max:
            return
        while len(self.todo) <= cfg.cost:
            self.todo.append({})
        bucket = self.todo[cfg.cost]
        if not self.merge:
            bucket[id(cfg)] = cfg
            return
        old = bucket.get(cfg)
        if old is None:
            bucket[cfg] = cfg
        elif old.rm is not None and cfg.rm is not None and old.rm is not cfg.rm:
            old.rm.add_merged(cfg.rm)
            self.merges += 1

    def _child(self, parent: _Config, code: int, extra_cost: int, stack: Cactus,
               offset: int, tail: int, after_delete: bool) -> None:
        rm = _RepairNode(code, parent.rm)
        self._insert_cfg(_Config(stack, offset, parent.cost + extra_cost, rm, tail, after_delete))

    # -- neighbour generation -----------------------------------------------------

    def _expand_config(self, cfg: _Config) -> None:
        tok_ids = self.tok_ids
        cur = tok_ids[cfg.offset]
        # Inserts, cheapest-declared token first.  An insert directly after
        # a delete is suppressed: the same effect is always reachable as
        # insert-then-delete, so exploring both just doubles the frontier.
        if not cfg.after_delete:
            for t in range(self.n_terms):
                stack, cell, _ = self._reduce_to_action(cfg.stack, t)
                if cell & 3 == 2:
                    self._child(cfg, INSERT_BASE + t, self.insert_cost[t],
                                stack.push(cell >> 2), cfg.offset, 0, False)
        # Delete the next real token (never end-of-input).
        if cur != self.eof:
            self._child(cfg, DELETE_C, 1, cfg.stack, cfg.offset + 1, 0, True)
        # Shift moves.
        style = self.shift_style
        if style == 3:
            stack, cell, n_red = self._reduce_to_action(cfg.stack, cur)
            if n_red:
                self._child(cfg, MARK_C, 0, stack, cfg.offset, cfg.tail, cfg.after_delete)
            if cell & 3 == 2:
                self._child(cfg, SHIFT_C, 0, stack.push(cell >> 2),
                            cfg.offset + 1, cfg.tail + 1, False)
            return
        # Styles 1 and 2: one greedy move that keeps shifting (with any
        # interleaved reductions) until n_shifts tokens went by or the
        # parse stops; style 2 also emits the reduce-only endpoint.
        stack, cell, n_red = self._reduce_to_action(cfg.stack, cur)
        if style == 2 and n_red:
            self._child(cfg, MARK_C, 0, stack, cfg.offset, cfg.tail, cfg.after_delete)
        off = cfg.offset
        shifted = 0
        while cell & 3 == 2 and shifted < self.params.n_shifts:
            stack = stack.push(cell >> 2)
            off += 1
            shifted += 1
            if shifted == self.params.n_shifts:
                break
            stack, cell, _ = self._reduce_to_action(stack, tok_ids[off])
        if shifted:
            rm = cfg.rm
            for _ in range(shifted):
                rm = _RepairNode(SHIFT_C, rm)
            self._insert_cfg(
                _Config(stack, off, cfg.cost, rm, cfg.tail + shifted, False)
            )

    # -- main loop ------------------------------------------------------------------

    def run(self):
        act = self.act
        tok_ids = self.tok_ids
        n_shifts = self.params.n_shifts
        monotonic = time.monotonic
        cost = 0
        while cost < len(self.todo):
            bucket = self.todo[cost]
            while bucket:
                if monotonic() > self.deadline:
                    return None
                cfg = bucket.popitem()[1]
                cell = act[cfg.stack.value][tok_ids[cfg.offset]]
                if cell == ACCEPT_CELL or cfg.tail >= n_shifts:
                    self._record_success(cfg)
                    continue  # successes are not expanded further
                self._expand_config(cfg)
            if self.c_max is not None:
                break
            cost += 1
        if not self.recorded:
            return None
        return self.c_max, list(self.recorded.values()), self.merges

    def _record_success(self, cfg: _Config) -> None:
        key = (cfg.offset, _main_chain(cfg.rm))
        old = self.recorded.get(key)
        if old is None:
            self.recorded[key] = cfg
        elif old.rm is not None and cfg.rm is not None and old.rm is not cfg.rm:
            old.rm.add_merged(cfg.rm)
        if self.c_max is None:
            self.c_max = cfg.cost
            del self.todo[cfg.cost + 1 :]


# ---------------------------------------------------------------------------
# Sequence extraction.


def _main_chain(rm) -> tuple[int, ...]:
    out = []
    node = rm
    while node is not None:
        if node.repair != MARK_C:
            out.append(node.repair)
        node = node.parent
    out.reverse()
    return tuple(out)


def _expand(rm) -> list[tuple[int, ...]]:
    """All repair sequences reaching a node, merged alternatives included."""
    memo: dict[int, list] = {}

    def go(node) -> list[tuple[int, ...]]:
        if node is None:
            return [()]
        got = memo.get(id(node))
        if got is not None:
            return got
        memo[id(node)] = []  # guards against cycles, which the cost grid rules out
        prefixes = go(node.parent)
        if node.repair == MARK_C:
            mine = list(prefixes)
        else:
            mine = [p + (node.repair,) for p in prefixes]
        if node.merged:
            for m in node.merged:
                mine.extend(go(m))
        memo[id(node)] = mine
        return mine

    return go(rm)


def _prune_trailing_shifts(seq: tuple[int, ...]) -> tuple[int, ...]:
    end = len(seq)
    while end and seq[end - 1] == SHIFT_C:
        end -= 1
    return seq[:end]


def _decode(table: StateTable, seq: tuple[int, ...]) -> tuple[Repair, ...]:
    out = []
    for c in seq:
        if c == SHIFT_C:
            out.append(Repair("shift"))
        elif c == DELETE_C:
            out.append(Repair("delete"))
        else:
            out.append(Repair("insert", table.tokens[c - INSERT_BASE]))
    return tuple(out)


def _seq_order_key(seq: tuple[int, ...]):
    key = []
    for c in seq:
        if c >= INSERT_BASE:
            key.append((0, c - INSERT_BASE))
        elif c == DELETE_C:
            key.append((1, 0))
        else:
            key.append((2, 0))
    return key


# ---------------------------------------------------------------------------
# Ranking.


def _parse_distance(table: StateTable, cfg: _Config, tok_ids: list[int], n_try: int) -> int:
    act, goto, arity, prule = table.act, table.goto, table.prod_arity, table.prod_rule
    stack = cfg.stack.as_list()
    off = cfg.offset
    consumed = 0
    guard = 0
    while consumed < n_try:
        cell = act[stack[-1]][tok_ids[off]]
        low = cell & 3
        if low == 2:
            stack.append(cell >> 2)
            off += 1
            consumed += 1
            guard = 0
        elif low == 3:
            p = cell >> 2
            if arity[p]:
                del stack[-arity[p] :]
            g = goto[stack[-1]][prule[p]]
            if g < 0:
                break
            stack.append(g)
            guard += 1
            if guard > REDUCE_CHAIN_LIMIT:
                break
        elif cell == ACCEPT_CELL:
            return n_try
        else:
            break
    return consumed


# ---------------------------------------------------------------------------
# Public entry points.


def repair_search(
    table: StateTable,
    stack: list[int],
    tok_ids: list[int],
    offset: int,
    params: Optional[RecoveryParams] = None,
    *,
    rank_reversed: bool = False,
    budget_s: Optional[float] = None,
    shift_style: int = 3,
    merge: bool = True,
) -> Optional[SearchOutcome]:
    """Full pipeline: search, rank, order, decode.  None means Fail."""
    params = params or RecoveryParams()
    budget = params.timeout_s if budget_s is None else budget_s
    found = _Search(table, stack, tok_ids, offset, params, budget, shift_style, merge).run()
    if found is None:
        return None
    cost, configs, merges = found

    dists = [_parse_distance(table, c, tok_ids, params.n_try) for c in configs]
    best = min(dists) if rank_reversed else max(dists)
    kept = [c for c, d in zip(configs, dists) if d == best]

    seqs: dict[tuple[int, ...], None] = {}
    for cfg in kept:
        for raw in _expand(cfg.rm):
            pruned = _prune_trailing_shifts(raw)
            if pruned and pruned not in seqs:
                seqs[pruned] = None
    if not seqs:
        return None

    avoid = {
        INSERT_BASE + table.token_index[t]
        for t in table.grammar.avoid_insert
        if t in table.token_index
    }

    def has_avoided(seq: tuple[int, ...]) -> bool:
        return any(c in avoid for c in seq)

    ordered = list(seqs)
    if params.deterministic:
        ordered.sort(key=lambda s: (has_avoided(s), _seq_order_key(s)))
    else:
        ordered.sort(key=has_avoided)  # stable: only the avoid split moves
    sequences = [list(_decode(table, s)) for s in ordered]
    return SearchOutcome(cost, sequences, sequences[0], len(configs), merges)


def min_repair_sequences(
    table: StateTable,
    stack: list[int],
    tok_ids: list[int],
    offset: int,
    params: Optional[RecoveryParams] = None,
    *,
    budget_s: Optional[float] = None,
    shift_style: int = 3,
    merge: bool = True,
) -> Optional[RawSearch]:
    """The complete pre-ranking set of minimum-cost repair sequences."""
    params = params or RecoveryParams()
    budget = params.timeout_s if budget_s is None else budget_s
    found = _Search(table, stack, tok_ids, offset, params, budget, shift_style, merge).run()
    if found is None:
        return None
    cost, configs, merges = found
    seqs: set[tuple[Repair, ...]] = set()
    for cfg in configs:
        for raw in _expand(cfg.rm):
            pruned = _prune_trailing_shifts(raw)
            if pruned:
                seqs.add(_decode(table, pruned))
    return RawSearch(cost, seqs, len(configs), merges)


# ---------------------------------------------------------------------------
# Independent reference search.
#
# A deliberately plain breadth-first enumeration over explicit list stacks
# and repair tuples: no shared structure, no merging, no ranking.  It exists
# so the clever implementation above has something slow and obviously
# correct to be checked against.


def oracle_min_repairs(
    table: StateTable,
    stack: list[int],
    tok_ids: list[int],
    offset: int,
    *,
    n_shifts: int = 3,
    cost_bound: int = 12,
) -> Optional[tuple[int, set[tuple[Repair, ...]]]]:
    act, goto, arity, prule = table.act, table.goto, table.prod_arity, table.prod_rule
    eof = table.eof
    n_terms = len(table.tokens) - 1

    def reduce_all(stk: tuple[int, ...], t: int):
        stk_l = list(stk)
        n = 0
        while True:
            cell = act[stk_l[-1]][t]
            if cell & 3 != 3:
                return stk_l, cell, n
            p = cell >> 2
            if arity[p]:
                del stk_l[-arity[p] :]
            g = goto[stk_l[-1]][prule[p]]
            if g < 0:
                raise ParserInternalError("missing goto in reference search")
            stk_l.append(g)
            n += 1
            if n > REDUCE_CHAIN_LIMIT:
                raise ParserInternalError("reduce chain did not terminate")

    start = (tuple(stack), offset, ())
    levels: list[list] = [[start]]
    seen = {start}

    def emit(cost: int, state) -> None:
        if state not in seen:
            seen.add(state)
            while len(levels) <= cost:
                levels.append([])
            levels[cost].append(state)

    successes: list[tuple] = []
    for cost in range(cost_bound + 1):
        if cost >= len(levels):
            break
        queue = deque(levels[cost])
        while queue:
            stk, off, reps = queue.popleft()
            cell = act[stk[-1]][tok_ids[off]]
            if cell == ACCEPT_CELL or (
                len(reps) >= n_shifts and all(r == "s" for r in reps[-n_shifts:])
            ):
                successes.append(reps)
                continue
            if not (reps and reps[-1] == "d"):
                for t in range(n_terms):
                    stk2, cell2, _ = reduce_all(stk, t)
                    if cell2 & 3 == 2:
                        stk2.append(cell2 >> 2)
                        emit(cost + 1, (tuple(stk2), off, reps + (("i", t),)))
            if tok_ids[off] != eof:
                emit(cost + 1, (stk, off + 1, reps + ("d",)))
            stk2, cell2, n_red = reduce_all(stk, tok_ids[off])
            if n_red:
                nxt = (tuple(stk2), off, reps)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
            if cell2 & 3 == 2:
                stk2.append(cell2 >> 2)
                nxt = (tuple(stk2), off + 1, reps + ("s",))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if successes:
            out: set[tuple[Repair, ...]] = set()
            for reps in successes:
                trimmed = list(reps)
                while trimmed and trimmed[-1] == "s":
                    trimmed.pop()
                if not trimmed:
                    continue
                out.add(
                    tuple(
                        Repair("delete") if r == "d"
                        else Repair("shift") if r == "s"
                        else Repair("insert", table.tokens[r[1]])
                        for r in trimmed
                    )
                )
            return cost, out
    return None
