"""LR(1) state graphs and action/goto tables.

States are built from full LR(1) items (production, dot position, and a
lookahead set per core item).  By default, states whose cores coincide are
merged whenever Pager's weak-compatibility condition says the merge cannot
manufacture a conflict that neither source state had; passing
``merge=False`` keeps every canonical LR(1) state distinct.  Both modes
accept exactly the same inputs — merging only shrinks the automaton.

After construction the states are renumbered breadth-first from the start
state.  Each state's outgoing edges are visited largest-target-first
(measured by the target's closure size), breaking ties in favour of rule
edges over token edges and then by declaration order.  The numbering is
therefore a pure function of the grammar text.

Conflicts are resolved the way Yacc resolves them: shift/reduce first
consults declared binding levels (a later %left/%right/%nonassoc line
binds tighter; at equal level %left reduces, %right shifts, %nonassoc
turns the cell into an error), and otherwise shifts with a warning;
reduce/reduce keeps the production declared earlier, with a warning.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .grammar import EOF, Grammar, Production

# Internal name for the synthetic start rule.  It never appears in user
# grammars (grammar.py forbids defining it) and never shows up in tables.
AUG_RULE = "^"

# Action cells are packed into ints: 0 is error, 1 is accept, and the low
# two bits otherwise distinguish shift (2) from reduce (3) with the
# state/production number in the high bits.
ERROR_CELL = 0
ACCEPT_CELL = 1


def shift_cell(state: int) -> int:
    return (state << 2) | 2


def reduce_cell(prod: int) -> int:
    return (prod << 2) | 3


def cell_kind(cell: int) -> str:
    if cell == ERROR_CELL:
        return "error"
    if cell == ACCEPT_CELL:
        return "accept"
    return "shift" if cell & 3 == 2 else "reduce"


def cell_arg(cell: int) -> int:
    return cell >> 2


@dataclass
class Conflict:
    kind: str          # "shift/reduce" or "reduce/reduce"
    state: int
    token: str
    chosen: str
    discarded: str

    def describe(self) -> str:
        return (
            f"{self.kind} conflict in state {self.state} on {self.token!r}: "
            f"kept {self.chosen}, dropped {self.discarded}"
        )


class _State:
    """A state under construction: kernel items with mutable lookaheads."""

    __slots__ = ("kernel",)

    def __init__(self, kernel: dict[tuple[int, int], set[str]]):
        self.kernel = kernel

    def core(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.kernel)

    def frozen(self):
        return frozenset((item, frozenset(las)) for item, las in self.kernel.items())


def _weakly_compatible(existing: _State, incoming: dict[tuple[int, int], set[str]]) -> bool:
    """Pager's test, assuming equal cores.

    Merging is safe when, for every pair of kernel items, either the cross
    lookahead intersections are empty (the merge cannot create a new
    clash) or one side already had the two lookahead sets overlapping (any
    clash was already present before merging).
    """
    items = list(incoming)
    if len(items) == 1:
        return True
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            c_a, c_b = incoming[items[a]], incoming[items[b]]
            d_a, d_b = existing.kernel[items[a]], existing.kernel[items[b]]
            if (c_a & d_b) or (c_b & d_a):
                if not (c_a & c_b) and not (d_a & d_b):
                    return False
    return True


class StateGraph:
    def __init__(self, grammar: Grammar, merged: bool):
        self.grammar = grammar
        self.merged = merged
        # Augmented production list: user productions plus ^ -> start.
        self.productions: list[Production] = list(grammar.productions)
        self.aug_index = len(self.productions)
        self.productions.append(Production(self.aug_index, AUG_RULE, (grammar.start,)))
        # Filled by _build:
        self.states: list[dict[tuple[int, int], frozenset[str]]] = []  # kernels
        self.edges: list[dict[str, int]] = []
        self._closures: list[dict[tuple[int, int], frozenset[str]]] = []
        self._build()

    # -- grammar analysis ---------------------------------------------------

    def _compute_first(self) -> tuple[dict[str, set[str]], set[str]]:
        g = self.grammar
        first: dict[str, set[str]] = {r: set() for r in g.rules}
        nullable: set[str] = set()
        changed = True
        while changed:
            changed = False
            for p in g.productions:
                f = first[p.lhs]
                before = (len(f), p.lhs in nullable)
                all_nullable = True
                for sym in p.rhs:
                    if g.is_token(sym):
                        f.add(sym)
                        all_nullable = False
                        break
                    f |= first[sym]
                    if sym not in nullable:
                        all_nullable = False
                        break
                if all_nullable:
                    nullable.add(p.lhs)
                if (len(f), p.lhs in nullable) != before:
                    changed = True
        return first, nullable

    def _first_of(self, seq: tuple[str, ...], cont: frozenset[str]) -> frozenset[str]:
        """FIRST of ``seq`` followed by any token in ``cont``."""
        out: set[str] = set()
        for sym in seq:
            if self.grammar.is_token(sym):
                out.add(sym)
                return frozenset(out)
            out |= self._first[sym]
            if sym not in self._nullable:
                return frozenset(out)
        return frozenset(out | cont)

    # -- state construction ---------------------------------------------------

    def _closure(self, kernel: dict[tuple[int, int], set[str]]):
        g = self.grammar
        items: dict[tuple[int, int], set[str]] = {k: set(v) for k, v in kernel.items()}
        work = deque(items)
        while work:
            prod_i, dot = work.popleft()
            prod = self.productions[prod_i]
            if dot >= len(prod.rhs):
                continue
            sym = prod.rhs[dot]
            if g.is_token(sym):
                continue
            cont = self._first_of(prod.rhs[dot + 1 :], frozenset(items[(prod_i, dot)]))
            for q in g.rules[sym]:
                key = (q, 0)
                cur = items.get(key)
                if cur is None:
                    items[key] = set(cont)
                    work.append(key)
                elif not cont <= cur:
                    cur |= cont
                    work.append(key)
        return items

    def _build(self) -> None:
        self._first, self._nullable = self._compute_first()

        states: list[_State] = [_State({(self.aug_index, 0): {EOF}})]
        by_core: dict[frozenset, list[int]] = {states[0].core(): [0]}
        exact: dict[frozenset, int] = {states[0].frozen(): 0}
        edges: list[dict[str, int]] = [{}]
        work = deque([0])
        queued = {0}

        def enqueue(i: int) -> None:
            if i not in queued:
                queued.add(i)
                work.append(i)

        while work:
            i = work.popleft()
            queued.discard(i)
            closure = self._closure(states[i].kernel)
            # Group closure items by the symbol after the dot.
            moves: dict[str, dict[tuple[int, int], set[str]]] = {}
            for (prod_i, dot), las in closure.items():
                rhs = self.productions[prod_i].rhs
                if dot < len(rhs):
                    moves.setdefault(rhs[dot], {}).setdefault((prod_i, dot + 1), set()).update(las)
            new_edges: dict[str, int] = {}
            for sym, kernel in moves.items():
                target = self._find_or_add(kernel, states, by_core, exact, edges, enqueue)
                new_edges[sym] = target
            edges[i] = new_edges

        self._finalize(states, edges)

    def _find_or_add(self, kernel, states, by_core, exact, edges, enqueue) -> int:
        if self.merged:
            core = frozenset(kernel)
            for j in by_core.get(core, ()):
                if _weakly_compatible(states[j], kernel):
                    grew = False
                    for item, las in kernel.items():
                        if not las <= states[j].kernel[item]:
                            states[j].kernel[item] |= las
                            grew = True
                    if grew:
                        enqueue(j)
                    return j
        else:
            key = frozenset((item, frozenset(las)) for item, las in kernel.items())
            j = exact.get(key)
            if j is not None:
                return j
        j = len(states)
        states.append(_State({k: set(v) for k, v in kernel.items()}))
        by_core.setdefault(frozenset(kernel), []).append(j)
        if not self.merged:
            exact[states[j].frozen()] = j
        edges.append({})
        enqueue(j)
        return j

    # -- renumbering ----------------------------------------------------------

    def _finalize(self, states: list[_State], edges: list[dict[str, int]]) -> None:
        g = self.grammar
        closures = [self._closure(s.kernel) for s in states]
        rule_ord = {r: i for i, r in enumerate(g.rules)}
        tok_ord = {t: i for i, t in enumerate(g.token_decl_order)}
        tok_ord[EOF] = len(g.token_decl_order)

        def edge_key(sym_target: tuple[str, int]):
            sym, target = sym_target
            if g.is_rule(sym):
                kind, ordinal = 0, rule_ord[sym]
            else:
                kind, ordinal = 1, tok_ord[sym]
            return (-len(closures[target]), kind, ordinal)

        order: dict[int, int] = {0: 0}
        bfs = deque([0])
        while bfs:
            i = bfs.popleft()
            for sym, target in sorted(edges[i].items(), key=edge_key):
                if target not in order:
                    order[target] = len(order)
                    bfs.append(target)
        if len(order) != len(states):
            # Merging can strand a state every edge to which was later
            # redirected; drop unreachable states from the numbering.
            pass

        n = len(order)
        self.states = [dict()] * n
        self.edges = [dict()] * n
        self._closures = [dict()] * n
        for old, new in order.items():
            self.states[new] = {
                item: frozenset(las) for item, las in states[old].kernel.items()
            }
            self.edges[new] = {sym: order[t] for sym, t in edges[old].items()}
            self._closures[new] = {
                item: frozenset(las) for item, las in closures[old].items()
            }

    # -- inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.states)

    def closure_of(self, state: int) -> dict[tuple[int, int], frozenset[str]]:
        return self._closures[state]

    def item_str(self, item: tuple[int, int], las: frozenset[str]) -> str:
        prod_i, dot = item
        p = self.productions[prod_i]
        body = list(p.rhs)
        body.insert(dot, ".")
        las_s = ", ".join(sorted(las))
        return f"{p.lhs}: {' '.join(body)}  {{{las_s}}}"

    def dump(self) -> str:
        lines: list[str] = []
        for i in range(len(self.states)):
            lines.append(f"State {i}")
            closure = self._closures[i]
            kernel = self.states[i]
            for item in sorted(closure):
                mark = "" if item in kernel else "    "
                lines.append(f"    {mark}{self.item_str(item, closure[item])}")
            for sym, t in sorted(self.edges[i].items(), key=lambda e: e[1]):
                lines.append(f"  {sym} -> {t}")
        return "\n".join(lines) + "\n"


class StateTable:
    """Dense action/goto tables plus everything needed to run them."""

    def __init__(self, graph: StateGraph):
        self.graph = graph
        g = graph.grammar
        self.grammar = g
        self.tokens: list[str] = list(g.token_decl_order) + [EOF]
        self.token_index: dict[str, int] = {t: i for i, t in enumerate(self.tokens)}
        self.eof = self.token_index[EOF]
        self.rule_names: list[str] = list(g.rules)
        self.rule_index: dict[str, int] = {r: i for i, r in enumerate(self.rule_names)}
        self.productions = graph.productions
        self.prod_arity: list[int] = [len(p.rhs) for p in self.productions]
        self.prod_rule: list[int] = [
            self.rule_index.get(p.lhs, -1) for p in self.productions
        ]
        self.n_states = len(graph)
        self.conflicts: list[Conflict] = []
        self.act: list[list[int]] = []
        self.goto: list[list[int]] = []
        self._fill()

    # -- construction -----------------------------------------------------------

    def _fill(self) -> None:
        g = self.grammar
        graph = self.graph
        n_tok = len(self.tokens)
        n_rule = len(self.rule_names)
        for s in range(self.n_states):
            row = [ERROR_CELL] * n_tok
            grow = [-1] * n_rule
            # Candidates per token: at most one shift, any number of reduces.
            shift_to: dict[int, int] = {}
            reduces: dict[int, list[int]] = {}
            for sym, t in graph.edges[s].items():
                if g.is_rule(sym):
                    grow[self.rule_index[sym]] = t
                else:
                    shift_to[self.token_index[sym]] = t
            accept_on_eof = False
            for (prod_i, dot), las in graph.closure_of(s).items():
                if dot != len(graph.productions[prod_i].rhs):
                    continue
                if prod_i == graph.aug_index:
                    accept_on_eof = True
                    continue
                for la in las:
                    reduces.setdefault(self.token_index[la], []).append(prod_i)
            for tok_i in range(n_tok):
                row[tok_i] = self._resolve(
                    s, tok_i, shift_to.get(tok_i), sorted(reduces.get(tok_i, ())),
                    accept_on_eof and tok_i == self.eof,
                )
            self.act.append(row)
            self.goto.append(grow)

    def _resolve(
        self, state: int, tok_i: int, shift: int | None, reds: list[int], accept: bool
    ) -> int:
        tok = self.tokens[tok_i]
        g = self.grammar
        chosen_red: int | None = None
        if reds:
            chosen_red = reds[0]
            for other in reds[1:]:
                self.conflicts.append(
                    Conflict(
                        "reduce/reduce", state, tok,
                        str(self.productions[chosen_red]), str(self.productions[other]),
                    )
                )
        if accept:
            if chosen_red is not None:
                self.conflicts.append(
                    Conflict(
                        "reduce/reduce", state, tok,
                        "accept", str(self.productions[chosen_red]),
                    )
                )
            return ACCEPT_CELL
        if shift is None:
            return reduce_cell(chosen_red) if chosen_red is not None else ERROR_CELL
        if chosen_red is None:
            return shift_cell(shift)
        # Shift/reduce: consult binding levels when both sides have one.
        tok_prec = g.assoc.get(tok)
        prod_prec = g.production_prec(self.productions[chosen_red])
        if tok_prec is not None and prod_prec is not None:
            if prod_prec[1] > tok_prec[1]:
                return reduce_cell(chosen_red)
            if prod_prec[1] < tok_prec[1]:
                return shift_cell(shift)
            kind = tok_prec[0]
            if kind == "left":
                return reduce_cell(chosen_red)
            if kind == "right":
                return shift_cell(shift)
            return ERROR_CELL  # nonassoc at equal level: neither parse is right
        self.conflicts.append(
            Conflict(
                "shift/reduce", state, tok,
                f"shift to {shift}", str(self.productions[chosen_red]),
            )
        )
        return shift_cell(shift)

    # -- friendly lookups ---------------------------------------------------------

    def action(self, state: int, token: str):
        cell = self.act[state][self.token_index[token]]
        kind = cell_kind(cell)
        if kind in ("shift", "reduce"):
            return (kind, cell_arg(cell))
        return (kind,)

    def goto_state(self, state: int, rule: str) -> int:
        return self.goto[state][self.rule_index[rule]]

    def conflict_summary(self) -> str:
        sr = sum(1 for c in self.conflicts if c.kind == "shift/reduce")
        rr = len(self.conflicts) - sr
        return f"{sr} shift/reduce, {rr} reduce/reduce"


def build_stategraph(grammar: Grammar, merge: bool = True) -> StateGraph:
    return StateGraph(grammar, merged=merge)


def build_statetable(graph: StateGraph) -> StateTable:
    return StateTable(graph)


def build_tables(grammar: Grammar, merge: bool = True) -> StateTable:
    return StateTable(StateGraph(grammar, merged=merge))
