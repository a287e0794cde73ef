"""From a grammar file to runnable LR tables.

This walks the front half of the pipeline: parse a Yacc-style grammar,
build the LR(1) state machine, and poke at the resulting action/goto
tables.  It also shows what state merging buys you and how declared
operator precedence silently settles would-be conflicts.
"""

from lrfix import build_tables, parse_grammar

CALC = """
%start Expr
%%
Expr: Term '+' Expr
    | Term
    ;
Term: Factor '*' Term
    | Factor
    ;
Factor: '(' Expr ')'
    | 'INT'
    ;
"""

grammar = parse_grammar(CALC)
print("rules:", ", ".join(grammar.rules))
print("tokens in declaration order:", grammar.token_decl_order)
print()

merged = build_tables(grammar)                  # weak-compatibility merging (default)
canonical = build_tables(grammar, merge=False)  # full canonical LR(1)
print(f"canonical LR(1): {canonical.n_states} states")
print(f"with state merging: {merged.n_states} states")
print()

# The tables answer "what do I do in state s on token t?"
for state, tok in [(0, "INT"), (0, "+"), (3, "+"), (4, "$")]:
    act = merged.action(state, tok)
    if act[0] == "reduce":
        detail = merged.productions[act[1]]
        print(f"state {state:2} on {tok!r}: reduce {detail.lhs}: {' '.join(detail.rhs)}")
    else:
        print(f"state {state:2} on {tok!r}: {' '.join(str(a) for a in act)}")
print()

# The full state machine, kernels and edges, for the curious:
print(merged.graph.dump())

# An ambiguous grammar plus binding declarations: no conflicts remain.
EXPR = """
%token NUM
%left '+' '-'
%left '*'
%%
E: E '+' E | E '-' E | E '*' E | NUM;
"""
t = build_tables(parse_grammar(EXPR))
print(f"ambiguous grammar with %left declarations -> conflicts: {t.conflict_summary()}")

# Without them, Yacc rules apply (shift wins) and the conflict is recorded.
t = build_tables(parse_grammar("%token NUM\n%%\nE: E '+' E | NUM;"))
print(f"same grammar, no declarations -> conflicts: {t.conflict_summary()}")
for c in t.conflicts:
    print("  recorded:", c.describe())
