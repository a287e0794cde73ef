"""Repair search vs. panic mode on the same broken input.

Panic recovery pops the stack and skips input until something lines up
again — fast, but it silently throws user code away and tends to report
fewer, coarser errors.  The repair search keeps every token it can.
"""

from lrfix import LexSpec, build_tables, parse_grammar, parse, tree_text

GRAMMAR = """
%start Prog
%%
Prog: | Prog Stmt;
Stmt: 'ID' '=' Rhs ';';
Rhs: 'ID' | 'NUM';
"""

LEX = r"""
[0-9]+ 'NUM'
[A-Za-z_][A-Za-z0-9_]* 'ID'
= '='
; ';'
[ \t\n]+ ;
"""

SRC = "a = 1 ; b = = 2 ; c 3 ; d = 4 ;\n"

table = build_tables(parse_grammar(GRAMMAR))
lexer = LexSpec.parse(LEX)

for recoverer in ("cpctplus", "panic", "none"):
    result = parse(table, lexer.lex(SRC), SRC, recoverer=recoverer)
    stats = result.stats
    print(f"{recoverer}:")
    print(f"  parse succeeded: {result.success}")
    print(f"  errors reported: {stats.error_locations}")
    print(f"  tokens skipped:  {stats.skipped} ({stats.tokens_skipped_pct:.0f}%)")
    if result.tree is not None:
        kept = sum(
            1 for line in tree_text(result.tree, SRC).splitlines()
            if line.strip() == "Stmt"
        )
        print(f"  statements kept: {kept} of 4")
    print()
