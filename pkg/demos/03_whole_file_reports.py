"""One run, every error: repairing a whole file and keeping the tree.

Applying the best repair at each error location lets the parse continue,
so a single run reports all the problems in a file and still produces a
complete parse tree — with zero-width filler tokens marking whatever had
to be invented.
"""

from lrfix import LexSpec, build_tables, parse_grammar, parse, tree_text

GRAMMAR = """
%start ClassDef
%%
ClassDef: 'class' 'ID' '{' Members '}';
Members: | Members Member;
Member: Type Decls ';';
Type: 'int';
Decls: Decl | Decls ',' Decl;
Decl: 'ID' | 'ID' '=' Init;
Init: 'ID' | 'NUM';
"""

LEX = r"""
class 'class'
int 'int'
[0-9]+ 'NUM'
[A-Za-z_][A-Za-z0-9_]* 'ID'
\{ '{'
\} '}'
; ';'
, ','
= '='
[ \t\n]+ ;
"""

SRC = """\
class Point {
  int x y;
  int w = ;
}
"""

table = build_tables(parse_grammar(GRAMMAR))
toks = LexSpec.parse(LEX).lex(SRC)
result = parse(table, toks, SRC)

print(SRC)
print(f"{len(result.reports)} errors, all repaired: {result.success}")
for report in result.reports:
    best = ", ".join(
        f"{r.kind} {r.token}" if r.token else r.kind for r in report.applied
    )
    print(f"  line {report.line} col {report.col}: applied [{best}] "
          f"out of {len(report.sequences)} minimum-cost candidates")

print()
print("run statistics:")
stats = result.stats
print(f"  error locations: {stats.error_locations}")
print(f"  repair costs:    {stats.costs}")
print(f"  tokens skipped:  {stats.skipped} of {stats.real_tokens} "
      f"({stats.tokens_skipped_pct:.1f}%)")
print(f"  recovery time:   {stats.recovery_time_s * 1000:.2f} ms")

print()
print("the tree survives, inserted fillers marked:")
print(tree_text(result.tree, SRC))
