"""Recover truth tables by playing games on x, ~x, x & y and x | y.

The solver never looks at the stored tables, so each grid below is a
prediction of the game rules.  It matches the tables for BH3, BH4 and LP,
and extends to longer chains of infectious values.
"""

# %%
from nonsense_games.logics import derive_table, get_logic, render_tables

for name in ("bh3", "bh4", "lp", "bhn:3"):
    spec = get_logic(name)
    derived = derive_table(spec)
    print(f"== {spec.name}: derived tables {'match' if derived.equals(spec.tables) else 'DIFFER FROM'} stored ones")
    print(render_tables(spec, derived))
    print()

# %% Designation only changes which values count as true, not the game.
for name in ("bochvar", "hallden"):
    spec = get_logic(name)
    print(name, "designates", sorted(v.letter for v in spec.designated))
