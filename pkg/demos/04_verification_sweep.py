"""Check the correspondence theorems exhaustively on small formulas.

Every formula over two atoms up to depth 2 is paired with every valuation.
The game solver, the truth tables and brute-force strategy replay must all
agree.  A deliberately broken table shows that the sweep can fail.
"""

# %%
import time

from nonsense_games.harness import SweepConfig, render_reports, run_sweep
from nonsense_games.logics import get_logic

for logic in ("bh3", "bh4", "lp", "bhn:3"):
    start = time.perf_counter()
    reports = run_sweep(SweepConfig(logic=logic, atoms=2, depth=2, iesds=True))
    print(render_reports(logic, reports))
    print(f"({time.perf_counter() - start:.1f}s)\n")

# %% Flip one cell: T | N is stored as T instead of N.
bh3 = get_logic("bh3")
t, n = bh3.index(bh3.value("T")), bh3.index(bh3.value("N"))
broken = bh3.with_table_entry("disj", (t, n), t)
print(render_reports("BH3 with T|N := T", run_sweep(SweepConfig(atoms=2, depth=1), spec=broken)))
