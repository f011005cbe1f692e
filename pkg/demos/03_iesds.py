"""Solve games by iterated elimination of dominated strategies.

Each round removes strategies that are beaten by a live winning strategy of
a stronger role, or that never win while a same-role strategy always does.
The last strategy standing belongs to the role that fixes the truth value.
"""

# %%
from nonsense_games import get_logic, parse, parse_valuation
from nonsense_games.solver import iesds

cases = [
    ("bh3", "(p|q)|(r&q)", "p=T,q=N,r=F"),
    ("bh3", "p&q", "p=F,q=N"),
    ("bh4", "(p|q)&r", "p=N,q=S,r=T"),
    ("lp", "p|q", "p=P,q=T"),
    ("lp", "p&~p", "p=P"),
]

for logic, text, val in cases:
    spec = get_logic(logic)
    trace = iesds(spec, parse(text), parse_valuation(spec, val))
    print(f"-- {spec.name}: {text} with {val}")
    print(trace.render())
    print()
