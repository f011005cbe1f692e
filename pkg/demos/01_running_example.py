"""Walk through the three-atom running example under BH3.

(p | q) | (r & q) with p true, q nonsense and r false.  Verifier can win
by going left twice, but Dominator can also win, by steering the play to
the nonsense atom q, and Dominator's wins outrank everyone else's.
"""

# %%
from nonsense_games import get_logic, parse, parse_valuation
from nonsense_games.game import SemanticGame
from nonsense_games.logics import eval_oracle
from nonsense_games.solver import extract_strategy, solve_value, truth_maker_run, win_profile

bh3 = get_logic("bh3")
f = parse("(p|q)|(r&q)")
v = parse_valuation(bh3, "p=T,q=N,r=F")

# %% The truth table says N.
print("truth tables:", eval_oracle(bh3, f, v))

# %% The game says N too: two roles can win, and the stronger one decides.
for role, wins in win_profile(bh3, f, v).items():
    print(f"  {role.name:<10} {'can win' if wins else 'cannot win'}")
value, role = solve_value(bh3, f, v)
print("game:", value, f"(forced by {role.name})")

# %% Winning strategies, read off the backward-induction table (Left preferred).
game = SemanticGame(bh3, f)
for name in ("Verifier", "Dominator"):
    s = extract_strategy(bh3, f, v, bh3.role(name))
    print(f"  {name:<10} {s.compact(game):<5} full map: {s.render()}")

# %% The play when both winners follow their strategies.
run, _ = truth_maker_run(bh3, f, v)
print(game.render_run(run))
