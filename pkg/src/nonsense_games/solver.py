"""Winning strategies, dominant winners, truth-maker strategies and IESDS.

Three independent routes to the same facts live here:

* :func:`win_matrix` is backward induction over the formula tree,
  vectorized over a batch of valuations;
* :func:`brute_force_profile` enumerates pure strategies and replays every
  play through :class:`~nonsense_games.game.SemanticGame`;
* :func:`iesds` eliminates strategies round by round using the role
  dominance order.

Dominance is role-level: a winner in a stronger stratum of
``LogicSpec.dominance`` fixes the truth value, whatever weaker roles can do.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import BudgetExceeded, Indeterminate, NoWinningStrategy
from .formula import And, Atom, Formula, Not, Or, Path, atoms, leaves, to_string
from .game import LEFT, SIDES, SemanticGame
from .logics import (
    Falsifier,
    LogicSpec,
    Role,
    TruthValue,
    Valuation,
    Verifier,
    check_valuation,
    encode,
)

DEFAULT_BUDGET = 2**16

WinProfile = dict[Role, bool]


# -- backward induction -----------------------------------------------------

_CHOOSERS: dict = {}


def _chooser_rows(spec: LogicSpec, kind: type) -> np.ndarray:
    """Per role: True where the role chooses at a ``kind`` node (needs one good child)."""
    key = (spec.roles, kind)
    if key not in _CHOOSERS:
        mover = Falsifier if kind is And else Verifier
        _CHOOSERS[key] = np.array([r == mover or not r.classical for r in spec.roles])
    return _CHOOSERS[key]


def _induction_consts(spec: LogicSpec):
    key = (spec.roles, "induction")
    if key not in _CHOOSERS:
        swap = np.arange(len(spec.roles))
        swap[[0, 1]] = swap[[1, 0]]
        choosers = {kind: _chooser_rows(spec, kind)[:, None] for kind in (And, Or)}
        _CHOOSERS[key] = (swap, choosers)
    swap, choosers = _CHOOSERS[key]
    return spec.targets[:, None], swap, choosers


def win_matrix(
    spec: LogicSpec,
    f: Formula,
    columns: Mapping[str, int],
    codes: np.ndarray,
    memo: dict | None = None,
) -> np.ndarray:
    """``out[r, i]``: does the role ``spec.roles[r]`` at the root of ``f`` have a
    winning strategy under valuation ``codes[i]``.

    A chooser needs a winning child; a role that does not choose at a
    connective must win whichever child the choosers pick.  Negation swaps the
    Verifier and Falsifier rows.
    """
    if memo is None:
        memo = {}
    targets, swap, choosers = _induction_consts(spec)

    def go(node: Formula) -> np.ndarray:
        hit = memo.get(id(node))
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, Atom):
            out = codes[:, columns[node.name]][None, :] == targets
        elif isinstance(node, Not):
            out = go(node.child)[swap]
        else:
            left, right = go(node.left), go(node.right)
            out = np.where(choosers[type(node)], left | right, left & right)
        memo[id(node)] = (node, out)
        return out

    return go(f)


def dominant_index(spec: LogicSpec, wins: np.ndarray) -> np.ndarray:
    """Index of the dominant winning role per column, -1 where none is unique."""
    n = wins.shape[1]
    out = np.full(n, -1, dtype=np.int64)
    undecided = np.ones(n, dtype=bool)
    for rows in spec.dominance_rows:
        if len(rows) == 1:
            won = undecided & wins[rows[0]]
            out[won] = rows[0]
            undecided &= ~won
        else:
            block = wins[rows]
            count = block.sum(axis=0)
            unique = undecided & (count == 1)
            out[unique] = rows[block[:, unique].argmax(axis=0)]
            undecided &= count == 0
        if not undecided.any():
            break
    return out


def _columns(f: Formula) -> tuple[dict[str, int], tuple[str, ...]]:
    names = tuple(sorted(atoms(f)))
    return {a: i for i, a in enumerate(names)}, names


def win_profile(spec: LogicSpec, f: Formula, v: Valuation) -> WinProfile:
    """Which roles have a winning strategy at the root of ``f``."""
    check_valuation(spec, f, v)
    columns, names = _columns(f)
    wins = win_matrix(spec, f, columns, encode(spec, names, v))[:, 0]
    return {r: bool(w) for r, w in zip(spec.roles, wins)}


def solve_value(spec: LogicSpec, f: Formula, v: Valuation) -> tuple[TruthValue, Role]:
    """Truth value forced by the dominant winner, and that winner."""
    check_valuation(spec, f, v)
    columns, names = _columns(f)
    wins = win_matrix(spec, f, columns, encode(spec, names, v))
    idx = int(dominant_index(spec, wins)[0])
    if idx < 0:
        raise Indeterminate(f"no unique dominant winner for {to_string(f)}")
    role = spec.roles[idx]
    return spec.target(role), role


# -- strategies -------------------------------------------------------------

@dataclass(frozen=True)
class Strategy:
    """Choice function of one player over its decision nodes."""

    owner: Role
    choices: tuple[tuple[Path, str], ...]

    def as_dict(self) -> dict[Path, str]:
        return dict(self.choices)

    def reachable(self, game: SemanticGame) -> list[Path]:
        """Own decision nodes the owner's strand can reach, in pre-order."""
        own = self.as_dict()
        seen: list[Path] = []
        stack: list[Path] = [()]
        while stack:
            path = stack.pop()
            node = game.nodes[path]
            if isinstance(node, Atom):
                continue
            if isinstance(node, Not):
                stack.append(path + (0,))
            elif path in own:
                seen.append(path)
                stack.append(path + (SIDES.index(own[path]),))
            else:
                stack.extend([path + (1,), path + (0,)])
        return sorted(seen)

    def compact(self, game: SemanticGame) -> str:
        """``L-R`` style: choices at reachable decision nodes."""
        own = self.as_dict()
        picks = [own[p] for p in self.reachable(game)]
        return "-".join(picks) if picks else "{}"

    def render(self) -> str:
        """Ordered ``node-path: L/R`` pairs."""
        if not self.choices:
            return "{}"
        return ", ".join(f"{format_path(p)}: {c}" for p, c in self.choices)


def format_path(path: Path) -> str:
    return "root" if not path else ".".join(map(str, path))


def enumerate_strategies(game: SemanticGame, player: Role) -> list[Strategy]:
    """All pure strategies of ``player``, lexicographic with L before R."""
    nodes = game.decision_nodes(player)
    return [Strategy(player, tuple(zip(nodes, picks))) for picks in itertools.product(SIDES, repeat=len(nodes))]


def extract_strategy(spec: LogicSpec, f: Formula, v: Valuation, role: Role) -> Strategy:
    """A winning strategy for ``role``: at every own decision node pick a child
    where the role keeps a winning strategy, preferring Left."""
    check_valuation(spec, f, v)
    columns, names = _columns(f)
    codes = encode(spec, names, v)
    memo: dict = {}
    game = SemanticGame(spec, f)
    ri = spec.role_index

    if not win_matrix(spec, f, columns, codes, memo)[ri(role), 0]:
        raise NoWinningStrategy(f"{role.name} has no winning strategy for {to_string(f)}")
    picks = []
    for path in game.decision_nodes(role):
        choice = LEFT
        for side, idx in zip(SIDES, (0, 1)):
            child = path + (idx,)
            held = game.role_of(role, child)
            if win_matrix(spec, game.nodes[child], columns, codes, memo)[ri(held), 0]:
                choice = side
                break
        picks.append((path, choice))
    return Strategy(role, tuple(picks))


def truth_maker_run(spec: LogicSpec, f: Formula, v: Valuation) -> tuple[list, dict[Role, Strategy]]:
    """The maximal run when every role that can win follows its extracted
    strategy (the others take the Left default everywhere)."""
    profile = win_profile(spec, f, v)
    strategies = {r: extract_strategy(spec, f, v, r) for r in spec.roles if profile[r]}
    run = SemanticGame(spec, f).play({r: s.as_dict() for r, s in strategies.items()})
    return run, strategies


# -- replayed strategy outcomes ---------------------------------------------

def opponents(game: SemanticGame, player: Role, exhaustive: bool = False) -> list[Role]:
    """Players whose choices can move ``player``'s strand.

    The classical strand is shared by Verifier and Falsifier; every infector
    strand is moved by its owner alone.  ``exhaustive`` returns every other
    player instead.
    """
    if exhaustive:
        return [r for r in game.players if r != player]
    if player == Verifier:
        return [Falsifier]
    if player == Falsifier:
        return [Verifier]
    return []


def profile_count(game: SemanticGame, exhaustive: bool = False) -> int:
    """Largest number of plays replayed for one player."""
    worst = 0
    for player in game.players:
        nodes = len(game.decision_nodes(player))
        nodes += sum(len(game.decision_nodes(o)) for o in opponents(game, player, exhaustive))
        worst = max(worst, 2**nodes)
    return worst


def _strand(game: SemanticGame, terminal, player: Role):
    for pos in terminal:
        if (pos.role.classical and player.classical) or pos.role == player:
            return pos
    raise AssertionError("strand missing from terminal")  # pragma: no cover


@dataclass
class PlayerOutcomes:
    """For one player: its strategies and, per strategy, the leaves its strand can end on."""

    player: Role
    nodes: list[Path]
    picks: list[tuple[str, ...]]
    reach: np.ndarray  # (strategies, leaves) 0/1
    leaf_roles: np.ndarray  # role index held at each leaf

    def strategy(self, i: int) -> Strategy:
        return Strategy(self.player, tuple(zip(self.nodes, self.picks[i])))

    @property
    def strategies(self) -> list[Strategy]:
        return [self.strategy(i) for i in range(len(self.picks))]


@dataclass
class ShapeOutcomes:
    leaf_paths: list[Path]
    players: list[PlayerOutcomes] = field(default_factory=list)


_STRAND_CACHE: dict = {}
_SHAPE_CACHE: dict = {}
_LEAF_TABLES: dict = {}


def clear_caches() -> None:
    """Forget every cached replay and leaf table (used to time cold runs)."""
    _STRAND_CACHE.clear()
    _SHAPE_CACHE.clear()
    _LEAF_TABLES.clear()


def shape_key(f: Formula) -> str:
    if isinstance(f, Atom):
        return "_"
    if isinstance(f, Not):
        return "~" + shape_key(f.child)
    op = "&" if isinstance(f, And) else "|"
    return f"({shape_key(f.left)}{op}{shape_key(f.right)})"


def _strand_kind(player: Role) -> str:
    return player.kind if player.classical else "infector"


def _replay_strand(game: SemanticGame, player: Role, leaf_at: dict, exhaustive: bool):
    nodes = game.decision_nodes(player)
    mine = enumerate_strategies(game, player)
    others = [enumerate_strategies(game, o) for o in opponents(game, player, exhaustive)]
    reach = np.zeros((len(mine), len(leaf_at)), dtype=np.float32)
    for s_i, strat in enumerate(mine):
        for combo in itertools.product(*others):
            profile = {strat.owner: strat.as_dict(), **{o.owner: o.as_dict() for o in combo}}
            terminal = game.play(profile)[-1]
            reach[s_i, leaf_at[_strand(game, terminal, player).path]] = 1
    return nodes, [tuple(c for _, c in s.choices) for s in mine], reach


def replay_outcomes(
    spec: LogicSpec, f: Formula, budget: int = DEFAULT_BUDGET, exhaustive: bool = False, shape: str | None = None
) -> ShapeOutcomes:
    """Replay every strategy against every opposing combination through the engine.

    Where a player's strand ends depends only on the tree shape and on whether
    the player is classical or an infector (infector strands are moved by their
    owner alone), so replays are cached on exactly that.
    """
    shape = shape or shape_key(f)
    binary = shape.count("&") + shape.count("|")
    needed = 2 ** (binary * (len(spec.roles) - 1)) if exhaustive else 2**binary
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    key = (spec.roles, shape, exhaustive)
    hit = _SHAPE_CACHE.get(key)
    if hit is not None:
        return hit

    game = SemanticGame(spec, f)
    leaf_paths = [o.path for o in leaves(f)]
    leaf_at = {p: i for i, p in enumerate(leaf_paths)}
    out = ShapeOutcomes(leaf_paths)
    for player in game.players:
        # exhaustive replays involve every player, so they are not shared across logics
        strand_key = (shape, _strand_kind(player), spec.roles if exhaustive else None)
        if strand_key not in _STRAND_CACHE:
            _STRAND_CACHE[strand_key] = _replay_strand(game, player, leaf_at, exhaustive)
        nodes, picks, reach = _STRAND_CACHE[strand_key]
        roles = np.array([spec.role_index(game.role_of(player, p)) for p in leaf_paths], dtype=np.int64)
        out.players.append(PlayerOutcomes(player, nodes, picks, reach, roles))
    if len(_SHAPE_CACHE) > 100_000:
        _SHAPE_CACHE.clear()
        _STRAND_CACHE.clear()
    _SHAPE_CACHE[key] = out
    return out


def strategy_results(
    spec: LogicSpec,
    f: Formula,
    outcomes: ShapeOutcomes,
    columns: Mapping[str, int],
    codes: np.ndarray,
    leaf_names: tuple[str, ...] | None = None,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per player ``(wins, never)``, each ``(strategies, valuations)``.

    ``wins``: the strategy wins against every opposing combination.
    ``never``: it wins against none of them.
    """
    if leaf_names is None:
        leaf_names = tuple(o.formula.name for o in leaves(f))
    cols = [columns[a] for a in leaf_names]
    leaf_vals = codes[:, cols].T  # (leaves, n)
    targets = spec.targets
    out = []
    for po in outcomes.players:
        # float32 matmul is exact at these sizes and far faster than integer matmul
        sat = (leaf_vals == targets[po.leaf_roles][:, None]).astype(np.float32)
        reach = po.reach.astype(np.float32, copy=False)
        wins = (reach @ (1 - sat)) == 0
        never = (reach @ sat) == 0
        out.append((wins, never))
    return out


def brute_force_matrix(
    spec: LogicSpec,
    f: Formula,
    columns: Mapping[str, int],
    codes: np.ndarray,
    budget: int = DEFAULT_BUDGET,
) -> np.ndarray:
    """Batch version of :func:`brute_force_profile`; rows follow ``spec.roles``."""
    outcomes = replay_outcomes(spec, f, budget)
    return np.array([wins.any(axis=0) for wins, _ in strategy_results(spec, f, outcomes, columns, codes)])


LEAF_TABLE_LIMIT = 4096


def leaf_table(
    spec: LogicSpec, f: Formula, budget: int = DEFAULT_BUDGET, shape: str | None = None, kind: str = "wins"
) -> np.ndarray | None:
    """Per-shape results of ``f``'s tree under every tuple of leaf values.

    ``kind="wins"`` gives the brute-force win rows ``(roles, columns)``;
    ``kind="survivor"`` gives the IESDS survivor's role index per column
    (-1 where no unique survivor remains).

    Column ``sum(code_j * |values| ** (m - 1 - j))`` holds the result when the
    j-th leaf (left to right) carries value code ``code_j``.  Formulas that
    share a shape share the table, which is what makes exhaustive sweeps cheap.
    Returns None when the table would exceed ``LEAF_TABLE_LIMIT`` columns;
    callers then score the formula's own valuations directly.
    """
    if kind not in ("wins", "survivor"):
        raise ValueError(f"unknown table kind {kind!r}")
    shape = shape or shape_key(f)
    key = (spec.name, id(spec.tables), shape, kind)
    hit = _LEAF_TABLES.get(key)
    if hit is not None and hit[0] is spec:
        return hit[1]
    outcomes = replay_outcomes(spec, f, budget, shape=shape)
    m = len(outcomes.leaf_paths)
    if len(spec.values) ** m > LEAF_TABLE_LIMIT:
        return None
    codes = np.array(list(itertools.product(range(len(spec.values)), repeat=m)), dtype=np.int8).reshape(-1, m)
    names = tuple(f"x{j}" for j in range(m))
    results = strategy_results(spec, f, outcomes, {a: j for j, a in enumerate(names)}, codes, names)
    if kind == "wins":
        table = np.array([w.any(axis=0) for w, _ in results])
    else:
        table = iesds_core(spec, results).survivor_role
    if len(_LEAF_TABLES) > 20_000:
        _LEAF_TABLES.clear()
    _LEAF_TABLES[key] = (spec, table)
    return table


def leaf_index(spec: LogicSpec, codes: np.ndarray, cols: list[int]) -> np.ndarray:
    """Column of :func:`leaf_table` for each valuation row of ``codes``."""
    base = len(spec.values)
    powers = base ** np.arange(len(cols) - 1, -1, -1, dtype=np.int64)
    return codes[:, cols].astype(np.int64) @ powers


def brute_force_profile(
    spec: LogicSpec, f: Formula, v: Valuation, budget: int = DEFAULT_BUDGET, exhaustive: bool = False
) -> WinProfile:
    """Winning-strategy existence by exhaustive replay of pure-strategy profiles.

    A player has a winning strategy iff one of its strategies wins every play
    against every opposing strategy combination.  Each play is stepped through
    the engine and scored with ``terminal_winners``.
    """
    check_valuation(spec, f, v)
    game = SemanticGame(spec, f)
    needed = profile_count(game, exhaustive)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    profile: WinProfile = {}
    for player in game.players:
        others = [enumerate_strategies(game, o) for o in opponents(game, player, exhaustive)]
        profile[player] = any(
            all(
                player in game.player_winners(
                    game.play({s.owner: s.as_dict(), **{o.owner: o.as_dict() for o in combo}})[-1], v
                )
                for combo in itertools.product(*others)
            )
            for s in enumerate_strategies(game, player)
        )
    return profile


# -- IESDS ------------------------------------------------------------------

@dataclass(frozen=True)
class Elimination:
    round: int
    eliminated: Strategy
    eliminator: Strategy
    reason: str


DOMINATED = "a stronger role holds a live winning strategy"
NEVER_BEST = "never a best response against a same-role winning strategy"


@dataclass
class EliminationTrace:
    entries: list[Elimination]
    survivor: Strategy
    value: TruthValue
    game: SemanticGame

    def lines(self) -> list[str]:
        g = self.game
        # strategies differing only at unreachable nodes render identically; list each once
        out = list(dict.fromkeys(
            f"round {e.round}: ELIMINATE {e.eliminated.owner.name} {e.eliminated.compact(g)}"
            f" — dominated by {e.eliminator.owner.name} {e.eliminator.compact(g)}"
            for e in self.entries
        ))
        out.append(f"survivor: {self.survivor.owner.name} {self.survivor.compact(g)} (value {self.value})")
        return out

    def render(self) -> str:
        return "\n".join(self.lines())

    def to_dict(self) -> dict:
        g = self.game
        strat = lambda s: {  # noqa: E731
            "role": s.owner.name,
            "choices": s.compact(g),
            "strategy": {format_path(p): c for p, c in s.choices},
        }
        return {
            "eliminations": [
                {"round": e.round, "eliminated": strat(e.eliminated), "eliminator": strat(e.eliminator), "reason": e.reason}
                for e in self.entries
            ],
            "survivor": strat(self.survivor),
            "value": self.value.letter,
        }


@dataclass
class IesdsResult:
    """Vectorized IESDS outcome: per valuation the survivor's player and strategy index."""

    survivor_role: np.ndarray
    survivor_strategy: np.ndarray
    log: list  # (round, player idx, strategy idx, eliminator player idx, eliminator strategy idx, reason, mask)


def _first_true(mask: np.ndarray) -> np.ndarray:
    """Row index of the first True per column (0 where none)."""
    return mask.argmax(axis=0)


def iesds_core(spec: LogicSpec, results: list[tuple[np.ndarray, np.ndarray]], max_rounds: int = 64) -> IesdsResult:
    """Iterated elimination over a batch of valuations.

    Each round first removes every live winning strategy of a role that has
    a stronger role with a live winning strategy (citing the strongest such
    role's first live winner), then removes strategies that win against no
    opposing combination while the same role still holds a live winner.
    """
    roles = spec.roles
    stratum = {r: i for i, s in enumerate(spec.dominance) for r in s}
    wins = [w for w, _ in results]
    never = [nv for _, nv in results]
    live = [np.ones_like(w) for w in wins]
    n = wins[0].shape[1]
    log: list = []

    for rnd in range(1, max_rounds + 1):
        changed = False
        live_win = [lv & w for lv, w in zip(live, wins)]
        has = np.array([lw.any(axis=0) for lw in live_win])
        for p, role in enumerate(roles):
            superior = sorted(
                (q for q, other in enumerate(roles) if stratum[other] < stratum[role]),
                key=lambda q: stratum[roles[q]],
            )
            if not superior:
                continue
            by = np.full(n, -1)
            for q in reversed(superior):
                by = np.where(has[q], q, by)
            cover = by >= 0
            elim = live_win[p] & cover[None, :]
            if elim.any():
                changed = True
                for q in set(by[cover].tolist()):
                    cols = by == q
                    m = elim & cols[None, :]
                    if m.any():
                        log.append((rnd, p, q, _first_true(live_win[q]), DOMINATED, m))
                live[p] = live[p] & ~elim
        live_win = [lv & w for lv, w in zip(live, wins)]
        has = np.array([lw.any(axis=0) for lw in live_win])
        for p in range(len(roles)):
            elim = live[p] & never[p] & has[p][None, :]
            if elim.any():
                changed = True
                log.append((rnd, p, p, _first_true(live_win[p]), NEVER_BEST, elim))
                live[p] = live[p] & ~elim
        if not changed:
            break

    live_win = [lv & w for lv, w in zip(live, wins)]
    has = np.array([lw.any(axis=0) for lw in live_win])
    survivor = dominant_index(spec, has)
    strat = np.zeros(n, dtype=np.int64)
    for p in range(len(roles)):
        cols = survivor == p
        strat[cols] = _first_true(live_win[p])[cols]
    return IesdsResult(survivor, strat, log)


def iesds(spec: LogicSpec, f: Formula, v: Valuation, budget: int = DEFAULT_BUDGET) -> EliminationTrace:
    """Iterated elimination of dominated strategies with an audit trail.

    The surviving strategy belongs to the dominance-maximal winning role and
    is the truth-maker strategy of the game.
    """
    check_valuation(spec, f, v)
    columns, names = _columns(f)
    codes = encode(spec, names, v)
    outcomes = replay_outcomes(spec, f, budget)
    result = iesds_core(spec, strategy_results(spec, f, outcomes, columns, codes))

    entries = []
    for rnd, p, q, first, reason, mask in result.log:
        eliminator = outcomes.players[q].strategy(int(first[0]))
        for s_i in np.flatnonzero(mask[:, 0]):
            entries.append(Elimination(rnd, outcomes.players[p].strategy(int(s_i)), eliminator, reason))
    who = int(result.survivor_role[0])
    if who < 0:
        raise Indeterminate(f"IESDS left no unique winner for {to_string(f)}")
    survivor = outcomes.players[who].strategy(int(result.survivor_strategy[0]))
    return EliminationTrace(entries, survivor, spec.target(survivor.owner), SemanticGame(spec, f))
