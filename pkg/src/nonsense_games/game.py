"""Concurrent semantic games: positions, token sets, runs.

A play keeps one *classical strand* (moved by whichever of Verifier and
Falsifier is the mover at the current connective) and one strand per
infectious role (each infector moves its own strand at every connective).
The strands start together at the root and may fork; a :data:`TokenSet`
holds the current position of every strand.

Positions are labelled with the role that is in play there.  On the
classical strand the label is the mover at connectives and is carried
(swapping at each negation) through negations and down to atoms.  Player
identities are named by the role they hold at the root; ``player_of``
recovers the identity from a label using the negation parity of the node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import MissingChoice, NonTerminal, NotYourTurn, Terminal
from .formula import And, Atom, Formula, Not, Or, Path, negation_parity, subformulas, to_string
from .logics import Falsifier, LogicSpec, Role, Valuation, Verifier, dual

LEFT, RIGHT = "L", "R"
SIDES = (LEFT, RIGHT)


@dataclass(frozen=True, slots=True)
class Position:
    role: Role
    path: Path

    @property
    def sort_key(self) -> tuple:
        return (self.role.sort_key, self.path)


TokenSet = frozenset[Position]
Run = list[TokenSet]


class SemanticGame:
    """The game Γ(M, φ) for one logic and one formula (the model enters at terminals)."""

    def __init__(self, spec: LogicSpec, formula: Formula) -> None:
        self.spec = spec
        self.formula = formula
        self.nodes: dict[Path, Formula] = {o.path: o.formula for o in subformulas(formula)}

    @cached_property
    def parity(self) -> dict[Path, bool]:
        return {p: negation_parity(self.formula, p) for p in self.nodes}

    @cached_property
    def binary_paths(self) -> list[Path]:
        """Connective nodes in pre-order."""
        return [p for p, n in self.nodes.items() if isinstance(n, (And, Or))]

    @property
    def players(self) -> tuple[Role, ...]:
        return self.spec.roles

    # -- turn structure --
    def mover(self, path: Path) -> Role | None:
        kind = self.kinds[path]
        if kind is And:
            return Falsifier
        if kind is Or:
            return Verifier
        return None

    def entitled(self, path: Path) -> tuple[Role, ...]:
        mover = self.mover(path)
        return () if mover is None else (mover, *self.spec.infectors)

    def role_of(self, player: Role, path: Path) -> Role:
        """Role held by ``player`` (named by its root role) at ``path``."""
        return dual(player) if self.parity[path] else player

    def player_of(self, pos: Position) -> Role:
        return dual(pos.role) if self.parity[pos.path] else pos.role

    def decision_nodes(self, player: Role) -> list[Path]:
        """Connective nodes, in pre-order, at which ``player`` chooses."""
        return [p for p in self.binary_paths if self.role_of(player, p) in self.entitled(p)]

    # -- σ and τ --
    def positions(self) -> set[Position]:
        out: set[Position] = set()
        for path, node in self.nodes.items():
            roles = self.entitled(path) if isinstance(node, (And, Or)) else self.spec.roles
            out.update(Position(r, path) for r in roles)
        return out

    def token_sets(self) -> set[TokenSet]:
        out: set[TokenSet] = set()
        paired: set[Position] = set()
        for path in self.binary_paths:
            ts = frozenset(Position(r, path) for r in self.entitled(path))
            out.add(ts)
            paired |= ts
        out.update(frozenset({p}) for p in self.positions() - paired)
        return out

    # -- runs --
    def _classical_label(self, path: Path, carried: Role) -> Role:
        return self.mover(path) or carried

    def initial(self) -> TokenSet:
        root = ()
        return frozenset(
            {Position(self._classical_label(root, Verifier), root)}
            | {Position(r, root) for r in self.spec.infectors}
        )

    @cached_property
    def kinds(self) -> dict[Path, type]:
        return {p: type(n) for p, n in self.nodes.items()}

    def is_terminal(self, ts: TokenSet) -> bool:
        kinds = self.kinds
        return all(kinds[p.path] is Atom for p in ts)

    def movers_at(self, ts: TokenSet) -> set[Role]:
        kinds = self.kinds
        return {p.role for p in ts if kinds[p.path] in (And, Or)}

    def step(self, current: TokenSet, choices: Mapping[Role, str]) -> TokenSet:
        """Advance every strand one node; ``choices`` gives L/R per entitled role."""
        if self.is_terminal(current):
            raise Terminal("every position is at an atom")
        entitled = self.movers_at(current)
        if choices.keys() != entitled:
            extra = set(choices) - entitled
            if extra:
                raise NotYourTurn(f"{', '.join(sorted(r.name for r in extra))} may not move here")
            missing = entitled - set(choices)
            raise MissingChoice(f"no choice for {', '.join(sorted(r.name for r in missing))}")
        kinds = self.kinds
        nxt: set[Position] = set()
        for pos in current:
            kind = kinds[pos.path]
            if kind is Atom:
                nxt.add(pos)
                continue
            if kind is Not:
                child = pos.path + (0,)
                role = dual(pos.role)
            else:
                side = choices[pos.role]
                if side == LEFT:
                    child = pos.path + (0,)
                elif side == RIGHT:
                    child = pos.path + (1,)
                else:
                    raise ValueError(f"choice must be L or R, got {side!r}")
                role = pos.role
            if role.classical:
                role = self._classical_label(child, role)
            nxt.add(Position(role, child))
        return frozenset(nxt)

    def terminal_winners(self, terminal: TokenSet, v: Valuation) -> set[Role]:
        """Labels whose winning condition holds at their own atom."""
        won: set[Role] = set()
        for pos in terminal:
            node = self.nodes[pos.path]
            if not isinstance(node, Atom):
                raise NonTerminal(f"position at {to_string(node)} is not an atom")
            if v[node.name] == self.spec.target(pos.role):
                won.add(pos.role)
        return won

    def player_winners(self, terminal: TokenSet, v: Valuation) -> set[Role]:
        """Players (root roles) who win; both classical players are scored on the classical strand."""
        won: set[Role] = set()
        for pos in terminal:
            if pos.role.classical:
                for player in (Verifier, Falsifier):
                    probe = Position(self.role_of(player, pos.path), pos.path)
                    if self.terminal_winners(frozenset({probe}), v):
                        won.add(player)
            elif self.terminal_winners(frozenset({pos}), v):
                won.add(pos.role)
        return won

    def play(self, profile: Mapping[Role, Mapping[Path, str]]) -> Run:
        """Maximal run when each player follows its choice map (missing entries default to L)."""
        ts = self.initial()
        run = [ts]
        while not self.is_terminal(ts):
            choices = {}
            for pos in ts:
                if self.kinds[pos.path] in (And, Or):
                    choices[pos.role] = profile.get(self.player_of(pos), {}).get(pos.path, LEFT)
            ts = self.step(ts, choices)
            run.append(ts)
        return run

    # -- rendering --
    def node_text(self, path: Path, unicode: bool = True) -> str:
        return to_string(self.nodes[path], unicode=unicode, outer_parens=False)

    def render_token_set(self, ts: TokenSet, unicode: bool = True) -> str:
        items = sorted(ts, key=lambda p: p.sort_key)
        return "{" + ", ".join(f"({p.role.name}, {self.node_text(p.path, unicode)})" for p in items) + "}"

    def render_run(self, run: Iterable[TokenSet], unicode: bool = True) -> str:
        return "\n".join(self.render_token_set(ts, unicode) for ts in run)

    def run_records(self, run: Iterable[TokenSet]) -> list[list[dict]]:
        """Structured dump; stable keys ``role``, ``path``, ``formula``."""
        return [
            [
                {"role": p.role.name, "path": list(p.path), "formula": self.node_text(p.path, unicode=False)}
                for p in sorted(ts, key=lambda p: p.sort_key)
            ]
            for ts in run
        ]

    def run_json(self, run: Iterable[TokenSet]) -> str:
        return json.dumps(self.run_records(run), ensure_ascii=False)


def build_positions(spec: LogicSpec, f: Formula) -> set[Position]:
    return SemanticGame(spec, f).positions()


def build_token_sets(spec: LogicSpec, f: Formula) -> set[TokenSet]:
    return SemanticGame(spec, f).token_sets()


def step_run(spec: LogicSpec, f: Formula, current: TokenSet, choices: Mapping[Role, str]) -> TokenSet:
    return SemanticGame(spec, f).step(current, choices)


def terminal_winners(spec: LogicSpec, f: Formula, terminal: TokenSet, v: Valuation) -> set[Role]:
    return SemanticGame(spec, f).terminal_winners(terminal, v)
