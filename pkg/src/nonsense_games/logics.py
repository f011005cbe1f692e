"""Truth-value alphabets, truth tables, roles and the compositional evaluator.

Two families are supported:

* ``chain`` logics with ``k`` infectious values ranked ``1..k`` (BH3 is
  ``k=1`` with N, BH4 is ``k=2`` with N < S).  Any infectious operand makes
  a binary connective return the highest-ranked infectious operand; negation
  fixes infectious values and swaps T/F.
* ``lp``: min/max on F < P < T, negation fixes P.

The evaluator here is deliberately table driven.  It is the independent
oracle the game solver is checked against, so it never consults roles or
dominance.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from .errors import AlienValue, UnboundAtom, ValuationError
from .formula import And, Atom, Formula, Not, Or, atoms

MAX_CHAIN = 8


@dataclass(frozen=True, slots=True)
class TruthValue:
    letter: str
    rank: int = 0

    @property
    def infectious(self) -> bool:
        return self.rank > 0

    def __str__(self) -> str:
        return self.letter


T = TruthValue("T")
F = TruthValue("F")

VERIFIER = "verifier"
FALSIFIER = "falsifier"
INFECTOR = "infector"


@dataclass(frozen=True, slots=True)
class Role:
    kind: str
    rank: int = 0
    name: str = ""

    @property
    def classical(self) -> bool:
        return self.kind != INFECTOR

    @property
    def sort_key(self) -> tuple[int, int]:
        return ({VERIFIER: 0, FALSIFIER: 1}.get(self.kind, 2), self.rank)

    def __str__(self) -> str:
        return self.name


Verifier = Role(VERIFIER, 0, "Verifier")
Falsifier = Role(FALSIFIER, 0, "Falsifier")

_INFECTOR_NAMES = {1: "Dominator", 2: "Dictator"}


def infector(rank: int, lp: bool = False) -> Role:
    if lp:
        return Role(INFECTOR, 1, "Paradoxifier")
    return Role(INFECTOR, rank, _INFECTOR_NAMES.get(rank, f"Infector{rank}"))


def dual(role: Role) -> Role:
    """Verifier <-> Falsifier; infectors keep their role under negation."""
    if role == Verifier:
        return Falsifier
    if role == Falsifier:
        return Verifier
    return role


class TruthTables(NamedTuple):
    """Value-index tables: ``neg[a]``, ``conj[a, b]``, ``disj[a, b]``."""

    neg: np.ndarray
    conj: np.ndarray
    disj: np.ndarray

    def equals(self, other: TruthTables) -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self, other))

    def entry_count(self) -> tuple[int, int, int]:
        return (self.neg.size, self.conj.size, self.disj.size)


@dataclass(frozen=True, eq=False)
class LogicSpec:
    """One logic: alphabet, stored tables, designated set, roles and dominance.

    ``dominance`` lists strata from strongest to weakest; a winner in an
    earlier stratum determines the value.  ``values`` is in display order
    (T, infectious ascending, F), matching the published grids.
    """

    name: str
    flavor: str
    k: int
    values: tuple[TruthValue, ...]
    designated: frozenset[TruthValue]
    roles: tuple[Role, ...]
    dominance: tuple[tuple[Role, ...], ...]
    tables: TruthTables
    _index: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.values)})
        if not self.designated <= set(self.values):
            raise ValueError("designated values must come from the alphabet")

    # -- lookups --
    def index(self, value: TruthValue) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise AlienValue(value, self.name) from None

    def value(self, letter: str) -> TruthValue:
        for v in self.values:
            if v.letter == letter:
                return v
        raise AlienValue(letter, self.name)

    def role(self, name: str) -> Role:
        for r in self.roles:
            if r.name.lower() == name.lower():
                return r
        raise KeyError(name)

    def role_index(self, role: Role) -> int:
        return self.roles.index(role)

    def target(self, role: Role) -> TruthValue:
        """The atom value at which ``role`` wins."""
        if role == Verifier:
            return T
        if role == Falsifier:
            return F
        return next(v for v in self.values if v.rank == role.rank)

    def role_for_value(self, value: TruthValue) -> Role:
        return next(r for r in self.roles if self.target(r) == value)

    @cached_property
    def targets(self) -> np.ndarray:
        """Value index each role (in ``roles`` order) wins on."""
        return np.array([self.index(self.target(r)) for r in self.roles], dtype=np.int8)

    @cached_property
    def dominance_rows(self) -> tuple[np.ndarray, ...]:
        """``dominance`` as arrays of role indices, strongest stratum first."""
        return tuple(np.array([self.role_index(r) for r in s], dtype=np.int64) for s in self.dominance)

    @cached_property
    def infectors(self) -> tuple[Role, ...]:
        return tuple(r for r in self.roles if not r.classical)

    def is_designated(self, value: TruthValue) -> bool:
        self.index(value)
        return value in self.designated

    def with_table_entry(self, connective: str, key: int | tuple[int, int], result: int) -> LogicSpec:
        """Copy of this spec with one stored table cell overwritten (mutation testing)."""
        tables = {name: arr.copy() for name, arr in self.tables._asdict().items()}
        tables[connective][key] = result
        return replace(self, name=f"{self.name}*", tables=TruthTables(**tables))


# -- construction -----------------------------------------------------------

def _chain_values(k: int) -> tuple[TruthValue, ...]:
    if k == 1:
        infectious = [TruthValue("N", 1)]
    elif k == 2:
        infectious = [TruthValue("N", 1), TruthValue("S", 2)]
    else:
        infectious = [TruthValue(f"N{r}", r) for r in range(1, k + 1)]
    return (T, *infectious, F)


def _chain_tables(values: tuple[TruthValue, ...]) -> TruthTables:
    n = len(values)
    idx = {v: i for i, v in enumerate(values)}
    neg = np.empty(n, dtype=np.int8)
    conj = np.empty((n, n), dtype=np.int8)
    disj = np.empty((n, n), dtype=np.int8)
    for a in values:
        neg[idx[a]] = idx[{T: F, F: T}.get(a, a)]
        for b in values:
            if a.infectious or b.infectious:
                top = max((a, b), key=lambda v: v.rank)
                conj[idx[a], idx[b]] = disj[idx[a], idx[b]] = idx[top]
            else:
                conj[idx[a], idx[b]] = idx[T if (a == T and b == T) else F]
                disj[idx[a], idx[b]] = idx[T if (a == T or b == T) else F]
    return TruthTables(neg, conj, disj)


def _lp_tables(values: tuple[TruthValue, ...]) -> TruthTables:
    # values are (T, P, F); strength order F < P < T
    strength = {values[2]: 0, values[1]: 1, values[0]: 2}
    n = len(values)
    neg = np.array([2, 1, 0], dtype=np.int8)
    conj = np.empty((n, n), dtype=np.int8)
    disj = np.empty((n, n), dtype=np.int8)
    for i, a in enumerate(values):
        for j, b in enumerate(values):
            conj[i, j] = values.index(min(a, b, key=strength.__getitem__))
            disj[i, j] = values.index(max(a, b, key=strength.__getitem__))
    return TruthTables(neg, conj, disj)


def chain_logic(k: int, name: str | None = None, designated: tuple[str, ...] = ("T",)) -> LogicSpec:
    if not 1 <= k <= MAX_CHAIN:
        raise ValueError(f"chain length must be in 1..{MAX_CHAIN}, got {k}")
    values = _chain_values(k)
    infectors = tuple(infector(r) for r in range(1, k + 1))
    letters = {v.letter: v for v in values}
    return LogicSpec(
        name=name or f"BH-n({k})",
        flavor="chain",
        k=k,
        values=values,
        designated=frozenset(letters[d] for d in designated),
        roles=(Verifier, Falsifier, *infectors),
        dominance=tuple((r,) for r in reversed(infectors)) + ((Verifier, Falsifier),),
        tables=_chain_tables(values),
    )


def lp_logic(name: str = "LP", designated: tuple[str, ...] = ("T", "P")) -> LogicSpec:
    paradox = TruthValue("P", 1)
    values = (T, paradox, F)
    letters = {v.letter: v for v in values}
    para = infector(1, lp=True)
    return LogicSpec(
        name=name,
        flavor="lp",
        k=1,
        values=values,
        designated=frozenset(letters[d] for d in designated),
        roles=(Verifier, Falsifier, para),
        dominance=((Verifier, Falsifier), (para,)),
        tables=_lp_tables(values),
    )


PRESETS = ("bh3", "bochvar", "hallden", "bh4", "lp", "bhn:<k>")


def get_logic(name: str) -> LogicSpec:
    """Look up a preset by name: ``bh3``/``bochvar``, ``hallden``, ``bh4``, ``lp``, ``bhn:<k>``."""
    key = name.strip().lower()
    if key in ("bh3", "bochvar"):
        return chain_logic(1, "BH3")
    if key in ("hallden", "bh3-hallden"):
        return chain_logic(1, "BH3-Hallden", designated=("T", "N"))
    if key == "bh4":
        return chain_logic(2, "BH4")
    if key == "lp":
        return lp_logic()
    if key.startswith("bhn:"):
        try:
            k = int(key[4:])
        except ValueError:
            raise ValueError(f"bad chain length in {name!r}") from None
        return chain_logic(k)
    raise ValueError(f"unknown logic {name!r}; expected one of {', '.join(PRESETS)}")


# -- valuations -------------------------------------------------------------

Valuation = Mapping[str, TruthValue]


def check_valuation(spec: LogicSpec, f: Formula, v: Valuation) -> None:
    for name in sorted(atoms(f)):
        if name not in v:
            raise UnboundAtom(name)
        spec.index(v[name])


def parse_valuation(spec: LogicSpec, text: str) -> dict[str, TruthValue]:
    """Inline form ``p=T,q=N,r=F``."""
    out: dict[str, TruthValue] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, letter = item.partition("=")
        if not sep:
            raise ValuationError(f"expected atom=VALUE, got {item!r}")
        out[name.strip()] = spec.value(letter.strip())
    return out


def read_valuation_file(spec: LogicSpec, path: str | os.PathLike) -> dict[str, TruthValue]:
    """One ``atom = VALUE`` per line; ``#`` starts a comment."""
    out: dict[str, TruthValue] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, letter = line.partition("=")
            if not sep:
                raise ValuationError(f"{path}:{lineno}: expected atom = VALUE")
            out[name.strip()] = spec.value(letter.strip())
    return out


def format_valuation(v: Valuation) -> str:
    return ",".join(f"{k}={v[k]}" for k in sorted(v))


def all_valuations(spec: LogicSpec, names: list[str] | tuple[str, ...]) -> np.ndarray:
    """Every assignment of value indices to ``names``; shape ``(len(values)**n, n)``."""
    n = len(spec.values)
    if not names:
        return np.zeros((1, 0), dtype=np.int8)
    grid = np.array(list(itertools.product(range(n), repeat=len(names))), dtype=np.int8)
    return grid


def encode(spec: LogicSpec, names: tuple[str, ...], v: Valuation) -> np.ndarray:
    return np.array([[spec.index(v[a]) for a in names]], dtype=np.int8)


# -- oracle -----------------------------------------------------------------

def evaluate_codes(
    spec: LogicSpec,
    f: Formula,
    columns: Mapping[str, int],
    codes: np.ndarray,
    memo: dict | None = None,
) -> np.ndarray:
    """Bottom-up table evaluation of ``f`` for a batch of valuations.

    ``codes[i, columns[a]]`` is the value index of atom ``a`` in valuation ``i``.
    ``memo`` may be shared across calls on the same ``codes`` (keyed by node id).
    """
    tables = spec.tables
    if memo is None:
        memo = {}

    def go(node: Formula) -> np.ndarray:
        hit = memo.get(id(node))
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, Atom):
            if node.name not in columns:
                raise UnboundAtom(node.name)
            out = codes[:, columns[node.name]]
        elif isinstance(node, Not):
            out = tables.neg[go(node.child)]
        elif isinstance(node, And):
            out = tables.conj[go(node.left), go(node.right)]
        else:
            out = tables.disj[go(node.left), go(node.right)]
        memo[id(node)] = (node, out)
        return out

    return go(f)


def eval_oracle(spec: LogicSpec, f: Formula, v: Valuation) -> TruthValue:
    """Truth value of ``f`` under ``v`` read off the stored truth tables."""
    check_valuation(spec, f, v)
    names = tuple(sorted(atoms(f)))
    codes = encode(spec, names, v)
    out = evaluate_codes(spec, f, {a: i for i, a in enumerate(names)}, codes)
    return spec.values[int(out[0])]


def is_designated(spec: LogicSpec, value: TruthValue) -> bool:
    return spec.is_designated(value)


# -- game-derived tables ----------------------------------------------------

def derive_table(spec: LogicSpec) -> TruthTables:
    """Rebuild every truth table by solving two-atom games, ignoring the stored tables."""
    from .solver import solve_value

    x, y = Atom("x"), Atom("y")
    n = len(spec.values)
    neg = np.empty(n, dtype=np.int8)
    conj = np.empty((n, n), dtype=np.int8)
    disj = np.empty((n, n), dtype=np.int8)
    for i, a in enumerate(spec.values):
        neg[i] = spec.index(solve_value(spec, Not(x), {"x": a})[0])
        for j, b in enumerate(spec.values):
            v = {"x": a, "y": b}
            conj[i, j] = spec.index(solve_value(spec, And(x, y), v)[0])
            disj[i, j] = spec.index(solve_value(spec, Or(x, y), v)[0])
    return TruthTables(neg, conj, disj)


def render_tables(spec: LogicSpec, tables: TruthTables | None = None) -> str:
    """Grids in the usual layout: negation column, then the ∧ and ∨ matrices."""
    tables = tables if tables is not None else spec.tables
    letters = [v.letter for v in spec.values]
    w = max(len(s) for s in letters)
    cell = lambda s: s.ljust(w)  # noqa: E731

    blocks = []
    neg_lines = [f"{' ' * w} | ¬", "-" * (w + 4)]
    neg_lines += [f"{cell(a)} | {letters[tables.neg[i]]}" for i, a in enumerate(letters)]
    blocks.append(neg_lines)
    for sym, table in (("∧", tables.conj), ("∨", tables.disj)):
        head = f"{sym.ljust(w)} | " + " ".join(cell(b) for b in letters)
        lines = [head, "-" * len(head)]
        for i, a in enumerate(letters):
            lines.append(f"{cell(a)} | " + " ".join(cell(letters[table[i, j]]) for j in range(len(letters))))
        blocks.append(lines)
    return "\n\n".join("\n".join(b) for b in blocks)
