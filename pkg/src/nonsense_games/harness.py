"""Exhaustive desk-scale theorem checking.

Every formula over a fixed atom list up to a depth bound is paired with
every total valuation of its atoms, and the game solver is compared with
the truth-table oracle and with brute-force strategy replay.  All checks
for one formula run as numpy operations over its valuation batch.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded
from .formula import And, Atom, Formula, Not, Or, to_string
from .logics import LogicSpec, all_valuations, derive_table, evaluate_codes, get_logic
from .solver import (
    DEFAULT_BUDGET,
    dominant_index,
    iesds_core,
    leaf_index,
    leaf_table,
    replay_outcomes,
    strategy_results,
    win_matrix,
)

ATOM_NAMES = "pqrstuvw"


def atom_names(count: int) -> list[str]:
    if count < 1:
        raise ValueError("need at least one atom")
    if count <= len(ATOM_NAMES):
        return list(ATOM_NAMES[:count])
    return [f"p{i}" for i in range(count)]


def enumerate_formulas(n_atoms: int, max_depth: int) -> Iterator[Formula]:
    """Every formula over ``n_atoms`` atoms of depth at most ``max_depth``, once each.

    Order: by depth; within a depth, negations, then conjunctions, then
    disjunctions, pairs in the order of the shallower enumeration.
    """
    if max_depth < 0:
        raise ValueError("depth must be non-negative")
    upto: list[Formula] = [Atom(a) for a in atom_names(n_atoms)]
    yield from upto
    start = 0
    for d in range(1, max_depth + 1):
        keep = d < max_depth
        new: list[Formula] = []
        for x in upto[start:]:
            f = Not(x)
            if keep:
                new.append(f)
            yield f
        for op in (And, Or):
            for i, x in enumerate(upto):
                for j, y in enumerate(upto):
                    if i < start and j < start:
                        continue
                    f = op(x, y)
                    if keep:
                        new.append(f)
                    yield f
        start = len(upto)
        upto = upto + new


def count_formulas(n_atoms: int, max_depth: int) -> int:
    """Closed recurrence c(0) = a, c(d+1) = a + c(d) + 2 c(d)^2."""
    c = n_atoms
    for _ in range(max_depth):
        c = n_atoms + c + 2 * c * c
    return c


@dataclass
class SweepConfig:
    logic: str = "bh3"
    atoms: int = 3
    depth: int = 4
    max_formulas: int | None = 50_000
    budget: int = DEFAULT_BUDGET
    brute_force: bool = True
    iesds: bool = False
    table_derivation: bool = True
    stop_on_first: bool = False
    max_counterexamples: int = 20

    def __post_init__(self) -> None:
        if self.atoms < 1:
            raise ValueError("atom count must be at least 1")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


@dataclass
class Counterexample:
    formula: str
    valuation: str
    expected: str
    got: str


@dataclass
class TheoremReport:
    theorem: str
    checked: int = 0
    failures: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)
    skipped: int = 0
    fingerprint: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def theorem_ids(spec: LogicSpec) -> dict[str, str]:
    """Report ids for the checks applicable to ``spec``."""
    if spec.flavor == "lp":
        return {"exclusive": "T5.3", "determinacy": "C3.3", "correct": "T5.4"}
    if spec.k == 1:
        return {"exclusive": "T3.2", "determinacy": "C3.3", "correct": "T3.4", "infect": "T3.8"}
    return {"exclusive": "T4.1", "determinacy": "C3.3", "correct": "T4.2", "infect": "T3.8"}


class _Structure:
    """Per-node atoms, leaf names, shape and text, memoized bottom-up by node identity."""

    def __init__(self) -> None:
        self.memo: dict[int, tuple] = {}

    def __call__(self, f: Formula) -> tuple[frozenset[str], tuple[str, ...], str, str]:
        hit = self.memo.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        if isinstance(f, Atom):
            info = (frozenset((f.name,)), (f.name,), "_", f.name)
        elif isinstance(f, Not):
            a, lv, sh, tx = self(f.child)
            info = (a, lv, "~" + sh, "~" + tx)
        else:
            la, ll, ls, lt = self(f.left)
            ra, rl, rs, rt = self(f.right)
            op = "&" if isinstance(f, And) else "|"
            info = (la | ra, ll + rl, f"({ls}{op}{rs})", f"({lt} {op} {rt})")
        self.memo[id(f)] = (f, info)
        return info


class _Recorder:
    def __init__(self, report: TheoremReport, cap: int) -> None:
        self.report = report
        self.cap = cap

    def check(self, f: Formula, names, codes, ok: np.ndarray, expected, got) -> None:
        self.report.checked += int(ok.size)
        if ok.all():
            return
        bad = np.flatnonzero(~ok)
        self.report.failures += int(bad.size)
        for i in bad[: max(0, self.cap - len(self.report.counterexamples))]:
            val = ",".join(f"{a}={codes[i, c]}" for c, a in names)
            self.report.counterexamples.append(Counterexample(to_string(f), val, expected(i), got(i)))


def run_sweep(cfg: SweepConfig, spec: LogicSpec | None = None) -> list[TheoremReport]:
    """Check every enumerated (formula, valuation) instance; one report per theorem.

    ``spec`` overrides ``cfg.logic`` (used to sweep deliberately corrupted tables).
    """
    spec = spec if spec is not None else get_logic(cfg.logic)
    ids = theorem_ids(spec)
    reports = {key: TheoremReport(tid) for key, tid in ids.items()}
    if cfg.brute_force:
        reports["oracle"] = TheoremReport("OracleEquiv")
    if cfg.iesds:
        reports["iesds"] = TheoremReport("IESDS")
    rec = {k: _Recorder(r, cfg.max_counterexamples) for k, r in reports.items()}
    digest = hashlib.sha256()

    names = atom_names(cfg.atoms)
    columns = {a: i for i, a in enumerate(names)}
    full = all_valuations(spec, names)
    letters = np.array([v.letter for v in spec.values])
    role_names = np.array([r.name for r in spec.roles])
    ranks = np.array([v.rank for v in spec.values])
    by_rank = {v.rank: i for i, v in enumerate(spec.values) if v.infectious}
    targets = spec.targets
    row_masks: dict[frozenset, np.ndarray] = {}
    oracle_memo: dict = {}
    game_memo: dict = {}

    formulas = enumerate_formulas(cfg.atoms, cfg.depth)
    if cfg.max_formulas is not None:
        formulas = itertools.islice(formulas, cfg.max_formulas)

    structure = _Structure()
    for f in formulas:
        used, leaf_names, shape, text = structure(f)
        rows = row_masks.get(used)
        if rows is None:
            unused = [columns[a] for a in names if a not in used]
            rows = row_masks[used] = np.flatnonzero((full[:, unused] == 0).all(axis=1))
        codes = full[rows]
        shown = [(columns[a], a) for a in sorted(used)]
        vcodes = letters[codes]

        oracle = evaluate_codes(spec, f, columns, full, oracle_memo)[rows]
        wins = win_matrix(spec, f, columns, full, game_memo)[:, rows]
        dom = dominant_index(spec, wins)
        value = np.where(dom >= 0, targets[np.maximum(dom, 0)], -1)
        got_value = lambda i: "indeterminate" if value[i] < 0 else letters[value[i]]  # noqa: E731

        both = wins[0] & wins[1]
        rec["exclusive"].check(f, shown, vcodes, ~both, lambda i: "not both", lambda i: "Verifier and Falsifier")
        rec["determinacy"].check(
            f, shown, vcodes, dom >= 0, lambda i: "unique dominant winner",
            lambda i: "winners: " + (",".join(role_names[wins[:, i]]) or "none"),
        )
        rec["correct"].check(f, shown, vcodes, value == oracle, lambda i: letters[oracle[i]], got_value)
        digest.update(text.encode())
        digest.update(np.where(dom >= 0, dom, 99).astype(np.int8).tobytes())
        digest.update(value.astype(np.int8).tobytes())

        if "infect" in rec:
            cols = [columns[a] for a in sorted(used)]
            top = ranks[codes[:, cols]].max(axis=1)
            hit = top > 0
            if hit.any():
                expected = np.array([by_rank.get(int(t), -1) for t in top])
                sel = np.flatnonzero(hit)
                rec["infect"].check(
                    f, shown, vcodes[sel], value[sel] == expected[sel],
                    lambda i: letters[expected[sel][i]], lambda i: got_value(sel[i]),
                )

        if cfg.brute_force:
            brute = None
            try:
                table = leaf_table(spec, f, cfg.budget, shape=shape)
                if table is not None:
                    brute = table[:, leaf_index(spec, codes, [columns[a] for a in leaf_names])]
                else:
                    outcomes = replay_outcomes(spec, f, cfg.budget, shape=shape)
                    results = strategy_results(spec, f, outcomes, columns, codes, leaf_names)
                    brute = np.array([w.any(axis=0) for w, _ in results])
            except BudgetExceeded:
                reports["oracle"].skipped += int(rows.size)
            if brute is not None:
                same = (brute == wins).all(axis=0)
                rec["oracle"].check(
                    f, shown, vcodes, same,
                    lambda i: "".join("1" if w else "0" for w in wins[:, i]),
                    lambda i: "".join("1" if w else "0" for w in brute[:, i]),
                )

        if cfg.iesds:
            survivor = None
            try:
                table = leaf_table(spec, f, cfg.budget, shape=shape, kind="survivor")
                if table is not None:
                    survivor = table[leaf_index(spec, codes, [columns[a] for a in leaf_names])]
                else:
                    outcomes = replay_outcomes(spec, f, cfg.budget, shape=shape)
                    results = strategy_results(spec, f, outcomes, columns, codes, leaf_names)
                    survivor = iesds_core(spec, results).survivor_role
            except BudgetExceeded:
                reports["iesds"].skipped += int(rows.size)
            if survivor is not None:
                ok = (survivor == dom) & (dom >= 0)
                rec["iesds"].check(
                    f, shown, vcodes, ok,
                    lambda i: role_names[dom[i]] if dom[i] >= 0 else "?",
                    lambda i: role_names[survivor[i]] if survivor[i] >= 0 else "none",
                )

        if cfg.stop_on_first and any(r.failures for r in reports.values()):
            break

    for r in reports.values():
        r.fingerprint = digest.hexdigest()
    out = list(reports.values())
    if cfg.table_derivation:
        derived = derive_table(spec)
        table = TheoremReport("TableDerivation")
        for name, got, want in zip(("neg", "conj", "disj"), derived, spec.tables):
            table.checked += int(want.size)
            for key in zip(*np.nonzero(got != want)):
                table.failures += 1
                cell = ",".join(letters[list(key)])
                table.counterexamples.append(
                    Counterexample(f"{name}({cell})", "", letters[want[key]], letters[got[key]])
                )
        out.append(table)
    return out


def all_passed(reports: list[TheoremReport]) -> bool:
    return all(r.passed for r in reports)


def render_reports(spec_name: str, reports: list[TheoremReport]) -> str:
    lines = [f"logic: {spec_name}", f"{'theorem':<16}{'checked':>10}{'failures':>10}{'skipped':>9}  result"]
    for r in reports:
        lines.append(f"{r.theorem:<16}{r.checked:>10}{r.failures:>10}{r.skipped:>9}  {'PASS' if r.passed else 'FAIL'}")
        for c in r.counterexamples[:5]:
            lines.append(f"    {c.formula}  [{c.valuation}]  expected {c.expected}, got {c.got}")
    return "\n".join(lines)


def reports_json(spec_name: str, reports: list[TheoremReport]) -> str:
    return json.dumps({"logic": spec_name, "reports": [r.to_dict() for r in reports]}, indent=2, sort_keys=True)
