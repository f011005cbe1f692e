"""Command-line front end.

Subcommands: ``eval``, ``solve``, ``trace``, ``iesds``, ``verify`` and
``derive-table``.  Every subcommand prints a human-readable rendering by
default, or a JSON document with ``--format structured``.

Exit codes::

    0  success (for verify: every theorem passed)
    1  counterexample found
    2  formula parse error
    3  valuation error
    4  strategy-space budget exceeded
    5  usage error

Structured keys are stable:

* eval: ``logic``, ``formula``, ``valuation``, ``value``, ``role``
* solve: the eval keys plus ``profile`` (role name to bool) and ``strategy``
  (``role``, ``choices`` mapping node path to ``L``/``R``)
* trace: the eval keys plus ``run`` (list of token sets, each a list of
  ``role``/``path``/``formula`` records) and ``strategies``
* iesds: ``eliminations``, ``survivor``, ``value``
* verify: ``logic`` and ``reports`` (``theorem``, ``checked``, ``pass``,
  ``counterexamples``, ...)
* derive-table: ``logic``, ``values``, ``neg``, ``conj``, ``disj``, ``matches_stored``
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .errors import BudgetExceeded, Indeterminate, ParseError, ValuationError
from .formula import Formula, parse, to_string
from .game import SemanticGame
from .harness import SweepConfig, all_passed, render_reports, reports_json, run_sweep
from .logics import (
    MAX_CHAIN,
    LogicSpec,
    check_valuation,
    derive_table,
    get_logic,
    parse_valuation,
    read_valuation_file,
    render_tables,
)
from .solver import DEFAULT_BUDGET, format_path, iesds, solve_value, truth_maker_run, win_profile

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_PARSE = 2
EXIT_VALUATION = 3
EXIT_BUDGET = 4
EXIT_USAGE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit status 2, which is taken here."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nonsense-games", description="Semantic games for infectious logics and LP.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, needs_formula: bool) -> None:
        p.add_argument("--logic", default="bh3", help="bh3, bochvar, hallden, bh4, lp or bhn:<k> (k <= %d)" % MAX_CHAIN)
        p.add_argument("--format", choices=("text", "structured"), default="text")
        if needs_formula:
            p.add_argument("--formula", required=True, help='e.g. "(p|q)|(r&q)"')
            p.add_argument("--val", required=True, help="inline p=T,q=N or a valuation file path")

    common(sub.add_parser("eval", help="truth value and dominant role"), True)
    common(sub.add_parser("solve", help="win profile and truth-maker strategy"), True)
    common(sub.add_parser("trace", help="run under the extracted strategies"), True)
    p = sub.add_parser("iesds", help="iterated elimination of dominated strategies")
    common(p, True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("verify", help="exhaustive theorem sweep")
    common(p, False)
    p.add_argument("--atoms", type=int, default=3)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-formulas", type=int, default=50_000, help="0 for no cap")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-brute-force", action="store_true", help="skip the strategy replay cross-check")
    p.add_argument("--iesds", action="store_true", help="also check IESDS survivors")

    common(sub.add_parser("derive-table", help="truth tables rebuilt from games"), False)
    return parser


def _logic(name: str) -> LogicSpec:
    try:
        return get_logic(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _valuation(spec: LogicSpec, text: str, f: Formula):
    if os.path.isfile(text):
        v = read_valuation_file(spec, text)
    elif "=" in text:
        v = parse_valuation(spec, text)
    else:
        raise ValuationError(f"{text!r} is neither an inline valuation nor a readable file")
    check_valuation(spec, f, v)
    return v


def _emit(doc: dict, fmt: str, text: str) -> None:
    print(json.dumps(doc, ensure_ascii=False, indent=2) if fmt == "structured" else text)


def _head(spec: LogicSpec, f: Formula, v) -> dict:
    return {
        "logic": spec.name,
        "formula": to_string(f, outer_parens=False),
        "valuation": {k: v[k].letter for k in sorted(v)},
    }


def _cmd_eval(args, spec: LogicSpec, f: Formula, v) -> int:
    value, role = solve_value(spec, f, v)
    doc = {**_head(spec, f, v), "value": value.letter, "role": role.name}
    _emit(doc, args.format, f"{value} ({role.name})")
    return EXIT_OK


def _cmd_solve(args, spec: LogicSpec, f: Formula, v) -> int:
    profile = win_profile(spec, f, v)
    value, role = solve_value(spec, f, v)
    _, strategies = truth_maker_run(spec, f, v)
    strat = strategies[role]
    doc = {
        **_head(spec, f, v),
        "value": value.letter,
        "role": role.name,
        "profile": {r.name: w for r, w in profile.items()},
        "strategy": {"role": role.name, "choices": {format_path(p): c for p, c in strat.choices}},
    }
    lines = [f"{r.name}: {'winning strategy' if w else 'no winning strategy'}" for r, w in profile.items()]
    lines.append(f"value: {value} ({role.name})")
    lines.append(f"truth-maker strategy ({role.name}): {strat.render()}")
    _emit(doc, args.format, "\n".join(lines))
    return EXIT_OK


def _cmd_trace(args, spec: LogicSpec, f: Formula, v) -> int:
    value, role = solve_value(spec, f, v)
    run, strategies = truth_maker_run(spec, f, v)
    game = SemanticGame(spec, f)
    doc = {
        **_head(spec, f, v),
        "value": value.letter,
        "role": role.name,
        "run": game.run_records(run),
        "strategies": {r.name: {format_path(p): c for p, c in s.choices} for r, s in strategies.items()},
    }
    _emit(doc, args.format, game.render_run(run))
    return EXIT_OK


def _cmd_iesds(args, spec: LogicSpec, f: Formula, v) -> int:
    trace = iesds(spec, f, v, args.budget)
    _emit(trace.to_dict(), args.format, trace.render())
    return EXIT_OK


def _cmd_verify(args, spec: LogicSpec) -> int:
    try:
        cfg = SweepConfig(
            logic=args.logic,
            atoms=args.atoms,
            depth=args.depth,
            max_formulas=args.max_formulas or None,
            budget=args.budget,
            brute_force=not args.no_brute_force,
            iesds=args.iesds,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    reports = run_sweep(cfg, spec)
    if args.format == "structured":
        print(reports_json(spec.name, reports))
    else:
        print(render_reports(spec.name, reports))
    return EXIT_OK if all_passed(reports) else EXIT_COUNTEREXAMPLE


def _cmd_derive(args, spec: LogicSpec) -> int:
    derived = derive_table(spec)
    letters = [x.letter for x in spec.values]
    doc = {
        "logic": spec.name,
        "values": letters,
        "neg": {a: letters[derived.neg[i]] for i, a in enumerate(letters)},
        "conj": {a: {b: letters[derived.conj[i, j]] for j, b in enumerate(letters)} for i, a in enumerate(letters)},
        "disj": {a: {b: letters[derived.disj[i, j]] for j, b in enumerate(letters)} for i, a in enumerate(letters)},
        "matches_stored": derived.equals(spec.tables),
    }
    _emit(doc, args.format, render_tables(spec, derived))
    return EXIT_OK if doc["matches_stored"] else EXIT_COUNTEREXAMPLE


def _dispatch(args) -> int:
    spec = _logic(args.logic)
    if args.command == "verify":
        return _cmd_verify(args, spec)
    if args.command == "derive-table":
        return _cmd_derive(args, spec)
    f = parse(args.formula)
    v = _valuation(spec, args.val, f)
    handler = {"eval": _cmd_eval, "solve": _cmd_solve, "trace": _cmd_trace, "iesds": _cmd_iesds}[args.command]
    return handler(args, spec, f, v)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValuationError, OSError) as exc:
        print(f"valuation error: {exc}", file=sys.stderr)
        return EXIT_VALUATION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Indeterminate as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
