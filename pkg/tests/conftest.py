from __future__ import annotations

import sys

import pytest

from nonsense_games import get_logic, parse, parse_valuation

# Reference truth tables, keyed by value letters so
# that row order does not matter.
BH3_TABLES = {
    "neg": {"T": "F", "N": "N", "F": "T"},
    "conj": {
        "T": {"T": "T", "N": "N", "F": "F"},
        "N": {"T": "N", "N": "N", "F": "N"},
        "F": {"T": "F", "N": "N", "F": "F"},
    },
    "disj": {
        "T": {"T": "T", "N": "N", "F": "T"},
        "N": {"T": "N", "N": "N", "F": "N"},
        "F": {"T": "T", "N": "N", "F": "F"},
    },
}

BH4_TABLES = {
    "neg": {"T": "F", "F": "T", "N": "N", "S": "S"},
    "conj": {
        "T": {"T": "T", "N": "N", "S": "S", "F": "F"},
        "N": {"T": "N", "N": "N", "S": "S", "F": "N"},
        "S": {"T": "S", "N": "S", "S": "S", "F": "S"},
        "F": {"T": "F", "N": "N", "S": "S", "F": "F"},
    },
    "disj": {
        "T": {"T": "T", "N": "N", "S": "S", "F": "T"},
        "N": {"T": "N", "N": "N", "S": "S", "F": "N"},
        "S": {"T": "S", "N": "S", "S": "S", "F": "S"},
        "F": {"T": "T", "N": "N", "S": "S", "F": "F"},
    },
}

LP_TABLES = {
    "neg": {"T": "F", "F": "T", "P": "P"},
    "conj": {
        "T": {"T": "T", "P": "P", "F": "F"},
        "P": {"T": "P", "P": "P", "F": "F"},
        "F": {"T": "F", "P": "F", "F": "F"},
    },
    "disj": {
        "T": {"T": "T", "P": "T", "F": "T"},
        "P": {"T": "T", "P": "P", "F": "P"},
        "F": {"T": "T", "P": "P", "F": "F"},
    },
}

REFERENCE_TABLES = {"bh3": BH3_TABLES, "bh4": BH4_TABLES, "lp": LP_TABLES}

EXAMPLE_FORMULA = "(p|q)|(r&q)"
EXAMPLE_VALUATION = "p=T,q=N,r=F"
EXAMPLE_RUN = [
    "{(Verifier, (p ∨ q) ∨ (r ∧ q)), (Dominator, (p ∨ q) ∨ (r ∧ q))}",
    "{(Verifier, p ∨ q), (Dominator, p ∨ q)}",
    "{(Verifier, p), (Dominator, q)}",
]


def tables_as_letters(spec, tables) -> dict:
    """Render numpy tables into the letter-keyed layout of the reference tables."""
    letters = [v.letter for v in spec.values]
    return {
        "neg": {a: letters[tables.neg[i]] for i, a in enumerate(letters)},
        "conj": {a: {b: letters[tables.conj[i, j]] for j, b in enumerate(letters)} for i, a in enumerate(letters)},
        "disj": {a: {b: letters[tables.disj[i, j]] for j, b in enumerate(letters)} for i, a in enumerate(letters)},
    }


@pytest.fixture
def bh3():
    return get_logic("bh3")


@pytest.fixture
def bh4():
    return get_logic("bh4")


@pytest.fixture
def lp():
    return get_logic("lp")


@pytest.fixture
def example(bh3):
    """The running three-atom example: formula, valuation, logic."""
    return parse(EXAMPLE_FORMULA), parse_valuation(bh3, EXAMPLE_VALUATION), bh3


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
