from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from test_formula import formulas

from nonsense_games.errors import BudgetExceeded, NoWinningStrategy, UnboundAtom
from nonsense_games.formula import Atom, atoms, parse
from nonsense_games.game import SemanticGame
from nonsense_games.logics import Falsifier, Verifier, eval_oracle, get_logic, parse_valuation
from nonsense_games.solver import (
    NEVER_BEST,
    brute_force_profile,
    extract_strategy,
    iesds,
    leaf_table,
    solve_value,
    truth_maker_run,
    win_profile,
)


def names(profile):
    return {r.name: w for r, w in profile.items()}


def val(spec, text):
    return parse_valuation(spec, text)


class TestWinProfile:
    def test_running_example(self, example):
        f, v, spec = example
        assert names(win_profile(spec, f, v)) == {"Verifier": True, "Falsifier": False, "Dominator": True}

    def test_false_atom(self, bh3):
        assert names(win_profile(bh3, Atom("p"), val(bh3, "p=F"))) == {
            "Verifier": False, "Falsifier": True, "Dominator": False,
        }

    def test_lp_conjunction(self, lp):
        got = names(win_profile(lp, parse("p&q"), val(lp, "p=P,q=T")))
        assert got == {"Verifier": False, "Falsifier": False, "Paradoxifier": True}

    def test_unbound(self, bh3):
        with pytest.raises(UnboundAtom):
            win_profile(bh3, parse("p&q"), val(bh3, "p=T"))


class TestSolveValue:
    @pytest.mark.parametrize(
        "logic, formula, valuation, value, role",
        [
            ("bh3", "(p|q)|(r&q)", "p=T,q=N,r=F", "N", "Dominator"),
            ("bh3", "p|q", "p=T,q=F", "T", "Verifier"),
            ("lp", "p|q", "p=P,q=T", "T", "Verifier"),
            ("bh4", "p&q", "p=N,q=S", "S", "Dictator"),
            ("lp", "p|~p", "p=P", "P", "Paradoxifier"),
            ("bhn:3", "p&(q|r)", "p=N1,q=N3,r=T", "N3", "Infector3"),
        ],
    )
    def test_cases(self, logic, formula, valuation, value, role):
        spec = get_logic(logic)
        got_value, got_role = solve_value(spec, parse(formula), val(spec, valuation))
        assert (got_value.letter, got_role.name) == (value, role)

    @settings(max_examples=200, deadline=None)
    @given(formulas(4), st.sampled_from(["bh3", "bh4", "lp", "bhn:3"]), st.data())
    def test_agrees_with_oracle(self, f, name, data):
        spec = get_logic(name)
        v = {a: data.draw(st.sampled_from(spec.values)) for a in sorted(atoms(f))}
        assert solve_value(spec, f, v)[0] == eval_oracle(spec, f, v)

    @settings(max_examples=100, deadline=None)
    @given(formulas(4), st.data())
    def test_verifier_and_falsifier_never_both_win(self, f, data):
        spec = get_logic(data.draw(st.sampled_from(["bh3", "bh4", "lp"])))
        v = {a: data.draw(st.sampled_from(spec.values)) for a in sorted(atoms(f))}
        profile = win_profile(spec, f, v)
        assert not (profile[Verifier] and profile[Falsifier])


class TestExtractStrategy:
    def test_dominator(self, example):
        f, v, spec = example
        s = extract_strategy(spec, f, v, spec.role("Dominator"))
        assert s.as_dict()[()] == "L" and s.as_dict()[(0,)] == "R"
        assert s.compact(SemanticGame(spec, f)) == "L-R"

    def test_verifier(self, example):
        f, v, spec = example
        s = extract_strategy(spec, f, v, Verifier)
        assert s.as_dict() == {(): "L", (0,): "L"}
        assert s.compact(SemanticGame(spec, f)) == "L-L"

    def test_atom_gives_empty_map(self, bh3):
        s = extract_strategy(bh3, Atom("p"), val(bh3, "p=T"), Verifier)
        assert s.choices == ()
        assert s.render() == "{}"

    def test_loser_has_none(self, example):
        f, v, spec = example
        with pytest.raises(NoWinningStrategy):
            extract_strategy(spec, f, v, Falsifier)

    @settings(max_examples=60, deadline=None)
    @given(formulas(3), st.data())
    def test_extracted_strategy_wins_every_play(self, f, data):
        spec = get_logic(data.draw(st.sampled_from(["bh3", "bh4", "lp"])))
        v = {a: data.draw(st.sampled_from(spec.values)) for a in sorted(atoms(f))}
        game = SemanticGame(spec, f)
        for role, wins in win_profile(spec, f, v).items():
            if not wins:
                continue
            mine = extract_strategy(spec, f, v, role).as_dict()
            others = [r for r in spec.roles if r != role]
            for _ in range(5):
                profile = {
                    r: {p: data.draw(st.sampled_from("LR")) for p in game.decision_nodes(r)} for r in others
                }
                profile[role] = mine
                assert role in game.player_winners(game.play(profile)[-1], v)


class TestTruthMakerRun:
    def test_running_example(self, example):
        f, v, spec = example
        run, strategies = truth_maker_run(spec, f, v)
        assert len(run) == 3
        assert set(r.name for r in strategies) == {"Verifier", "Dominator"}


class TestBruteForce:
    def test_running_example(self, example):
        f, v, spec = example
        assert brute_force_profile(spec, f, v) == win_profile(spec, f, v)
        assert brute_force_profile(spec, f, v, exhaustive=True) == win_profile(spec, f, v)

    def test_nonsense_atom(self, bh3):
        assert names(brute_force_profile(bh3, Atom("p"), val(bh3, "p=N"))) == {
            "Verifier": False, "Falsifier": False, "Dominator": True,
        }

    def test_lp_disjunction(self, lp):
        got = names(brute_force_profile(lp, parse("p|q"), val(lp, "p=P,q=F")))
        assert got == {"Verifier": False, "Falsifier": False, "Paradoxifier": True}

    def test_budget(self, bh3):
        f = parse("((p|q)&(p|q))|((p|q)&(p|q))")
        with pytest.raises(BudgetExceeded) as info:
            brute_force_profile(bh3, f, val(bh3, "p=T,q=F"), budget=8)
        assert info.value.cap == 8

    @settings(max_examples=40, deadline=None)
    @given(formulas(3), st.data())
    def test_exhaustive_and_reduced_replays_agree(self, f, data):
        spec = get_logic(data.draw(st.sampled_from(["bh3", "lp"])))
        v = {a: data.draw(st.sampled_from(spec.values)) for a in sorted(atoms(f))}
        try:
            full = brute_force_profile(spec, f, v, exhaustive=True, budget=2**12)
        except BudgetExceeded:
            return
        assert full == brute_force_profile(spec, f, v) == win_profile(spec, f, v)

    def test_leaf_table_layout(self, bh3):
        # p | q over all nine leaf tuples: column 3*code(p) + code(q)
        table = leaf_table(bh3, parse("p|q"))
        T, N, F = 0, 1, 2
        assert table[:, 3 * T + F].tolist() == [True, False, False]
        assert table[:, 3 * F + N].tolist() == [False, False, True]
        assert table[:, 3 * F + F].tolist() == [False, True, False]


class TestIesds:
    def test_running_example(self, example):
        f, v, spec = example
        trace = iesds(spec, f, v)
        lines = trace.lines()
        assert "round 1: ELIMINATE Verifier L-L — dominated by Dominator L-R" in lines
        assert lines[-1] == "survivor: Dominator L-R (value N)"
        assert trace.value.letter == "N"

    def test_true_atom(self, bh3):
        trace = iesds(bh3, Atom("p"), val(bh3, "p=T"))
        assert trace.entries == []
        assert trace.survivor.owner == Verifier and trace.survivor.choices == ()

    def test_falsifier_choice_eliminated(self, bh3):
        trace = iesds(bh3, parse("p&q"), val(bh3, "p=F,q=N"))
        assert "round 1: ELIMINATE Falsifier L — dominated by Dominator R" in trace.lines()
        assert trace.value.letter == "N"

    def test_lp_survivor_is_classical(self, lp):
        trace = iesds(lp, parse("p|q"), val(lp, "p=P,q=T"))
        assert trace.survivor.owner == Verifier
        assert trace.value.letter == "T"

    def test_self_elimination_reason(self, example):
        f, v, spec = example
        trace = iesds(spec, f, v)
        own = [e for e in trace.entries if e.eliminated.owner == e.eliminator.owner]
        assert own and all(e.reason == NEVER_BEST for e in own)

    def test_structured(self, example):
        f, v, spec = example
        doc = iesds(spec, f, v).to_dict()
        assert doc["survivor"] == {"role": "Dominator", "choices": "L-R", "strategy": {"root": "L", "0": "R", "1": "L"}}
        assert doc["value"] == "N"

    def test_budget(self, bh3):
        with pytest.raises(BudgetExceeded):
            iesds(bh3, parse("(p|q)&(q|p)"), val(bh3, "p=T,q=F"), budget=2)
