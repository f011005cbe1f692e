from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import EXAMPLE_FORMULA, EXAMPLE_RUN, EXAMPLE_VALUATION, REFERENCE_TABLES

from nonsense_games.cli import main
from nonsense_games.logics import get_logic

EXAMPLE = ["--logic", "bh3", "--formula", EXAMPLE_FORMULA, "--val", EXAMPLE_VALUATION]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_running_example(self, capsys):
        assert run(capsys, "eval", *EXAMPLE)[:2] == (0, "N (Dominator)\n")

    def test_atom(self, capsys):
        assert run(capsys, "eval", "--logic", "bh3", "--formula", "p", "--val", "p=T")[:2] == (0, "T (Verifier)\n")

    def test_valuation_file(self, capsys, tmp_path):
        path = tmp_path / "model.val"
        path.write_text("# running example\np = T\nq = N\nr = F\n", encoding="utf-8")
        code, out, _ = run(capsys, "eval", "--formula", EXAMPLE_FORMULA, "--val", str(path))
        assert (code, out) == (0, "N (Dominator)\n")

    def test_structured_round_trip(self, capsys):
        code, out, _ = run(capsys, "eval", *EXAMPLE, "--format", "structured")
        doc = json.loads(out)
        assert code == 0
        assert f"{doc['value']} ({doc['role']})" == run(capsys, "eval", *EXAMPLE)[1].strip()
        assert doc["valuation"] == {"p": "T", "q": "N", "r": "F"}

    def test_bhn(self, capsys):
        code, out, _ = run(capsys, "eval", "--logic", "bhn:3", "--formula", "p&q", "--val", "p=N1,q=N3")
        assert (code, out) == (0, "N3 (Infector3)\n")


class TestOtherCommands:
    def test_trace(self, capsys):
        code, out, _ = run(capsys, "trace", *EXAMPLE)
        assert code == 0
        assert [line.strip() for line in out.splitlines()] == EXAMPLE_RUN

    def test_trace_structured_round_trip(self, capsys):
        text = run(capsys, "trace", *EXAMPLE)[1]
        doc = json.loads(run(capsys, "trace", *EXAMPLE, "--format", "structured")[1])
        rebuilt = [
            "{" + ", ".join(f"({p['role']}, {p['formula']})" for p in ts) + "}"
            for ts in doc["run"]
        ]
        ascii_text = text.replace("∨", "|").replace("∧", "&").replace("¬", "~")
        assert rebuilt == ascii_text.splitlines()

    def test_solve(self, capsys):
        code, out, _ = run(capsys, "solve", *EXAMPLE)
        assert code == 0
        assert "Dominator: winning strategy" in out
        assert "Falsifier: no winning strategy" in out
        assert "value: N (Dominator)" in out

    def test_solve_structured(self, capsys):
        doc = json.loads(run(capsys, "solve", *EXAMPLE, "--format", "structured")[1])
        assert doc["profile"] == {"Verifier": True, "Falsifier": False, "Dominator": True}
        assert doc["strategy"]["choices"]["root"] == "L" and doc["strategy"]["choices"]["0"] == "R"

    def test_iesds(self, capsys):
        code, out, _ = run(capsys, "iesds", *EXAMPLE)
        assert code == 0
        assert "round 1: ELIMINATE Verifier L-L — dominated by Dominator L-R" in out
        assert out.splitlines()[-1] == "survivor: Dominator L-R (value N)"

    def test_iesds_structured_round_trip(self, capsys):
        text = run(capsys, "iesds", *EXAMPLE)[1].splitlines()
        doc = json.loads(run(capsys, "iesds", *EXAMPLE, "--format", "structured")[1])
        s = doc["survivor"]
        assert text[-1] == f"survivor: {s['role']} {s['choices']} (value {doc['value']})"

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "verify", "--logic", "bh4", "--depth", "2", "--atoms", "2")
        assert code == 0
        assert "FAIL" not in out and "T4.2" in out

    def test_verify_structured(self, capsys):
        code, out, _ = run(capsys, "verify", "--logic", "lp", "--depth", "1", "--atoms", "1", "--format", "structured")
        doc = json.loads(out)
        assert code == 0 and all(r["pass"] for r in doc["reports"])

    @pytest.mark.parametrize("logic, reference", [("bhn:2", "bh4"), ("bh3", "bh3"), ("lp", "lp")])
    def test_derive_table(self, capsys, logic, reference):
        code, out, _ = run(capsys, "derive-table", "--logic", logic)
        assert code == 0
        fig = REFERENCE_TABLES[reference]
        order = [v.letter for v in get_logic(logic).values]
        for a in order:
            assert f"{a} | {fig['neg'][a]}" in out
            assert f"{a} | " + " ".join(fig["conj"][a][b] for b in order) in out

    def test_derive_table_structured(self, capsys):
        doc = json.loads(run(capsys, "derive-table", "--logic", "lp", "--format", "structured")[1])
        assert doc["conj"] == REFERENCE_TABLES["lp"]["conj"] and doc["matches_stored"] is True


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv, code",
        [
            (["eval", "--formula", "(p|", "--val", "p=T"], 2),
            (["eval", "--formula", "p & & q", "--val", "p=T,q=T"], 2),
            (["eval", "--formula", "p&q", "--val", "p=T"], 3),
            (["eval", "--formula", "p", "--val", "p=S"], 3),
            (["eval", "--formula", "p", "--val", "p"], 3),
            (["eval", "--formula", "p", "--val", "/no/such/file"], 3),
            (["iesds", "--formula", "(p|q)&(q|p)", "--val", "p=T,q=F", "--budget", "2"], 4),
            (["frobnicate"], 5),
            ([], 5),
            (["eval", "--formula", "p"], 5),
            (["eval", "--logic", "bhn:9", "--formula", "p", "--val", "p=T"], 5),
            (["eval", "--logic", "kleene", "--formula", "p", "--val", "p=T"], 5),
            (["eval", "--format", "yaml", "--formula", "p", "--val", "p=T"], 5),
            (["verify", "--atoms", "0"], 5),
        ],
    )
    def test_codes(self, capsys, argv, code):
        got, _, err = run(capsys, *argv)
        assert got == code
        assert err.strip()

    def test_counterexample_exit(self, capsys, monkeypatch):
        import nonsense_games.cli as cli

        spec = get_logic("bh3")
        monkeypatch.setattr(cli, "_logic", lambda name: spec.with_table_entry("neg", 0, 0))
        assert run(capsys, "verify", "--atoms", "1", "--depth", "1")[0] == 1

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "nonsense_games.cli", "eval", *EXAMPLE],
            capture_output=True, text=True, encoding="utf-8",
        )
        assert proc.returncode == 0 and proc.stdout.strip() == "N (Dominator)"
