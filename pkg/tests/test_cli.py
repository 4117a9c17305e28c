import json

import filelock
import pytest

from plgrader.cli import main
from plgrader.schemas import validate

from conftest import ASSIGNMENT, BUGS

SUBS = ASSIGNMENT / "submissions"
STAMP = "2024-05-01T12:00:00Z"


def check(name, *extra):
    return main(["check", str(SUBS / name), "--spec", str(ASSIGNMENT / "spec.json"),
                 "--tests", str(ASSIGNMENT / "tests.plt"), "--timestamp", STAMP, *extra])


class TestCheck:
    def test_correct_submission(self, capsys):
        assert check("correct.pl") == 0
        assert "7/7 tests passed, 15/15 points" in capsys.readouterr().out

    def test_syntax_error(self, tmp_path, capsys):
        assert check("syntax_error.pl", "--report", str(tmp_path), "--color", "never") == 1
        err = capsys.readouterr().err
        assert "4:5: syntax error" in err and "\x1b[" not in err
        md = (tmp_path / "report.md").read_text(encoding="utf-8")
        assert "Line 4, column 5" in md and "mult(L1, N, L2)." in md

    def test_color_from_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("PLGRADER_COLOR", "always")
        assert check("syntax_error.pl") == 1
        assert "\x1b[" in capsys.readouterr().err

    def test_missing_spec(self, capsys):
        code = main(["check", str(SUBS / "correct.pl"), "--spec", "/nonexistent/spec.json",
                     "--tests", str(ASSIGNMENT / "tests.plt")])
        assert code == 2

    def test_missing_program(self):
        assert main(["check", "/nonexistent.pl", "--spec", str(ASSIGNMENT / "spec.json"),
                     "--tests", str(ASSIGNMENT / "tests.plt")]) == 2

    def test_json_matches_report(self, tmp_path, capsys):
        assert check("max_no_cut.pl", "--json", "--report", str(tmp_path)) == 1
        printed = json.loads(capsys.readouterr().out)
        validate(printed, "report")
        assert printed == json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert [w["kind"] for w in printed["warnings"]] == ["OpenChoicePoint", "OpenChoicePoint"]

    def test_suggestion_and_technique(self, capsys):
        assert check("misnamed.pl", "--json") == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["suggestions"][0]["candidates"][0]["predicate"] == "mult/3"
        assert doc["technique"][0]["predicate"] == "mult/3"

    def test_higher_order_violates_required_recursion(self, capsys):
        assert check("higher_order.pl", "--json") == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["technique"][0]["actual"] == "HigherOrder"

    def test_divergence_note(self, tmp_path):
        assert check("looping.pl", "--report", str(tmp_path), "--max-steps", "2000") == 1
        md = (tmp_path / "report.md").read_text(encoding="utf-8")
        assert "possible infinite loop in mult/3 (step limit of 2000 reached)" in md

    def test_trace(self, capsys):
        check("correct.pl", "--trace")
        err = capsys.readouterr().err
        assert "call: mult(" in err and "exit: " in err

    def test_wall_clock_timeout(self, capsys):
        code = check("looping.pl", "--max-steps", "100000000", "--timeout", "0.5")
        assert code == 1
        assert "Diverged" in capsys.readouterr().err

    def test_reports_are_deterministic(self, tmp_path):
        for name in sorted(p.name for p in SUBS.glob("*.pl")):
            check(name, "--report", str(tmp_path / "a" / name))
            check(name, "--report", str(tmp_path / "b" / name))
            for f in ("report.md", "report.json"):
                assert (tmp_path / "a" / name / f).read_bytes() == \
                    (tmp_path / "b" / name / f).read_bytes()


class TestRank:
    def _report(self, tmp_path, name="correct.pl"):
        check(name, "--report", str(tmp_path / name))
        return tmp_path / name / "report.json"

    def test_add_and_show(self, tmp_path, capsys):
        board = tmp_path / "board.json"
        assert main(["rank", "--board", str(board), "--add", str(self._report(tmp_path)),
                     "--student", "anon-1"]) == 0
        capsys.readouterr()
        assert main(["rank", "--board", str(board), "--show"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[1].split()[:3] == ["1", "anon-1", "15"]

    def test_non_improving_add_keeps_bytes(self, tmp_path, capsys):
        board = tmp_path / "board.json"
        good, worse = self._report(tmp_path), self._report(tmp_path, "misnamed.pl")
        main(["rank", "--board", str(board), "--add", str(good), "--student", "s"])
        before = board.read_bytes()
        capsys.readouterr()
        main(["rank", "--board", str(board), "--add", str(worse), "--student", "s", "--json"])
        assert json.loads(capsys.readouterr().out)["changed"] is False
        assert board.read_bytes() == before

    def test_json(self, tmp_path, capsys):
        board = tmp_path / "board.json"
        report = self._report(tmp_path)
        capsys.readouterr()
        main(["rank", "--board", str(board), "--add", str(report), "--student", "s", "--json"])
        doc = json.loads(capsys.readouterr().out)
        validate(doc, "rank")
        assert doc["changed"] and doc["board"][0]["rank"] == 1

    def test_corrupt_board(self, tmp_path):
        board = tmp_path / "board.json"
        board.write_text("not json", encoding="utf-8")
        assert main(["rank", "--board", str(board), "--show"]) == 2

    def test_add_needs_student(self, tmp_path):
        assert main(["rank", "--board", str(tmp_path / "b.json"), "--add",
                     str(self._report(tmp_path))]) == 2

    def test_lock_timeout(self, tmp_path):
        board = tmp_path / "board.json"
        report = self._report(tmp_path)
        with filelock.FileLock(str(board) + ".lock"):
            code = main(["rank", "--board", str(board), "--add", str(report), "--student", "s",
                         "--lock-timeout", "0.2"])
        assert code == 3


class TestClassify:
    def test_labels(self, capsys):
        assert main(["classify-bug", str(BUGS / "cut_old.pl"), str(BUGS / "cut_new.pl")]) == 0
        out = capsys.readouterr().out
        assert "max/3: Modified" in out
        assert "bug: CutProblem/MissingCut in max/3" in out

    def test_json(self, capsys):
        assert main(["classify-bug", "--json", str(BUGS / "rename_old.pl"),
                     str(BUGS / "rename_new.pl")]) == 0
        doc = json.loads(capsys.readouterr().out)
        validate(doc, "classify")
        assert doc["types"] == ["WrongPredicateName"]
        assert doc["diffs"][0]["renamed_from"] == "mul/3"

    def test_identical(self, capsys):
        f = str(BUGS / "cut_new.pl")
        assert main(["classify-bug", f, f]) == 1
        assert "do not differ" in capsys.readouterr().out

    def test_missing_file(self):
        assert main(["classify-bug", "/nonexistent.pl", str(BUGS / "cut_new.pl")]) == 2


class TestCorpusCommands:
    def test_history(self, corpus, capsys):
        assert main(["history", str(corpus), "--assignment", "max"]) == 0
        out = capsys.readouterr().out
        assert "max/x1/1700000000: FirstSubmission/Incorrect (2/3 tests)" in out
        assert "max/x1/1700003600: Mixed/Incorrect (2/3 tests)" in out
        assert "max/x3/1700003600: BugIntroduced/Incorrect (2/3 tests)" in out

    def test_history_json(self, corpus, capsys):
        assert main(["history", str(corpus), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        validate(doc, "history")
        assert len(doc["submissions"]) == 30

    def test_unknown_assignment(self, corpus):
        assert main(["history", str(corpus), "--assignment", "nope"]) == 2

    def test_stats(self, corpus, tmp_path, capsys):
        assert main(["stats", str(corpus), "--figures", str(tmp_path / "fig")]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].split()[0] == "Assignment"
        assert (tmp_path / "fig" / "categories.png").exists()
        assert (tmp_path / "fig" / "assignments.png").exists()

    def test_stats_json(self, corpus, capsys):
        assert main(["stats", str(corpus), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        validate(doc, "stats")
        assert doc["submissions"] == 30

    def test_bad_tests_file(self, corpus):
        (corpus / "max" / "tests.plt").write_text(":- begin_tests(a).\n", encoding="utf-8")
        assert main(["stats", str(corpus)]) == 2


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["check"])
    assert info.value.code == 2
