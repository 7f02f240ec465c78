import pytest

from calcqe.cli import EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, main

WORKED = """
(set-logic NRA)
(declare-fun x1 () Real)
(declare-fun x2 () Real)
(assert (forall ((x1 Real)) (exists ((x2 Real))
  (and (> (+ (- x2 3.5) (* 2 (- x1 4) (- x1 4))) 0)
       (> (+ (* (- x1 2) (- x1 2)) (* (- x2 2) (- x2 2))) 1)
       (< (- x2 3 (* 0.25 (- x1 4) (- x1 4))) 0)))))
(check-sat)
"""


@pytest.fixture
def run_cli(tmp_path, capsys):
    def go(text, *flags):
        path = tmp_path / "in.smt2"
        path.write_text(text)
        code = main([str(path), *flags])
        out, err = capsys.readouterr()
        return code, out, err
    return go


def test_worked_sentence_is_unsat(run_cli):
    code, out, _ = run_cli(WORKED)
    assert code == EXIT_OK and out.strip() == "unsat"


def test_negative_square_is_unsat(run_cli):
    code, out, _ = run_cli("(declare-const x Real)(assert (< (* x x) 0))(check-sat)")
    assert code == EXIT_OK and out.strip() == "unsat"


def test_free_constants_are_existential(run_cli):
    code, out, _ = run_cli("(declare-const x Real)(declare-const y Real)(assert (= (* x y) 1))(check-sat)")
    assert code == EXIT_OK and out.strip() == "sat"


def test_qe_prints_a_root_formula_and_verifies(run_cli):
    code, out, err = run_cli(
        "(declare-const x Real)(assert (exists ((y Real)) (= (* y y) x)))(eliminate-quantifiers)",
        "--verify", "200")
    assert code == EXIT_OK
    assert "(root " in out and "x" in out
    assert err.startswith("verify: pass")


def test_mode_flag_turns_a_check_into_qe(run_cli):
    code, out, _ = run_cli("(declare-const x Real)(assert (> x 0))(check-sat)", "--mode", "qe")
    assert code == EXIT_OK and "root" in out


def test_unknown_exits_with_two_and_names_the_polynomial(run_cli):
    text = """(declare-const a Real)(declare-const b Real)(declare-const c Real)
              (assert (> (- (+ (* a b c) (* a c)) b) 0))(check-sat)"""
    code, out, err = run_cli(text)
    assert code == EXIT_UNKNOWN and out.strip() == "unknown"
    assert "unknown: c*b*a + c*a - b is nullified over (0, 0)" in err


def test_stats_lines(run_cli):
    code, out, _ = run_cli(WORKED, "--stats")
    lines = out.split()
    assert lines[0] == "unsat"
    values = dict(line.split("=") for line in lines[1:])
    for key in ("implicants_generated", "implicants_used", "cells_characterized", "samples_tried",
                "resultants_computed", "used_ratio"):
        assert key in values
    assert int(values["implicants_used"]) <= int(values["implicants_generated"])


@pytest.mark.parametrize("boolean", ["eval", "propagate", "explore"])
@pytest.mark.parametrize("selection", ["size", "sotd", "rsotd", "features"])
def test_every_variant_agrees_on_the_worked_sentence(run_cli, boolean, selection):
    code, out, _ = run_cli(WORKED, "--boolean", boolean, "--selection", selection, "--var-order", "features")
    assert (code, out.strip()) == (EXIT_OK, "unsat")


def test_errors_exit_with_one(run_cli):
    code, _, err = run_cli("(declare-const x Real)\n(assert (/ x 2))")
    assert code == EXIT_ERROR and "line 2, column 9" in err and "division" in err
    code, _, err = run_cli("(declare-const x Real)(assert (> x 0))")
    assert code == EXIT_ERROR and "no check-sat" in err


def test_root_free_output_is_rejected(run_cli):
    with pytest.raises(SystemExit) as e:
        run_cli("(check-sat)", "--no-root-atoms")
    assert e.value.code == EXIT_ERROR


def test_only_the_first_query_runs(run_cli):
    code, out, err = run_cli("(declare-const x Real)(assert (> x 0))(check-sat)(check-sat)")
    assert code == EXIT_OK and out.strip() == "sat"
    assert "only the first of 2" in err


def test_missing_file(capsys, tmp_path):
    assert main([str(tmp_path / "absent.smt2")]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err
