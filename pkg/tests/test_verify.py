import random

from gmpy2 import mpq

from calcqe.engine import eliminate_quantifiers
from calcqe.formula import FALSE, TRUE, Exists, Forall, conj, constraint, prepare
from calcqe.poly import Polynomial
from calcqe.verify import random_rational, verify_qe

x, y = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const
DISK = prepare(Exists(2, constraint(x * x + y * y - C(1), "<")), {1: "x", 2: "y"})


def test_correct_disk_projection_passes():
    right = conj(constraint(x + C(1), ">"), constraint(x - C(1), "<"))
    report = verify_qe(DISK, right, 1000, 0)
    assert report.passed and report.checked + len(report.skipped) == 1000
    assert report.summary().startswith("pass")


def test_wrong_output_is_caught_with_a_witness():
    report = verify_qe(DISK, constraint(x - C(1), "<"), 1000, 0)
    assert not report.passed
    for point, expected, got in report.failures:
        assert point[0] <= -1 and expected is False and got is True
    assert "first witness" in report.summary()


def test_without_parameters_the_check_is_a_single_decision():
    sat = prepare(Exists(1, constraint(x, ">")))
    assert verify_qe(sat, TRUE).passed
    assert not verify_qe(sat, FALSE).passed
    unsat = prepare(Forall(1, constraint(x, ">")))
    assert verify_qe(unsat, FALSE).checked == 1 and verify_qe(unsat, FALSE).passed


def test_engine_output_passes_its_own_check():
    problem = prepare(Exists(2, constraint(y * y - x, "=")), {1: "x", 2: "y"})
    q = eliminate_quantifiers(problem)
    assert verify_qe(problem, q.formula, 300, 4).passed
    # and the output agrees with x >= 0 directly
    assert verify_qe(problem, constraint(x, ">="), 300, 4).passed


def test_random_rationals_cover_several_magnitudes():
    rng = random.Random(1)
    values = [random_rational(rng) for _ in range(400)]
    assert all(isinstance(v, type(mpq(1))) for v in values)
    assert any(abs(v) > 100 for v in values) and any(0 < abs(v) < mpq(1, 10) for v in values)
    assert any(v.denominator > 1 for v in values)
