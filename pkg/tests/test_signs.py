from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from treespace.errors import CertificateError, MalformedInputError, PreconditionError
from treespace.models import SignProblem
from treespace.ops import balance_signs, brute_force_best_signs, check_problem, row_sums, verify_signs

entries = st.fractions(min_value=-1, max_value=1, max_denominator=6)


@st.composite
def problems(draw, max_rows: int = 3, max_columns: int = 12):
    k = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_columns))
    return SignProblem(tuple(tuple(draw(entries) for _ in range(n)) for _ in range(k)))


def test_merges_equal_patterns():
    result = balance_signs(SignProblem(((1, 1, 1),)))
    assert result.theta == (1, -1, 1)
    assert result.sums == (Fraction(1),)
    assert result.bound == 2
    assert result.merges == ((0, 1),)


def test_zero_counts_as_positive_pattern():
    q = Fraction
    result = balance_signs(SignProblem(((q(1, 2), q(-1, 2), q(1, 2), q(1, 4)),)))
    assert result.merges == ((0, 2), (0, 2))
    assert result.theta == (1, 1, -1, -1)
    assert result.sums == (q(-3, 4),)


def test_few_columns_keep_positive_signs():
    result = balance_signs(SignProblem(((1, -1), (Fraction(1, 3), 1))))
    assert result.theta == (1, 1)
    assert result.merges == ()


@settings(max_examples=80, deadline=None)
@given(problems())
def test_row_sums_stay_within_the_bound(problem):
    result = balance_signs(problem)
    assert result.sums == row_sums(problem, result.theta)
    assert all(abs(s) <= 2 ** problem.k for s in result.sums)
    assert verify_signs(problem, result.theta) == result.sums


@settings(max_examples=40, deadline=None)
@given(problems(max_rows=2, max_columns=8))
def test_brute_force_is_no_worse(problem):
    theta, value = brute_force_best_signs(problem)
    assert max(abs(s) for s in row_sums(problem, theta)) == value
    assert value <= max(abs(s) for s in balance_signs(problem).sums)


def test_brute_force_example():
    assert brute_force_best_signs(SignProblem(((1, 1, 1),))) == ((1, 1, -1), Fraction(1))


def test_brute_force_column_cap():
    with pytest.raises(PreconditionError):
        brute_force_best_signs(SignProblem(((0,) * 21,)))


def test_check_problem():
    with pytest.raises(PreconditionError):
        check_problem(SignProblem(()))
    with pytest.raises(PreconditionError):
        check_problem(SignProblem(((2,),)))
    with pytest.raises(MalformedInputError):
        check_problem(SignProblem(((1, 0), (1,))))


def test_verify_signs_rejects_bad_vectors():
    problem = SignProblem(((1, 1, 1),))
    with pytest.raises(CertificateError):
        verify_signs(problem, (1, 1, 1))
    with pytest.raises(CertificateError):
        verify_signs(problem, (1, 0, 1))
    with pytest.raises(CertificateError):
        verify_signs(problem, (1, 1))
