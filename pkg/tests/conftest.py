from fractions import Fraction

import pytest
from hypothesis import strategies as st

from fnsphere.charvar import Problem, RepTuple
from fnsphere.exact_linear import Mat2, mat_inv
from fnsphere.fenchel_nielsen import unstable_unsplit

FIRST_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)

_acceptance_lines: list[str] = []


def small_fractions(bound: int = 12, max_den: int = 12):
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=max_den)


def nonzero_fractions(bound: int = 12, max_den: int = 12):
    return small_fractions(bound, max_den).filter(lambda x: x != 0)


def eigenvalues():
    return small_fractions().filter(lambda x: x not in (0, 1, -1))


def mat2s(entries=None):
    entries = entries or small_fractions()
    return st.builds(Mat2, entries, entries, entries, entries)


def nonsingular_mat2s():
    return mat2s().filter(lambda m: m.det() != 0)


@pytest.fixture
def problem4():
    return Problem.of([2, 3, 5, 7])


def prime_problem(k: int) -> Problem:
    return Problem.of(FIRST_PRIMES[:k])


def completion_with_product(R: Mat2, t3: Fraction, t4: Fraction) -> tuple[Mat2, Mat2]:
    """(B3, B4) of determinant 1 with traces t3, t4 and B3 B4 = R = diag(1/b, b)."""
    b = R.d
    x = (t4 - t3 / b) / (b - 1 / b)
    B3 = Mat2(x, Fraction(1), x * (t3 - x) - 1, t3 - x)
    return B3, mat_inv(B3) @ R


def unstable_rep(y=4) -> RepTuple:
    """A k=4 tuple for classes (2, 3, 5, 7) whose pants S_2 is unstable.

    The first two matrices come from undoing the splitting with b_prev = 2,
    b = 6, c_2 = 3; the last two close up the product.
    """
    b_prev, b, c = Fraction(2), Fraction(6), Fraction(3)
    split = unstable_unsplit(y, (Mat2.diag(b_prev, 1 / b_prev),), b_prev, b, c)
    B3, B4 = completion_with_product(split.R, Fraction(26, 5), Fraction(50, 7))
    return RepTuple(split.tuple + (B3, B4))


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

