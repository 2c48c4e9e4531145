from fractions import Fraction as F

import mpmath
import pytest
from scipy import integrate

from slopegap.hall import hall_cdf, hall_pdf, hall_reference, scaled_hall_breakpoints, scaled_hall_sum


def test_support_starts_at_one():
    assert hall_pdf(F(1, 2)) == 0
    assert hall_cdf(F(99, 100)) == 0
    assert hall_pdf(1) == 0


def test_cdf_at_the_second_breakpoint():
    assert abs(hall_cdf(4) - mpmath.mpf("0.806852")) < 1e-6
    assert abs(hall_cdf(10 ** 9) - 1) < 1e-7


def test_pdf_integrates_to_one():
    f = lambda t: float(hall_pdf(t))  # noqa: E731
    total = sum(integrate.quad(f, lo, hi)[0] for lo, hi in ((1, 4), (4, 100)))
    total += integrate.quad(f, 100, float("inf"), limit=200)[0]
    assert total == pytest.approx(1, abs=1e-8)


@pytest.mark.parametrize("t", [1.5, 3.0, 5.0, 12.0])
def test_cdf_is_the_antiderivative(t):
    with mpmath.workdps(30):
        h = mpmath.mpf("1e-8")
        slope = (hall_cdf(t + h) - hall_cdf(t - h)) / (2 * h)
        assert abs(slope - hall_pdf(t)) < 1e-10


def test_reference_pairs_pdf_and_cdf():
    pdf, cdf = hall_reference(F(5))
    assert pdf == hall_pdf(5)
    assert cdf == hall_cdf(5)


def test_scaled_sum():
    density = scaled_hall_sum([(1, 1), (F(1, 2), 2)])
    assert abs(density(6) - hall_pdf(6) - hall_pdf(3) / 2) < 1e-15
    assert scaled_hall_breakpoints([(1, 1), (F(1, 2), 2)]) == [1, 2, 4, 8]
