"""
hall.py — Closed-form Hall distribution (the square torus gap law).

    pdf(t) = 0                                         t < 1
           = 2 ln t / t²                               1 <= t < 4
           = 2 ln t / t² - (4/t²) artanh √(1 - 4/t)    t >= 4

    cdf(t) = 2 (1 - (1 + ln t)/t)                      1 <= t < 4
           = 2 [1 - (1 + ln t)/t - ½√(1 - 4/t) + (2/t) artanh √(1 - 4/t)]
"""

from fractions import Fraction
from typing import Callable, List, Sequence, Tuple, Union

import mpmath

from slopegap import config


def _to_mp(t) -> mpmath.mpf:
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


def hall_pdf(t) -> mpmath.mpf:
    """Hall's limiting gap density for Farey fractions."""
    with mpmath.workdps(config.PRECISION_DPS):
        t = _to_mp(t)
        if t < 1:
            return mpmath.mpf(0)
        value = 2 * mpmath.log(t) / t ** 2
        if t >= 4:
            value -= 4 * mpmath.atanh(mpmath.sqrt(1 - 4 / t)) / t ** 2
        return +value


def hall_cdf(t) -> mpmath.mpf:
    """Closed-form CDF of hall_pdf."""
    with mpmath.workdps(config.PRECISION_DPS):
        t = _to_mp(t)
        if t < 1:
            return mpmath.mpf(0)
        value = 1 - (1 + mpmath.log(t)) / t
        if t >= 4:
            root = mpmath.sqrt(1 - 4 / t)
            value += -root / 2 + 2 * mpmath.atanh(root) / t
        return +(2 * value)


def hall_reference(t) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """(pdf, cdf) at t."""
    return hall_pdf(t), hall_cdf(t)


Scale = Union[int, Fraction]


def _mp_fraction(value: Scale) -> mpmath.mpf:
    value = Fraction(value)
    return mpmath.mpf(value.numerator) / value.denominator


def scaled_hall_sum(terms: Sequence[Tuple[Scale, Scale]]) -> Callable:
    """Density t ↦ Σ weight·h(t/scale) over (weight, scale) pairs, unnormalized."""

    def density(t):
        with mpmath.workdps(config.PRECISION_DPS):
            t = _to_mp(t)
            total = mpmath.mpf(0)
            for weight, scale in terms:
                total += _mp_fraction(weight) * hall_pdf(t / _mp_fraction(scale))
            return +total

    return density


def scaled_hall_breakpoints(terms: Sequence[Tuple[Scale, Scale]]) -> List[Fraction]:
    """Breakpoints of a scaled Hall sum: each scale s moves 1 and 4 to s and 4s."""
    return sorted({Fraction(scale) * c for _, scale in terms for c in (1, 4)})
