"""
errors.py — Exception hierarchy shared by every stage of the pipeline.

The CLI maps these onto documented exit codes, so each failure mode that a
user can trigger has its own class.
"""

from fractions import Fraction
from typing import Tuple


class SlopeGapError(Exception):
    """Base class for all library errors."""


class OrigamiFormatError(SlopeGapError, ValueError):
    """Permutation text or data could not be parsed."""


class EmptySurface(SlopeGapError):
    """A permutation pair on zero tiles."""


class NonTransitive(SlopeGapError):
    """The right/up permutations do not generate a transitive group."""


class HitConePoint(SlopeGapError):
    """A traced segment passed through a cone point before its endpoint."""

    def __init__(self, displacement: Tuple[Fraction, Fraction]):
        self.displacement = displacement
        x, y = displacement
        super().__init__(f"cone point reached at displacement ({x}, {y})")


class OrbitTooLarge(SlopeGapError):
    """The SL(2,Z)-orbit exceeded the configured cap."""


class UnsupportedSurface(SlopeGapError):
    """The Veech group does not contain -I."""


class CandidateSearchExhausted(SlopeGapError):
    """No winner could be confirmed within the search limit."""


class NotCertifiable(SlopeGapError):
    """The periodicity certificate for an unbounded strip could not be built."""


class TilingGap(SlopeGapError):
    """Reconstructed winner regions do not tile their section triangle."""


class NoCandidate(SlopeGapError):
    """No holonomy vector within the search bound is a candidate at the point."""
