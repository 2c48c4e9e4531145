"""
transversal.py — Poincaré-section triangles and their winner partitions.

A cusp with scaled cusp-relative surface gives the triangle

    Ω = {(a, b) | 0 < a <= 1, (1 - x0·a)/y0 - α·a <= b < (1 - x0·a)/y0}

At a point (a, b) the candidates are holonomy vectors ⟨x, y⟩ with y > 0 and
0 < a·x + b·y <= 1; the winner is the candidate with the largest x/y
(equivalently the smallest slope y/(a(a·x + b·y)) of its image), ties going
to the shorter vector. The right edge a = 1 is split bottom-up into
half-open intervals [b_lo, b_hi) with constant winner, and the winner
regions are rebuilt from that list.

Holonomy on a scaled cusp-relative is tested on the unscaled surface:
⟨x, y⟩ is a holonomy vector iff ⟨x·d, y/d⟩ is one there.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import List, Optional, Tuple

from slopegap import config
from slopegap.errors import CandidateSearchExhausted, NotCertifiable, TilingGap
from slopegap.geometry import Point, Polygon, area, clip, contains
from slopegap.orbit import CuspDatum
from slopegap.origami import (
    HolonomyVector,
    act_T,
    act_matrix,
    hit_multiples,
    is_holonomy,
    is_isomorphic,
)

logger = logging.getLogger(__name__)

_MAX_REFINEMENTS = 10_000


# ── Types ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SectionComponent:
    cusp: CuspDatum
    x0: Fraction
    y0: Fraction
    alpha_eff: Fraction
    triangle: Tuple[Point, Point, Point]

    @property
    def scaling_d(self) -> Fraction:
        return self.cusp.scaling_d

    @property
    def b_bottom(self) -> Fraction:
        return self.triangle[1][1]

    @property
    def b_top(self) -> Fraction:
        return self.triangle[2][1]

    @property
    def area(self) -> Fraction:
        return self.alpha_eff / 2

    def holds(self, x: Fraction, y: Fraction) -> bool:
        """Is the scaled vector ⟨x, y⟩ a holonomy vector of the scaled cusp-relative?"""
        big_x, big_y = Fraction(x) * self.scaling_d, Fraction(y) / self.scaling_d
        if big_x.denominator != 1 or big_y.denominator != 1:
            return False
        return is_holonomy(self.cusp.cusp_relative, (big_x, big_y))


@dataclass(frozen=True)
class CandidateRegion:
    """Vectors that would beat ``candidate`` at (1, b).

    Bounded: the open triangle (0,0), (1,0), apex. Unbounded: the strip
    0 < v·x - u·y < v above y = 0, with u + b·v = 0.
    """

    candidate: HolonomyVector
    b: Fraction
    bounded: bool
    apex: Optional[Point] = None


@dataclass(frozen=True)
class StripCertificate:
    candidate: HolonomyVector
    direction: Tuple[int, int]
    period: int
    lines: Tuple[int, ...]
    tested: Tuple[Tuple[int, int], ...]
    found: Tuple[HolonomyVector, ...]

    @property
    def empty(self) -> bool:
        return not self.found

    def best(self) -> Optional[HolonomyVector]:
        return _best(self.found)


@dataclass(frozen=True)
class EdgeInterval:
    b_lo: Fraction
    b_hi: Fraction
    winner: HolonomyVector
    evidence: str
    certificate: Optional[StripCertificate] = None
    refinements: Tuple[HolonomyVector, ...] = ()

    def to_json(self) -> dict:
        return {"b_lo": str(self.b_lo), "b_hi": str(self.b_hi), "winner": self.winner.to_json()}


@dataclass(frozen=True)
class WinnerRegion:
    winner: HolonomyVector
    polygon: Polygon = field(hash=False)
    component: SectionComponent = field(repr=False, compare=False, hash=False)

    @property
    def area(self) -> Fraction:
        return area(self.polygon)

    def to_json(self) -> dict:
        return {
            "winner": self.winner.to_json(),
            "vertices": [[str(a), str(b)] for a, b in self.polygon],
        }


# ── Helpers ───────────────────────────────────────────────────────────────────

def _best(vectors) -> Optional[HolonomyVector]:
    """Largest x/y, then smallest y."""
    best = None
    for v in vectors:
        if best is None or v.ratio > best.ratio or (v.ratio == best.ratio and v.y < best.y):
            best = v
    return best


def _bezout(p: int, q: int) -> Tuple[int, int]:
    """(a, b) with a·p + b·q = 1 for coprime p, q."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    return old_s * old_r, old_t * old_r


def _shortest_collinear(comp: SectionComponent, v: HolonomyVector) -> HolonomyVector:
    """The shortest holonomy vector pointing the same way as v."""
    d = comp.scaling_d
    big_x, big_y = int(v.x * d), int(v.y / d)
    relative = comp.cusp.cusp_relative
    (p, q), multiples = hit_multiples(relative, big_x, big_y)
    k = min(multiples) if multiples else 1
    if k >= gcd(big_x, big_y):
        return v
    return HolonomyVector(Fraction(k * p) / d, Fraction(k * q) * d)


def _t_cycle_length(o, cap: int) -> int:
    image = act_T(o)
    for m in range(1, cap + 1):
        if is_isomorphic(image, o):
            return m
        image = act_T(image)
    raise NotCertifiable(f"no T-power up to {cap} fixes the conjugated surface")


# ── Section components ────────────────────────────────────────────────────────

def section_component(c: CuspDatum) -> SectionComponent:
    """Exact triangle of the cusp's section component."""
    relative, d, width = c.cusp_relative, c.scaling_d, c.width
    for big_y in range(1, config.SEARCH_LIMIT + 1):
        # T^width fixes the surface, so one shear period of x-values suffices.
        xs = [x for x in range(1, width * big_y + 1) if is_holonomy(relative, (x, big_y))]
        if xs:
            break
    else:
        raise CandidateSearchExhausted(
            f"no holonomy vector of height <= {config.SEARCH_LIMIT} on {relative}"
        )
    y0 = big_y * d
    x0 = Fraction(xs[0]) / d
    alpha = Fraction(width) / d ** 2
    top = (1 - x0) / y0
    triangle = ((Fraction(0), 1 / y0), (Fraction(1), top - alpha), (Fraction(1), top))
    logger.debug("Section component x0=%s y0=%s alpha=%s", x0, y0, alpha)
    return SectionComponent(c, x0, y0, alpha, triangle)


# ── Candidates ────────────────────────────────────────────────────────────────

def seed_candidate(comp: SectionComponent, b: Fraction) -> HolonomyVector:
    """Lowest holonomy vector that is a candidate just above (1, b)."""
    d = comp.scaling_d
    for big_y in range(1, config.SEARCH_LIMIT + 1):
        y = big_y * d
        lo, hi = -b * y, 1 - b * y  # 0 <= x + b·y < 1
        for big_x in range(ceil(lo * d), ceil(hi * d)):
            x = Fraction(big_x) / d
            if comp.holds(x, y):
                return _shortest_collinear(comp, HolonomyVector(x, y))
    raise CandidateSearchExhausted(f"no candidate at b={b} below height {config.SEARCH_LIMIT}")


def candidate_region(comp: SectionComponent, b: Fraction, candidate: HolonomyVector) -> CandidateRegion:
    """Lattice region to search for vectors beating candidate at b: a triangle, or a strip when unbounded."""
    u, v = candidate.as_pair()
    reach = u + b * v
    if reach < 0:
        raise ValueError(f"{candidate} is not a candidate at b={b}")
    if reach == 0:
        return CandidateRegion(candidate, b, bounded=False)
    return CandidateRegion(candidate, b, bounded=True, apex=(u / reach, v / reach))


def search_bounded(comp: SectionComponent, region: CandidateRegion) -> List[HolonomyVector]:
    """All holonomy vectors strictly inside a bounded candidate region."""
    d = comp.scaling_d
    u, v = region.candidate.as_pair()
    apex_y = region.apex[1]
    rows = ceil(apex_y / d) - 1
    if rows > config.SEARCH_LIMIT:
        raise CandidateSearchExhausted(f"candidate region at b={region.b} is {rows} rows tall")
    found = []
    for big_y in range(1, rows + 1):
        y = big_y * d
        x_lo, x_hi = u * y / v, 1 - region.b * y
        for big_x in range(floor(x_lo * d) + 1, ceil(x_hi * d)):
            x = Fraction(big_x) / d
            if comp.holds(x, y):
                found.append(HolonomyVector(x, y))
    return found


def certify_strip_empty(comp: SectionComponent, candidate: HolonomyVector) -> StripCertificate:
    """Decide the strip 0 < v·x - u·y < v (y > 0) through periodicity.

    With (p, q) the primitive unscaled direction of the candidate, each
    lattice line q·X - p·Y = k meets the holonomy set periodically with
    period m·k, where m is the width of the cusp in direction (p, q).
    """
    d = comp.scaling_d
    relative = comp.cusp.cusp_relative
    big_u, big_v = int(candidate.x * d), int(candidate.y / d)
    g = gcd(big_u, big_v)
    p, q = big_u // g, big_v // g
    s, t = _bezout(p, q)
    # [[s, t], [-q, p]] sends (p, q) to (1, 0).
    conjugated = act_matrix(relative, [[s, t], [-q, p]])
    period = _t_cycle_length(conjugated, config.ORBIT_CAP)

    lines = tuple(range(1, int(q * d)))
    tested = []
    found = []
    for k in lines:
        x_base, y_base = k * t, -k * s  # q·x_base - p·y_base = k
        n = (-y_base) // q + 1
        for step in range(n, n + period * k):
            big_x, big_y = x_base + step * p, y_base + step * q
            tested.append((big_x, big_y))
            if is_holonomy(relative, (big_x, big_y)):
                found.append(HolonomyVector(Fraction(big_x) / d, Fraction(big_y) * d))
                break
    logger.debug("Strip of %s: period %d, %d lines, %d hits", candidate, period, len(lines), len(found))
    return StripCertificate(candidate, (p, q), period, lines, tuple(tested), tuple(found))


# ── Edge partition ────────────────────────────────────────────────────────────

def _confirm_winner(comp: SectionComponent, b: Fraction) -> Tuple[HolonomyVector, str, Optional[StripCertificate], Tuple]:
    candidate = seed_candidate(comp, b)
    history = [candidate]
    for _ in range(_MAX_REFINEMENTS):
        region = candidate_region(comp, b, candidate)
        if region.bounded:
            better = _best(search_bounded(comp, region))
            if better is None:
                return candidate, "bounded", None, tuple(history)
        else:
            try:
                cert = certify_strip_empty(comp, candidate)
            except NotCertifiable as exc:
                raise CandidateSearchExhausted(f"cannot confirm {candidate} at b={b}: {exc}") from exc
            if cert.empty:
                return candidate, "certificate", cert, tuple(history)
            better = cert.best()
        candidate = _shortest_collinear(comp, better)
        history.append(candidate)
    raise CandidateSearchExhausted(f"winner at b={b} not confirmed after {_MAX_REFINEMENTS} steps")


def partition_edge(comp: SectionComponent) -> List[EdgeInterval]:
    """Bottom-up partition of the edge a = 1 into [b_lo, b_hi) winner intervals."""
    b = comp.b_bottom
    intervals: List[EdgeInterval] = []
    while b < comp.b_top:
        winner, evidence, cert, history = _confirm_winner(comp, b)
        b_hi = min((1 - winner.x) / winner.y, comp.b_top)
        intervals.append(EdgeInterval(b, b_hi, winner, evidence, cert, history))
        logger.debug("Winner %s on [%s, %s) by %s", winner, b, b_hi, evidence)
        b = b_hi
    logger.info("Edge of component (alpha=%s) split into %d intervals", comp.alpha_eff, len(intervals))
    return intervals


# ── Winner regions ────────────────────────────────────────────────────────────

def winner_regions(comp: SectionComponent, partition: List[EdgeInterval]) -> List[WinnerRegion]:
    """Region of winner k: triangle ∩ its strip, outside the strips of earlier winners."""
    regions = []
    for k, interval in enumerate(partition):
        x, y = interval.winner.as_pair()
        planes = [(-x, -y, Fraction(0)), (x, y, Fraction(1))]
        for earlier in partition[:k]:
            ex, ey = earlier.winner.as_pair()
            planes.append((-ex, -ey, Fraction(-1)))
        polygon = clip(list(comp.triangle), planes)
        if polygon:
            regions.append(WinnerRegion(interval.winner, polygon, comp))
    total = sum((r.area for r in regions), Fraction(0))
    if total != comp.area:
        raise TilingGap(f"winner regions cover {total}, triangle has area {comp.area}")
    return regions


def locate_winner(regions: List[WinnerRegion], a: Fraction, b: Fraction) -> Optional[HolonomyVector]:
    """Winner of the region containing (a, b), or None outside every region."""
    point = (Fraction(a), Fraction(b))
    for region in regions:
        if contains(region.polygon, point):
            return region.winner
    return None


def component_export(comp: SectionComponent, partition: List[EdgeInterval], regions: List[WinnerRegion]) -> dict:
    """JSON view of one component: triangle, partition, regions."""
    return {
        "x0": str(comp.x0),
        "y0": str(comp.y0),
        "alpha_eff": str(comp.alpha_eff),
        "scaling_d": str(comp.scaling_d),
        "intervals": [i.to_json() for i in partition],
        "regions": [r.to_json() for r in regions],
    }


# ── Whole-component pipeline ──────────────────────────────────────────────────

@dataclass(frozen=True)
class ComponentAnalysis:
    component: SectionComponent
    partition: Tuple[EdgeInterval, ...]
    regions: Tuple[WinnerRegion, ...]

    def to_json(self) -> dict:
        return component_export(self.component, list(self.partition), list(self.regions))


def analyze_component(c: CuspDatum) -> ComponentAnalysis:
    """Section component, edge partition and regions for one cusp."""
    comp = section_component(c)
    partition = partition_edge(comp)
    regions = winner_regions(comp, partition)
    return ComponentAnalysis(comp, tuple(partition), tuple(regions))
