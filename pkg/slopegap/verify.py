"""
verify.py — Independent oracles for every stage of the pipeline.

    brute_winner            winner at a point by exhaustive holonomy search
    empirical_gaps          renormalized slope gaps from enumerated holonomy
    congruence_gaps_10tile  same for the ten-tile surface from x mod 5 ∈ {0,2,3}
    ks_distance             Kolmogorov–Smirnov distance sample vs density
    hall_signature          nonsmooth points and the τ/4-or-4τ closure test
    run_suite               named checks producing CheckResult rows
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from scipy import integrate, stats

from slopegap import config
from slopegap.distribution import PiecewisePdf, covolume, covolume_reference
from slopegap.errors import NoCandidate
from slopegap.fixtures import is_ten_tile
from slopegap.geometry import contains
from slopegap.orbit import parabolic_generators
from slopegap.origami import (
    HolonomyVector,
    Origami,
    act_word,
    cone_points,
    enumerate_holonomy,
    hit_multiples,
    holonomy_lattice_is_standard,
    is_isomorphic,
    vertices,
)
from slopegap.pipeline import Analysis
from slopegap.transversal import SectionComponent, WinnerRegion, locate_winner

logger = logging.getLogger(__name__)


# ── Brute-force winners ───────────────────────────────────────────────────────

def default_bound(comp: SectionComponent) -> int:
    """Box size for brute_winner, scaled to the triangle."""
    return ceil(config.BRUTE_FACTOR * comp.alpha_eff * max(comp.x0, comp.y0))


@lru_cache(maxsize=64)
def _primitive_box(max_x: int, max_y: int) -> Tuple[np.ndarray, np.ndarray]:
    """Primitive integer directions (P, Q) with |P| <= max_x and 0 < Q <= max_y."""
    ps, qs = np.meshgrid(np.arange(-max_x, max_x + 1), np.arange(1, max_y + 1))
    ps, qs = ps.ravel(), qs.ravel()
    keep = np.gcd(ps, qs) == 1
    return ps[keep].astype(np.int64), qs[keep].astype(np.int64)


def _multiples(relative: Origami, p: int, q: int) -> Iterable[int]:
    if not cone_points(relative):
        return itertools.count(1)
    return sorted(hit_multiples(relative, p, q)[1])


def brute_winner(comp: SectionComponent, point: Tuple[Fraction, Fraction], bound: Optional[int] = None) -> HolonomyVector:
    """Candidate with the largest x/y (then smallest y) among holonomy vectors within ``bound``."""
    bound = bound or default_bound(comp)
    d = comp.scaling_d
    if d.denominator != 1:
        raise ValueError(f"scaling factor {d} is not an integer")
    d = int(d)
    max_x, max_y = bound * d, bound // d
    big_p, big_q = _primitive_box(max_x, max_y)
    a, b = Fraction(point[0]), Fraction(point[1])
    an, ad, bn, bd = a.numerator, a.denominator, b.numerator, b.denominator
    # a·x + b·y times ad·bd·d, with x = X/d and y = Y·d
    reach = an * bd * big_p + bn * ad * d * d * big_q
    full = ad * bd * d
    mask = (reach > 0) & (reach <= full)

    best: Optional[Tuple[int, int]] = None
    for p, q, r in zip(big_p[mask].tolist(), big_q[mask].tolist(), reach[mask].tolist()):
        limit = min(full // r, max_y // q, max_x // abs(p) if p else max_y)
        for k in _multiples(comp.cusp.cusp_relative, p, q):
            if k > limit:
                break
            v = (k * p, k * q)
            if best is None or (Fraction(*v), -v[1]) > (Fraction(*best), -best[1]):
                best = v
    if best is None:
        raise NoCandidate(f"no holonomy vector within {bound} is a candidate at ({a}, {b})")
    return HolonomyVector(Fraction(best[0], d), Fraction(best[1] * d))


def random_interior_points(
    regions: Sequence[WinnerRegion],
    comp: SectionComponent,
    count: int,
    rng: np.random.Generator,
    denominator: int = 10_000,
) -> List[Tuple[Fraction, Fraction]]:
    """Rational points strictly inside exactly one region, denominators <= ``denominator``."""
    points = []
    top_b = comp.triangle[0][1]
    while len(points) < count:
        a = Fraction(int(rng.integers(1, denominator + 1)), denominator)
        lo = top_b - (top_b - comp.b_bottom) * a
        hi = top_b - (top_b - comp.b_top) * a
        b = Fraction(int(np.floor(float(lo + (hi - lo) * Fraction(rng.random())) * denominator)), denominator)
        if not lo < b < hi:
            continue
        inside = [r for r in regions if contains(r.polygon, (a, b), strict=True)]
        if len(inside) == 1:
            points.append((a, b))
    return points


def brute_mismatches(comp: SectionComponent, regions: Sequence[WinnerRegion], count: int, seed: int) -> List[tuple]:
    """Random interior points where brute force and the region lookup disagree."""
    rng = np.random.default_rng(seed)
    mismatches = []
    for a, b in random_interior_points(regions, comp, count, rng):
        declared = locate_winner(list(regions), a, b)
        found = brute_winner(comp, (a, b))
        if declared != found:
            mismatches.append(((a, b), declared, found))
    return mismatches


# ── Empirical gaps ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GapSample:
    bound: int
    gaps: np.ndarray = field(repr=False)
    slope_count: int


def _gap_sample(bound: int, slopes: np.ndarray) -> GapSample:
    slopes = np.unique(np.concatenate([slopes, [0.0, 1.0]]))
    gaps = np.sort(np.diff(slopes) * float(bound) ** 2)
    return GapSample(bound, gaps, len(slopes))


def empirical_slopes(o: Origami, bound: int) -> np.ndarray:
    """Sorted distinct slopes in [0, 1] of holonomy vectors in the box of size bound."""
    vectors = enumerate_holonomy(o, bound, (0, 1))
    return np.unique(np.array([float(v.y / v.x) for v in vectors] + [0.0, 1.0]))


def empirical_gaps(o: Origami, bound: int) -> GapSample:
    """Renormalized slope gaps from direct enumeration."""
    return _gap_sample(bound, empirical_slopes(o, bound))


def congruence_slopes_10tile(bound: int) -> np.ndarray:
    """Slopes y/x with x <= bound, x ≡ 0, 2, 3 (mod 5) and 0 <= y <= x."""
    xs = [x for x in range(2, bound + 1) if x % 5 in (0, 2, 3)]
    parts = [np.arange(x + 1, dtype=np.float64) / x for x in xs]
    return np.unique(np.concatenate(parts + [np.array([0.0, 1.0])]))


def congruence_gaps_10tile(bound: int) -> GapSample:
    """Renormalized gaps of congruence_slopes_10tile."""
    return _gap_sample(bound, congruence_slopes_10tile(bound))


def gaps_for(o: Origami, bound: int) -> GapSample:
    """Gap sample for o, through the congruence path when o is the ten-tile surface."""
    if is_ten_tile(o):
        return congruence_gaps_10tile(bound)
    return empirical_gaps(o, bound)


# ── Distribution distances ────────────────────────────────────────────────────

def _cdf_grid(cdf: Callable, t_max: float = 50.0) -> Tuple[np.ndarray, np.ndarray]:
    grid = np.unique(np.concatenate([np.linspace(0.0, t_max, 3001), np.geomspace(t_max, 1e5, 601)]))
    values = np.array([float(cdf(t)) for t in grid])
    return grid, values


def ks_distance(sample: GapSample, model: Union[PiecewisePdf, Callable]) -> float:
    """sup |empirical CDF - model CDF| via scipy.stats.kstest on a dense CDF table."""
    cdf = model.cdf if isinstance(model, PiecewisePdf) else model
    grid, values = _cdf_grid(cdf)
    result = stats.kstest(sample.gaps, lambda x: np.interp(x, grid, values))
    logger.info("KS distance %.5f over %d gaps", result.statistic, len(sample.gaps))
    return float(result.statistic)


# ── Hall signature ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class HallSignature:
    nonsmooth_set: Tuple[Fraction, ...]
    closure_ok: bool
    witnesses: Tuple[Fraction, ...]
    derivatives: Dict[Fraction, Tuple[mpmath.mpf, mpmath.mpf]] = field(compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "nonsmooth_set": [str(t) for t in self.nonsmooth_set],
            "closure_ok": self.closure_ok,
            "witnesses": [str(t) for t in self.witnesses],
        }


def _one_side(f: Callable, tau: mpmath.mpf, side: int, f_tau: mpmath.mpf) -> mpmath.mpf:
    step = tau * mpmath.mpf("1e-6")
    quotients = []
    for _ in range(4):
        quotients.append(side * (f(tau + side * step) - f_tau) / step)
        step /= 2
    if all(abs(quotients[j + 1]) > 1.4 * abs(quotients[j]) for j in range(3)):
        return mpmath.inf if quotients[-1] > 0 else -mpmath.inf
    return 2 * quotients[-1] - quotients[-2]


def one_sided_derivatives(f: Callable, tau) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """(∂₋f(τ), ∂₊f(τ)) by one-sided differences with Richardson extrapolation."""
    with mpmath.workdps(config.PRECISION_DPS):
        tm = mpmath.mpf(tau.numerator) / tau.denominator if isinstance(tau, Fraction) else mpmath.mpf(tau)
        f_tau = f(tm)
        return _one_side(f, tm, -1, f_tau), _one_side(f, tm, 1, f_tau)


def _is_nonsmooth(left: mpmath.mpf, right: mpmath.mpf) -> bool:
    if mpmath.isinf(left) or mpmath.isinf(right):
        return True
    return abs(left - right) > mpmath.mpf("1e-6") * max(1, abs(left), abs(right))


def hall_signature(p: Union[PiecewisePdf, Callable], breakpoints: Optional[Sequence[Fraction]] = None) -> HallSignature:
    """Nonsmooth breakpoints of p and those where p fails to look like a Hall sum."""
    if isinstance(p, PiecewisePdf):
        f, breakpoints = p.pdf, p.breakpoints
    else:
        f = p
    derivatives = {}
    nonsmooth = []
    for tau in breakpoints:
        tau = Fraction(tau)
        left, right = one_sided_derivatives(f, tau)
        derivatives[tau] = (left, right)
        if _is_nonsmooth(left, right):
            nonsmooth.append(tau)
    members = set(nonsmooth)
    witnesses = tuple(t for t in nonsmooth if t / 4 not in members and 4 * t not in members)
    return HallSignature(tuple(nonsmooth), not witnesses, witnesses, derivatives)


# ── Ten-tile closed form ──────────────────────────────────────────────────────

def ten_tile_reference(t) -> mpmath.mpf:
    """Closed-form gap density of the ten-tile surface, piece by piece in the ln/artanh basis."""
    with mpmath.workdps(config.PRECISION_DPS):
        t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        if t < 1:
            return mpmath.mpf(0)
        ln = mpmath.log
        l2, l3 = ln(2), ln(3)

        def th(u):
            return mpmath.atanh(mpmath.sqrt(1 - 1 / u))

        if t < 2:
            g = 4 * ln(t)
        elif t < 3:
            g = 12 * ln(t) - 8 * l2
        elif t < 4:
            g = 15 * ln(t) - 8 * l2 - 3 * l3
        elif t < mpmath.mpf(16) / 3:
            g = 16 * ln(t) - 10 * l2 - 3 * l3 - 8 * th(t / 4)
        elif t < 6:
            g = 16 * ln(t) - 10 * l2 - 3 * l3 - 8 * th(t / 4) - 4 * th(3 * t / 16)
        elif t < 8:
            g = 12 * ln(t) - 8 * l2 + l3 - 8 * th(t / 4) - 4 * th(t / 6)
        elif t < 9:
            g = 10 * ln(t) - 2 * l2 - l3 - 8 * th(t / 4) - 12 * th(t / 8)
        elif t < mpmath.mpf(32) / 3:
            g = 10 * ln(t) - 4 * l2 - l3 - 8 * th(t / 4) - 8 * th(t / 8)
        elif t < 12:
            g = 10 * ln(t) - 4 * l2 - l3 - 8 * th(t / 4) - 8 * th(t / 8) - 4 * th(3 * t / 32)
        elif t < 16:
            g = 9 * ln(t) - 4 * l2 - 8 * th(t / 4) - 8 * th(t / 8) - 4 * th(t / 12)
        else:
            g = 9 * ln(t) - 4 * l2 - l3 - 8 * th(t / 4) - 8 * th(t / 8) - 2 * th(t / 12)
        return +(8 * g / (33 * t * t))


# ── Integral checks ───────────────────────────────────────────────────────────

def pdf_integral(p: PiecewisePdf) -> float:
    """∫₀^∞ pdf by quadrature between consecutive breakpoints plus the tail."""
    f = lambda t: float(p.pdf(t))  # noqa: E731
    cuts = [0.0] + [float(t) for t in p.breakpoints]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        total += integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    total += integrate.quad(f, cuts[-1], np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
    return total


# ── Suite ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CheckResult:
    check: str
    status: str
    metric: float
    threshold: Optional[float]

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status, "metric": self.metric, "threshold": self.threshold}


@dataclass
class SuiteContext:
    analysis: Analysis
    seed: int = 0
    samples: int = 200
    bound: Optional[int] = None


def _verdict(name: str, metric: float, threshold: float) -> CheckResult:
    return CheckResult(name, "pass" if metric <= threshold else "fail", float(metric), threshold)


def _check_relations(ctx: SuiteContext) -> CheckResult:
    o = ctx.analysis.origami
    broken = sum(not is_isomorphic(act_word(o, w), o) for w in ("SSSS", "ST" * 6))
    return _verdict("relations", broken, 0)


def _check_cone_angles(ctx: SuiteContext) -> CheckResult:
    o = ctx.analysis.origami
    return _verdict("cone-angles", abs(sum(v.angle_turns for v in vertices(o)) - o.n), 0)


def _check_reduced(ctx: SuiteContext) -> CheckResult:
    return _verdict("reduced", 0 if holonomy_lattice_is_standard(ctx.analysis.origami) else 1, 0)


def _check_index(ctx: SuiteContext) -> CheckResult:
    widths = sum(c.width for c in ctx.analysis.cusps)
    return _verdict("index", abs(widths - ctx.analysis.index), 0)


def _check_parabolics(ctx: SuiteContext) -> CheckResult:
    o = ctx.analysis.origami
    bad = 0
    for cusp, matrix in zip(ctx.analysis.cusps, parabolic_generators(ctx.analysis.cusps)):
        trace = int(matrix[0, 0] + matrix[1, 1])
        det = int(round(np.linalg.det(matrix)))
        if abs(trace) != 2 or det != 1 or not is_isomorphic(act_word(o, cusp.parabolic_word), o):
            bad += 1
    return _verdict("parabolics", bad, 0)


def _check_tiling(ctx: SuiteContext) -> CheckResult:
    gap = sum(
        abs(sum((r.area for r in c.regions), Fraction(0)) - c.component.area) for c in ctx.analysis.components
    )
    return _verdict("tiling", float(gap), 0)


def _check_brute_winner(ctx: SuiteContext) -> CheckResult:
    mismatches = 0
    for i, comp in enumerate(ctx.analysis.components):
        mismatches += len(brute_mismatches(comp.component, comp.regions, ctx.samples, ctx.seed + i))
    return _verdict("brute-winner", mismatches, 0)


def _check_covolume(ctx: SuiteContext) -> CheckResult:
    expected = covolume_reference(ctx.analysis.index)
    return _verdict("covolume", abs(covolume(ctx.analysis.components) - expected) / expected, 1e-8)


def _check_normalization(ctx: SuiteContext) -> CheckResult:
    return _verdict("normalization", abs(pdf_integral(ctx.analysis.pdf) - 1), 1e-8)


def _check_hall_signature(ctx: SuiteContext) -> CheckResult:
    signature = hall_signature(ctx.analysis.pdf)
    return CheckResult("hall-signature", "info", float(len(signature.witnesses)), None)


def _check_ks(ctx: SuiteContext) -> CheckResult:
    if ctx.bound is None:
        return CheckResult("ks", "skipped", float("nan"), config.KS_THRESHOLD)
    sample = gaps_for(ctx.analysis.origami, ctx.bound)
    return _verdict("ks", ks_distance(sample, ctx.analysis.pdf), config.KS_THRESHOLD)


CHECKS: Dict[str, Callable[[SuiteContext], CheckResult]] = {
    "relations": _check_relations,
    "cone-angles": _check_cone_angles,
    "reduced": _check_reduced,
    "index": _check_index,
    "parabolics": _check_parabolics,
    "tiling": _check_tiling,
    "brute-winner": _check_brute_winner,
    "covolume": _check_covolume,
    "normalization": _check_normalization,
    "hall-signature": _check_hall_signature,
    "ks": _check_ks,
}


def run_check(name: str, ctx: SuiteContext) -> CheckResult:
    """Route a named check; failures inside a check become an 'error' row."""
    check = CHECKS.get(name)
    if check is None:
        raise KeyError(f"unknown check {name!r}")
    try:
        return check(ctx)
    except Exception as exc:
        logger.exception("Check '%s' raised: %s", name, exc)
        return CheckResult(name, "error", float("nan"), None)


def run_suite(ctx: SuiteContext, names: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """Run the named checks (all by default) in registry order."""
    return [run_check(name, ctx) for name in (names or list(CHECKS))]
