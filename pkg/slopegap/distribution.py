"""
distribution.py — Exact slope gap distribution from winner regions.

For a winner ⟨x, y⟩ the return time on its region is t = y / (a(a·x + b·y)),
so the set {t <= T} is the part of the polygon above the hyperbola
h_T(a) = 1/(a·T) - (x/y)·a. Slicing the polygon at the vertex abscissas and
at the hyperbola/edge crossings, each slice is either above the hyperbola
(no area yet), crossed by it, or entirely swept. The swept area has a
closed form per slice and its time derivative is ln(a_hi/a_lo)/T² summed
over crossed slices.

Between consecutive candidate breakpoints (vertex times and tangency times)
the slice combinatorics do not change, so each piece freezes them and only
re-solves the crossing quadratics at evaluation time. Evaluation runs in
mpmath at PRECISION_DPS digits.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from scipy import integrate

from slopegap import config
from slopegap.geometry import segments
from slopegap.origami import HolonomyVector
from slopegap.transversal import ComponentAnalysis, WinnerRegion

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction, mpmath.mpf]

# Descriptor of a slice endpoint: ("v", abscissa) or ("r", edge index, branch)
Descriptor = Tuple


def _mp(value: Real) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


# ── Region geometry ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Edge:
    m: Fraction
    c: Fraction
    a_lo: Fraction
    a_hi: Fraction
    upper: bool


@dataclass(frozen=True)
class _Slice:
    lo: Descriptor
    hi: Descriptor
    kind: str  # "above", "crossed" or "swept"
    upper: int
    lower: int


class _RegionGeometry:
    """Non-vertical edges of a region split into upper and lower chains."""

    def __init__(self, region: WinnerRegion):
        self.region = region
        self.winner: HolonomyVector = region.winner
        self.k = region.winner.ratio
        self.edges: List[_Edge] = []
        for (a0, b0), (a1, b1) in segments(region.polygon):
            if a0 == a1:
                continue
            m = (b1 - b0) / (a1 - a0)
            self.edges.append(_Edge(m, b0 - m * a0, min(a0, a1), max(a0, a1), upper=a1 < a0))
        self.abscissas = sorted({a for a, _ in region.polygon})

    def chain_edge(self, a: mpmath.mpf, upper: bool) -> int:
        """Edge of the upper or lower chain over abscissa a; the nearest one when a sits on a seam."""
        best, best_gap = -1, None
        for idx, e in enumerate(self.edges):
            if e.upper != upper:
                continue
            lo, hi = _mp(e.a_lo), _mp(e.a_hi)
            if lo <= a <= hi:
                return idx
            gap = min(abs(a - lo), abs(a - hi))
            if best_gap is None or gap < best_gap:
                best, best_gap = idx, gap
        return best

    def line(self, idx: int, a):
        e = self.edges[idx]
        return _mp(e.m) * a + _mp(e.c)

    def roots(self, idx: int, t: mpmath.mpf, clamp: bool = True) -> List[Tuple[int, object]]:
        """Crossings of h_t with the line of edge idx as (branch, abscissa)."""
        e = self.edges[idx]
        quad = e.m + self.k
        if quad == 0:
            return [] if e.c == 0 else [(0, 1 / (t * _mp(e.c)))]
        disc = self.discriminant(idx, t)
        if disc < 0:
            if not clamp or disc < -mpmath.mp.eps * 2 ** 20:
                return []
            disc = mpmath.mpf(0)
        return [(b, self._root(idx, b, disc)) for b in (1, -1)]

    def discriminant(self, idx: int, t):
        """Discriminant of (m + k)·a² + c·a - 1/t = 0 for edge idx."""
        e = self.edges[idx]
        c = _mp(e.c)
        return c * c + 4 * _mp(e.m + self.k) / t

    def _root(self, idx: int, branch: int, disc):
        e = self.edges[idx]
        return (-_mp(e.c) + branch * mpmath.sqrt(disc)) / (2 * _mp(e.m + self.k))

    def root_value(self, idx: int, branch: int, t, clamp: bool = True):
        e = self.edges[idx]
        if branch == 0:
            return 1 / (t * _mp(e.c))
        disc = self.discriminant(idx, t)
        if clamp and -mpmath.mp.eps * 2 ** 20 < disc < 0:
            disc = mpmath.mpf(0)
        return self._root(idx, branch, disc)

    def value(self, desc: Descriptor, t, clamp: bool = True):
        if desc[0] == "v":
            return _mp(desc[1])
        return self.root_value(desc[1], desc[2], t, clamp)

    # ── slicing ──

    def structure(self, t: mpmath.mpf) -> Tuple[_Slice, ...]:
        """Split the region at vertices and hyperbola crossings, and classify each slice at time t."""
        crit = [(_mp(a), ("v", a)) for a in self.abscissas]
        for idx, e in enumerate(self.edges):
            for branch, r in self.roots(idx, t):
                if _mp(e.a_lo) < r < _mp(e.a_hi):
                    crit.append((r, ("r", idx, branch)))
        crit.sort(key=lambda item: item[0])
        tiny = mpmath.mp.eps * 2 ** 20
        out = []
        for (lo, d_lo), (hi, d_hi) in zip(crit, crit[1:]):
            if hi - lo <= tiny * max(1, abs(hi)):
                continue
            mid = (lo + hi) / 2
            ui, li = self.chain_edge(mid, True), self.chain_edge(mid, False)
            h = 1 / (mid * t) - _mp(self.k) * mid
            if h >= self.line(ui, mid):
                kind = "above"
            elif h > self.line(li, mid):
                kind = "crossed"
            else:
                kind = "swept"
            out.append(_Slice(d_lo, d_hi, kind, ui, li))
        return tuple(out)

    def rate(self, slices: Sequence[_Slice], t, clamp: bool = True):
        """dA/dt for this region."""
        total = mpmath.mpf(0)
        for s in slices:
            if s.kind == "crossed":
                total += mpmath.log(self.value(s.hi, t, clamp) / self.value(s.lo, t, clamp))
        return total / (t * t)

    def swept_area(self, slices: Sequence[_Slice], t, clamp: bool = True):
        """Area of the region lying above the hyperbola at time t, summed slice by slice."""
        total = mpmath.mpf(0)
        k = _mp(self.k)
        for s in slices:
            if s.kind == "above":
                continue
            lo, hi = self.value(s.lo, t, clamp), self.value(s.hi, t, clamp)
            up = self.edges[s.upper]
            if s.kind == "crossed":
                total += (_mp(up.m) + k) * (hi * hi - lo * lo) / 2 + _mp(up.c) * (hi - lo)
                total -= mpmath.log(hi / lo) / t
            else:
                low = self.edges[s.lower]
                total += _mp(up.m - low.m) * (hi * hi - lo * lo) / 2 + _mp(up.c - low.c) * (hi - lo)
        return total


# ── Breakpoints and per-region evaluation ─────────────────────────────────────

def region_breakpoints(r: WinnerRegion) -> List[Fraction]:
    """Vertex times and tangency times of the sweeping hyperbola."""
    x, y = r.winner.as_pair()
    k = x / y
    times = set()
    for a, b in r.polygon:
        s = a * (a * x + b * y)
        if s > 0:
            times.add(y / s)
    for e in _RegionGeometry(r).edges:
        quad = e.m + k
        if quad < 0 and e.c != 0:
            touch = -e.c / (2 * quad)
            if e.a_lo < touch < e.a_hi:
                times.add(-4 * quad / e.c ** 2)
    return sorted(times)


def region_pdf_eval(r: WinnerRegion, t: Real) -> mpmath.mpf:
    """Time derivative of the swept area of one region (unnormalized)."""
    with mpmath.workdps(config.PRECISION_DPS):
        tm = _mp(t)
        if tm <= 0:
            return mpmath.mpf(0)
        geom = _RegionGeometry(r)
        return +geom.rate(geom.structure(tm), tm)


def region_swept_area(r: WinnerRegion, t: Real) -> mpmath.mpf:
    """Area of the region already swept by the hyperbola at time t (unnormalized)."""
    with mpmath.workdps(config.PRECISION_DPS):
        tm = _mp(t)
        if tm <= 0:
            return mpmath.mpf(0)
        geom = _RegionGeometry(r)
        return +geom.swept_area(geom.structure(tm), tm)


# ── Piecewise density ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Piece:
    t_lo: Fraction
    t_hi: Optional[Fraction]
    slices: Tuple[Tuple[_Slice, ...], ...]


class PiecewisePdf:
    """Normalized gap density with frozen piece combinatorics."""

    def __init__(self, regions: Sequence[WinnerRegion], total_area: Fraction, dps: Optional[int] = None):
        self.dps = dps or config.PRECISION_DPS
        self.total_area = Fraction(total_area)
        self._geoms = [_RegionGeometry(r) for r in regions]
        self.raw_breakpoints = sorted({t for r in regions for t in region_breakpoints(r)})
        with mpmath.workdps(self.dps):
            self._raw_mp = [_mp(t) for t in self.raw_breakpoints]
            self._norm = _mp(self.total_area)
            self.pieces = self._freeze()
            self.breakpoints = self._prune()
        logger.info(
            "Density has %d breakpoints (%d candidates)", len(self.breakpoints), len(self.raw_breakpoints)
        )

    @property
    def regions(self) -> List[WinnerRegion]:
        """Every winner region behind this density."""
        return [g.region for g in self._geoms]

    def _freeze(self) -> List[Piece]:
        bounds = [Fraction(0)] + self.raw_breakpoints
        pieces = []
        for i, lo in enumerate(bounds):
            hi = bounds[i + 1] if i + 1 < len(bounds) else None
            if hi is not None:
                mid = (lo + hi) / 2
            else:
                mid = 2 * lo if lo > 0 else Fraction(1)
            tm = _mp(mid)
            pieces.append(Piece(lo, hi, tuple(g.structure(tm) for g in self._geoms)))
        return pieces

    def _piece_rate(self, i: int, tm, clamp: bool = True):
        total = mpmath.mpf(0)
        for geom, slices in zip(self._geoms, self.pieces[i].slices):
            total += geom.rate(slices, tm, clamp)
        return total / self._norm

    def _piece_area(self, i: int, tm):
        total = mpmath.mpf(0)
        for geom, slices in zip(self._geoms, self.pieces[i].slices):
            total += geom.swept_area(slices, tm)
        return total / self._norm

    def _same_formula(self, i: int) -> bool:
        """Do pieces i-1 and i continue each other analytically across their shared end?"""
        tau = self.raw_breakpoints[i - 1]
        gaps = [tau - self.pieces[i - 1].t_lo]
        if self.pieces[i].t_hi is not None:
            gaps.append(self.pieces[i].t_hi - tau)
        step = _mp(min(gaps)) / 1000
        tolerance = mpmath.mpf(10) ** (10 - self.dps)
        for tm in (_mp(tau) - step, _mp(tau) + step):
            left = self._piece_rate(i - 1, tm, clamp=False)
            right = self._piece_rate(i, tm, clamp=False)
            if isinstance(left, mpmath.mpc) or isinstance(right, mpmath.mpc):
                return False
            if abs(left - right) > tolerance * max(1, abs(right)):
                return False
        return True

    def _prune(self) -> List[Fraction]:
        return [tau for i, tau in enumerate(self.raw_breakpoints, start=1) if not self._same_formula(i)]

    def piece_index(self, tm) -> int:
        """Index of the piece whose half-open interval holds tm."""
        return bisect_right(self._raw_mp, tm)

    def evaluate_piece(self, i: int, t: Real) -> mpmath.mpf:
        """Formula of piece i at t, also outside the piece (one-sided limits)."""
        with mpmath.workdps(self.dps):
            return +self._piece_rate(i, _mp(t))

    def pdf(self, t: Real) -> mpmath.mpf:
        """Normalized gap density at t."""
        with mpmath.workdps(self.dps):
            tm = _mp(t)
            if tm <= 0:
                return mpmath.mpf(0)
            return +self._piece_rate(self.piece_index(tm), tm)

    __call__ = pdf

    def cdf(self, t: Real) -> mpmath.mpf:
        """Probability that a renormalized gap is at most t."""
        with mpmath.workdps(self.dps):
            tm = _mp(t)
            if tm <= 0:
                return mpmath.mpf(0)
            return +self._piece_area(self.piece_index(tm), tm)

    def pdf_values(self, ts: Iterable[Real]) -> np.ndarray:
        """Density at each t of an array, as floats."""
        return np.array([float(self.pdf(t)) for t in ts])

    def cdf_values(self, ts: Iterable[Real]) -> np.ndarray:
        """CDF at each t of an array, as floats."""
        return np.array([float(self.cdf(t)) for t in ts])

    def pieces_metadata(self) -> List[dict]:
        """Interval bounds and active-region formulas for every piece, JSON-ready."""
        out = []
        for piece in self.pieces:
            active = []
            for geom, slices in zip(self._geoms, piece.slices):
                used = [s for s in slices if s.kind != "above"]
                if not used:
                    continue
                active.append({
                    "winner": geom.winner.to_json(),
                    "slices": [
                        {
                            "kind": s.kind,
                            "lo": _describe(s.lo),
                            "hi": _describe(s.hi),
                            "upper_edge": s.upper,
                            "lower_edge": s.lower,
                        }
                        for s in used
                    ],
                })
            out.append({
                "t_lo": str(piece.t_lo),
                "t_hi": None if piece.t_hi is None else str(piece.t_hi),
                "regions": active,
            })
        return out


def _describe(desc: Descriptor) -> str:
    if desc[0] == "v":
        return f"a={desc[1]}"
    branch = {1: "+", -1: "-", 0: "lin"}[desc[2]]
    return f"edge{desc[1]}{branch}"


def total_pdf(components: Sequence[ComponentAnalysis]) -> PiecewisePdf:
    """Sum the region densities of all components and normalize by the total triangle area."""
    regions = [r for comp in components for r in comp.regions]
    total_area = sum((comp.component.area for comp in components), Fraction(0))
    return PiecewisePdf(regions, total_area)


def cdf(p: PiecewisePdf, t: Real) -> mpmath.mpf:
    """Module-level alias for p.cdf(t)."""
    return p.cdf(t)


def sample_table(p: PiecewisePdf, samples: int, tmax: Real) -> List[Tuple[Fraction, mpmath.mpf, mpmath.mpf]]:
    """Rows (t, pdf, cdf) at t = tmax·i/samples, i = 1..samples."""
    tmax = Fraction(tmax)
    rows = []
    for i in range(1, samples + 1):
        t = tmax * i / samples
        rows.append((t, p.pdf(t), p.cdf(t)))
    return rows


# ── Covolume ──────────────────────────────────────────────────────────────────

def region_covolume(r: WinnerRegion) -> Tuple[float, float]:
    """∫∫ y/(a(a·x + b·y)) over the region, with the quadrature error estimate."""
    geom = _RegionGeometry(r)
    x, y = (float(v) for v in r.winner.as_pair())
    upper = [e for e in geom.edges if e.upper]
    lower = [e for e in geom.edges if not e.upper]

    def chain(edges: List[_Edge], a: float) -> float:
        for e in edges:
            if float(e.a_lo) <= a <= float(e.a_hi):
                return float(e.m) * a + float(e.c)
        raise ValueError(f"abscissa {a} outside region")

    def integrand(a: float) -> float:
        top = a * x + chain(upper, a) * y
        bottom = a * x + chain(lower, a) * y
        return float(np.log(top / bottom)) / a

    value, error = 0.0, 0.0
    for lo, hi in zip(geom.abscissas, geom.abscissas[1:]):
        part, err = integrate.quad(integrand, float(lo), float(hi), epsabs=1e-13, epsrel=1e-12, limit=200)
        value += part
        error += err
    return value, error


def covolume(components: Sequence[ComponentAnalysis]) -> float:
    """Sum over all regions of the return-time integral, by quadrature."""
    value, error = 0.0, 0.0
    for comp in components:
        for r in comp.regions:
            part, err = region_covolume(r)
            value += part
            error += err
    if error > 1e-9:
        logger.warning("Covolume quadrature error estimate %.3g exceeds 1e-9", error)
    return value


def covolume_reference(index: int) -> float:
    """index·π²/6."""
    return index * float(mpmath.pi ** 2) / 6


# ── Independent oracle ────────────────────────────────────────────────────────

def swept_area_oracle(r: WinnerRegion, t: float) -> float:
    """Swept area by direct quadrature of max(0, top - max(bottom, h_t))."""
    geom = _RegionGeometry(r)
    x, y = (float(v) for v in r.winner.as_pair())
    k = x / y
    upper = [e for e in geom.edges if e.upper]
    lower = [e for e in geom.edges if not e.upper]

    def chain(edges, a):
        for e in edges:
            if float(e.a_lo) <= a <= float(e.a_hi):
                return float(e.m) * a + float(e.c)
        return float("nan")

    def height(a: float) -> float:
        h = 1.0 / (a * t) - k * a
        top, bottom = chain(upper, a), chain(lower, a)
        return max(0.0, top - max(bottom, h))

    cuts = {float(a) for a in geom.abscissas}
    for e in geom.edges:
        for root in np.roots([float(e.m) + k, float(e.c), -1.0 / t]):
            if abs(root.imag) < 1e-12 and float(e.a_lo) < root.real < float(e.a_hi):
                cuts.add(float(root.real))
    cuts = sorted(cuts)
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        part, _ = integrate.quad(height, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
        total += part
    return total
