from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from slopegap.distribution import (
    covolume,
    covolume_reference,
    region_breakpoints,
    region_pdf_eval,
    region_swept_area,
    sample_table,
    swept_area_oracle,
)
from slopegap.hall import hall_pdf
from slopegap.verify import ten_tile_reference

TEN_TILE_BREAKPOINTS = [F(1), F(2), F(3), F(4), F(16, 3), F(6), F(8), F(9), F(32, 3), F(12), F(16)]


def test_torus_matches_hall(analyses):
    pdf = analyses["torus"].pdf
    assert pdf.breakpoints == [1, 4]
    assert pdf.total_area == F(1, 2)
    for t in np.linspace(0.025, 30, 1000):
        assert abs(pdf(t) - hall_pdf(t)) < 1e-12
    assert abs(pdf.cdf(4) - mpmath.mpf("0.806852")) < 1e-6


def test_three_tile_matches_hall(analyses):
    pdf = analyses["three-tile"].pdf
    assert pdf.breakpoints == [1, 4]
    for t in np.linspace(0.025, 25, 1000):
        assert abs(pdf(t) - hall_pdf(t)) < 1e-12


def test_ten_tile_breakpoints(analyses):
    pdf = analyses["ten-tile"].pdf
    assert pdf.total_area == F(33, 8)
    assert pdf.breakpoints == TEN_TILE_BREAKPOINTS
    assert set(TEN_TILE_BREAKPOINTS) <= set(pdf.raw_breakpoints)
    assert len(pdf.pieces) == len(pdf.raw_breakpoints) + 1


def test_ten_tile_matches_closed_form(analyses):
    pdf = analyses["ten-tile"].pdf
    for t in np.geomspace(1e-3, 100, 1000):
        assert abs(pdf(t) - ten_tile_reference(t)) < 1e-10


def test_ten_tile_left_limit_at_two(analyses):
    pdf = analyses["ten-tile"].pdf
    expected = 8 * mpmath.log(2) / 33
    assert abs(pdf.evaluate_piece(pdf.piece_index(mpmath.mpf("1.5")), 2) - expected) < 1e-14
    assert abs(pdf(F(2) - F(1, 10 ** 12)) - expected) < 1e-10


@pytest.mark.parametrize("name", ["torus", "three-tile", "four-tile", "ten-tile"])
def test_pdf_is_a_nonnegative_density(analyses, name):
    pdf = analyses[name].pdf
    ts = np.linspace(0, 40, 161)
    assert (pdf.pdf_values(ts) >= -1e-15).all()
    cdf = pdf.cdf_values(ts)
    assert cdf[0] == 0
    assert (np.diff(cdf) >= -1e-15).all()
    assert abs(pdf.cdf(10 ** 7) - 1) < 1e-4


@pytest.mark.parametrize("name", ["torus", "three-tile", "four-tile", "ten-tile"])
def test_covolume(analyses, name):
    expected = covolume_reference(analyses[name].index)
    assert abs(covolume(analyses[name].components) - expected) / expected <= 1e-8


def test_covolume_reference():
    assert covolume_reference(12) == pytest.approx(2 * np.pi ** 2)


def test_regions_sum_to_the_density(analyses):
    analysis = analyses["ten-tile"]
    regions = [r for c in analysis.components for r in c.regions]
    for t in (F(3, 2), F(5), F(10), F(20)):
        total = sum(region_pdf_eval(r, t) for r in regions) / mpmath.mpf(33) * 8
        assert abs(total - analysis.pdf(t)) < 1e-14


@pytest.mark.parametrize("t", [1.5, 4.5, 7.0, 11.0, 40.0])
def test_swept_area_against_quadrature(analyses, t):
    for comp in analyses["ten-tile"].components:
        for region in comp.regions:
            exact = float(region_swept_area(region, t))
            assert exact == pytest.approx(swept_area_oracle(region, t), abs=1e-9)


def _smooth_times(region, rng, count):
    """Random t in [0.5, 25] at least 0.1 away from the region's breakpoints."""
    cuts = np.array([float(b) for b in region_breakpoints(region)])
    times = []
    while len(times) < count:
        t = rng.uniform(0.5, 25)
        if cuts.size == 0 or np.abs(cuts - t).min() >= 0.1:
            times.append(t)
    return times


def _assert_rate_matches_quadrature(region, times, h=1e-4):
    for t in times:
        rate = float(region_pdf_eval(region, t))
        slope = (swept_area_oracle(region, t + h) - swept_area_oracle(region, t - h)) / (2 * h)
        assert slope == pytest.approx(rate, rel=1e-5, abs=1e-9), t


@pytest.mark.parametrize("name", ["four-tile", "ten-tile"])
def test_region_density_is_the_rate_of_swept_area(analyses, name):
    rng = np.random.default_rng(5)
    for comp in analyses[name].components:
        for region in comp.regions:
            _assert_rate_matches_quadrature(region, _smooth_times(region, rng, 20))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["torus", "three-tile", "four-tile", "ten-tile"])
def test_region_density_is_the_rate_of_swept_area_everywhere(analyses, name):
    rng = np.random.default_rng(17)
    for comp in analyses[name].components:
        for region in comp.regions:
            _assert_rate_matches_quadrature(region, _smooth_times(region, rng, 100))


def test_swept_area_limits(analyses):
    (comp,) = analyses["torus"].components
    (region,) = comp.regions
    assert region_swept_area(region, F(1, 2)) == 0
    assert abs(region_swept_area(region, 10 ** 9) - region.area) < 1e-6


def test_region_breakpoints_on_torus(analyses):
    (comp,) = analyses["torus"].components
    (region,) = comp.regions
    assert region_breakpoints(region) == [1, 4]


def test_sample_table(analyses):
    rows = sample_table(analyses["torus"].pdf, 4, 2)
    assert [t for t, _, _ in rows] == [F(1, 2), F(1), F(3, 2), F(2)]
    assert rows[0][1] == 0 and rows[0][2] == 0


def test_pieces_metadata(analyses):
    pieces = analyses["torus"].pdf.pieces_metadata()
    assert pieces[0]["t_lo"] == "0"
    assert pieces[0]["regions"] == []
    assert pieces[-1]["t_hi"] is None
    assert {s["kind"] for s in pieces[-1]["regions"][0]["slices"]} <= {"crossed", "swept"}
