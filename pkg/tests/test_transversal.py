from fractions import Fraction as F

import pytest

from slopegap.errors import TilingGap
from slopegap.origami import HolonomyVector as V
from slopegap.transversal import (
    candidate_region,
    certify_strip_empty,
    locate_winner,
    partition_edge,
    search_bounded,
    section_component,
    winner_regions,
)

# (alpha_eff, y0) -> [(b_lo, winner), ...] bottom-up along the edge a = 1
TEN_TILE_TABLES = {
    (F(5, 4), F(2)): [
        (F(-5, 4), V(F(5, 2), 2)),
        (F(-3, 4), V(F(7, 2), 4)),
        (F(-5, 8), V(F(3, 2), 2)),
        (F(-1, 4), V(1, 2)),
    ],
    (F(1), F(2)): [
        (F(-1), V(2, 2)),
        (F(-1, 2), V(2, 3)),
        (F(-1, 3), V(1, 2)),
    ],
    (F(1), F(1)): [
        (F(-1), V(1, 1)),
    ],
    (F(5), F(1)): [
        (F(-5), V(5, 1)),
        (F(-4), V(4, 1)),
        (F(-3), V(6, 2)),
        (F(-5, 2), V(5, 2)),
        (F(-2), V(4, 2)),
        (F(-3, 2), V(5, 3)),
        (F(-4, 3), V(6, 4)),
        (F(-5, 4), V(4, 3)),
        (F(-1), V(1, 1)),
    ],
}

CERTIFIED = {
    (F(5, 4), F(2)): {V(F(5, 2), 2)},
    (F(1), F(2)): {V(2, 2)},
    (F(1), F(1)): {V(1, 1)},
    (F(5), F(1)): {V(5, 1), V(4, 1), V(6, 2), V(5, 2), V(4, 2), V(1, 1)},
}


def test_ten_tile_components(ten_tile_components):
    assert set(ten_tile_components) == set(TEN_TILE_TABLES)
    for comp in ten_tile_components.values():
        assert comp.component.x0 == 1
        assert comp.component.b_top == 0
        assert comp.component.b_bottom == -comp.component.alpha_eff


@pytest.mark.parametrize("key", list(TEN_TILE_TABLES))
def test_ten_tile_winner_tables(ten_tile_components, key):
    partition = ten_tile_components[key].partition
    assert [(i.b_lo, i.winner) for i in partition] == TEN_TILE_TABLES[key]
    assert partition[-1].b_hi == 0
    for lower, upper in zip(partition, partition[1:]):
        assert lower.b_hi == upper.b_lo
        assert lower.winner.ratio > upper.winner.ratio


@pytest.mark.parametrize("key", list(TEN_TILE_TABLES))
def test_unbounded_winners_carry_certificates(ten_tile_components, key):
    for interval in ten_tile_components[key].partition:
        if interval.winner in CERTIFIED[key]:
            assert interval.evidence == "certificate"
            assert interval.certificate.empty
        else:
            assert interval.evidence == "bounded"
            assert interval.certificate is None


def test_region_areas_add_up(ten_tile_components):
    areas = {key: sum((r.area for r in c.regions), F(0)) for key, c in ten_tile_components.items()}
    assert areas == {
        (F(5, 4), F(2)): F(5, 8),
        (F(1), F(2)): F(1, 2),
        (F(1), F(1)): F(1, 2),
        (F(5), F(1)): F(5, 2),
    }
    assert sum(areas.values()) == F(33, 8)


def test_region_polygon_and_lookup(ten_tile_components):
    comp = ten_tile_components[(F(1), F(2))]
    (region,) = [r for r in comp.regions if r.winner == V(2, 3)]
    assert set(region.polygon) == {(F(1, 2), F(0)), (F(1), F(-1, 2)), (F(1), F(-1, 3))}
    assert locate_winner(list(comp.regions), F(5, 6), F(-5, 18)) == V(2, 3)
    assert locate_winner(list(comp.regions), F(2), F(0)) is None


def test_candidate_regions(ten_tile_components):
    comp = ten_tile_components[(F(5, 4), F(2))].component
    unbounded = candidate_region(comp, F(-5, 4), V(F(5, 2), 2))
    assert not unbounded.bounded
    bounded = candidate_region(comp, F(-3, 4), V(F(7, 2), 4))
    assert bounded.bounded
    assert bounded.apex == (F(7), F(8))
    assert search_bounded(comp, bounded) == []
    with pytest.raises(ValueError):
        candidate_region(comp, F(-2), V(1, 1))


def test_strip_certificate(ten_tile_components):
    comp = ten_tile_components[(F(5), F(1))].component
    cert = certify_strip_empty(comp, V(5, 1))
    assert cert.empty
    assert cert.direction == (5, 1)
    assert cert.period >= 1
    assert cert.best() is None


def test_scaled_component_holonomy(ten_tile_components):
    comp = ten_tile_components[(F(5, 4), F(2))].component
    assert comp.scaling_d == 2
    assert comp.holds(F(5, 2), F(2))
    assert not comp.holds(F(1, 3), F(2))


def test_torus_component(analyses):
    (cusp,) = analyses["torus"].cusps
    comp = section_component(cusp)
    assert (comp.x0, comp.y0, comp.alpha_eff) == (1, 1, 1)
    assert comp.triangle == ((0, 1), (1, -1), (1, 0))
    partition = partition_edge(comp)
    assert [(i.b_lo, i.b_hi, i.winner) for i in partition] == [(-1, 0, V(1, 1))]
    (region,) = winner_regions(comp, partition)
    assert region.area == F(1, 2)


def test_missing_interval_is_a_tiling_gap(ten_tile_components):
    comp = ten_tile_components[(F(1), F(2))]
    with pytest.raises(TilingGap):
        winner_regions(comp.component, list(comp.partition[:-1]))


def test_component_export_is_rational_text(ten_tile_components):
    data = ten_tile_components[(F(1), F(1))].to_json()
    assert data["alpha_eff"] == "1"
    assert data["intervals"] == [{"b_lo": "-1", "b_hi": "0", "winner": ["1", "1"]}]
    assert data["regions"][0]["winner"] == ["1", "1"]
