from fractions import Fraction

import numpy as np
import pytest

from slopegap import fixtures
from slopegap.errors import OrbitTooLarge
from slopegap.orbit import (
    contains_minus_identity,
    cusp_data,
    cusp_matrices,
    orbit_graph,
    parabolic_generators,
    veech_index,
)
from slopegap.origami import act_S, act_T, act_word, canonical_form, invert_word, is_isomorphic


@pytest.mark.parametrize(
    "name, index, widths",
    [
        ("torus", 1, [1]),
        ("three-tile", 3, [1, 2]),
        ("four-tile", 6, [2, 2, 2]),
        ("ten-tile", 12, [1, 1, 5, 5]),
    ],
)
def test_orbit_sizes_and_cusp_widths(name, index, widths):
    graph = orbit_graph(fixtures.NAMED[name]())
    assert graph.index == index
    assert sorted(c.width for c in cusp_data(graph)) == widths


def test_edges_follow_the_action(ten_tile):
    graph = orbit_graph(ten_tile)
    for i, v in enumerate(graph.vertices):
        assert graph.vertices[graph.s_edges[i]] == canonical_form(act_S(v))
        assert graph.vertices[graph.t_edges[i]] == canonical_form(act_T(v))
    assert graph.graph.number_of_edges() == 2 * graph.index


def test_tree_words_reach_their_vertex(ten_tile):
    graph = orbit_graph(ten_tile)
    base = graph.vertices[0]
    assert graph.word_to(0) == ""
    for v in range(graph.index):
        assert is_isomorphic(act_word(base, graph.word_to(v)), graph.vertices[v])


def test_t_cycles_partition_the_orbit(four_tile):
    graph = orbit_graph(four_tile)
    cycles = graph.t_cycles()
    assert sorted(v for c in cycles for v in c) == list(range(graph.index))
    for cycle in cycles:
        assert cycle[0] == min(cycle)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            assert graph.t_edges[a] == b


def test_orbit_cap(ten_tile):
    with pytest.raises(OrbitTooLarge):
        orbit_graph(ten_tile, cap=2)
    assert veech_index(ten_tile, cap=12) == 12


def test_three_tile_dot_output(three_tile):
    dot = orbit_graph(three_tile).to_dot()
    assert dot.startswith("digraph orbit {\n")
    assert dot.endswith("}\n")
    assert dot.count("->") == 6
    assert dot.count('[label="S"]') == 3
    assert dot.count('[label="(') == 3


@pytest.mark.parametrize("name", list(fixtures.NAMED))
def test_cusp_words_and_parabolics(name):
    o = fixtures.NAMED[name]()
    graph = orbit_graph(o)
    base = graph.vertices[0]
    cusps = cusp_data(graph)
    assert contains_minus_identity(o)
    for cusp, matrix in zip(cusps, parabolic_generators(cusps)):
        assert is_isomorphic(act_word(base, invert_word(cusp.word)), cusp.cusp_relative)
        assert is_isomorphic(act_word(base, cusp.parabolic_word), base)
        assert abs(int(np.trace(matrix))) == 2
        assert round(np.linalg.det(matrix)) == 1
    assert len(cusp_matrices(cusps)) == len(cusps)


def test_torus_cusp(torus):
    (cusp,) = cusp_data(orbit_graph(torus))
    assert cusp.word == ""
    assert cusp.to_json() == {"word": "I", "width": 1, "scaling_d": "1", "cusp_relative": "(1)|(1)"}


def test_ten_tile_cusp_scalings(ten_tile):
    cusps = cusp_data(orbit_graph(ten_tile))
    assert sorted(c.scaling_d for c in cusps) == [1, 1, 1, 2]
    by_width = {(c.width, c.scaling_d) for c in cusps}
    assert by_width == {(5, Fraction(2)), (5, Fraction(1)), (1, Fraction(1))}
