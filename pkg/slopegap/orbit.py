"""
orbit.py — SL(2,Z)-orbit graph of an origami and its cusp structure.

Vertices are canonical forms in BFS discovery order (index 0 is the input
surface). Every vertex has exactly one outgoing S edge and one T edge; the
T edges split the vertex set into cycles, one per cusp of the Veech group,
and a cycle's length is that cusp's width.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from slopegap import config
from slopegap.errors import OrbitTooLarge
from slopegap.origami import (
    Origami,
    act_S,
    act_T,
    act_word,
    canonical_form,
    format_origami,
    format_word,
    horizontal_scaling,
    invert_word,
    is_isomorphic,
    reflect,
    word_matrix,
)

logger = logging.getLogger(__name__)


# ── Types ─────────────────────────────────────────────────────────────────────

@dataclass
class OrbitGraph:
    vertices: List[Origami]
    s_edges: List[int]
    t_edges: List[int]
    parent: List[Optional[Tuple[int, str]]]
    graph: nx.MultiDiGraph = field(repr=False)
    base: int = 0

    @property
    def index(self) -> int:
        return len(self.vertices)

    def path_to(self, v: int) -> str:
        """Edge labels e1..ek of the BFS-tree path from the base to v."""
        letters = []
        while self.parent[v] is not None:
            v, letter = self.parent[v]
            letters.append(letter)
        return "".join(reversed(letters))

    def word_to(self, v: int) -> str:
        """Word w with vertex v ≅ act_word(base, w)."""
        return self.path_to(v)[::-1]

    def t_cycles(self) -> List[List[int]]:
        """T-cycles, each listed from its smallest index along T edges."""
        t_graph = nx.DiGraph()
        t_graph.add_nodes_from(range(self.index))
        t_graph.add_edges_from(enumerate(self.t_edges))
        cycles = []
        for component in sorted(nx.weakly_connected_components(t_graph), key=min):
            start = min(component)
            cycle = [start]
            nxt = self.t_edges[start]
            while nxt != start:
                cycle.append(nxt)
                nxt = self.t_edges[nxt]
            cycles.append(cycle)
        return cycles

    def to_dot(self) -> str:
        lines = ["digraph orbit {"]
        for i, v in enumerate(self.vertices):
            lines.append(f'  {i} [label="{format_origami(v)}"];')
        for i, j, label in self.graph.edges(data="label"):
            lines.append(f'  {i} -> {j} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CuspDatum:
    word: str
    width: int
    cusp_relative: Origami
    scaling_d: Fraction
    vertex: int

    @property
    def parabolic_word(self) -> str:
        return self.word + "T" * self.width + invert_word(self.word)

    def to_json(self) -> dict:
        return {
            "word": format_word(self.word),
            "width": self.width,
            "scaling_d": str(self.scaling_d),
            "cusp_relative": format_origami(self.cusp_relative),
        }


# ── Orbit construction ────────────────────────────────────────────────────────

def orbit_graph(o: Origami, cap: Optional[int] = None) -> OrbitGraph:
    """BFS closure of ``o`` under S and T, deduplicated by canonical form."""
    cap = config.ORBIT_CAP if cap is None else cap
    base = canonical_form(o)
    vertices = [base]
    position = {base: 0}
    parent: List[Optional[Tuple[int, str]]] = [None]
    s_edges: List[int] = []
    t_edges: List[int] = []

    i = 0
    while i < len(vertices):
        for letter, action, targets in (("S", act_S, s_edges), ("T", act_T, t_edges)):
            image = canonical_form(action(vertices[i]))
            j = position.get(image)
            if j is None:
                if len(vertices) >= cap:
                    raise OrbitTooLarge(f"orbit of {format_origami(o)} exceeds {cap} surfaces")
                j = len(vertices)
                position[image] = j
                vertices.append(image)
                parent.append((i, letter))
            targets.append(j)
        i += 1

    graph = nx.MultiDiGraph()
    for k, v in enumerate(vertices):
        graph.add_node(k, origami=format_origami(v))
    for k in range(len(vertices)):
        graph.add_edge(k, s_edges[k], key="S", label="S")
        graph.add_edge(k, t_edges[k], key="T", label="T")

    logger.info("Orbit of %s has %d surfaces", format_origami(o), len(vertices))
    return OrbitGraph(vertices, s_edges, t_edges, parent, graph)


def veech_index(o: Origami, cap: Optional[int] = None) -> int:
    """Index of the Veech group in PSL(2,Z)."""
    return orbit_graph(o, cap).index


# ── Cusps ─────────────────────────────────────────────────────────────────────

def _cycle_representative(g: OrbitGraph, cycle: List[int]) -> int:
    # Prefer the surface that is its own mirror image.
    for v in sorted(cycle):
        if is_isomorphic(reflect(g.vertices[v]), g.vertices[v]):
            return v
    return min(cycle)


def cusp_data(g: OrbitGraph) -> List[CuspDatum]:
    """One CuspDatum per T-cycle; word C satisfies cusp_relative ≅ C⁻¹·base."""
    cusps = []
    for cycle in g.t_cycles():
        rep = _cycle_representative(g, cycle)
        relative = g.vertices[rep]
        word = invert_word(g.word_to(rep))
        cusps.append(CuspDatum(word, len(cycle), relative, horizontal_scaling(relative), rep))
        logger.debug("Cusp %s of width %d at vertex %d", format_word(word), len(cycle), rep)
    logger.info("Found %d cusps (widths %s)", len(cusps), [c.width for c in cusps])
    return cusps


def contains_minus_identity(o: Origami) -> bool:
    """Whether -I stabilizes o, i.e. the surface is isomorphic to its half-turn."""
    return is_isomorphic(act_word(o, "SS"), o)


def parabolic_generators(cusps: List[CuspDatum]) -> List[np.ndarray]:
    """Pᵢ = Cᵢ T^αᵢ Cᵢ⁻¹ as integer matrices."""
    return [word_matrix(c.parabolic_word) for c in cusps]


def cusp_matrices(cusps: List[CuspDatum]) -> List[np.ndarray]:
    """The conjugators Cᵢ of each cusp, as integer matrices."""
    return [word_matrix(c.word) for c in cusps]
