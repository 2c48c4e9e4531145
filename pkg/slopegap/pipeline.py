"""
pipeline.py — Runs the whole computation for one origami.

orbit graph -> cusps -> section components -> winner regions -> density
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

from slopegap.distribution import PiecewisePdf, total_pdf
from slopegap.errors import UnsupportedSurface
from slopegap.orbit import CuspDatum, OrbitGraph, contains_minus_identity, cusp_data, orbit_graph
from slopegap.origami import Origami, canonical_form, format_origami
from slopegap.transversal import ComponentAnalysis, analyze_component

logger = logging.getLogger(__name__)


@dataclass
class Analysis:
    origami: Origami
    graph: OrbitGraph
    cusps: List[CuspDatum]
    components: List[ComponentAnalysis]
    pdf: PiecewisePdf

    @property
    def index(self) -> int:
        return self.graph.index


def analyze(o: Origami, orbit_cap: Optional[int] = None) -> Analysis:
    """Orbit, cusps, winner partitions and density of one surface."""
    if not contains_minus_identity(o):
        raise UnsupportedSurface(f"Veech group of {format_origami(o)} does not contain -I")
    graph = orbit_graph(o, orbit_cap)
    cusps = cusp_data(graph)
    components = [analyze_component(c) for c in cusps]
    pdf = total_pdf(components)
    logger.info(
        "Analysis of %s: index %d, %d cusps, %d regions",
        format_origami(o), graph.index, len(cusps), sum(len(c.regions) for c in components),
    )
    return Analysis(canonical_form(o), graph, cusps, components, pdf)
