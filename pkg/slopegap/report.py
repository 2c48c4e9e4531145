"""
report.py — Stable JSON/CSV renderings of an analysis.

Rationals are written as "p/q" strings and never decimalized; reals are
rounded to 15 significant digits. Key order is fixed, so output is
byte-stable for a given input.
"""

import csv
import io
import json
import logging
from typing import Iterable, List, Sequence

from slopegap.distribution import covolume
from slopegap.origami import format_origami
from slopegap.pipeline import Analysis
from slopegap.verify import CheckResult, hall_signature

logger = logging.getLogger(__name__)


def decimal(value) -> float:
    """Round a float or mpf to 15 significant digits."""
    return float(f"{float(value):.15g}")


def build_report(analysis: Analysis) -> dict:
    """AnalysisReport dict with a fixed key order."""
    return {
        "origami": format_origami(analysis.origami),
        "index": analysis.index,
        "cusps": [c.to_json() for c in analysis.cusps],
        "components": [c.to_json() for c in analysis.components],
        "breakpoints": [str(t) for t in analysis.pdf.breakpoints],
        "covolume": decimal(covolume(analysis.components)),
        "hall_signature": hall_signature(analysis.pdf).to_json(),
    }


def to_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def report_csv(report: dict) -> str:
    """Flat view: one row per winner interval of every component."""
    rows = []
    for i, comp in enumerate(report["components"]):
        cusp = report["cusps"][i]
        for interval in comp["intervals"]:
            x, y = interval["winner"]
            rows.append([i, cusp["word"], cusp["width"], comp["alpha_eff"], interval["b_lo"], interval["b_hi"], x, y])
    return to_csv(["component", "cusp_word", "width", "alpha_eff", "b_lo", "b_hi", "winner_x", "winner_y"], rows)


def checks_table(results: List[CheckResult]) -> str:
    """One CSV row per check result."""
    rows = [
        [r.check, r.status, f"{r.metric:.15g}", "" if r.threshold is None else f"{r.threshold:.15g}"]
        for r in results
    ]
    return to_csv(["check", "status", "metric", "threshold"], rows)
