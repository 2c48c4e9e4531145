"""
cli.py — Command-line front end.

    slopegap -o ten-tile analyze [--out json|csv]
    slopegap -o torus pdf --samples 2000 --tmax 20 --csv
    slopegap -o ten-tile histogram --bound 2000 --bins 1000 --csv
    slopegap -o four-tile verify --all --seed 7
    slopegap -o three-tile orbit --dot

Exit codes: 0 ok, 1 a verification check failed, 2 unparseable or empty
surface, 3 non-transitive permutations, 4 Veech group without -I,
5 orbit above the cap, 6 any other computation failure, 64 command-line
usage error (unknown option, bad flag value, missing -o).
"""

import functools
import logging
from fractions import Fraction
from typing import Callable, Optional

import click
import numpy as np

from slopegap import config
from slopegap.distribution import sample_table
from slopegap.errors import (
    EmptySurface,
    NonTransitive,
    OrbitTooLarge,
    OrigamiFormatError,
    SlopeGapError,
    UnsupportedSurface,
)
from slopegap.fixtures import NAMED, resolve
from slopegap.orbit import cusp_data, orbit_graph
from slopegap.pipeline import Analysis, analyze
from slopegap.report import build_report, checks_table, decimal, report_csv, to_csv, to_json
from slopegap.verify import CHECKS, SuiteContext, gaps_for, run_suite

logger = logging.getLogger(__name__)

EXIT_CODES = (
    (OrigamiFormatError, 2),
    (EmptySurface, 2),
    (NonTransitive, 3),
    (UnsupportedSurface, 4),
    (OrbitTooLarge, 5),
    (SlopeGapError, 6),
)

# click reports usage errors with 2, which belongs to malformed surfaces here.
USAGE_EXIT_CODE = 64

# Checks that need a sampling run; `verify` without --all skips them.
SAMPLED_CHECKS = ("brute-winner", "ks")


def _exit_code(exc: SlopeGapError) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return 6


def handles_errors(command: Callable) -> Callable:
    """Turn library errors into a one-line message and their exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SlopeGapError as exc:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(_exit_code(exc))

    return wrapper


def _fmt(value) -> str:
    return f"{float(value):.15g}"


class State:
    def __init__(self, origami_text: str, orbit_cap: Optional[int]):
        self.origami_text = origami_text
        self.orbit_cap = orbit_cap
        self._analysis: Optional[Analysis] = None

    @property
    def origami(self):
        return resolve(self.origami_text)

    @property
    def analysis(self) -> Analysis:
        if self._analysis is None:
            self._analysis = analyze(self.origami, self.orbit_cap)
        return self._analysis


class SlopeGapGroup(click.Group):
    """Group whose usage errors (its own and its subcommands') exit with USAGE_EXIT_CODE."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as exc:
            exc.exit_code = USAGE_EXIT_CODE
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = USAGE_EXIT_CODE
            raise


pass_state = click.make_pass_decorator(State)


@click.group(cls=SlopeGapGroup)
@click.option(
    "-o", "--origami", "origami_text", required=True,
    help=f"Origami as '(..)(..)|(..)' (right|up, 1-based) or one of: {', '.join(NAMED)}.",
)
@click.option("--orbit-cap", type=click.IntRange(min=1), default=None, help="Largest SL(2,Z)-orbit to build.")
@click.pass_context
def cli(ctx: click.Context, origami_text: str, orbit_cap: Optional[int]) -> None:
    """Exact slope gap distributions of square-tiled surfaces."""
    ctx.obj = State(origami_text, orbit_cap)


@cli.command("analyze")
@click.option("--out", "out_format", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@pass_state
@handles_errors
def cmd_analyze(state: State, out_format: str) -> None:
    """Full report: orbit, cusps, winner partitions, breakpoints, covolume."""
    report = build_report(state.analysis)
    click.echo(to_json(report) if out_format == "json" else report_csv(report), nl=False)


@cli.command("pdf")
@click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--tmax", type=click.FloatRange(min=0, min_open=True), default=20.0, show_default=True)
@click.option("--csv", "as_csv", is_flag=True, help="CSV rows t,pdf,cdf instead of JSON.")
@click.option("--breakpoints", "only_breakpoints", is_flag=True, help="Print the breakpoints only.")
@click.option("--pieces", "only_pieces", is_flag=True, help="Print per-piece formula structure as JSON.")
@pass_state
@handles_errors
def cmd_pdf(state: State, samples: int, tmax: float, as_csv: bool, only_breakpoints: bool, only_pieces: bool) -> None:
    """Sample the gap density and its CDF on (0, tmax]."""
    pdf = state.analysis.pdf
    if only_breakpoints:
        click.echo("\n".join(str(t) for t in pdf.breakpoints))
        return
    if only_pieces:
        click.echo(to_json(pdf.pieces_metadata()), nl=False)
        return
    rows = sample_table(pdf, samples, Fraction(str(tmax)))
    if as_csv:
        click.echo(to_csv(["t", "pdf", "cdf"], ([_fmt(t), _fmt(f), _fmt(F)] for t, f, F in rows)), nl=False)
    else:
        data = [{"t": decimal(t), "pdf": decimal(f), "cdf": decimal(F)} for t, f, F in rows]
        click.echo(to_json(data), nl=False)


@cli.command("histogram")
@click.option("--bound", type=click.IntRange(min=2), default=500, show_default=True, help="Holonomy box size R.")
@click.option("--bins", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--tmax", type=click.FloatRange(min=0, min_open=True), default=10.0, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@pass_state
@handles_errors
def cmd_histogram(state: State, bound: int, bins: int, tmax: float, as_csv: bool) -> None:
    """Empirical renormalized gaps next to the exact density at bin centres."""
    sample = gaps_for(state.origami, bound)
    density, edges = np.histogram(sample.gaps, bins=bins, range=(0.0, tmax), density=True)
    pdf = state.analysis.pdf
    centres = (edges[:-1] + edges[1:]) / 2
    model = pdf.pdf_values(centres)
    logger.info("Histogram of %d gaps from %d slopes", len(sample.gaps), sample.slope_count)
    if as_csv:
        rows = ([_fmt(lo), _fmt(hi), _fmt(d), _fmt(m)] for lo, hi, d, m in zip(edges, edges[1:], density, model))
        click.echo(to_csv(["bin_lo", "bin_hi", "density", "pdf"], rows), nl=False)
    else:
        data = {
            "bound": bound,
            "slopes": sample.slope_count,
            "bins": [
                {"lo": decimal(lo), "hi": decimal(hi), "density": decimal(d), "pdf": decimal(m)}
                for lo, hi, d, m in zip(edges, edges[1:], density, model)
            ],
        }
        click.echo(to_json(data), nl=False)


@cli.command("verify")
@click.option("--all", "run_all", is_flag=True, help="Include the sampled checks (brute-force winners, KS).")
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--bound", type=click.IntRange(min=2), default=None, help="Box size for the KS check.")
@click.option("--seed", type=int, default=config.SEED, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@pass_state
@handles_errors
def cmd_verify(state: State, run_all: bool, samples: int, bound: Optional[int], seed: int, as_csv: bool) -> None:
    """Run the oracle checks; exit 1 if any fails."""
    names = [n for n in CHECKS if run_all or n not in SAMPLED_CHECKS]
    ctx = SuiteContext(state.analysis, seed=seed, samples=samples, bound=bound)
    results = run_suite(ctx, names)
    if as_csv:
        click.echo(checks_table(results), nl=False)
    else:
        click.echo(to_json([r.to_json() for r in results]), nl=False)
    failed = [r.check for r in results if r.status in ("fail", "error")]
    if failed:
        logger.warning("Failed checks: %s", ", ".join(failed))
        raise SystemExit(1)


@cli.command("orbit")
@click.option("--dot", "as_dot", is_flag=True, help="Graphviz text of the S/T orbit graph.")
@pass_state
@handles_errors
def cmd_orbit(state: State, as_dot: bool) -> None:
    """SL(2,Z)-orbit graph and cusp data."""
    graph = orbit_graph(state.origami, state.orbit_cap)
    if as_dot:
        click.echo(graph.to_dot(), nl=False)
        return
    data = {"index": graph.index, "cusps": [c.to_json() for c in cusp_data(graph)]}
    click.echo(to_json(data), nl=False)
