"""
GroDiv - Divergence Commands
ball, div, div-table, gersten and morse: thin wrappers over the cayley and
divergence packages with deterministic output.
"""

from pathlib import Path
from typing import Optional, Tuple

import click
import numpy as np
import pandas as pd
from loguru import logger

from ..cayley import PathStatus, geodesic_word, grow_ball
from ..divergence import (
    DivQuery,
    DivStatus,
    TableMode,
    div_point,
    gersten_div_table,
    gersten_pair,
    growth_report,
    midpoint_div_table,
    morse_probe,
    morse_series,
    revalidate_table,
    small_div_table,
)
from ..errors import UsageError
from ..groups import FinitelyGeneratedGroup, Word, get_group
from .context import CliState, document, write_csv, write_document

EXIT_VERIFICATION = 1
EXIT_BUDGET = 3
WORD_SEARCH_RADIUS = 8

out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                           help="Output file (stdout when omitted); a CSV file gets its run config "
                                "in a sibling .meta.json.")
budget_option = click.option("--budget", type=click.IntRange(min=1), default=None,
                             help="Node budget (overrides config and GRODIV_BUDGET).")
factor_option = click.option("--search-factor", type=click.FloatRange(min=0, min_open=True), default=None,
                             help="Search radius as a multiple of dist(a, b).")


def _element_or_identity(group: FinitelyGeneratedGroup, text: Optional[str]):
    return group.identity if text is None else group.parse_element(text)


def _word_for(group: FinitelyGeneratedGroup, text: str, node_budget: int) -> Word:
    """A generator word ('g:' literal) or a geodesic word for an element literal."""
    if text.startswith("g:"):
        return group.parse_word(text)
    g = group.parse_element(text)
    ball = grow_ball(group, group.identity, WORD_SEARCH_RADIUS, node_budget)
    if g not in ball:
        raise UsageError(f"{text} is not within distance {WORD_SEARCH_RADIUS}; pass it as a 'g:' word")
    return geodesic_word(ball, g)


@click.command("ball")
@click.argument("group_spec")
@click.option("--radius", type=click.IntRange(min=0), required=True)
@budget_option
@out_option
@click.pass_obj
def ball_command(state: CliState, group_spec: str, radius: int, budget: Optional[int], out: Optional[Path]):
    """Sphere sizes of the identity ball as CSV."""
    group = get_group(group_spec)
    node_budget = state.node_budget(budget)
    run = state.run_config("ball", group_spec, {"radius": radius}, node_budget=node_budget, outputs=[out])
    ball = grow_ball(group, group.identity, radius, node_budget, state.show_progress)
    sizes = ball.sphere_sizes
    df = pd.DataFrame({"r": range(len(sizes)), "sphere_size": sizes, "ball_size": np.cumsum(sizes)})
    write_csv(df, out, run)


@click.command("div")
@click.argument("group_spec")
@click.option("--a", "a_text", required=True, help="Element literal of a.")
@click.option("--b", "b_text", required=True, help="Element literal of b.")
@click.option("--c", "c_text", default=None, help="Element literal of c (identity when omitted).")
@click.option("--delta", type=float, default=None)
@click.option("--gamma", type=float, default=None)
@click.option("--step-radius", type=click.IntRange(min=1), default=None)
@factor_option
@budget_option
@out_option
@click.pass_obj
def div_command(state: CliState, group_spec: str, a_text: str, b_text: str, c_text: Optional[str],
                delta: Optional[float], gamma: Optional[float], step_radius: Optional[int],
                search_factor: Optional[float], budget: Optional[int], out: Optional[Path]):
    """Pointwise divergence div(a, b, c; delta, gamma)."""
    group = get_group(group_spec)
    defaults = state.defaults.divergence
    query = DivQuery(
        a=group.parse_element(a_text),
        b=group.parse_element(b_text),
        c=_element_or_identity(group, c_text),
        delta=state.value("delta", delta, defaults.delta),
        gamma=state.value("gamma", gamma, defaults.gamma),
        search_radius_factor=state.search_radius_factor(search_factor),
        node_budget=state.node_budget(budget),
        step_radius=state.value("step_radius", step_radius, defaults.step_radius),
    )
    run = state.run_config("div", group_spec,
                           {"a": a_text, "b": b_text, "c": c_text, "delta": query.delta, "gamma": query.gamma,
                            "step_radius": query.step_radius},
                           node_budget=query.node_budget, search_radius_factor=query.search_radius_factor,
                           outputs=[out])
    result = div_point(group, query)
    write_document(document(run, result=result.to_dict()), out)
    if result.status is DivStatus.BUDGET_EXHAUSTED:
        raise SystemExit(EXIT_BUDGET)


def _midpoint_violations(table) -> list:
    """Certified midpoint rows can never fall below dist(a, b) = n."""
    return [r.n for r in table.rows
            if r.status in (DivStatus.EXACT, DivStatus.BALL_EMPTY) and r.value is not None and r.value < r.n]


@click.command("div-table")
@click.argument("group_spec")
@click.option("--mode", type=click.Choice([m.value for m in TableMode]), default=TableMode.MIDPOINT.value,
              show_default=True)
@click.option("--nmax", type=click.IntRange(min=1), required=True)
@click.option("--delta", type=float, default=None)
@click.option("--gamma", type=float, default=None)
@click.option("--lambda", "lam", type=float, default=None, help="Small-divergence lambda (>= 2).")
@click.option("--rho", type=float, default=None, help="Gersten ball fraction in (0, 1).")
@click.option("--window", type=click.IntRange(min=1), default=None, help="Small-table window (default nmax).")
@click.option("--step-radius", type=click.IntRange(min=1), default=None)
@click.option("--sample-cap", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--revalidate", is_flag=True, help="Recompute every row witness with a fresh query; exit 1 on mismatch.")
@factor_option
@budget_option
@out_option
@click.pass_obj
def div_table_command(state: CliState, group_spec: str, mode: str, nmax: int, delta: Optional[float],
                      gamma: Optional[float], lam: Optional[float], rho: Optional[float], window: Optional[int],
                      step_radius: Optional[int], sample_cap: Optional[int], seed: Optional[int],
                      revalidate: bool, search_factor: Optional[float], budget: Optional[int], out: Optional[Path]):
    """
    Divergence table as CSV (or a JSON document when --out ends in .json).

    A CSV written to --out gets its run config in a sibling .meta.json file;
    JSON documents embed it.
    """
    group = get_group(group_spec)
    defaults = state.defaults.divergence
    seed = int(state.value("seed", seed, 0))
    common = {
        "search_radius_factor": state.search_radius_factor(search_factor),
        "node_budget": state.node_budget(budget),
        "sample_cap": state.value("sample_cap", sample_cap, defaults.sample_cap),
        "seed": seed,
        "jobs": state.jobs,
        "show_progress": state.show_progress,
    }
    delta = state.value("delta", delta, defaults.delta)
    gamma = state.value("gamma", gamma, defaults.gamma)
    step_radius = state.value("step_radius", step_radius, defaults.step_radius)
    parameters = {"mode": mode, "nmax": nmax, "sample_cap": common["sample_cap"]}
    if mode == TableMode.MIDPOINT.value:
        parameters.update(delta=delta, gamma=gamma, step_radius=step_radius)
        table = midpoint_div_table(group, nmax, delta, gamma, step_radius=step_radius, **common)
    elif mode == TableMode.SMALL.value:
        lam = state.value("lambda", lam, defaults.lambda_)
        parameters.update(delta=delta, gamma=gamma, step_radius=step_radius, **{"lambda": lam, "window": window})
        table = small_div_table(group, nmax, lam, delta, gamma, step_radius=step_radius, window=window, **common)
    else:
        rho = state.value("rho", rho, defaults.rho)
        parameters.update(rho=rho)
        table = gersten_div_table(group, nmax, rho, **common)

    run = state.run_config("div-table", group_spec, parameters, node_budget=common["node_budget"],
                           search_radius_factor=common["search_radius_factor"], seed=seed, outputs=[out])
    recheck = revalidate_table(table) if revalidate else None
    if out is not None and Path(out).suffix == ".json":
        doc = table.to_document(run.model_dump())
        doc["growth"] = growth_report(table).to_dict()
        if recheck is not None:
            doc["revalidation"] = recheck.summary()
        write_document(doc, out)
    else:
        write_csv(table.to_dataframe(), out, run)

    if recheck is not None and not recheck.is_valid:
        logger.error(f"Rows that do not re-validate: {[v.details['query'] for v in recheck.violations]}")
        raise SystemExit(EXIT_VERIFICATION)
    violations = _midpoint_violations(table) if table.mode is TableMode.MIDPOINT else []
    if violations:
        logger.error(f"Rows below dist(a, b): {violations}")
        raise SystemExit(EXIT_VERIFICATION)
    if "budget" in table.metadata or any(r.status is DivStatus.BUDGET_EXHAUSTED for r in table.rows):
        raise SystemExit(EXIT_BUDGET)


@click.command("gersten")
@click.argument("group_spec")
@click.option("--x", "x_text", required=True)
@click.option("--y", "y_text", required=True)
@click.option("--x0", "x0_text", default=None, help="Ball center (identity when omitted).")
@click.option("--rho", type=float, default=None)
@factor_option
@budget_option
@out_option
@click.pass_obj
def gersten_command(state: CliState, group_spec: str, x_text: str, y_text: str, x0_text: Optional[str],
                    rho: Optional[float], search_factor: Optional[float], budget: Optional[int],
                    out: Optional[Path]):
    """Distance from x to y outside the open rho*r ball around x0."""
    group = get_group(group_spec)
    rho = state.value("rho", rho, state.defaults.divergence.rho)
    node_budget = state.node_budget(budget)
    factor = state.search_radius_factor(search_factor)
    run = state.run_config("gersten", group_spec, {"x": x_text, "y": y_text, "x0": x0_text, "rho": rho},
                           node_budget=node_budget, search_radius_factor=factor, outputs=[out])
    result = gersten_pair(group, _element_or_identity(group, x0_text), group.parse_element(x_text),
                          group.parse_element(y_text), rho, factor, node_budget)
    write_document(document(run, result=result.to_dict()), out)
    if result.status is DivStatus.BUDGET_EXHAUSTED:
        raise SystemExit(EXIT_BUDGET)


@click.command("morse")
@click.argument("group_spec")
@click.option("--g", "g_text", required=True, help="Generator word ('g:...') or element literal.")
@click.option("--n", "ns", type=click.IntRange(min=1), multiple=True, required=True,
              help="Repeat to run a series.")
@click.option("--D", "corridor_D", type=click.IntRange(min=0), default=None)
@factor_option
@budget_option
@out_option
@click.pass_obj
def morse_command(state: CliState, group_spec: str, g_text: str, ns: Tuple[int, ...], corridor_D: Optional[int],
                  search_factor: Optional[float], budget: Optional[int], out: Optional[Path]):
    """Detour around the middle third of the powers of g."""
    group = get_group(group_spec)
    corridor_D = state.value("corridor_D", corridor_D, state.defaults.divergence.corridor_D)
    node_budget = state.node_budget(budget)
    factor = state.search_radius_factor(search_factor)
    word = _word_for(group, g_text, node_budget)
    run = state.run_config("morse", group_spec, {"g": g_text, "n": list(ns), "D": corridor_D},
                           node_budget=node_budget, search_radius_factor=factor, outputs=[out])
    if len(ns) == 1:
        probe = morse_probe(group, word, ns[0], corridor_D, factor, node_budget)
        write_document(document(run, probe=probe.summary()), out)
        exhausted = probe.path.status is PathStatus.BUDGET_EXHAUSTED
    else:
        series = morse_series(group, word, ns, corridor_D, factor, node_budget)
        write_document(document(run, series=series.summary()), out)
        exhausted = series.verdict == "inconclusive" and any(
            p.path.status is PathStatus.BUDGET_EXHAUSTED for p in series.probes)
    if exhausted:
        raise SystemExit(EXIT_BUDGET)
