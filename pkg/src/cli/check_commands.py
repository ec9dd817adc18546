"""
GroDiv - Check Suites
Named invariant batteries. Exit 0 only when a suite reports zero violations.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
from loguru import logger

from ..divergence import div_inequality_suite, genset_robustness
from ..divergence.checks import DEFAULT_CHECK_GROUPS
from ..sl3 import radix_oracle_check, short_word_check, sl3_algebra_check, sl3_stress, stable_range_check
from .context import CliState, document, write_document

EXIT_VERIFICATION = 1

out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                          help="Output file (stdout when omitted).")


def _finish(run, report: Dict[str, Any], passed: bool, out: Optional[Path], suite: str):
    write_document(document(run, report=report, passed=passed), out)
    if passed:
        logger.success(f"{suite}: no violations")
        return
    logger.error(f"{suite}: violations found")
    raise SystemExit(EXIT_VERIFICATION)


@click.group("check")
def check_group():
    """Invariant check suites."""


@check_group.command("div-inequalities")
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--group", "groups", multiple=True, help="Group spec; repeat for several (default set when omitted).")
@click.option("--max-word-length", type=click.IntRange(min=1), default=4, show_default=True)
@out_option
@click.pass_obj
def div_inequalities_command(state: CliState, samples: int, seed: Optional[int], groups: Tuple[str, ...],
                             max_word_length: int, out: Optional[Path]):
    """Instance inequalities of pointwise divergence on random queries."""
    seed = int(state.value("seed", seed, 0))
    groups = groups or DEFAULT_CHECK_GROUPS
    node_budget = state.node_budget(None)
    run = state.run_config("check div-inequalities", None,
                           {"samples": samples, "groups": list(groups), "max_word_length": max_word_length},
                           node_budget=node_budget, seed=seed, outputs=[out])
    reports = div_inequality_suite(samples, seed, groups, max_word_length, node_budget, state.show_progress)
    body = {}
    for spec, report in reports.items():
        body[spec] = {**report.summary(),
                      "violation_list": [{"check": v.check_name, "message": v.message, "details": v.details}
                                         for v in report.violations[:20]]}
    _finish(run, body, all(r.is_valid for r in reports.values()), out, "div-inequalities")


@check_group.command("genset-robustness")
@click.option("--nmax", type=click.IntRange(min=1), default=12, show_default=True)
@click.option("--standard", default="zd:2", show_default=True)
@click.option("--extended", default="zd:2+diag", show_default=True)
@out_option
@click.pass_obj
def genset_robustness_command(state: CliState, nmax: int, standard: str, extended: str, out: Optional[Path]):
    """Midpoint tables under two generating sets stay within a constant ratio."""
    node_budget = state.node_budget(None)
    run = state.run_config("check genset-robustness", standard,
                           {"nmax": nmax, "standard": standard, "extended": extended},
                           node_budget=node_budget, outputs=[out])
    report = genset_robustness(nmax, standard, extended, node_budget=node_budget,
                               search_radius_factor=run.search_radius_factor, jobs=state.jobs)
    _finish(run, report.summary(), report.is_valid, out, "genset-robustness")


@check_group.command("sl3-algebra")
@click.option("--samples", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--seed", type=int, default=None)
@out_option
@click.pass_obj
def sl3_algebra_command(state: CliState, samples: int, seed: Optional[int], out: Optional[Path]):
    """Block conjugation identities on random vectors."""
    seed = int(state.value("seed", seed, 0))
    run = state.run_config("check sl3-algebra", "sl3z", {"samples": samples}, seed=seed, outputs=[out])
    report = sl3_algebra_check(samples, seed, state.sl3_params(), state.show_progress)
    _finish(run, report.summary(), report.is_valid, out, "sl3-algebra")


@check_group.command("stable-range")
@click.option("--bound", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--strategy", type=click.Choice(["search", "certified"]), default="search", show_default=True)
@out_option
@click.pass_obj
def stable_range_command(state: CliState, bound: int, strategy: str, out: Optional[Path]):
    """Exhaustive stable-range contract on a box of triples."""
    run = state.run_config("check stable-range", "sl3z", {"bound": bound, "strategy": strategy}, outputs=[out])
    report = stable_range_check(bound, strategy, state.show_progress)
    _finish(run, report.summary(), report.is_valid, out, "stable-range")


@check_group.command("short-words")
@click.option("--box", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--samples", type=click.IntRange(min=0), default=200, show_default=True)
@click.option("--bits", type=click.IntRange(min=1), default=128, show_default=True)
@click.option("--seed", type=int, default=None)
@out_option
@click.pass_obj
def short_words_command(state: CliState, box: int, samples: int, bits: int, seed: Optional[int],
                        out: Optional[Path]):
    """Exact evaluation and length bounds of short words."""
    seed = int(state.value("seed", seed, 0))
    run = state.run_config("check short-words", "sl3z", {"box": box, "samples": samples, "bits": bits},
                           seed=seed, outputs=[out])
    report = short_word_check(box, samples, bits, seed, state.sl3_params(), state.show_progress)
    _finish(run, report.summary(), report.is_valid, out, "short-words")


@check_group.command("radix-oracle")
@click.option("--max-norm", type=click.IntRange(min=1), default=8, show_default=True)
@out_option
@click.pass_obj
def radix_oracle_command(state: CliState, max_norm: int, out: Optional[Path]):
    """Short-word lengths against exact BFS geodesics in the lattice subgroup."""
    run = state.run_config("check radix-oracle", "sl3z", {"max_norm": max_norm}, outputs=[out])
    report = radix_oracle_check(max_norm, state.sl3_params())
    _finish(run, report.summary(), report.is_valid, out, "radix-oracle")


@check_group.command("sl3-stress")
@click.option("--count", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--word-len", type=click.IntRange(min=1), default=40, show_default=True)
@click.option("--seed", type=int, default=None)
@out_option
@click.pass_obj
def sl3_stress_command(state: CliState, count: int, word_len: int, seed: Optional[int], out: Optional[Path]):
    """Every random pair connects with a passing verifier report."""
    params = state.sl3_params()
    seed = int(state.value("seed", seed, params.seed))
    run = state.run_config("check sl3-stress", "sl3z", {"count": count, "word_len": word_len}, seed=seed,
                           outputs=[out])
    report = sl3_stress(count, word_len, seed, params, state.jobs, state.show_progress)
    body = {**report.summary(), "failures": report.failures[:20]}
    _finish(run, body, report.is_valid, out, "sl3-stress")
