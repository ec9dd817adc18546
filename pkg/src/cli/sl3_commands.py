"""
GroDiv - SL3 Commands
connect, shortword, stablerange, stress and verify. Every trajectory goes
through the verifier before it is written.
"""

import json
import math
from pathlib import Path
from typing import Optional

import click
from loguru import logger

from ..groups import get_group
from ..sl3 import (
    Mat3,
    exteriorly_connect,
    get_genset,
    length_bound,
    short_word_L,
    short_word_M,
    sl3_stress,
    stable_range_z,
    trajectory_from_document,
    verify_trajectory,
)
from .context import CliState, document, write_csv, write_document

EXIT_VERIFICATION = 1

out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                          help="Output file (stdout when omitted).")


def _parse_matrix(text: str) -> Mat3:
    return Mat3(get_group("sl3z").parse_element(text).payload)


@click.group("sl3")
def sl3_group():
    """Exterior trajectories in SL3(Z)."""


@sl3_group.command("connect")
@click.option("--alpha", required=True, help="Element literal ('m:...' or 'g:...').")
@click.option("--beta", required=True, help="Element literal ('m:...' or 'g:...').")
@out_option
@click.pass_obj
def connect_command(state: CliState, alpha: str, beta: str, out: Optional[Path]):
    """Exterior trajectory from alpha to beta."""
    params = state.sl3_params()
    run = state.run_config("sl3 connect", "sl3z", {"alpha": alpha, "beta": beta}, outputs=[out])
    trajectory, report = exteriorly_connect(_parse_matrix(alpha), _parse_matrix(beta), params)
    write_document(document(run, **trajectory.to_document(report)), out)
    if not report.passed:
        logger.error(f"Trajectory failed verification: {report.to_dict()}")
        raise SystemExit(EXIT_VERIFICATION)


@sl3_group.command("verify")
@click.argument("trajectory_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--beta", default=None, help="Expected endpoint (the document's own end when omitted).")
@click.pass_obj
def verify_command(state: CliState, trajectory_file: Path, beta: Optional[str]):
    """Re-run the verifier on a written trajectory document."""
    params = state.sl3_params()
    with open(trajectory_file, "r") as fh:
        doc = json.load(fh)
    trajectory = trajectory_from_document(doc, params)
    expected = _parse_matrix(beta) if beta else trajectory.end()
    report = verify_trajectory(trajectory, expected, params)
    run = state.run_config("sl3 verify", "sl3z", {"trajectory": str(trajectory_file), "beta": beta})
    write_document(document(run, report=report.to_dict()), None)
    if not report.passed:
        raise SystemExit(EXIT_VERIFICATION)


@sl3_group.command("shortword")
@click.option("--m", "m", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--frame", type=click.Choice(["L", "M"]), default="L", show_default=True)
@click.option("--conjugate", type=click.IntRange(min=0), default=None, help="Conjugate family index.")
@out_option
@click.pass_obj
def shortword_command(state: CliState, m: int, n: int, frame: str, conjugate: Optional[int], out: Optional[Path]):
    """Logarithmic word for L(m, n) or M(m, n)."""
    params = state.sl3_params()
    genset = get_genset(params)
    build, target = (short_word_L, Mat3.L) if frame == "L" else (short_word_M, Mat3.M)
    word = build(m, n, conjugate, params)
    matches = genset.eval(word) == target(m, n)
    bound = length_bound((m, n))
    run = state.run_config("sl3 shortword", "sl3z", {"m": str(m), "n": str(n), "frame": frame,
                                                     "conjugate": conjugate}, outputs=[out])
    write_document(document(run, frame=frame, m=str(m), n=str(n), word=list(word),
                            letters=[genset.names[i] for i in word], length=len(word),
                            length_bound=round(bound, 3), matches=matches), out)
    if not matches or len(word) > bound:
        raise SystemExit(EXIT_VERIFICATION)


@sl3_group.command("stablerange")
@click.option("--a", "a", type=int, required=True)
@click.option("--b", "b", type=int, required=True)
@click.option("--c", "c", type=int, required=True)
@click.option("--strategy", type=click.Choice(["search", "certified"]), default=None)
@out_option
@click.pass_obj
def stablerange_command(state: CliState, a: int, b: int, c: int, strategy: Optional[str], out: Optional[Path]):
    """(m, k) with gcd(b + m a, c + k a) = 1."""
    strategy = strategy or state.sl3_params().stable_range_strategy
    m, k = stable_range_z(a, b, c, strategy)
    g = math.gcd(b + m * a, c + k * a)
    run = state.run_config("sl3 stablerange", "sl3z", {"a": str(a), "b": str(b), "c": str(c),
                                                       "strategy": strategy}, outputs=[out])
    write_document(document(run, m=str(m), k=str(k), gcd=str(g)), out)
    if g != 1:
        raise SystemExit(EXIT_VERIFICATION)


@sl3_group.command("stress")
@click.option("--count", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--word-len", type=click.IntRange(min=1), default=40, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--rows", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Per-pair CSV of verifier reports.")
@out_option
@click.pass_obj
def stress_command(state: CliState, count: int, word_len: int, seed: Optional[int], rows: Optional[Path],
                   out: Optional[Path]):
    """Connect seeded pairs of random words and summarize the reports."""
    params = state.sl3_params()
    seed = int(state.value("seed", seed, params.seed))
    run = state.run_config("sl3 stress", "sl3z", {"count": count, "word_len": word_len}, seed=seed,
                           outputs=[out, rows])
    report = sl3_stress(count, word_len, seed, params, state.jobs, state.show_progress)
    if rows is not None:
        write_csv(report.to_dataframe(), rows, run)
    write_document(document(run, summary=report.summary()), out)
    if not report.is_valid:
        raise SystemExit(EXIT_VERIFICATION)
