"""
GroDiv - SL3 Package
Exterior trajectories in SL3(Z): generating set, logarithmic unipotent
words, the reduction to M and end-to-end connection with an independent
verifier.
"""

from .params import Sl3Params, default_params, load_sl3_params
from .mat3 import Mat3
from .arithmetic import centered_rep, certified_stable_range, is_large, stable_range_z, xgcd
from .generators import ConjugateFamily, GenSet, get_genset, row_angle, select_conjugate
from .radix import (
    RadixScript,
    evaluate_script,
    lattice_bfs_lengths,
    length_bound,
    short_word_L,
    short_word_M,
    two_sided_radix,
)
from .trajectory import StepRecord, Trajectory, TrajectoryReport, trajectory_from_document, verify_trajectory
from .reduction import TrajectoryBuilder, connect_to_M, first_column_large, gammaL_word
from .connect import connect_M_to_M, exteriorly_connect
from .checks import SuiteReport, radix_oracle_check, short_word_check, sl3_algebra_check, stable_range_check
from .stress import StressReport, sl3_stress

__all__ = [
    "Sl3Params",
    "default_params",
    "load_sl3_params",
    "Mat3",
    "centered_rep",
    "certified_stable_range",
    "is_large",
    "stable_range_z",
    "xgcd",
    "ConjugateFamily",
    "GenSet",
    "get_genset",
    "row_angle",
    "select_conjugate",
    "RadixScript",
    "evaluate_script",
    "lattice_bfs_lengths",
    "length_bound",
    "short_word_L",
    "short_word_M",
    "two_sided_radix",
    "StepRecord",
    "Trajectory",
    "TrajectoryReport",
    "trajectory_from_document",
    "verify_trajectory",
    "TrajectoryBuilder",
    "connect_to_M",
    "first_column_large",
    "gammaL_word",
    "connect_M_to_M",
    "exteriorly_connect",
    "SuiteReport",
    "radix_oracle_check",
    "short_word_check",
    "sl3_algebra_check",
    "stable_range_check",
    "StressReport",
    "sl3_stress",
]
