"""
GroDiv - Exterior Connection of SL3(Z) Matrices
Joins two M-elements by a shifted M-word and any two matrices through their
reductions to M.
"""

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from ..errors import ConstructionError
from .mat3 import Mat3
from .params import Sl3Params, default_params
from .reduction import TrajectoryBuilder, connect_to_M
from .trajectory import Trajectory, TrajectoryReport, verify_trajectory

Vec = Tuple[int, int]
FIXED_POINT_BITS = 52


def _norm(v: Vec) -> int:
    return max(abs(v[0]), abs(v[1]))


def _unstable_direction(params: Sl3Params) -> Tuple[int, int]:
    """Unstable eigenvector of A in fixed point, scaled by 2^52."""
    values, vectors = np.linalg.eig(np.array(params.A, dtype=float))
    e = vectors[:, int(np.argmax(np.abs(values)))]
    e = e / np.max(np.abs(e))
    return tuple(int(round(float(x) * 2 ** FIXED_POINT_BITS)) for x in e)


def _shift(u: Vec, v: Vec, scale: int, direction: Vec) -> Vec:
    """Rounded eigen-direction of the given size, signed away from both u and v."""
    p = tuple((x * scale) >> FIXED_POINT_BITS for x in direction)
    m = (-p[0], -p[1])

    def clearance(s: Vec) -> int:
        return min(_norm((u[0] + s[0], u[1] + s[1])), _norm((v[0] + s[0], v[1] + s[1])))

    return p if clearance(p) >= clearance(m) else m


def connect_M_to_M(u: Vec, v: Vec, params: Optional[Sl3Params] = None) -> Trajectory:
    """
    Trajectory from M(u) to M(v): shift by p, walk w = v - u, shift back.
    The shift doubles after every failed attempt.
    """
    params = params or default_params()
    u, v = (int(u[0]), int(u[1])), (int(v[0]), int(v[1]))
    start = Mat3.M(*u)
    if u == v:
        return TrajectoryBuilder(start, params).trajectory()
    w = (v[0] - u[0], v[1] - u[1])
    direction = _unstable_direction(params)
    scale = math.ceil(params.shift_factor * max(_norm(u), _norm(v), 2))
    failure = None
    for attempt in range(params.shift_retries):
        p = _shift(u, v, scale, direction)
        builder = TrajectoryBuilder(start, params)
        try:
            builder.m_segment("shift", *p)
            builder.m_segment("walk", *w)
            builder.m_segment("unshift", -p[0], -p[1])
        except ConstructionError as e:
            logger.debug(f"connect_M_to_M attempt {attempt}: shift {p} failed ({e})")
            failure = e
            scale *= 2
            continue
        if builder.current != Mat3.M(*v):
            raise ConstructionError(f"M-walk ended at {builder.current!r}", step="connect_M_to_M")
        return builder.trajectory()
    logger.error(f"connect_M_to_M: {params.shift_retries} shifts failed for u={u}, v={v}")
    raise ConstructionError(f"No shift within {params.shift_retries} doublings keeps the walk exterior",
                            step="connect_M_to_M", matrix=start.literal(),
                            metrics=failure.metrics if failure else {})


def exteriorly_connect(alpha: Mat3, beta: Mat3,
                       params: Optional[Sl3Params] = None) -> Tuple[Trajectory, TrajectoryReport]:
    """One trajectory from alpha to beta through M, with its verifier report."""
    params = params or default_params()
    if alpha == beta:
        trajectory = TrajectoryBuilder(alpha, params).trajectory()
        return trajectory, verify_trajectory(trajectory, beta, params)
    to_m, u_alpha = connect_to_M(alpha, params)
    from_m, u_beta = connect_to_M(beta, params)
    across = connect_M_to_M(u_alpha, u_beta, params)
    trajectory = to_m.then(across).then(from_m.reversed())
    report = verify_trajectory(trajectory, beta, params)
    if report.proxy_floor_hit:
        logger.warning(f"Endpoint proxy {min(report.start_proxy, report.end_proxy):.2f} is below the floor "
                       f"{params.proxy_floor}; exteriority is vacuous")
    logger.info(f"Connected in {report.length} letters, kappa {report.kappa_achieved:.3f}, "
                f"length ratio {report.length_ratio:.1f}")
    return trajectory, report
