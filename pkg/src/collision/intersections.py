from dataclasses import dataclass
from enum import Enum
import math
import logging
from typing import List

from kinematics.trajectory import CircularTrajectory, LinearTrajectory, TrajectoryModel
from kinematics.vectors import Vec2

logger = logging.getLogger(__name__)

PARALLEL_TOL = 1e-12      # |e_i x e_j| below this: parallel lines
COINCIDENT_TOL = 1e-9     # relative tolerance for identical loci
TANGENT_TOL = 1e-12       # half-chord below this (relative to r): a single touching point


class BothStationary(ValueError):
    """Neither vehicle moves, so their paths do not define lines"""


class CandidateKind(Enum):
    TRANSVERSAL = "transversal_intersection"
    NEAREST_APPROACH = "nearest_approach"
    COINCIDENT = "coincident_geometry"


@dataclass(frozen=True)
class CandidatePoint:
    q: Vec2
    kind: CandidateKind


def _midpoint(a: Vec2, b: Vec2) -> Vec2:
    return Vec2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))


def _scale(*lengths: float) -> float:
    return max(1.0, *(abs(x) for x in lengths))


def _ring_direction(wi: Vec2, wj: Vec2) -> Vec2:
    total = wi.unit() + wj.unit() if wi.norm() > 0 and wj.norm() > 0 else wi + wj
    return total.unit() if total.norm() > 0 else Vec2(1.0, 0.0)


def circle_circle_points(traj_i: CircularTrajectory, traj_j: CircularTrajectory,
                         phi: float) -> List[CandidatePoint]:
    """Crossings of two circular paths, radical-line construction"""
    ci, cj, ri, rj = traj_i.c, traj_j.c, traj_i.r, traj_j.r
    delta = cj - ci
    d = delta.norm()
    scale = _scale(ri, rj)

    if d <= COINCIDENT_TOL * scale and abs(ri - rj) <= COINCIDENT_TOL * scale:
        return [CandidatePoint(traj_i.p0, CandidateKind.COINCIDENT)]
    if d > ri + rj + phi or d < abs(ri - rj) - phi:
        return []

    if d <= COINCIDENT_TOL * scale:
        # concentric rings closer than phi: every direction is a nearest approach
        u = _ring_direction(traj_i.p0 - ci, traj_j.p0 - cj)
        return [CandidatePoint(_midpoint(ci, cj) + u * (0.5 * (ri + rj)), CandidateKind.NEAREST_APPROACH)]

    u = delta * (1.0 / d)
    if d > ri + rj:
        a, b = ci + u * ri, cj - u * rj
        return [CandidatePoint(_midpoint(a, b), CandidateKind.NEAREST_APPROACH)]
    if d < abs(ri - rj):
        # one ring inside the other; both nearest points lie on the ray from the big centre
        if ri > rj:
            a, b = ci + u * ri, cj + u * rj
        else:
            a, b = ci - u * ri, cj - u * rj
        return [CandidatePoint(_midpoint(a, b), CandidateKind.NEAREST_APPROACH)]

    along = (ri * ri - rj * rj + d * d) / (2.0 * d)
    m = ci + u * along
    h = math.sqrt(max(ri * ri - along * along, 0.0))
    if h <= TANGENT_TOL * scale:
        return [CandidatePoint(m, CandidateKind.TRANSVERSAL)]
    kappa_perp = u.perp()
    return [
        CandidatePoint(m + kappa_perp * h, CandidateKind.TRANSVERSAL),
        CandidatePoint(m - kappa_perp * h, CandidateKind.TRANSVERSAL),
    ]


def line_line_points(traj_i: LinearTrajectory, traj_j: LinearTrajectory,
                     phi: float) -> List[CandidatePoint]:
    ei, ej = traj_i.direction, traj_j.direction
    if ei is None and ej is None:
        raise BothStationary("both vehicles are at rest with no acceleration")
    if ei is None:
        return point_points(traj_i, traj_j, phi)
    if ej is None:
        return point_points(traj_j, traj_i, phi)

    pi, pj = traj_i.p0, traj_j.p0
    cross = ei.cross(ej)
    if abs(cross) < PARALLEL_TOL:
        offset = abs((pj - pi).cross(ei))
        if offset <= COINCIDENT_TOL * _scale(pi.norm(), pj.norm()):
            return [CandidatePoint(pi, CandidateKind.COINCIDENT)]
        if offset > phi:
            return []
        # centre of the band between the two starts, the same for either vehicle order
        foot_i = pj + ej * (pi - pj).dot(ej)
        foot_j = pi + ei * (pj - pi).dot(ei)
        q = _midpoint(_midpoint(pi, foot_i), _midpoint(pj, foot_j))
        return [CandidatePoint(q, CandidateKind.NEAREST_APPROACH)]

    s = (pj - pi).cross(ej) / cross
    return [CandidatePoint(pi + ei * s, CandidateKind.TRANSVERSAL)]


def circle_line_points(traj_line: LinearTrajectory, traj_circle: CircularTrajectory,
                       phi: float) -> List[CandidatePoint]:
    e = traj_line.direction
    if e is None:
        return point_points(traj_line, traj_circle, phi)

    c, r = traj_circle.c, traj_circle.r
    p0 = traj_line.p0
    foot = p0 + e * (c - p0).dot(e)
    offset = (foot - c).norm()

    if offset <= r:
        h = math.sqrt(max(r * r - offset * offset, 0.0))
        if h <= TANGENT_TOL * _scale(r):
            return [CandidatePoint(foot, CandidateKind.TRANSVERSAL)]
        return [
            CandidatePoint(foot - e * h, CandidateKind.TRANSVERSAL),
            CandidatePoint(foot + e * h, CandidateKind.TRANSVERSAL),
        ]
    if offset <= r + phi:
        on_circle = c + (foot - c) * (r / offset)
        return [CandidatePoint(_midpoint(on_circle, foot), CandidateKind.NEAREST_APPROACH)]
    return []


def nearest_on_locus(traj: TrajectoryModel, q: Vec2) -> Vec2:
    """Point of the trajectory's geometric path closest to q"""
    if isinstance(traj, CircularTrajectory):
        w = q - traj.c
        n = w.norm()
        if n == 0:
            return traj.c + Vec2(math.cos(traj.alpha0), math.sin(traj.alpha0)) * traj.r
        return traj.c + w * (traj.r / n)
    e = traj.direction
    if e is None:
        return traj.p0
    return traj.p0 + e * (q - traj.p0).dot(e)


def point_points(traj_static: LinearTrajectory, traj_other: TrajectoryModel,
                 phi: float) -> List[CandidatePoint]:
    """Candidate for a vehicle that never moves: the nearest point of the other path"""
    if isinstance(traj_other, LinearTrajectory) and traj_other.is_static:
        raise BothStationary("both vehicles are at rest with no acceleration")
    p = traj_static.p0
    foot = nearest_on_locus(traj_other, p)
    if (foot - p).norm() > phi:
        return []
    return [CandidatePoint(_midpoint(p, foot), CandidateKind.NEAREST_APPROACH)]


def candidate_points(traj_i: TrajectoryModel, traj_j: TrajectoryModel,
                     phi: float) -> List[CandidatePoint]:
    """Dispatch on the pair of path shapes"""
    circ_i = isinstance(traj_i, CircularTrajectory)
    circ_j = isinstance(traj_j, CircularTrajectory)
    if circ_i and circ_j:
        points = circle_circle_points(traj_i, traj_j, phi)
    elif circ_i:
        points = circle_line_points(traj_j, traj_i, phi)
    elif circ_j:
        points = circle_line_points(traj_i, traj_j, phi)
    else:
        points = line_line_points(traj_i, traj_j, phi)
    logger.debug(f"{len(points)} candidate point(s): {[p.kind.value for p in points]}")
    return points
