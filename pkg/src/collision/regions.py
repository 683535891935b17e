"""
Search regions around candidate points.

A region is the set of path points within a Euclidean radius of the point
of the path nearest to a candidate q. Along a path this is a segment (line)
or an arc (circle); a vehicle's time inside it is found by solving its
progress equation, which is quadratic in time for both path shapes.
"""
from dataclasses import dataclass
import math
import logging
from typing import List, Optional, Sequence, Tuple

from collision.intersections import CandidateKind, CandidatePoint, nearest_on_locus
from kinematics.roots import quadratic_roots
from kinematics.search_config import SearchConfig
from kinematics.trajectory import CircularTrajectory, LinearTrajectory, TrajectoryModel
from kinematics.vectors import Vec2

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
ON_CIRCLE_TOL = 1e-6      # relative to r
MEMBERSHIP_TOL = 1e-12

Window = Tuple[float, float]


class OffCircle(ValueError):
    """Point is not on the circular path"""


@dataclass(frozen=True)
class CollisionCandidate:
    point: CandidatePoint
    enter_i: Optional[float]
    exit_i: Optional[float]
    enter_j: Optional[float]
    exit_j: Optional[float]
    radius: float

    @property
    def sort_key(self) -> float:
        entries = [t for t in (self.enter_i, self.enter_j) if t is not None]
        return min(entries) if entries else math.inf


def effective_horizon(traj_i: TrajectoryModel, traj_j: TrajectoryModel, cfg: SearchConfig) -> float:
    return min(traj_i.t_travel, traj_j.t_travel, cfg.horizon)


def _wrap(x: float) -> float:
    """Map an angle to (-pi, pi]"""
    x = math.fmod(x + math.pi, TWO_PI)
    if x <= 0:
        x += TWO_PI
    return x - math.pi


def _start_point(traj: CircularTrajectory) -> Vec2:
    return traj.c + Vec2(math.cos(traj.alpha0), math.sin(traj.alpha0)) * traj.r


def directed_angle(traj: CircularTrajectory, from_pt: Vec2, to_pt: Vec2) -> float:
    """Angle swept from `from_pt` to `to_pt` in the vehicle's direction of motion, in [0, 2pi)"""
    for pt in (from_pt, to_pt):
        if abs((pt - traj.c).norm() - traj.r) > ON_CIRCLE_TOL * traj.r:
            raise OffCircle(f"{pt} is not on the circle about {traj.c} with r={traj.r}")
    a, b = from_pt - traj.c, to_pt - traj.c
    ccw_angle = math.atan2(a.cross(b), a.dot(b)) % TWO_PI
    angle = ccw_angle if traj.turn > 0 else (TWO_PI - ccw_angle) % TWO_PI
    return 0.0 if angle >= TWO_PI else angle


def arc_distance(traj: CircularTrajectory, p: Vec2, q: Vec2) -> float:
    return traj.r * directed_angle(traj, p, q)


def _progress_intervals(traj: TrajectoryModel, q_hat: Vec2, radius: float) -> Optional[List[Window]]:
    """Progress values inside the region; None means the whole path is inside"""
    if isinstance(traj, CircularTrajectory):
        if radius >= 2.0 * traj.r:
            return None
        beta = 2.0 * math.asin(radius / (2.0 * traj.r))
        centre = directed_angle(traj, _start_point(traj), q_hat)
        return [(centre - beta + k * TWO_PI, centre + beta + k * TWO_PI) for k in (-1, 0, 1)]
    e = traj.direction
    if e is None:
        return None if (q_hat - traj.p0).norm() <= radius else []
    s_q = (q_hat - traj.p0).dot(e)
    return [(s_q - radius, s_q + radius)]


def _windows_from_progress(traj: TrajectoryModel, intervals: Sequence[Window],
                           horizon: float) -> List[Window]:
    c1, c2 = traj.progress_coefficients()

    def inside(tau: float) -> bool:
        u = c1 * tau + c2 * tau * tau
        return any(lo - MEMBERSHIP_TOL <= u <= hi + MEMBERSHIP_TOL for lo, hi in intervals)

    if horizon <= 0:
        return [(0.0, 0.0)] if inside(0.0) else []

    breaks = {0.0, horizon}
    if c2 != 0:
        vertex = -c1 / (2.0 * c2)
        if 0 < vertex < horizon:
            breaks.add(vertex)
    for lo, hi in intervals:
        for bound in (lo, hi):
            breaks.update(t for t in quadratic_roots(c2, c1, -bound) if 0 < t < horizon)
    points = sorted(breaks)

    windows: List[Window] = []
    start = 0.0 if inside(0.0) else None
    for a, b in zip(points, points[1:]):
        seg_in = inside(0.5 * (a + b))
        if seg_in and start is None:
            start = a
        elif not seg_in and start is not None:
            windows.append((start, a))
            start = None
    if start is not None:
        windows.append((start, horizon))
    return windows


def occupancy_windows(traj: TrajectoryModel, q: Vec2, radius: float, horizon: float) -> List[Window]:
    """All time windows within [0, horizon] spent inside the region about q"""
    q_hat = nearest_on_locus(traj, q)
    intervals = _progress_intervals(traj, q_hat, radius)
    if intervals is None:
        return [(0.0, horizon)]
    if not intervals:
        return []
    return _windows_from_progress(traj, intervals, horizon)


def hitting_times(traj: TrajectoryModel, q: Vec2, cfg: SearchConfig, horizon: float,
                  radius: Optional[float] = None) -> Tuple[Optional[float], Optional[float]]:
    """First entry into and exit from the region about q, relative to t0"""
    windows = occupancy_windows(traj, q, cfg.region_radius if radius is None else radius, horizon)
    if not windows:
        return None, None
    return windows[0]


# -- covering radius ---------------------------------------------------------
# A collision needs both vehicles on the part of their own path that lies
# within phi of the other path. Each connected piece of that set holds a
# candidate point, so a region big enough to contain the piece around its
# candidate contains every contact configuration that piece allows.

def _line_bands(traj_k: LinearTrajectory, traj_m: TrajectoryModel, phi: float) -> List[Window]:
    e, p0 = traj_k.direction, traj_k.p0
    if isinstance(traj_m, CircularTrajectory):
        w = p0 - traj_m.c
        b = w.dot(e)
        outer = quadratic_roots(1.0, 2.0 * b, w.norm_sq() - (traj_m.r + phi) ** 2)
        if len(outer) < 2:
            return [(outer[0], outer[0])] if outer else []
        inner_r = traj_m.r - phi
        inner = quadratic_roots(1.0, 2.0 * b, w.norm_sq() - inner_r ** 2) if inner_r > 0 else []
        if len(inner) < 2:
            return [(outer[0], outer[1])]
        return [(outer[0], inner[0]), (inner[1], outer[1])]

    f = traj_m.direction
    if f is None:
        gap = traj_m.p0 - p0
        offset = abs(gap.cross(e))
        if offset > phi:
            return []
        half = math.sqrt(phi * phi - offset * offset)
        s_p = gap.dot(e)
        return [(s_p - half, s_p + half)]

    n = f.perp()
    slope = n.dot(e)
    f0 = n.dot(p0 - traj_m.p0)
    if abs(slope) < 1e-12:
        return [(-math.inf, math.inf)] if abs(f0) <= phi else []
    lo, hi = sorted(((-phi - f0) / slope, (phi - f0) / slope))
    return [(lo, hi)]


def _circle_band(traj_k: CircularTrajectory, traj_m: TrajectoryModel,
                 phi: float) -> Tuple[float, float, float]:
    """(ref, lo, hi): path angle psi is within phi of traj_m iff lo <= cos(psi - ref) <= hi"""
    c, r = traj_k.c, traj_k.r
    if isinstance(traj_m, CircularTrajectory):
        w = c - traj_m.c
        d = w.norm()
        if d <= 1e-12 * max(1.0, r):
            inside = abs(r - traj_m.r) <= phi
            return 0.0, (-math.inf if inside else math.inf), math.inf
        inner = max(0.0, traj_m.r - phi)
        lo = (inner * inner - d * d - r * r) / (2.0 * r * d)
        hi = ((traj_m.r + phi) ** 2 - d * d - r * r) / (2.0 * r * d)
        return w.angle(), lo, hi

    f = traj_m.direction
    if f is None:
        w = c - traj_m.p0
        d = w.norm()
        if d <= 1e-12 * max(1.0, r):
            return 0.0, (-math.inf if r <= phi else math.inf), math.inf
        return w.angle(), -math.inf, (phi * phi - d * d - r * r) / (2.0 * r * d)

    n = f.perp()
    offset = n.dot(c - traj_m.p0)
    return n.angle(), (-phi - offset) / r, (phi - offset) / r


def _circle_arcs(ref: float, lo: float, hi: float) -> Optional[List[Tuple[float, float]]]:
    """Arcs as (centre, half-width) in absolute angle; None for the whole circle"""
    if lo > 1 or hi < -1 or lo > hi:
        return []
    a1 = math.acos(min(hi, 1.0))
    a2 = math.acos(max(lo, -1.0))
    touches_zero = a1 < 1e-12
    touches_pi = a2 > math.pi - 1e-12
    if touches_zero and touches_pi:
        return None
    if touches_zero:
        return [(ref, a2)]
    if touches_pi:
        return [(ref + math.pi, math.pi - a1)]
    mid, half = 0.5 * (a1 + a2), 0.5 * (a2 - a1)
    return [(ref + mid, half), (ref - mid, half)]


def _circle_cover(traj_k: CircularTrajectory, traj_m: TrajectoryModel, q_hat: Vec2, phi: float) -> float:
    arcs = _circle_arcs(*_circle_band(traj_k, traj_m, phi))
    if arcs is None:
        return 2.0 * traj_k.r
    if not arcs:
        return 0.0
    psi_q = (q_hat - traj_k.c).angle()
    centre, half = min(arcs, key=lambda arc: max(0.0, abs(_wrap(psi_q - arc[0])) - arc[1]))
    if abs(_wrap(psi_q + math.pi - centre)) <= half:
        return 2.0 * traj_k.r

    def chord(delta: float) -> float:
        return 2.0 * traj_k.r * abs(math.sin(0.5 * delta))

    return max(chord(psi_q - (centre - half)), chord(psi_q - (centre + half)))


def _line_cover(traj_k: LinearTrajectory, traj_m: TrajectoryModel, q_hat: Vec2,
                phi: float, horizon: float) -> float:
    bands = _line_bands(traj_k, traj_m, phi)
    if not bands:
        return 0.0
    s_q = (q_hat - traj_k.p0).dot(traj_k.direction)
    lo, hi = min(bands, key=lambda band: max(0.0, band[0] - s_q, s_q - band[1]))

    # only the stretch the vehicle can reach before the horizon matters
    reach = [traj_k.progress(0.0), traj_k.progress(horizon)]
    c1, c2 = traj_k.progress_coefficients()
    if c2 != 0 and 0 < -c1 / (2.0 * c2) < horizon:
        reach.append(traj_k.progress(-c1 / (2.0 * c2)))
    lo, hi = max(lo, min(reach)), min(hi, max(reach))
    if lo > hi:
        return 0.0
    return max(abs(lo - s_q), abs(hi - s_q))


def covering_radius(traj_k: TrajectoryModel, traj_m: TrajectoryModel, q: Vec2,
                    phi: float, horizon: float) -> float:
    """Radius about the point of traj_k nearest q covering traj_k's near-contact stretch"""
    q_hat = nearest_on_locus(traj_k, q)
    if isinstance(traj_k, CircularTrajectory):
        return _circle_cover(traj_k, traj_m, q_hat, phi)
    if traj_k.is_static:
        return 0.0
    return _line_cover(traj_k, traj_m, q_hat, phi, horizon)


def assemble_candidates(traj_i: TrajectoryModel, traj_j: TrajectoryModel,
                        points: Sequence[CandidatePoint], cfg: SearchConfig) -> List[CollisionCandidate]:
    """Candidates with both vehicles' occupancy windows, sorted by earliest entry"""
    horizon = effective_horizon(traj_i, traj_j, cfg)
    candidates: List[CollisionCandidate] = []
    for point in points:
        if point.kind is CandidateKind.COINCIDENT:
            continue
        radius = max(
            cfg.region_radius,
            covering_radius(traj_i, traj_j, point.q, cfg.phi, horizon),
            covering_radius(traj_j, traj_i, point.q, cfg.phi, horizon),
        )
        radius = radius * (1.0 + 1e-9) + 1e-9
        windows_i = occupancy_windows(traj_i, point.q, radius, horizon)
        windows_j = occupancy_windows(traj_j, point.q, radius, horizon)
        for enter_i, exit_i in windows_i:
            for enter_j, exit_j in windows_j:
                candidates.append(CollisionCandidate(
                    point=point, enter_i=enter_i, exit_i=exit_i,
                    enter_j=enter_j, exit_j=exit_j, radius=radius,
                ))
        if not windows_i or not windows_j:
            logger.debug(f"point {point.q} never reached by both vehicles before {horizon:.3f}s")
    return sorted(candidates, key=lambda cand: cand.sort_key)
