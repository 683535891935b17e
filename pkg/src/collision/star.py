"""
Second-order time to collision by region-gated search.

Candidate points where the two predicted paths cross (or pass within phi)
are ranked by the earliest time either vehicle reaches them. For every
candidate the window in which both vehicles are inside its region is
integrated with an adaptive RK45 stepper, and the clearance d - phi is
watched for a sign change after each accepted step.
"""
from dataclasses import dataclass
import math
import time
import logging
from typing import List, Optional

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import bisect, brentq

from collision.intersections import BothStationary, CandidateKind, candidate_points
from collision.outcome import NO_COLLISION, TtcOutcome
from collision.regions import CollisionCandidate, assemble_candidates, effective_horizon
from kinematics.roots import quadratic_roots
from kinematics.search_config import SearchConfig
from kinematics.trajectory import (
    CircularTrajectory, LinearTrajectory, TrajectoryModel, build_trajectory,
)
from kinematics.vectors import VehicleState

logger = logging.getLogger(__name__)


class StepSizeUnderflow(RuntimeError):
    """The step-size controller needed a step below the configured minimum"""


@dataclass(frozen=True)
class SearchInterval:
    start: float
    end: float
    candidate: Optional[CollisionCandidate] = None


@dataclass(frozen=True)
class EventSearch:
    event_time: Optional[float]
    steps: int
    max_drift: float = 0.0
    terminated_early: bool = False
    stopped_at: Optional[float] = None     # where the receding check closed the interval


@dataclass(frozen=True)
class StarReport:
    outcome: TtcOutcome
    candidates_examined: int = 0
    integrator_steps: int = 0
    wall_time: float = 0.0
    terminated_early: int = 0
    max_drift: float = 0.0


def search_interval(candidate: CollisionCandidate) -> Optional[SearchInterval]:
    """Overlap of the two occupancy windows, None when they are disjoint"""
    times = (candidate.enter_i, candidate.exit_i, candidate.enter_j, candidate.exit_j)
    if any(t is None for t in times):
        return None
    start = max(candidate.enter_i, candidate.enter_j)
    end = min(candidate.exit_i, candidate.exit_j)
    if start > end:
        return None
    return SearchInterval(start=start, end=end, candidate=candidate)


def _positions(traj_i: TrajectoryModel, traj_j: TrajectoryModel, tau: float) -> np.ndarray:
    xi, yi = traj_i.xy(tau)
    xj, yj = traj_j.xy(tau)
    return np.array([xi, yi, xj, yj], dtype=float)


def _velocities(traj_i: TrajectoryModel, traj_j: TrajectoryModel, tau: float) -> np.ndarray:
    vxi, vyi = traj_i.velocity_xy(tau)
    vxj, vyj = traj_j.velocity_xy(tau)
    return np.array([vxi, vyi, vxj, vyj], dtype=float)


def clearance(traj_i: TrajectoryModel, traj_j: TrajectoryModel, tau: float, phi: float) -> float:
    """d_ij - phi from the closed-form positions"""
    pos = _positions(traj_i, traj_j, tau)
    return math.hypot(pos[0] - pos[2], pos[1] - pos[3]) - phi


def range_rate(traj_i: TrajectoryModel, traj_j: TrajectoryModel, tau: float) -> float:
    """Time derivative of the centre distance, (dp . dv) / |dp|"""
    pos = _positions(traj_i, traj_j, tau)
    vel = _velocities(traj_i, traj_j, tau)
    dx, dy = pos[0] - pos[2], pos[1] - pos[3]
    dist = math.hypot(dx, dy)
    if dist == 0:
        return 0.0
    return (dx * (vel[0] - vel[2]) + dy * (vel[1] - vel[3])) / dist


def _cannot_close(traj_i: TrajectoryModel, traj_j: TrajectoryModel, tau: float, end: float,
                  gap: float, rate: float) -> bool:
    """Clearance stays positive until `end` under the worst relative acceleration"""
    remaining = end - tau
    accel = traj_i.max_acceleration(tau, end) + traj_j.max_acceleration(tau, end)
    return gap + rate * remaining - 0.5 * accel * remaining * remaining > 0


def integrate_with_event(traj_i: TrajectoryModel, traj_j: TrajectoryModel,
                         interval: SearchInterval, cfg: SearchConfig) -> EventSearch:
    """First contact time inside the interval, integrating the coupled positions with RK45"""
    phi = cfg.phi
    start, end = interval.start, interval.end

    def gap(tau: float) -> float:
        return clearance(traj_i, traj_j, tau, phi)

    def rate(tau: float) -> float:
        return range_rate(traj_i, traj_j, tau)

    def refine(lo: float, hi: float) -> float:
        return float(bisect(gap, lo, hi, xtol=cfg.refine_tol))

    if gap(start) <= 0:
        return EventSearch(event_time=start, steps=0)
    length = end - start
    if length <= 10 * cfg.min_step:
        return EventSearch(event_time=end if gap(end) <= 0 else None, steps=0)

    solver = RK45(
        lambda tau, y: _velocities(traj_i, traj_j, tau),
        start,
        _positions(traj_i, traj_j, start),
        end,
        max_step=cfg.max_step,
        rtol=cfg.integrator_rel_tol,
        atol=cfg.integrator_abs_tol,
        first_step=min(0.1, length / 10.0),
    )

    steps = 0
    drift = 0.0
    t_a, rate_a = start, rate(start)
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StepSizeUnderflow(f"integration stalled at t={solver.t:.9g}: {message}")
        t_b = solver.t
        if solver.step_size is not None and solver.step_size < cfg.min_step and t_b < end:
            raise StepSizeUnderflow(f"step {solver.step_size:.3g}s below {cfg.min_step:.3g}s at t={t_b:.9g}")
        steps += 1
        drift = max(drift, float(np.max(np.abs(solver.y - _positions(traj_i, traj_j, t_b)))))

        g_b, rate_b = gap(t_b), rate(t_b)
        if g_b <= 0:
            return EventSearch(event_time=refine(t_a, t_b), steps=steps, max_drift=drift)
        if rate_a < 0 < rate_b:
            # closest approach inside the step
            t_m = brentq(rate, t_a, t_b, xtol=cfg.refine_tol)
            g_m = gap(t_m)
            if g_m <= 0:
                return EventSearch(event_time=refine(t_a, t_m), steps=steps, max_drift=drift)
            if g_m <= cfg.contact_tol:
                # grazing touch
                return EventSearch(event_time=t_m, steps=steps, max_drift=drift)
        if rate_b >= 0 and _cannot_close(traj_i, traj_j, t_b, end, g_b, rate_b):
            logger.debug(f"receding at t={t_b:.6f}s with clearance {g_b:.6f}m, candidate closed")
            return EventSearch(event_time=None, steps=steps, max_drift=drift, terminated_early=True,
                               stopped_at=t_b)
        t_a, rate_a = t_b, rate_b

    return EventSearch(event_time=None, steps=steps, max_drift=drift)


def _first_root(a: float, b: float, c: float, targets: List[float], horizon: float) -> Optional[float]:
    roots = [
        tau
        for target in targets
        for tau in quadratic_roots(a, b, c - target)
        if 0 <= tau <= horizon
    ]
    return min(roots, default=None)


def coincident_chase(traj_i: TrajectoryModel, traj_j: TrajectoryModel, phi: float,
                     horizon: float) -> TtcOutcome:
    """Closed-form TTC for two vehicles sharing one line or one circle"""
    if isinstance(traj_i, LinearTrajectory) and isinstance(traj_j, LinearTrajectory):
        e = traj_i.direction
        a = 0.5 * (traj_i.a0 - traj_j.a0).dot(e)
        b = (traj_i.v0 - traj_j.v0).dot(e)
        c = (traj_i.p0 - traj_j.p0).dot(e)
        t = _first_root(a, b, c, [phi, -phi], horizon)
        return NO_COLLISION if t is None else TtcOutcome.collision(t)

    if not (isinstance(traj_i, CircularTrajectory) and isinstance(traj_j, CircularTrajectory)):
        raise ValueError("coincident chase needs two lines or two circles")
    r = traj_i.r
    if phi >= 2.0 * r:
        return TtcOutcome.collision(0.0)
    # relative angle alpha_i - alpha_j is quadratic in time before either rate clamps
    a = traj_i.a_f / (2.0 * traj_i.r) - traj_j.a_f / (2.0 * traj_j.r)
    b = traj_i.omega0 - traj_j.omega0
    c = traj_i.alpha0 - traj_j.alpha0
    beta = 2.0 * math.asin(phi / (2.0 * r))

    values = [c, a * horizon * horizon + b * horizon + c]
    if a != 0 and 0 < -b / (2.0 * a) < horizon:
        values.append(c - b * b / (4.0 * a))
    m_lo = math.floor((min(values) - beta) / (2.0 * math.pi))
    m_hi = math.ceil((max(values) + beta) / (2.0 * math.pi))
    targets = [2.0 * math.pi * m + s * beta for m in range(m_lo, m_hi + 1) for s in (-1.0, 1.0)]
    t = _first_root(a, b, c, targets, horizon)
    return NO_COLLISION if t is None else TtcOutcome.collision(t)


def second_order_ttc(state_i: VehicleState, state_j: VehicleState, cfg: SearchConfig) -> StarReport:
    """Earliest contact time under the constant-turn-rate model"""
    started = time.perf_counter()

    def report(outcome: TtcOutcome, **counters) -> StarReport:
        return StarReport(outcome=outcome, wall_time=time.perf_counter() - started, **counters)

    if (state_i.p - state_j.p).norm() <= cfg.phi:
        return report(TtcOutcome.collision(0.0))

    traj_i = build_trajectory(state_i, cfg)
    traj_j = build_trajectory(state_j, cfg)
    horizon = effective_horizon(traj_i, traj_j, cfg)
    if horizon <= 0:
        return report(NO_COLLISION)

    try:
        points = candidate_points(traj_i, traj_j, cfg.phi)
    except BothStationary:
        return report(NO_COLLISION)

    if any(p.kind is CandidateKind.COINCIDENT for p in points):
        outcome = coincident_chase(traj_i, traj_j, cfg.phi, horizon)
        logger.debug(f"shared path, closed-form chase gives {outcome.format()}")
        return report(outcome)

    best = math.inf
    examined = steps = early = 0
    drift = 0.0
    for candidate in assemble_candidates(traj_i, traj_j, points, cfg):
        interval = search_interval(candidate)
        if interval is None or interval.start >= best:
            continue
        if interval.end > best:
            interval = SearchInterval(interval.start, best, candidate)
        examined += 1
        result = integrate_with_event(traj_i, traj_j, interval, cfg)
        steps += result.steps
        early += int(result.terminated_early)
        drift = max(drift, result.max_drift)
        if result.event_time is not None and result.event_time < best:
            best = result.event_time
            logger.debug(
                f"contact at {best:.9f}s near {candidate.point.q} ({candidate.point.kind.value})"
            )

    outcome = TtcOutcome.collision(best) if math.isfinite(best) else NO_COLLISION
    return report(outcome, candidates_examined=examined, integrator_steps=steps,
                  terminated_early=early, max_drift=drift)
