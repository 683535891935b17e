from dataclasses import dataclass
import math
import logging
from typing import Optional, Tuple, Union

import numpy as np

from kinematics.roots import quadratic_roots
from kinematics.search_config import SearchConfig
from kinematics.vectors import Vec2, VehicleState, ZERO

logger = logging.getLogger(__name__)

# slack on the evaluation domain [t0, t0 + t_travel]
DOMAIN_TOL = 1e-9


class ZeroVelocity(ValueError):
    """Acceleration cannot be decomposed for a vehicle at rest"""


class OutOfHorizon(ValueError):
    """Evaluation time lies outside the trajectory's validity window"""


def _sgn(x: float) -> float:
    return 1.0 if x >= 0 else -1.0


@dataclass(frozen=True)
class LinearTrajectory:
    """
    Straight-line motion p0 + v0*tau + a0*tau^2/2 with tau = t - t0.

    For a moving vehicle a0 is parallel to v0. A vehicle at rest keeps its
    full acceleration and moves along a0; with a0 = 0 the position is fixed.
    """
    p0: Vec2
    v0: Vec2
    a0: Vec2
    t_travel: float
    t0: float = 0.0

    @property
    def direction(self) -> Optional[Vec2]:
        """Unit direction of the path, None for a vehicle that never moves"""
        if self.v0.norm() > 0:
            return self.v0.unit()
        if self.a0.norm() > 0:
            return self.a0.unit()
        return None

    @property
    def is_static(self) -> bool:
        return self.direction is None

    def progress(self, tau):
        """Signed distance travelled along `direction` after tau seconds"""
        e = self.direction
        if e is None:
            return 0.0 * tau
        return self.v0.dot(e) * tau + 0.5 * self.a0.dot(e) * tau * tau

    def progress_coefficients(self) -> Tuple[float, float]:
        """(c1, c2) with progress(tau) = c1*tau + c2*tau^2"""
        e = self.direction
        if e is None:
            return 0.0, 0.0
        return self.v0.dot(e), 0.5 * self.a0.dot(e)

    def xy(self, tau):
        x = self.p0.x + self.v0.x * tau + 0.5 * self.a0.x * tau * tau
        y = self.p0.y + self.v0.y * tau + 0.5 * self.a0.y * tau * tau
        return x, y

    def velocity_xy(self, tau):
        return self.v0.x + self.a0.x * tau, self.v0.y + self.a0.y * tau

    def acceleration_xy(self, tau):
        return self.a0.x + 0.0 * tau, self.a0.y + 0.0 * tau

    def max_acceleration(self, tau_lo: float, tau_hi: float) -> float:
        return self.a0.norm()


@dataclass(frozen=True)
class CircularTrajectory:
    """
    Motion on a circle of radius r about c.

    The angle advances as alpha0 + w(tau)*tau where w(tau) = omega0 + a_f*tau/(2r)
    is clamped at zero once it changes sign; the angular rate is
    omega0 + a_f*tau/r. Left turns have omega0 > 0.
    """
    c: Vec2
    r: float
    omega0: float
    alpha0: float
    a_f: float
    a_s: float
    t_travel: float
    t0: float = 0.0
    p0: Vec2 = ZERO
    v0: Vec2 = ZERO

    @property
    def turn(self) -> float:
        """+1 for counter-clockwise motion, -1 for clockwise"""
        return _sgn(self.omega0)

    def _w(self, tau):
        w = self.omega0 + self.a_f / (2.0 * self.r) * tau
        if self.omega0 > 0:
            return np.maximum(0.0, w)
        return np.minimum(0.0, w)

    def rate(self, tau):
        return self.omega0 + self.a_f / self.r * tau

    def angle(self, tau):
        return self.alpha0 + self._w(tau) * tau

    def progress(self, tau):
        """Angle swept in the initial direction of motion after tau seconds (rad)"""
        return self.turn * (self.omega0 * tau + self.a_f / (2.0 * self.r) * tau * tau)

    def progress_coefficients(self) -> Tuple[float, float]:
        return abs(self.omega0), self.turn * self.a_f / (2.0 * self.r)

    def xy(self, tau):
        alpha = self.angle(tau)
        return self.c.x + self.r * np.cos(alpha), self.c.y + self.r * np.sin(alpha)

    def velocity_xy(self, tau):
        alpha = self.angle(tau)
        moving = self._w(tau) != 0
        speed = np.where(moving, self.r * self.rate(tau), 0.0)
        return -np.sin(alpha) * speed, np.cos(alpha) * speed

    def acceleration_xy(self, tau):
        alpha = self.angle(tau)
        moving = self._w(tau) != 0
        rate = self.rate(tau)
        centripetal = np.where(moving, self.r * rate * rate, 0.0)
        # a_f acts along the unit velocity, whichever way the vehicle is moving
        tangential = np.where(moving, self.a_f * np.sign(rate), 0.0)
        cos_a, sin_a = np.cos(alpha), np.sin(alpha)
        return (-cos_a * centripetal - sin_a * tangential,
                -sin_a * centripetal + cos_a * tangential)

    def max_acceleration(self, tau_lo: float, tau_hi: float) -> float:
        peak_rate = max(abs(self.rate(tau_lo)), abs(self.rate(tau_hi)))
        return self.r * peak_rate * peak_rate + abs(self.a_f)


TrajectoryModel = Union[LinearTrajectory, CircularTrajectory]


def decompose_acceleration(state: VehicleState) -> Tuple[float, float]:
    """Longitudinal and lateral acceleration (a_f, a_s); a_s > 0 is a left turn"""
    speed = state.v.norm()
    if speed == 0:
        raise ZeroVelocity("acceleration decomposition needs a nonzero velocity")
    v_star = state.v * (1.0 / speed)
    v_perp = v_star.perp()
    return state.a.dot(v_star), state.a.dot(v_perp)


def _linear_travel_time(p0: Vec2, v0: Vec2, a0: Vec2, horizon: float) -> float:
    speed, accel = v0.norm(), a0.norm()
    if speed > 0 and accel > 0 and a0.dot(v0) < 0 and abs(a0.cross(v0)) <= 1e-12 * speed * accel:
        return min(speed / accel, horizon)
    return horizon


def _circular_travel_time(r: float, omega0: float, a_f: float, horizon: float) -> float:
    if a_f == 0:
        return min(abs(2.0 * math.pi / omega0), horizon)
    k = a_f / (2.0 * r)
    candidates = []
    for target in (2.0 * math.pi, -2.0 * math.pi):
        candidates.extend(t for t in quadratic_roots(k, omega0, -target) if t > 0)
    if _sgn(a_f) != _sgn(omega0):
        candidates.append(-2.0 * r * omega0 / a_f)
    return min(min(candidates, default=horizon), horizon)


def travel_time(traj: TrajectoryModel, cfg: SearchConfig) -> float:
    """Duration over which the predicted trajectory stays valid"""
    if isinstance(traj, CircularTrajectory):
        return _circular_travel_time(traj.r, traj.omega0, traj.a_f, cfg.horizon)
    return _linear_travel_time(traj.p0, traj.v0, traj.a0, cfg.horizon)


def build_trajectory(state: VehicleState, cfg: SearchConfig) -> TrajectoryModel:
    speed = state.v.norm()
    if speed == 0:
        return LinearTrajectory(
            p0=state.p, v0=state.v, a0=state.a, t0=state.t0,
            t_travel=_linear_travel_time(state.p, state.v, state.a, cfg.horizon),
        )

    a_f, a_s = decompose_acceleration(state)
    v_star = state.v * (1.0 / speed)
    if abs(a_s) < cfg.lateral_threshold:
        a0 = v_star * a_f
        return LinearTrajectory(
            p0=state.p, v0=state.v, a0=a0, t0=state.t0,
            t_travel=_linear_travel_time(state.p, state.v, a0, cfg.horizon),
        )

    r = speed * speed / abs(a_s)
    omega0 = a_s / speed
    c = state.p + v_star.perp() * (r * _sgn(a_s))
    cos_arg = min(1.0, max(-1.0, (state.p.x - c.x) / r))
    alpha0 = _sgn(state.p.y - c.y) * math.acos(cos_arg)
    if alpha0 <= -math.pi:
        alpha0 = math.pi
    return CircularTrajectory(
        c=c, r=r, omega0=omega0, alpha0=alpha0, a_f=a_f, a_s=a_s,
        t_travel=_circular_travel_time(r, omega0, a_f, cfg.horizon),
        t0=state.t0, p0=state.p, v0=state.v,
    )


def _tau(traj: TrajectoryModel, t: float) -> float:
    tau = t - traj.t0
    if tau < -DOMAIN_TOL or tau > traj.t_travel + DOMAIN_TOL:
        raise OutOfHorizon(
            f"t={t} outside [{traj.t0}, {traj.t0 + traj.t_travel}]"
        )
    return min(max(tau, 0.0), traj.t_travel)


def position_at(traj: TrajectoryModel, t: float) -> Vec2:
    tau = _tau(traj, t)
    if tau == 0.0:
        return traj.p0
    x, y = traj.xy(tau)
    return Vec2(float(x), float(y))


def velocity_at(traj: TrajectoryModel, t: float) -> Vec2:
    x, y = traj.velocity_xy(_tau(traj, t))
    return Vec2(float(x), float(y))


def acceleration_at(traj: TrajectoryModel, t: float) -> Vec2:
    x, y = traj.acceleration_xy(_tau(traj, t))
    return Vec2(float(x), float(y))


def state_at(traj: TrajectoryModel, t: float) -> VehicleState:
    """Model-evaluated (p, v, a) at t, re-anchored so that t0 = t"""
    return VehicleState(
        p=position_at(traj, t),
        v=velocity_at(traj, t),
        a=acceleration_at(traj, t),
        t0=t,
    )
