from dataclasses import dataclass, field, replace
import logging
from typing import IO, List, Optional, Union

import numpy as np
import pandas as pd

from collision.first_order import first_order_ttc
from collision.outcome import TtcOutcome
from collision.star import second_order_ttc
from kinematics.search_config import SearchConfig
from kinematics.trajectory import TrajectoryModel, build_trajectory, position_at, state_at
from kinematics.vectors import VehicleState, ZERO
from scenarios.builtin import Scenario

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%#.9g"


@dataclass(frozen=True)
class TtcSample:
    t: float
    ttc1: TtcOutcome
    ttc2: TtcOutcome
    clearance: float = float("nan")   # ground-truth d_ij - phi at t


@dataclass
class TtcSeries:
    samples: List[TtcSample] = field(default_factory=list)

    def __post_init__(self):
        times = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("series times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def to_frame(self, include_clearance: bool = False) -> pd.DataFrame:
        frame = pd.DataFrame({
            "t": [s.t for s in self.samples],
            "ttc1": [s.ttc1.time for s in self.samples],
            "ttc2": [s.ttc2.time for s in self.samples],
        }, dtype=float)
        if include_clearance:
            frame["clearance"] = [s.clearance for s in self.samples]
        return frame

    def to_csv(self, path_or_buf: Union[str, IO, None] = None, include_clearance: bool = False) -> Optional[str]:
        """`t,ttc1,ttc2` at 9 significant digits, inf for no collision"""
        return self.to_frame(include_clearance).to_csv(
            path_or_buf, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
        )


class GroundTruth:
    """
    Replays the maneuver predicted from a vehicle's initial state: the
    second-order model built at t = 0 is followed for the whole run, and the
    vehicle holds its final position once the model's travel time ends.
    """

    def __init__(self, state: VehicleState, cfg: SearchConfig, duration: float):
        self.trajectory: TrajectoryModel = build_trajectory(
            state, replace(cfg, horizon=max(cfg.horizon, duration))
        )
        self.end = self.trajectory.t0 + self.trajectory.t_travel

    def state(self, t: float) -> VehicleState:
        if t <= self.end:
            return state_at(self.trajectory, t)
        return VehicleState(p=position_at(self.trajectory, self.end), v=ZERO, a=ZERO, t0=t)


def step_times(sc: Scenario) -> np.ndarray:
    n_steps = int(round(sc.sim_duration / sc.step))
    return np.arange(n_steps + 1) * sc.step


def run_series(sc: Scenario, cfg: SearchConfig) -> TtcSeries:
    """Both TTC orders at every step of the scenario's model-following run"""
    truth_i = GroundTruth(sc.state_i, cfg, sc.sim_duration)
    truth_j = GroundTruth(sc.state_j, cfg, sc.sim_duration)
    prediction = replace(cfg, horizon=sc.prediction_horizon)

    samples = []
    for t in step_times(sc):
        state_i, state_j = truth_i.state(float(t)), truth_j.state(float(t))
        ttc1 = first_order_ttc(state_i, state_j, cfg.phi)
        ttc2 = second_order_ttc(state_i, state_j, prediction).outcome
        samples.append(TtcSample(
            t=float(t), ttc1=ttc1, ttc2=ttc2,
            clearance=(state_i.p - state_j.p).norm() - cfg.phi,
        ))

    series = TtcSeries(samples)
    frame = series.to_frame()
    logger.info(
        f"scenario {sc.id}: {len(series)} steps, "
        f"{int(np.isfinite(frame['ttc1']).sum())} finite first-order, "
        f"{int(np.isfinite(frame['ttc2']).sum())} finite second-order"
    )
    return series


def ground_truth(sc: Scenario, cfg: Optional[SearchConfig] = None) -> pd.DataFrame:
    """Model-following positions and velocities in the trajectory CSV schema"""
    cfg = cfg or SearchConfig()
    rows = []
    for vehicle_id, state in (("i", sc.state_i), ("j", sc.state_j)):
        truth = GroundTruth(state, cfg, sc.sim_duration)
        for t in step_times(sc):
            s = truth.state(float(t))
            rows.append({"vehicle_id": vehicle_id, "t": float(t),
                         "x": s.p.x, "y": s.p.y, "vx": s.v.x, "vy": s.v.y})
    return pd.DataFrame(rows, columns=["vehicle_id", "t", "x", "y", "vx", "vy"])
