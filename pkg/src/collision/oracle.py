from dataclasses import dataclass
import math
import logging
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from collision.outcome import NO_COLLISION, TtcOutcome
from kinematics.search_config import SearchConfig
from kinematics.trajectory import TrajectoryModel, build_trajectory
from kinematics.vectors import VehicleState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleConfig:
    dt: float
    phi: float = 5.0
    horizon: float = 100.0
    lateral_threshold: float = 1e-3
    vectorized: bool = False       # evaluate the grid in numpy chunks instead of one sample at a time
    chunk_size: int = 100_000

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.dt > self.horizon:
            raise ValueError(f"dt ({self.dt}) exceeds the horizon ({self.horizon})")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be at least 1, got {self.chunk_size}")

    def search_config(self) -> SearchConfig:
        """Model settings matching the oracle, so both methods see the same trajectories"""
        return SearchConfig(phi=self.phi, horizon=self.horizon, lateral_threshold=self.lateral_threshold)


def _trajectories(state_i: VehicleState, state_j: VehicleState,
                  cfg: SearchConfig) -> Tuple[TrajectoryModel, TrajectoryModel, float]:
    traj_i = build_trajectory(state_i, cfg)
    traj_j = build_trajectory(state_j, cfg)
    return traj_i, traj_j, min(traj_i.t_travel, traj_j.t_travel, cfg.horizon)


def _distances(traj_i: TrajectoryModel, traj_j: TrajectoryModel, taus):
    xi, yi = traj_i.xy(taus)
    xj, yj = traj_j.xy(taus)
    return np.hypot(xi - xj, yi - yj)


def simulate_ttc(state_i: VehicleState, state_j: VehicleState, ocfg: OracleConfig) -> TtcOutcome:
    """First grid time k*dt with d_ij <= phi"""
    if (state_i.p - state_j.p).norm() <= ocfg.phi:
        return TtcOutcome.collision(0.0)
    traj_i, traj_j, window = _trajectories(state_i, state_j, ocfg.search_config())
    n_steps = int(math.floor(window / ocfg.dt + 1e-9))

    if not ocfg.vectorized:
        for k in range(n_steps + 1):
            tau = k * ocfg.dt
            if _distances(traj_i, traj_j, tau) <= ocfg.phi:
                return TtcOutcome.collision(tau)
        return NO_COLLISION

    for k0 in range(0, n_steps + 1, ocfg.chunk_size):
        taus = np.arange(k0, min(k0 + ocfg.chunk_size, n_steps + 1)) * ocfg.dt
        hits = np.flatnonzero(_distances(traj_i, traj_j, taus) <= ocfg.phi)
        if hits.size:
            return TtcOutcome.collision(float(taus[hits[0]]))
    return NO_COLLISION


def clearance_series(state_i: VehicleState, state_j: VehicleState, times: Sequence[float],
                     cfg: SearchConfig) -> pd.DataFrame:
    """Centre distance and d - phi at the given offsets from t0 (inside the search window)"""
    traj_i, traj_j, window = _trajectories(state_i, state_j, cfg)
    taus = np.asarray(times, dtype=float)
    if taus.size and (taus.min() < 0 or taus.max() > window + 1e-9):
        raise ValueError(f"times must lie in [0, {window}]")
    distance = _distances(traj_i, traj_j, taus)
    return pd.DataFrame({"t": taus, "distance": distance, "clearance": distance - cfg.phi})


def minimum_clearance(state_i: VehicleState, state_j: VehicleState, cfg: SearchConfig,
                      dt: float = 1e-3) -> Tuple[float, float]:
    """(t, d - phi) at the sampled closest approach over the search window"""
    _, _, window = _trajectories(state_i, state_j, cfg)
    taus = np.arange(int(math.floor(window / dt + 1e-9)) + 1) * dt
    frame = clearance_series(state_i, state_j, taus, cfg)
    row = frame.loc[frame["clearance"].idxmin()]
    return float(row["t"]), float(row["clearance"])
