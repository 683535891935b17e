from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np
import pandas as pd

from collision.first_order import first_order_ttc
from collision.star import second_order_ttc
from kinematics.search_config import SearchConfig
from kinematics.vectors import Vec2, VehicleState
from scenarios.series import TtcSample, TtcSeries
from trajectory_data.acceleration import estimate_acceleration
from trajectory_data.loader import TIMESTEP, TrajectorySample

class NoTemporalOverlap(ValueError):
    """The two vehicles share no sampled timestep"""


@dataclass
class PairAnalysis:
    series: TtcSeries
    count_below_critical_1d: int
    count_below_critical_2d: int
    critical: float = 5.0   # seconds

    def summary(self) -> Dict:
        return {
            "steps": len(self.series),
            "critical": self.critical,
            "count_below_critical_1d": self.count_below_critical_1d,
            "count_below_critical_2d": self.count_below_critical_2d,
        }


def _states(samples: Sequence[TrajectorySample], timestep: float) -> pd.DataFrame:
    """One row per sample keyed by its step index, holding the estimated state"""
    accelerations = estimate_acceleration(samples)
    return pd.DataFrame({
        "step": [int(round(s.t / timestep)) for s in samples],
        "t": [s.t for s in samples],
        "state": [
            VehicleState(p=Vec2(s.x, s.y), v=Vec2(s.vx, s.vy), a=a, t0=s.t)
            for s, (_, a) in zip(samples, accelerations)
        ],
    })


def count_below(values: Sequence[float], critical: float) -> int:
    """Finite TTC values strictly below the critical time"""
    values = np.asarray(values, dtype=float)
    return int((np.isfinite(values) & (values < critical)).sum())


class PairAnalyzer:
    """Both TTC orders at every shared timestep of two vehicles, with the sub-critical counts"""

    def __init__(self, cfg: SearchConfig, critical: float = 5.0, timestep: float = TIMESTEP):
        self.cfg = cfg
        self.critical = critical    # seconds
        self.timestep = timestep
        self.logger = logging.getLogger(__name__)

    def _sample(self, t: float, state_i: VehicleState, state_j: VehicleState) -> TtcSample:
        return TtcSample(
            t=t,
            ttc1=first_order_ttc(state_i, state_j, self.cfg.phi),
            ttc2=second_order_ttc(state_i, state_j, self.cfg).outcome,
            clearance=(state_i.p - state_j.p).norm() - self.cfg.phi,
        )

    def analyze(self, samples_i: Sequence[TrajectorySample],
                samples_j: Sequence[TrajectorySample]) -> PairAnalysis:
        pair = f"{samples_i[0].vehicle_id}/{samples_j[0].vehicle_id}"
        shared = _states(samples_i, self.timestep).merge(
            _states(samples_j, self.timestep), on="step", suffixes=("_i", "_j")
        )
        if shared.empty:
            raise NoTemporalOverlap(f"vehicles {pair} share no timestep")

        series = TtcSeries([
            self._sample(row.t_i, row.state_i, row.state_j)
            for row in shared.sort_values("step").itertuples(index=False)
        ])
        frame = series.to_frame()
        analysis = PairAnalysis(
            series=series,
            count_below_critical_1d=count_below(frame["ttc1"], self.critical),
            count_below_critical_2d=count_below(frame["ttc2"], self.critical),
            critical=self.critical,
        )
        self.logger.info(
            f"pair {pair}: {len(series)} shared steps, {analysis.count_below_critical_1d} first-order "
            f"and {analysis.count_below_critical_2d} second-order TTC values below {self.critical}s"
        )
        return analysis


def export_csv(analysis: PairAnalysis, path: Union[str, Path]) -> None:
    analysis.series.to_csv(path)
