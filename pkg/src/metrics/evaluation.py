from dataclasses import dataclass, field, replace
import math
import time
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from collision.oracle import OracleConfig, simulate_ttc
from collision.star import second_order_ttc
from kinematics.search_config import SearchConfig
from kinematics.vectors import Vec2, VehicleState
from metrics.statistics import DegenerateSample, describe, one_sample_t, two_sample_t


@dataclass(frozen=True)
class TrialSpec:
    seed: int = 0
    n_trials: int = 1001
    position_range: float = 20.0      # p uniform in (-20, 20)^2 (m)
    velocity_range: float = 1.0       # v uniform in (-1, 1)^2 (m/s)
    acceleration_range: float = 0.1   # a uniform in (-0.1, 0.1)^2 (m/s^2)
    phi: float = 5.0
    horizon: float = 100.0

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be at least 1, got {self.n_trials}")


@dataclass
class TrialStats:
    """
    Error and timing summary of STAR against the fixed-step oracle.

    Error statistics use the trials where both methods predict a collision;
    they are nan when fewer than two such trials exist or the errors have no
    spread.
    """
    n_trials: int
    n_finite: int
    n_disagree: int
    mean_abs_error: float
    std_error: float
    max_abs_error: float
    mean_time_star: float
    mean_time_oracle: float
    t_statistic: float
    p_value: float
    timing_t_statistic: float
    timing_p_value: float
    oracle_dt: float
    trials: pd.DataFrame = field(repr=False, default_factory=pd.DataFrame)

    @property
    def speedup(self) -> float:
        return self.mean_time_oracle / self.mean_time_star if self.mean_time_star > 0 else math.inf


class Timer:
    def __enter__(self):
        self.start = time.perf_counter_ns()
        self.elapsed = None
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = (time.perf_counter_ns() - self.start) / 1e9


def draw_trials(spec: TrialSpec) -> List[Tuple[VehicleState, VehicleState]]:
    """Seeded uniform initial conditions, ordered p_i, v_i, a_i, p_j, v_j, a_j"""
    rng = np.random.default_rng(spec.seed)
    bounds = np.tile(
        np.repeat([spec.position_range, spec.velocity_range, spec.acceleration_range], 2), 2
    )
    draws = rng.uniform(-1.0, 1.0, size=(spec.n_trials, 12)) * bounds

    def state(row: np.ndarray) -> VehicleState:
        return VehicleState(p=Vec2(row[0], row[1]), v=Vec2(row[2], row[3]), a=Vec2(row[4], row[5]))

    return [(state(row[:6]), state(row[6:])) for row in draws]


class TrialRunner:
    """Seeded random trials of the second-order search against the fixed-step oracle"""

    def __init__(self, spec: TrialSpec, vectorized_oracle: bool = False, cfg: Optional[SearchConfig] = None):
        self.spec = spec
        self.vectorized_oracle = vectorized_oracle
        self.cfg = replace(cfg or SearchConfig(), phi=spec.phi, horizon=spec.horizon)
        self.logger = logging.getLogger(__name__)

    def _oracle_config(self, oracle_dt: float) -> OracleConfig:
        return OracleConfig(dt=oracle_dt, phi=self.spec.phi, horizon=self.spec.horizon,
                            lateral_threshold=self.cfg.lateral_threshold, vectorized=self.vectorized_oracle)

    def _trials(self, ocfg: OracleConfig) -> pd.DataFrame:
        rows: List[Dict] = []
        for index, (state_i, state_j) in enumerate(draw_trials(self.spec)):
            with Timer() as star_timer:
                report = second_order_ttc(state_i, state_j, self.cfg)
            with Timer() as oracle_timer:
                oracle = simulate_ttc(state_i, state_j, ocfg)
            rows.append({
                "trial": index,
                "star": report.outcome.time,
                "oracle": oracle.time,
                "time_star": star_timer.elapsed,
                "time_oracle": oracle_timer.elapsed,
                "candidates": report.candidates_examined,
                "steps": report.integrator_steps,
            })
            if report.outcome.is_collision != oracle.is_collision:
                self.logger.warning(
                    f"trial {index}: STAR {report.outcome.format()} vs oracle {oracle.format()}"
                )
        trials = pd.DataFrame(rows)
        finite = np.isfinite(trials["star"]) & np.isfinite(trials["oracle"])
        trials["abs_error"] = np.where(finite, (trials["star"] - trials["oracle"]).abs(), np.nan)
        return trials

    def run(self, oracle_dt: float) -> TrialStats:
        spec = self.spec
        trials = self._trials(self._oracle_config(oracle_dt))
        errors = trials["abs_error"].dropna()

        mean_err, std_err, n_finite = describe(errors)
        try:
            t_stat, p_value = one_sample_t(mean_err, std_err, n_finite, oracle_dt)
        except DegenerateSample as e:
            self.logger.info(f"error statistics undefined: {e}")
            t_stat, p_value = math.nan, math.nan

        star_mean, star_std, n = describe(trials["time_star"])
        oracle_mean, oracle_std, _ = describe(trials["time_oracle"])
        try:
            timing_t, timing_p = two_sample_t(star_mean, star_std, n, oracle_mean, oracle_std, n)
        except DegenerateSample:
            timing_t, timing_p = math.nan, math.nan

        stats = TrialStats(
            n_trials=spec.n_trials,
            n_finite=n_finite,
            n_disagree=int((np.isfinite(trials["star"]) != np.isfinite(trials["oracle"])).sum()),
            mean_abs_error=mean_err,
            std_error=std_err,
            max_abs_error=float(errors.max()) if n_finite else math.nan,
            mean_time_star=star_mean,
            mean_time_oracle=oracle_mean,
            t_statistic=t_stat,
            p_value=p_value,
            timing_t_statistic=timing_t,
            timing_p_value=timing_p,
            oracle_dt=oracle_dt,
            trials=trials,
        )
        self.logger.info(
            f"{spec.n_trials} trials (seed {spec.seed}, dt={oracle_dt:g}): {n_finite} finite, "
            f"{stats.n_disagree} disagreements, mean |error| {mean_err:.3e}s, speedup {stats.speedup:.1f}x"
        )
        return stats

    def compare_step_sizes(self, dts: Sequence[float] = (1e-2, 1e-3, 1e-5)) -> pd.DataFrame:
        """One row per oracle step size: error and running-time comparison"""
        rows = []
        for dt in dts:
            stats = self.run(dt)
            rows.append({
                "dt": dt,
                "n_finite": stats.n_finite,
                "mean_abs_error": stats.mean_abs_error,
                "std_error": stats.std_error,
                "mean_time_star": stats.mean_time_star,
                "std_time_star": float(stats.trials["time_star"].std(ddof=1)),
                "mean_time_oracle": stats.mean_time_oracle,
                "std_time_oracle": float(stats.trials["time_oracle"].std(ddof=1)),
                "timing_t_statistic": stats.timing_t_statistic,
            })
        return pd.DataFrame(rows)


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def summarize(stats: TrialStats, include_timing: bool = False) -> Dict:
    """JSON-ready summary; wall times only on request so repeated runs compare equal"""
    summary = {
        "n_trials": stats.n_trials,
        "n_finite": stats.n_finite,
        "n_disagree": stats.n_disagree,
        "oracle_dt": stats.oracle_dt,
        "mean_abs_error": _clean(stats.mean_abs_error),
        "std_error": _clean(stats.std_error),
        "max_abs_error": _clean(stats.max_abs_error),
        "t_statistic": _clean(stats.t_statistic),
        "p_value": _clean(stats.p_value),
        "trials": [
            {
                "trial": int(row.trial),
                "star": _clean(float(row.star)),
                "oracle": _clean(float(row.oracle)),
                "abs_error": _clean(float(row.abs_error)),
            }
            for row in stats.trials.itertuples()
        ],
    }
    if include_timing:
        summary.update({
            "mean_time_star": stats.mean_time_star,
            "mean_time_oracle": stats.mean_time_oracle,
            "speedup": _clean(stats.speedup),
            "timing_t_statistic": _clean(stats.timing_t_statistic),
            "timing_p_value": _clean(stats.timing_p_value),
        })
    return summary
