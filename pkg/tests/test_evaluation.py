import json
import math
import time

import numpy as np
import pytest

from kinematics.search_config import SearchConfig
from metrics.evaluation import Timer, TrialRunner, TrialSpec, draw_trials, summarize


class TestTrialSpec:
    def test_defaults(self):
        spec = TrialSpec()
        assert (spec.n_trials, spec.phi, spec.horizon) == (1001, 5.0, 100.0)

    def test_rejects_empty_runs(self):
        with pytest.raises(ValueError):
            TrialSpec(n_trials=0)


class TestDrawTrials:
    def test_reproducible(self):
        assert draw_trials(TrialSpec(seed=11, n_trials=5)) == draw_trials(TrialSpec(seed=11, n_trials=5))
        assert draw_trials(TrialSpec(seed=11, n_trials=5)) != draw_trials(TrialSpec(seed=12, n_trials=5))

    def test_ranges(self):
        for state_i, state_j in draw_trials(TrialSpec(seed=3, n_trials=200)):
            for state in (state_i, state_j):
                assert max(abs(state.p.x), abs(state.p.y)) < 20.0
                assert max(abs(state.v.x), abs(state.v.y)) < 1.0
                assert max(abs(state.a.x), abs(state.a.y)) < 0.1
                assert state.t0 == 0.0


class TestTrialRunner:
    def test_settings_follow_the_trial_spec(self):
        runner = TrialRunner(TrialSpec(phi=4.0, horizon=30.0), cfg=SearchConfig(integrator_rel_tol=1e-6))
        assert (runner.cfg.phi, runner.cfg.horizon, runner.cfg.integrator_rel_tol) == (4.0, 30.0, 1e-6)

    def test_small_run(self):
        stats = TrialRunner(TrialSpec(seed=5, n_trials=20), vectorized_oracle=True).run(1e-2)
        trials = stats.trials
        assert list(trials.columns) == [
            "trial", "star", "oracle", "time_star", "time_oracle", "candidates", "steps", "abs_error",
        ]
        assert len(trials) == 20
        finite = trials.dropna(subset=["abs_error"])
        assert len(finite) == stats.n_finite
        assert (finite["abs_error"] <= 1e-2 + 1e-9).all()
        assert (trials["time_star"] > 0).all()

    def test_no_collisions_leaves_statistics_undefined(self):
        # one trial with the vehicles far apart
        spec = TrialSpec(seed=0, n_trials=1, position_range=1e5)
        stats = TrialRunner(spec, vectorized_oracle=True).run(1e-1)
        assert stats.n_finite == 0
        for value in (stats.mean_abs_error, stats.std_error, stats.max_abs_error,
                      stats.t_statistic, stats.p_value, stats.timing_t_statistic):
            assert math.isnan(value)

        summary = summarize(stats)
        assert summary["mean_abs_error"] is None
        assert summary["t_statistic"] is None
        json.dumps(summary)

    def test_summary_keys(self):
        stats = TrialRunner(TrialSpec(seed=5, n_trials=4), vectorized_oracle=True).run(1e-2)
        summary = summarize(stats)
        assert set(summary) == {
            "n_trials", "n_finite", "n_disagree", "oracle_dt", "mean_abs_error", "std_error",
            "max_abs_error", "t_statistic", "p_value", "trials",
        }
        assert [t["trial"] for t in summary["trials"]] == [0, 1, 2, 3]
        timed = summarize(stats, include_timing=True)
        assert {"mean_time_star", "mean_time_oracle", "speedup", "timing_t_statistic"} <= set(timed)

    def test_compare_step_sizes(self):
        runner = TrialRunner(TrialSpec(seed=5, n_trials=10), vectorized_oracle=True)
        table = runner.compare_step_sizes(dts=(1e-1, 1e-2))
        assert list(table["dt"]) == [1e-1, 1e-2]
        assert {"n_finite", "mean_abs_error", "std_error", "mean_time_star", "std_time_star",
                "mean_time_oracle", "std_time_oracle", "timing_t_statistic"} <= set(table.columns)


def test_timer():
    with Timer() as timer:
        time.sleep(0.01)
    assert timer.elapsed >= 0.01


@pytest.mark.slow
class TestAcceptance:
    def test_millisecond_oracle(self):
        stats = TrialRunner(TrialSpec(seed=0), vectorized_oracle=True).run(1e-3)
        assert stats.n_disagree == 0
        assert 0.08 <= stats.n_finite / stats.n_trials <= 0.20
        assert stats.mean_abs_error < 1e-3
        assert stats.max_abs_error <= 1e-3 + 1e-9
        assert stats.t_statistic < 0
        assert stats.p_value < 0.05

    def test_fine_oracle(self):
        stats = TrialRunner(TrialSpec(seed=0), vectorized_oracle=True).run(1e-5)
        assert stats.n_finite >= 50
        assert stats.mean_abs_error < 1e-5
        assert stats.max_abs_error < 2e-5

    def test_faster_than_stepping(self):
        stats = TrialRunner(TrialSpec(seed=0, n_trials=100)).run(1e-3)
        assert stats.speedup >= 10
        assert np.isfinite(stats.timing_t_statistic) and stats.timing_t_statistic < 0
