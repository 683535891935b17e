import math

import numpy as np
import pytest
from hypothesis import given

from collision.oracle import OracleConfig, clearance_series, minimum_clearance, simulate_ttc
from collision.outcome import NO_COLLISION, TtcOutcome
from collision.star import second_order_ttc
from scenarios.builtin import builtin
from strategies import PROPERTY_SETTINGS, make_state, seeded_pairs


class TestOracleConfig:
    @pytest.mark.parametrize("dt", [0.0, -1e-3, 200.0])
    def test_rejects_bad_steps(self, dt):
        with pytest.raises(ValueError):
            OracleConfig(dt=dt)

    def test_search_config_mirrors_model_settings(self):
        ocfg = OracleConfig(dt=1e-3, phi=4.0, horizon=30.0, lateral_threshold=2e-3)
        cfg = ocfg.search_config()
        assert (cfg.phi, cfg.horizon, cfg.lateral_threshold) == (4.0, 30.0, 2e-3)


class TestSimulateTtc:
    def test_agrees_with_star_on_left_turn(self, prediction_cfg):
        sc = builtin(4)
        oracle = simulate_ttc(sc.state_i, sc.state_j, OracleConfig(dt=1e-3, horizon=20.0))
        star = second_order_ttc(sc.state_i, sc.state_j, prediction_cfg).outcome
        assert oracle.is_collision
        # the grid lands on the first step at or after contact
        assert 0 <= oracle.time - star.time <= 1e-3 + 1e-9

    def test_head_on_swerve_misses(self):
        sc = builtin(1)
        assert simulate_ttc(sc.state_i, sc.state_j, OracleConfig(dt=1e-2, horizon=20.0)) == NO_COLLISION

    def test_overlap_at_start(self):
        state_i = make_state((0, 0), (1, 0), (0, 0))
        state_j = make_state((3, 0), (0, 1), (0, 0))
        assert simulate_ttc(state_i, state_j, OracleConfig(dt=1e-2)) == TtcOutcome.collision(0.0)

    def test_crossing_lines(self):
        state_i = make_state((-20, 0), (1, 0), (0, 0))
        state_j = make_state((0, -20), (0, 1), (0, 0))
        outcome = simulate_ttc(state_i, state_j, OracleConfig(dt=1e-3))
        assert outcome.time == pytest.approx(20 - 5 / math.sqrt(2), abs=1e-3)

    @pytest.mark.parametrize("scenario_id", [1, 2, 3, 4])
    def test_vectorized_matches_scalar(self, scenario_id):
        sc = builtin(scenario_id)
        scalar = simulate_ttc(sc.state_i, sc.state_j, OracleConfig(dt=1e-2, horizon=20.0))
        chunked = simulate_ttc(sc.state_i, sc.state_j,
                               OracleConfig(dt=1e-2, horizon=20.0, vectorized=True, chunk_size=97))
        assert chunked == scalar

    @pytest.mark.parametrize("vectorized", [False, True])
    def test_contact_exactly_at_start(self, vectorized):
        # d0 = 5 exactly; the circular position at t=0 rounds just above it
        state_i = make_state((6, -4), (0, 0), (0, 0.1))
        state_j = make_state((3, -8), (-1, -1), (-0.05, 0))
        outcome = simulate_ttc(state_i, state_j, OracleConfig(dt=1e-3, vectorized=vectorized))
        assert outcome == TtcOutcome.collision(0.0)
        assert outcome == second_order_ttc(state_i, state_j, OracleConfig(dt=1e-3).search_config()).outcome


class TestGridProperties:
    DT = 0.1

    @pytest.mark.slow
    @PROPERTY_SETTINGS
    @given(seeded_pairs(position=10.0))
    def test_halving_step_never_delays_contact(self, pair):
        state_i, state_j = pair
        coarse = simulate_ttc(state_i, state_j, OracleConfig(dt=self.DT, vectorized=True))
        fine = simulate_ttc(state_i, state_j, OracleConfig(dt=self.DT / 2, vectorized=True))
        # every coarse grid point is also on the fine grid
        assert fine.time <= coarse.time + 1e-9

    @pytest.mark.slow
    @PROPERTY_SETTINGS
    @given(seeded_pairs(position=10.0))
    def test_first_contact_on_grid(self, pair):
        state_i, state_j = pair
        ocfg = OracleConfig(dt=self.DT, vectorized=True)
        outcome = simulate_ttc(state_i, state_j, ocfg)
        if not outcome.is_collision or outcome.time == 0.0:
            return
        frame = clearance_series(state_i, state_j, [outcome.time - self.DT, outcome.time], ocfg.search_config())
        before, at = frame["clearance"]
        assert at <= 0.0
        assert before > 0.0


class TestClearance:
    def test_series_columns(self, cfg):
        sc = builtin(4)
        frame = clearance_series(sc.state_i, sc.state_j, [0.0, 1.0, 2.0], cfg)
        assert list(frame.columns) == ["t", "distance", "clearance"]
        np.testing.assert_allclose(frame["clearance"], frame["distance"] - cfg.phi)
        assert frame["distance"].iloc[0] == pytest.approx(math.hypot(15, 5))

    def test_times_outside_window(self, cfg):
        sc = builtin(4)
        with pytest.raises(ValueError):
            clearance_series(sc.state_i, sc.state_j, [-1.0, 2.0], cfg)

    def test_near_miss_keeps_clearance(self, prediction_cfg):
        sc = builtin(3)
        t, gap = minimum_clearance(sc.state_i, sc.state_j, prediction_cfg)
        assert 0 < gap < 2
        assert 0 <= t <= 20
