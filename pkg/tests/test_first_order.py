import math

import pytest
from hypothesis import assume, given, strategies as st

from collision.first_order import first_order_ttc
from collision.outcome import NO_COLLISION, TtcOutcome
from kinematics.vectors import VehicleState
from scenarios.builtin import builtin
from strategies import PROPERTY_SETTINGS, make_state, vectors, vehicle_states

PHI = 5.0


def direct_ttc(state_i: VehicleState, state_j: VehicleState, phi: float) -> float:
    """Smallest nonnegative root of |dp + dv t|^2 = phi^2 by the plain formula"""
    dp, dv = state_i.p - state_j.p, state_i.v - state_j.v
    a, b, c = dv.norm_sq(), 2 * dp.dot(dv), dp.norm_sq() - phi * phi
    if c <= 0:
        return 0.0
    disc = b * b - 4 * a * c
    if a == 0 or disc < 0:
        return math.inf
    roots = [t for t in ((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)) if t >= 0]
    return min(roots, default=math.inf)


class TestOutcome:
    def test_format(self):
        assert TtcOutcome.collision(8.0).format() == "8.00000000"
        assert NO_COLLISION.format() == "inf"
        assert not NO_COLLISION.is_collision

    def test_rejects_negative_times(self):
        with pytest.raises(ValueError):
            TtcOutcome(-1.0)
        with pytest.raises(ValueError):
            TtcOutcome(math.nan)


class TestFirstOrderTtc:
    def test_scenario_1_head_on(self):
        sc = builtin(1)
        assert first_order_ttc(sc.state_i, sc.state_j, PHI).time == pytest.approx(8.0, abs=1e-12)

    def test_scenario_3_crossing(self):
        sc = builtin(3)
        expected = 10.0 - 5.0 / math.sqrt(2.0)
        assert first_order_ttc(sc.state_i, sc.state_j, PHI).time == pytest.approx(expected, abs=1e-9)

    def test_scenarios_2_and_4_miss(self):
        for scenario_id in (2, 4):
            sc = builtin(scenario_id)
            assert first_order_ttc(sc.state_i, sc.state_j, PHI) == NO_COLLISION

    def test_overlap_is_immediate(self):
        outcome = first_order_ttc(make_state((0, 0), (1, 0), (0, 0)), make_state((3, 0), (1, 0), (0, 0)), PHI)
        assert outcome.time == 0.0

    def test_receding_pair(self):
        outcome = first_order_ttc(make_state((0, 0), (-1, 0), (0, 0)), make_state((10, 0), (1, 0), (0, 0)), PHI)
        assert outcome == NO_COLLISION

    def test_no_relative_motion(self):
        outcome = first_order_ttc(make_state((0, 0), (1, 1), (0, 0)), make_state((10, 0), (1, 1), (0, 0)), PHI)
        assert outcome == NO_COLLISION

    def test_grazing_contact(self):
        # passes at exactly phi
        outcome = first_order_ttc(make_state((-10, 5), (1, 0), (0, 0)), make_state((0, 0), (0, 0), (0, 0)), PHI)
        assert outcome.time == pytest.approx(10.0, abs=1e-6)

    def test_ignores_acceleration(self):
        a = first_order_ttc(make_state((0, 0), (1, 0), (0.1, 0.1)), make_state((20, 0), (0, 0), (0, 0)), PHI)
        assert a.time == pytest.approx(15.0)


def near_contact_boundary(state_i: VehicleState, state_j: VehicleState, phi: float = PHI) -> bool:
    """Starts or passes at almost exactly phi, where rounding decides the outcome"""
    dp, dv = state_i.p - state_j.p, state_i.v - state_j.v
    if abs(dp.norm() - phi) < 1e-6:
        return True
    if dv.norm_sq() == 0:
        return False
    t_star = max(0.0, -dp.dot(dv) / dv.norm_sq())
    return abs((dp + dv * t_star).norm() - phi) < 1e-6


class TestFirstOrderProperties:
    @PROPERTY_SETTINGS
    @given(vehicle_states(), vehicle_states())
    def test_matches_direct_formula(self, s_i, s_j):
        assert first_order_ttc(s_i, s_j, PHI).time == pytest.approx(direct_ttc(s_i, s_j, PHI), abs=1e-9, rel=1e-6)

    @PROPERTY_SETTINGS
    @given(vehicle_states(), vehicle_states(), vectors(1.0))
    def test_galilean_invariance(self, s_i, s_j, u):
        assume(not near_contact_boundary(s_i, s_j))
        shifted_i = VehicleState(p=s_i.p, v=s_i.v + u, a=s_i.a)
        shifted_j = VehicleState(p=s_j.p, v=s_j.v + u, a=s_j.a)
        assert first_order_ttc(shifted_i, shifted_j, PHI).time == pytest.approx(
            first_order_ttc(s_i, s_j, PHI).time, abs=1e-9, rel=1e-6
        )

    @PROPERTY_SETTINGS
    @given(vehicle_states(), vehicle_states(), st.floats(-math.pi, math.pi), vectors(50.0))
    def test_rigid_motion_invariance(self, s_i, s_j, theta, shift):
        assume(not near_contact_boundary(s_i, s_j))
        before = first_order_ttc(s_i, s_j, PHI).time
        after = first_order_ttc(s_i.rigid_motion(theta, shift), s_j.rigid_motion(theta, shift), PHI).time
        assert after == pytest.approx(before, abs=1e-6, rel=1e-6)

    @PROPERTY_SETTINGS
    @given(vehicle_states(), vehicle_states())
    def test_swap_symmetry(self, s_i, s_j):
        assert first_order_ttc(s_i, s_j, PHI) == first_order_ttc(s_j, s_i, PHI)
