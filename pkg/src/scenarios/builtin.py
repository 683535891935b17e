from dataclasses import dataclass
from typing import Dict, Tuple

from kinematics.vectors import Vec2, VehicleState


class UnknownScenario(ValueError):
    """No built-in scenario with this id"""


@dataclass(frozen=True)
class Scenario:
    id: int
    name: str
    state_i: VehicleState
    state_j: VehicleState
    sim_duration: float = 10.0        # seconds of simulated motion
    step: float = 0.1                 # spacing of the TTC series (s)
    prediction_horizon: float = 20.0  # search window handed to the second-order TTC (s)

    def __post_init__(self):
        if not self.sim_duration > 0:
            raise ValueError(f"sim_duration must be positive, got {self.sim_duration}")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not self.prediction_horizon > 0:
            raise ValueError(f"prediction_horizon must be positive, got {self.prediction_horizon}")


def _state(p: Tuple[float, float], v: Tuple[float, float], a: Tuple[float, float]) -> VehicleState:
    return VehicleState(p=Vec2(*p), v=Vec2(*v), a=Vec2(*a))


_TURN_INTO_PATH = (
    _state((-15.0, 5.0), (1.0, 0.0), (0.1, 0.0)),
    _state((0.0, 0.0), (0.0, 1.0), (-0.1, 0.1)),
)

# (name, vehicle i, vehicle j)
SCENARIOS: Dict[int, Tuple[str, VehicleState, VehicleState]] = {
    1: ("head-on, both swerving",
        _state((-1.5, 20.0), (0.0, -1.0), (0.1, -0.1)),
        _state((1.5, 0.0), (0.0, 1.0), (-0.1, 0.1))),
    2: ("slow vehicle crossing a right-turning vehicle",
        _state((10.0, 0.0), (0.1, 0.0), (0.0, 0.0)),
        _state((0.0, -10.0), (0.0, 1.0), (0.1, -0.1))),
    3: ("near miss of two turning vehicles",
        _state((10.0, 10.0), (-1.0, 0.0), (-0.1, -0.1)),
        _state((0.0, 0.0), (0.0, 1.0), (-0.1, 0.1))),
    4: ("left turn into an accelerating vehicle", *_TURN_INTO_PATH),
    # published with the same initial conditions as scenario 4
    5: ("left turn into an accelerating vehicle (repeat)", *_TURN_INTO_PATH),
}


def builtin(scenario_id: int) -> Scenario:
    try:
        name, state_i, state_j = SCENARIOS[scenario_id]
    except KeyError:
        raise UnknownScenario(
            f"unknown scenario {scenario_id}, expected one of {sorted(SCENARIOS)}"
        ) from None
    return Scenario(id=scenario_id, name=name, state_i=state_i, state_j=state_j)
