from typing import List, Sequence, Tuple

import numpy as np

from kinematics.vectors import Vec2
from trajectory_data.loader import TrajectorySample


class TooFewSamples(ValueError):
    """At least two samples are needed for a difference quotient"""


def estimate_acceleration(samples: Sequence[TrajectorySample]) -> List[Tuple[float, Vec2]]:
    """
    Forward difference of velocity, (v(t + dt) - v(t)) / dt, at every sample.
    The last sample has no successor and repeats the previous estimate.
    """
    if len(samples) < 2:
        raise TooFewSamples(f"need at least 2 samples, got {len(samples)}")
    t = np.array([s.t for s in samples])
    v = np.array([[s.vx, s.vy] for s in samples])
    a = np.diff(v, axis=0) / np.diff(t)[:, None]
    a = np.vstack([a, a[-1:]])
    return [(float(ti), Vec2.from_array(ai)) for ti, ai in zip(t, a)]
