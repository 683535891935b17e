from dataclasses import dataclass
import math


@dataclass(frozen=True, slots=True)
class TtcOutcome:
    """Time to collision in seconds after t0; inf stands for no collision"""
    time: float = math.inf

    def __post_init__(self):
        if math.isnan(self.time) or self.time < 0:
            raise ValueError(f"collision time must be nonnegative, got {self.time}")

    @classmethod
    def collision(cls, t: float) -> "TtcOutcome":
        return cls(float(t))

    @property
    def is_collision(self) -> bool:
        return math.isfinite(self.time)

    def format(self) -> str:
        """9 significant digits, 'inf' when no collision is predicted"""
        return f"{self.time:#.9g}" if self.is_collision else "inf"


NO_COLLISION = TtcOutcome()
