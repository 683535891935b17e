from dataclasses import dataclass
import math


@dataclass(frozen=True, slots=True)
class Vec2:
    """Planar vector for positions (m), velocities (m/s) and accelerations (m/s^2)"""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x}, {self.y})")

    @classmethod
    def from_array(cls, values) -> "Vec2":
        return cls(float(values[0]), float(values[1]))

    @classmethod
    def parse(cls, text: str) -> "Vec2":
        """Parse 'x,y' as used on the command line"""
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'x,y', got {text!r}")
        return cls(float(parts[0]), float(parts[1]))

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def perp(self) -> "Vec2":
        # counter-clockwise quarter turn: <-y, x>
        return Vec2(-self.y, self.x)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalise the zero vector")
        return Vec2(self.x / n, self.y / n)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def rotated(self, theta: float) -> "Vec2":
        c, s = math.cos(theta), math.sin(theta)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


ZERO = Vec2(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class VehicleState:
    """Snapshot (p, v, a) of a vehicle at time t0"""
    p: Vec2
    v: Vec2
    a: Vec2
    t0: float = 0.0

    def rigid_motion(self, theta: float, shift: Vec2) -> "VehicleState":
        """Rotate about the origin by theta, then translate by shift"""
        return VehicleState(
            p=self.p.rotated(theta) + shift,
            v=self.v.rotated(theta),
            a=self.a.rotated(theta),
            t0=self.t0,
        )
