import math
from typing import List


def quadratic_roots(a: float, b: float, c: float, eps: float = 1e-14) -> List[float]:
    """
    Real roots of a*x^2 + b*x + c = 0 in ascending order.

    Uses the cancellation-free form q = -(b + sign(b) * sqrt(disc)) / 2.
    A discriminant within eps of zero (relative to b^2) is treated as a
    double root; a vanishing leading coefficient falls back to the linear case.
    """
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    if abs(a) <= 1e-15 * scale:
        if b == 0.0:
            return []
        return [-c / b]

    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if disc > -eps * max(b * b, abs(4.0 * a * c)):
            return [-b / (2.0 * a)]
        return []

    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return [0.0]
    roots = sorted((q / a, c / q))
    return roots
