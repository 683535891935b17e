import math

from collision.outcome import NO_COLLISION, TtcOutcome
from kinematics.vectors import VehicleState

# |dv|^2 below this counts as no relative motion
REL_SPEED_SQ_EPS = 1e-18


def first_order_ttc(state_i: VehicleState, state_j: VehicleState, phi: float) -> TtcOutcome:
    """Constant-velocity TTC: first t >= 0 with |dp + dv*t| = phi"""
    dp = state_i.p - state_j.p
    dv = state_i.v - state_j.v
    dist_sq = dp.norm_sq()
    if dist_sq <= phi * phi:
        return TtcOutcome.collision(0.0)

    b = dp.dot(dv)
    vv = dv.norm_sq()
    if vv < REL_SPEED_SQ_EPS:
        return NO_COLLISION
    z = b * b - vv * (dist_sq - phi * phi)
    if z < 0:
        return NO_COLLISION
    if z == 0:
        t = -b / vv
        return TtcOutcome.collision(t) if t >= 0 else NO_COLLISION

    # both roots share a sign since dist > phi; take the earlier positive one
    if b >= 0:
        return NO_COLLISION
    sq = math.sqrt(z)
    q = -b + sq
    t = (dist_sq - phi * phi) / q
    return TtcOutcome.collision(t)
