from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class SearchConfig:
    phi: float = 5.0                      # vehicle diameter, contact when centres are within phi (m)
    contact_tol: float = 1e-6             # slack on d <= phi accepted for a reported event (m)
    region_radius: Optional[float] = None  # search-region radius around a candidate point, None -> 2 * phi (m)
    horizon: float = 100.0                # cap on the search window (s)
    lateral_threshold: float = 1e-3       # |a_s| below this is treated as straight-line motion (m/s^2)

    # Integrator
    integrator_rel_tol: float = 1e-8
    integrator_abs_tol: float = 1e-9      # m
    refine_tol: float = 1e-9              # bisection tolerance on the event time (s)
    max_step: float = 1.0                 # longest accepted integrator step (s)
    min_step: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        if self.region_radius is None:
            object.__setattr__(self, "region_radius", 2.0 * self.phi)
        if not self.phi > 0:
            raise ValueError(f"phi must be positive, got {self.phi}")
        if self.region_radius < self.phi:
            raise ValueError(f"region_radius ({self.region_radius}) must be at least phi ({self.phi})")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        for name in ("contact_tol", "lateral_threshold", "integrator_rel_tol",
                     "integrator_abs_tol", "refine_tol", "max_step", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
