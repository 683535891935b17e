import math
from typing import Sequence, Tuple

import pandas as pd
from scipy import stats


class DegenerateSample(ValueError):
    """Sample too small or without spread for a t-test"""


def describe(values: Sequence[float]) -> Tuple[float, float, int]:
    """Mean, sample standard deviation (ddof=1) and size; nan where undefined"""
    series = pd.Series(values, dtype=float)
    n = int(series.size)
    mean = float(series.mean()) if n else math.nan
    std = float(series.std(ddof=1)) if n > 1 else math.nan
    return mean, std, n


def one_sample_t(mean: float, std: float, n: int, mu0: float) -> Tuple[float, float]:
    """
    One-sample t statistic against mu0 with the lower-tail p-value
    (alternative: true mean below mu0).
    """
    if n < 2 or not std > 0:
        raise DegenerateSample(f"one-sample t-test needs n >= 2 and std > 0 (n={n}, std={std})")
    t = (mean - mu0) / (std / math.sqrt(n))
    return t, float(stats.t.cdf(t, df=n - 1))


def two_sample_t(mean1: float, std1: float, n1: int,
                 mean2: float, std2: float, n2: int) -> Tuple[float, float]:
    """Welch's t statistic with Welch-Satterthwaite degrees of freedom, lower-tail p-value"""
    if n1 < 2 or n2 < 2:
        raise DegenerateSample(f"two-sample t-test needs both samples of size >= 2 (n1={n1}, n2={n2})")
    var1, var2 = std1 * std1 / n1, std2 * std2 / n2
    if not var1 + var2 > 0:
        raise DegenerateSample("two-sample t-test needs a nonzero standard deviation")
    t = (mean1 - mean2) / math.sqrt(var1 + var2)
    df = (var1 + var2) ** 2 / (var1 ** 2 / (n1 - 1) + var2 ** 2 / (n2 - 1))
    return t, float(stats.t.cdf(t, df=df))
