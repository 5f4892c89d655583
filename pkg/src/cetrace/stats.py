"""Confidence intervals and small aggregation helpers.

Intervals use the normal approximation with fixed z values so that report
output is stable: z(0.99) = 2.576 and z(0.90) = 1.645. The sample standard
deviation uses the n-1 denominator. Samples of size 1 yield a degenerate
interval equal to the mean.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace

Z_VALUES = {0.99: 2.576, 0.90: 1.645}


@dataclass(frozen=True)
class IntervalEstimate:
    """Mean with a symmetric confidence interval over n samples."""

    mean: float
    lo: float
    hi: float
    n: int
    level: float
    degenerate: bool = False

    def __post_init__(self) -> None:
        if not (self.lo <= self.mean <= self.hi):
            raise ValueError(
                f"interval out of order: lo={self.lo} mean={self.mean} hi={self.hi}"
            )


def mean_ci(samples: list[float], level: float) -> IntervalEstimate:
    """Mean of samples with a normal-approximation confidence interval.

    Args:
        samples: at least one real value.
        level: confidence level, one of 0.99 or 0.90.

    Raises:
        ValueError: on empty samples or an unsupported level.
    """
    if not samples:
        raise ValueError("empty samples")
    z = Z_VALUES.get(level)
    if z is None:
        raise ValueError(f"unsupported confidence level: {level}")
    n = len(samples)
    mean = statistics.fmean(samples)
    if n == 1:
        return IntervalEstimate(mean, mean, mean, n, level, degenerate=True)
    half = z * statistics.stdev(samples) / math.sqrt(n)
    return IntervalEstimate(mean, mean - half, mean + half, n, level)


def clamp_proportion(estimate: IntervalEstimate) -> IntervalEstimate:
    """Clamp a proportion-valued interval to [0, 1]."""
    lo = max(estimate.lo, 0.0)
    hi = min(estimate.hi, 1.0)
    if lo == estimate.lo and hi == estimate.hi:
        return estimate
    return replace(estimate, lo=lo, hi=hi)


def clamp_nonnegative(estimate: IntervalEstimate) -> IntervalEstimate:
    """Clamp the lower bound of a distance-valued interval to 0."""
    if estimate.lo >= 0.0:
        return estimate
    return replace(estimate, lo=0.0)
