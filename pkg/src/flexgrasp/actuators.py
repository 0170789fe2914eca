"""Combined saturation / dead-zone actuator nonlinearity.

A commanded signal passes through a dead zone followed by a saturation; the
composition collapses to a single clipped map with breakpoints derived from
the saturation levels, dead-zone ranges and slopes.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ActuatorLimits", "apply", "discrepancy"]


@dataclass(frozen=True)
class ActuatorLimits:
    """Saturation levels, dead-zone ranges and slopes of one actuator channel."""

    k_max: float   # upper saturation level, > 0
    k_min: float   # lower saturation level, < 0
    m_right: float  # right dead-zone range, > 0
    m_left: float   # left dead-zone range, < 0
    k_right: float = 1.0  # right slope, > 0
    k_left: float = 1.0   # left slope, > 0

    def __post_init__(self):
        if not (self.k_max > 0.0 > self.k_min):
            raise ValueError("saturation levels must satisfy k_max > 0 > k_min")
        if not (self.m_right > 0.0 > self.m_left):
            raise ValueError("dead-zone ranges must satisfy m_right > 0 > m_left")
        if self.k_right <= 0.0 or self.k_left <= 0.0:
            raise ValueError("slopes must be positive")
        if not (self.hi > 0.0 > self.lo):
            raise ValueError("derived breakpoints must satisfy hi > 0 > lo")

    @property
    def hi(self) -> float:
        """Upper output breakpoint."""
        return self.k_right * (self.k_max - self.m_right)

    @property
    def lo(self) -> float:
        """Lower output breakpoint."""
        return self.k_left * (self.k_min - self.m_left)


def apply(command: float, limits: ActuatorLimits) -> float:
    """Actual actuator output for a commanded signal."""
    hi = limits.hi
    lo = limits.lo
    if command >= hi:
        return hi
    if command <= lo:
        return lo
    return command


def discrepancy(command: float, limits: ActuatorLimits) -> float:
    """apply(command) - command; zero whenever the command is inside (lo, hi)."""
    return apply(command, limits) - command
