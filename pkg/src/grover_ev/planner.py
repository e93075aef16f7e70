"""Closed-form iteration counts and the EV attenuation curve.

Everything here is pure arithmetic on (N, M, m): the attenuation factor by
which per-qubit EV magnitudes fall short of full strength after m steps,
the standard stopping point, and the smallest truncated stopping point
whose attenuation clears a threshold.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import grover_angle


@dataclass(frozen=True)
class TruncationPlan:
    """Stopping-point summary for one (N, M, a_th) configuration.

    ``saturated`` flags thresholds no attenuation value reaches before the
    standard stopping point; the truncated count is then capped at
    ``m_stand``.
    """

    N: int
    M: int
    theta: float
    a_th: float
    a_stand: float
    m_stand: int
    m_trunc: int
    m_trunc_estimate: float
    ratio: float
    saturated: bool = False

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "theta": self.theta,
            "a_th": self.a_th,
            "a_stand": self.a_stand,
            "m_stand": self.m_stand,
            "m_trunc": self.m_trunc,
            "m_trunc_estimate": self.m_trunc_estimate,
            "ratio": self.ratio,
            "saturated": self.saturated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def attenuation(universe_size: int, marked_count: int, iterations: int) -> float:
    """EV attenuation after ``iterations`` steps: (sin^2 * N - M) / (N - M).

    Zero before any amplification, close to one at the standard stopping
    point for N >> M.
    """
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    angle = grover_angle(universe_size, marked_count)
    if iterations == 0:
        # sin^2(theta/2) = M/N by definition of the angle; return the exact
        # zero rather than rounding residue (the truncation scan compares
        # this against thresholds as small as 0).
        return 0.0
    sin_sq = math.sin((2 * iterations + 1) * angle / 2.0) ** 2
    return (sin_sq * universe_size - marked_count) / (universe_size - marked_count)


def m_standard(universe_size: int, marked_count: int) -> int:
    """Step count of the standard version, floor(pi / (2 theta))."""
    ratio = math.pi / (2.0 * grover_angle(universe_size, marked_count))
    # Guard the floor against 1-ulp shortfall when pi/(2 theta) is an exact
    # integer (happens at the degenerate point M = N/2 where theta = pi/2).
    return int(math.floor(ratio + 1e-12))


def _truncation_scan(universe_size: int, marked_count: int, a_th: float) -> tuple[int, bool]:
    """Smallest m with attenuation above a_th, capped at the standard count.

    Returns (m, saturated); saturated means the cap was hit without the
    threshold ever being cleared.
    """
    if not 0 <= a_th < 1:
        raise ValueError(f"a_th must satisfy 0 <= a_th < 1, got {a_th}")
    m_stand = m_standard(universe_size, marked_count)
    for m in range(m_stand + 1):
        if attenuation(universe_size, marked_count, m) > a_th:
            return m, False
    return m_stand, True


def m_truncated(universe_size: int, marked_count: int, a_th: float) -> int:
    """Truncated stopping point: first m whose attenuation exceeds a_th."""
    return _truncation_scan(universe_size, marked_count, a_th)[0]


def m_truncated_estimate(universe_size: int, marked_count: int, a_th: float) -> float:
    """Closed-form estimate of the truncated stopping point.

    m_stand * (2/pi) * arcsin(sqrt(r + (1 - r) M/N)) with r = a_th/a_stand
    and a_stand = 1/M.  Only defined up to the standard version's tolerance
    a_stand; the integer scan in :func:`m_truncated` is authoritative.
    """
    if not 0 <= a_th < 1:
        raise ValueError(f"a_th must satisfy 0 <= a_th < 1, got {a_th}")
    a_stand = 1.0 / marked_count
    if a_th > a_stand:
        raise ValueError(
            f"a_th={a_th} exceeds the standard version's tolerance {a_stand}"
        )
    rel = a_th / a_stand
    inner = rel + (1.0 - rel) * marked_count / universe_size
    return m_standard(universe_size, marked_count) * (2.0 / math.pi) * math.asin(math.sqrt(inner))


def make_plan(universe_size: int, marked_count: int, a_th: float) -> TruncationPlan:
    """Aggregate angle, stopping points, and estimate into one plan."""
    theta = grover_angle(universe_size, marked_count)
    m_stand = m_standard(universe_size, marked_count)
    m_trunc, saturated = _truncation_scan(universe_size, marked_count, a_th)
    estimate = m_truncated_estimate(universe_size, marked_count, a_th)
    # A zero standard count (M >= N/2, outside the useful regime) makes the
    # ratio degenerate; report 1 since truncation cannot shorten anything.
    ratio = m_trunc / m_stand if m_stand > 0 else 1.0
    return TruncationPlan(
        N=universe_size,
        M=marked_count,
        theta=theta,
        a_th=a_th,
        a_stand=1.0 / marked_count,
        m_stand=m_stand,
        m_trunc=m_trunc,
        m_trunc_estimate=estimate,
        ratio=ratio,
        saturated=saturated,
    )
