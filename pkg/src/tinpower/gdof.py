"""Per-user degrees of freedom and finite-power rates under treat-interference-as-noise.

A transmitting user's GDoF is its direct strength plus its own backoff,
minus whatever sticks out above noise at its receiver, clamped at zero.
The rate functions evaluate the same expressions at a finite power level
in the log domain, so enormous exponents stay representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .power import OFF, PowerAllocation
from .topology import Topology

_LN10 = math.log(10.0)
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class GdofOutcome:
    """GDoF of every user under one topology and power allocation."""

    per_user: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.per_user, Fraction(0))


def _check_shapes(topology: Topology, allocation: PowerAllocation) -> None:
    if allocation.k != topology.k:
        raise ValueError(
            f"allocation has {allocation.k} users, topology has {topology.k}"
        )


def user_gdof(topology: Topology, allocation: PowerAllocation, i: int) -> Fraction:
    _check_shapes(topology, allocation)
    if not 0 <= i < topology.k:
        raise ValueError(f"user {i} out of range for {topology.k} users")
    if not allocation.is_on(i):
        return Fraction(0)
    alpha = topology.alpha
    interference = Fraction(0)
    for k in range(topology.k):
        if k == i or not allocation.is_on(k):
            continue
        level = alpha[i][k] + allocation[k]  # type: ignore[operator]
        if level > interference:
            interference = level
    value = alpha[i][i] + allocation[i] - interference  # type: ignore[operator]
    return value if value > 0 else Fraction(0)


def sum_gdof(topology: Topology, allocation: PowerAllocation) -> GdofOutcome:
    _check_shapes(topology, allocation)
    return GdofOutcome(
        tuple(user_gdof(topology, allocation, i) for i in range(topology.k))
    )


def _log_sum_exp(values: list[float]) -> float:
    peak = max(values)
    return peak + math.log(sum(math.exp(v - peak) for v in values))


def user_rate(
    topology: Topology, allocation: PowerAllocation, i: int, p_db: float
) -> float:
    """Achievable rate of user i in bits, with interference treated as noise.

    ``p_db`` is the transmit power in decibels; strengths scale exponents
    of that power.  Stable for p_db up to millions, where the direct and
    interference terms differ by thousands of orders of magnitude.
    """
    _check_shapes(topology, allocation)
    if not 0 <= i < topology.k:
        raise ValueError(f"user {i} out of range for {topology.k} users")
    if not allocation.is_on(i):
        return 0.0
    scale = _LN10 * p_db / 10.0
    alpha = topology.alpha
    terms = [0.0]
    for k in range(topology.k):
        if k == i or not allocation.is_on(k):
            continue
        terms.append(float(alpha[i][k] + allocation[k]) * scale)  # type: ignore[operator]
    denominator = _log_sum_exp(terms)
    x = float(alpha[i][i] + allocation[i]) * scale - denominator  # type: ignore[operator]
    if x > 30.0:
        return (x + math.log1p(math.exp(-x))) / _LN2
    return math.log1p(math.exp(x)) / _LN2


def sum_rate(topology: Topology, allocation: PowerAllocation, p_db: float) -> float:
    _check_shapes(topology, allocation)
    return sum(user_rate(topology, allocation, i, p_db) for i in range(topology.k))
