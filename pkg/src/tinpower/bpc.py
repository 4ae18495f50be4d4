"""Binary power control: every transmitter is either at full power or off.

Exhaustive over the 2**K on/off patterns.  The GDoF variant runs on
integers after clearing denominators, with per-receiver interference
tables built incrementally so the whole sweep costs O(2**K * K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .gdof import _log_sum_exp
from .topology import Topology

_LN10 = math.log(10.0)
_LN2 = math.log(2.0)

ENUMERATION_LIMIT = 16


@dataclass(frozen=True)
class BpcResult:
    """Best on/off value and every pattern that attains it."""

    value: Union[Fraction, float]
    best_sets: tuple[frozenset[int], ...]


def _scaled_matrix(topology: Topology) -> tuple[list[list[int]], int]:
    scale = 1
    for row in topology.alpha:
        for v in row:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    a = [[int(v * scale) for v in row] for row in topology.alpha]
    return a, scale

def _check_limit(k: int, limit: int) -> None:
    if k > limit:
        raise ValueError(
            f"{k} users exceed the enumeration limit {limit}; raise it explicitly"
        )


def _mask_to_set(mask: int, k: int) -> frozenset[int]:
    return frozenset(i for i in range(k) if mask >> i & 1)


def _sorted_sets(masks: list[int], k: int) -> tuple[frozenset[int], ...]:
    sets = [_mask_to_set(m, k) for m in masks]
    return tuple(sorted(sets, key=lambda s: tuple(sorted(s))))


def solve_bpc_gdof(topology: Topology, *, limit: int = ENUMERATION_LIMIT) -> BpcResult:
    """Exact best sum GDoF over all on/off patterns."""
    k = topology.k
    _check_limit(k, limit)
    a, scale = _scaled_matrix(topology)
    full = 1 << k
    # worst[i][mask]: strongest strength at receiver i among transmitters in mask
    worst: list[list[int]] = []
    for i in range(k):
        w = [0] * full
        row = a[i]
        for mask in range(1, full):
            low = mask & -mask
            w[mask] = max(w[mask ^ low], row[low.bit_length() - 1])
        worst.append(w)
    best = -1
    ties: list[int] = []
    for mask in range(full):
        total = 0
        mm = mask
        while mm:
            low = mm & -mm
            i = low.bit_length() - 1
            mm ^= low
            d = a[i][i] - worst[i][mask ^ low]
            if d > 0:
                total += d
        if total > best:
            best = total
            ties = [mask]
        elif total == best:
            ties.append(mask)
    return BpcResult(value=Fraction(best, scale), best_sets=_sorted_sets(ties, k))


def solve_bpc_rate(
    topology: Topology, p_db: float, *, limit: int = ENUMERATION_LIMIT
) -> BpcResult:
    """Best finite-power sum rate over all on/off patterns, in bits."""
    k = topology.k
    _check_limit(k, limit)
    scale = _LN10 * p_db / 10.0
    t = [[float(v) * scale for v in row] for row in topology.alpha]
    best = -1.0
    ties: list[int] = []
    for mask in range(1 << k):
        total = 0.0
        for i in range(k):
            if not mask >> i & 1:
                continue
            terms = [0.0]
            for j in range(k):
                if j != i and mask >> j & 1:
                    terms.append(t[i][j])
            x = t[i][i] - _log_sum_exp(terms)
            if x > 30.0:
                total += (x + math.log1p(math.exp(-x))) / _LN2
            else:
                total += math.log1p(math.exp(x)) / _LN2
        if total > best:
            best = total
            ties = [mask]
        elif total == best:
            ties.append(mask)
    return BpcResult(value=best, best_sets=_sorted_sets(ties, k))
