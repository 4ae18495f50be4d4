"""Converse machinery: binary-control lower bounds certified from an optimum.

Given a topology whose optimal allocations all serve every user strictly
and one such optimal allocation, each ordered user subset yields a bound
on what binary power control must already achieve.  Weighted families of
those bounds certify that the optimal-to-binary ratio cannot exceed the
known worst-case constants; on the extremal networks every bound in the
family is tight and the certificates collapse to the constants exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bpc import solve_bpc_gdof
from .gdof import sum_gdof
from .opc import solve_opc
from .power import PowerAllocation, normalize_power
from .topology import Topology

_ZERO = Fraction(0)

# Weighted bound families over users sorted by descending backoff
# (positions are 1-based into that order).  Every family gives each
# user's GDoF the same total coefficient, recorded alongside.
SMALL_K_FAMILIES: dict[int, tuple[tuple[tuple[int, ...], int], ...]] = {
    2: (((1, 2), 1),),
    3: (((1, 2), 1), ((2, 3), 1), ((1, 3), 1)),
    4: (((1, 2), 1), ((3, 4), 1)),
    5: (
        ((5,), 2),
        ((1, 2), 1),
        ((1, 4), 1),
        ((2, 4), 1),
        ((1, 2, 3), 2),
        ((3, 4, 5), 2),
    ),
    6: (
        ((5,), 6),
        ((6,), 10),
        ((1, 2), 1),
        ((1, 2, 4), 6),
        ((1, 2, 3), 8),
        ((3, 4, 5), 3),
        ((4, 5, 6), 2),
        ((3, 4, 5, 6), 4),
        ((1, 2, 3, 4, 5), 1),
    ),
}

# Per-user GDoF coefficient delivered by each family above.
SMALL_K_COEFF: dict[int, int] = {2: 1, 3: 2, 4: 1, 5: 4, 6: 16}


@dataclass(frozen=True)
class BoundCertificate:
    """One ordered-subset bound: binary control achieves at least ``bound``."""

    ordered_users: tuple[int, ...]
    terms: tuple[Fraction, ...]
    bound: Fraction


def _require_optimal(
    topology: Topology,
    allocation: PowerAllocation,
    opc_value: Optional[Fraction],
) -> Fraction:
    """Check the preconditions the subset bound is unsound without.

    The allocation must transmit everywhere, be sum-optimal, and give
    every user strictly positive GDoF.  The last check is a necessary
    consequence of the strictly-positive-class membership this bound
    assumes of the topology; full membership is the caller's obligation
    (see is_strictly_positive_class) since verifying it costs a solve
    per user.
    """
    if allocation.k != topology.k:
        raise ValueError(
            f"allocation has {allocation.k} users, topology has {topology.k}"
        )
    for i in range(topology.k):
        if not allocation.is_on(i):
            raise ValueError(f"user {i} is off; the bound needs every user transmitting")
    outcome = sum_gdof(topology, allocation)
    expected = solve_opc(topology).value if opc_value is None else opc_value
    if outcome.total != expected:
        raise ValueError(
            f"allocation is not optimal: it reaches {outcome.total}, optimum is {expected}"
        )
    for i, d in enumerate(outcome.per_user):
        if d == 0:
            raise ValueError(
                f"user {i} gets zero GDoF under an optimal allocation; "
                "the topology is outside the strictly positive class"
            )
    return expected


def bound_B(
    topology: Topology,
    allocation: PowerAllocation,
    ordered_users: Sequence[int],
    *,
    opc_value: Optional[Fraction] = None,
) -> BoundCertificate:
    """Binary-control lower bound from an ordered subset of users.

    ``ordered_users`` must be listed by non-increasing backoff under
    ``allocation``, which must be a sum-optimal allocation on a topology
    whose optima serve everyone strictly.  Pass ``opc_value`` when the
    optimum is already known to skip the internal solve.
    """
    users = tuple(ordered_users)
    if not users:
        raise ValueError("ordered_users must name at least one user")
    if len(set(users)) != len(users):
        raise ValueError(f"ordered_users has repeats: {users}")
    for i in users:
        if not 0 <= i < topology.k:
            raise ValueError(f"user {i} out of range for {topology.k} users")
    _require_optimal(topology, allocation, opc_value)
    r = allocation.entries
    for a, b in zip(users, users[1:]):
        if r[a] < r[b]:  # type: ignore[operator]
            raise ValueError(
                f"users {a} and {b} are out of order: backoff {r[a]} < {r[b]}"
            )
    outcome = sum_gdof(topology, allocation)
    d = outcome.per_user
    last = users[-1]
    if len(users) == 1:
        terms = (d[last] - r[last],)  # type: ignore[operator]
    else:
        terms = tuple(
            d[i] + r[last] - r[i] for i in users[:-1]  # type: ignore[operator]
        ) + (d[last] + r[users[-2]] - r[last],)  # type: ignore[operator]
    return BoundCertificate(
        ordered_users=users, terms=terms, bound=sum(terms, _ZERO)
    )


def _descending_order(allocation: PowerAllocation) -> tuple[int, ...]:
    return tuple(
        sorted(range(allocation.k), key=lambda i: (-allocation.entries[i], i))  # type: ignore[operator,arg-type]
    )


def _family_bounds(
    topology: Topology,
    allocation: PowerAllocation,
    families: Sequence[tuple[tuple[int, ...], int]],
    opc_value: Fraction,
) -> tuple[list[BoundCertificate], Fraction, int]:
    order = _descending_order(allocation)
    certificates = []
    aggregate = _ZERO
    weight_total = 0
    for positions, weight in families:
        users = tuple(order[p - 1] for p in positions)
        cert = bound_B(topology, allocation, users, opc_value=opc_value)
        certificates.append(cert)
        aggregate += weight * cert.bound
        weight_total += weight
    return certificates, aggregate, weight_total


@dataclass(frozen=True)
class CertificateReport:
    """Full accounting of one weighted bound family.

    ``order`` lists users by descending backoff; each bound pairs its
    weight with the certificate it contributes.  ``ceiling`` carries the
    ratio guarantee for the small fixed families, ``chain_ok`` the
    two-sided verdict for the square families.
    """

    order: tuple[int, ...]
    weighted_bounds: tuple[tuple[int, BoundCertificate], ...]
    aggregate: Fraction
    weight_total: int
    opc_value: Fraction
    bpc_value: Optional[Fraction] = None
    ceiling: Optional[Fraction] = None
    chain_ok: Optional[bool] = None


def small_k_report(
    topology: Topology,
    allocation: PowerAllocation,
    *,
    opc_value: Optional[Fraction] = None,
) -> CertificateReport:
    """Evaluate the fixed family for 2..6 users and its ratio ceiling."""
    k = topology.k
    if k not in SMALL_K_FAMILIES:
        raise ValueError(f"combination tables cover 2..6 users, got {k}")
    allocation = normalize_power(allocation)
    expected = _require_optimal(topology, allocation, opc_value)
    order = _descending_order(allocation)
    certs, aggregate, weight_total = _family_bounds(
        topology, allocation, SMALL_K_FAMILIES[k], expected
    )
    if aggregate <= 0:
        raise ValueError("bound family aggregated to nothing; optimum must be positive")
    weighted = tuple(
        (weight, cert)
        for (_, weight), cert in zip(SMALL_K_FAMILIES[k], certs)
    )
    return CertificateReport(
        order=order,
        weighted_bounds=weighted,
        aggregate=aggregate,
        weight_total=weight_total,
        opc_value=expected,
        ceiling=weight_total * expected / aggregate,
    )


def certificate_small_k(
    topology: Topology,
    allocation: PowerAllocation,
    *,
    opc_value: Optional[Fraction] = None,
) -> Fraction:
    """Certified ceiling on the optimal-to-binary ratio for 2..6 users.

    Always at least the true ratio, never more than the worst-case
    constant for that user count, and exactly the constant on the
    extremal networks.  The allocation is normalized first so the
    family's slack term vanishes.
    """
    report = small_k_report(topology, allocation, opc_value=opc_value)
    assert report.ceiling is not None
    return report.ceiling


def square_families(m: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Bound family certifying the ceiling for m**2 users.

    Sliding windows of m consecutive positions, prefixes up to length
    m-1, and the last m-1 singletons with growing weights; together they
    give every user's GDoF coefficient exactly m.
    """
    if m < 1:
        raise ValueError(f"square parameter must be positive, got m={m}")
    k = m * m
    families: list[tuple[tuple[int, ...], int]] = []
    for i in range(1, k - m + 2):
        families.append((tuple(range(i, i + m)), 1))
    if m >= 2:
        families.append(((1,), 1))
        for i in range(2, m):
            families.append((tuple(range(1, i + 1)), 1))
    for i in range(1, m):
        families.append(((k - m + 1 + i,), i))
    return tuple(families)


def square_report(
    topology: Topology,
    allocation: PowerAllocation,
    m: int,
    *,
    opc_value: Optional[Fraction] = None,
    bpc_value: Optional[Fraction] = None,
) -> CertificateReport:
    """Evaluate the square family and its two-sided chain verdict."""
    if m < 1:
        raise ValueError(f"square parameter must be positive, got m={m}")
    if topology.k != m * m:
        raise ValueError(f"topology has {topology.k} users, expected {m * m}")
    allocation = normalize_power(allocation)
    expected = _require_optimal(topology, allocation, opc_value)
    binary = solve_bpc_gdof(topology).value if bpc_value is None else bpc_value
    order = _descending_order(allocation)
    families = square_families(m)
    certs, aggregate, weight_total = _family_bounds(
        topology, allocation, families, expected
    )
    if weight_total != m * (3 * m - 1) // 2:
        raise RuntimeError("square family weights lost their total; this is a bug")
    weighted = tuple(
        (weight, cert) for (_, weight), cert in zip(families, certs)
    )
    return CertificateReport(
        order=order,
        weighted_bounds=weighted,
        aggregate=aggregate,
        weight_total=weight_total,
        opc_value=expected,
        bpc_value=binary,
        chain_ok=m * expected <= aggregate <= weight_total * binary,
    )


def certificate_square(
    topology: Topology,
    allocation: PowerAllocation,
    m: int,
    *,
    opc_value: Optional[Fraction] = None,
    bpc_value: Optional[Fraction] = None,
) -> bool:
    """Verify the two-sided chain pinning the ratio below (3m - 1) / 2.

    True when m times the optimum stays below the weighted bound
    aggregate, which stays below the family weight times the binary
    optimum; both inequalities are exact.
    """
    report = square_report(
        topology, allocation, m, opc_value=opc_value, bpc_value=bpc_value
    )
    assert report.chain_ok is not None
    return report.chain_ok


def ratio_envelope(k: int) -> tuple[int, float]:
    """Scaling envelope for the extremal ratio at k users.

    Returns the integer lower bound and a display value of the upper
    bound; exact comparisons should go through envelope_holds.
    """
    if k < 1:
        raise ValueError(f"need at least one user, got k={k}")
    return math.isqrt(k), 2.5 * math.sqrt(k)


def envelope_holds(ratio: Fraction, k: int) -> bool:
    """Exact predicate for ratio <= (5/2) sqrt(k)."""
    if k < 1:
        raise ValueError(f"need at least one user, got k={k}")
    if ratio < 0:
        raise ValueError(f"ratio must be nonnegative, got {ratio}")
    return 4 * ratio * ratio <= 25 * k
