"""Interference network topologies as exact channel-strength matrices.

Row i collects the strengths seen at receiver i, column j belongs to
transmitter j, and the diagonal holds the direct links.  Strengths are
nonnegative rationals kept exact end to end so the optimizers downstream
can promise exact optima.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .power import OFF, PowerAllocation


@dataclass(frozen=True)
class Topology:
    """Square matrix of channel strengths, receiver-major."""

    alpha: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.alpha)
        if k < 1:
            raise ValueError("topology needs at least one user")
        for i, row in enumerate(self.alpha):
            if len(row) != k:
                raise ValueError(
                    f"row {i + 1}: expected {k} entries, found {len(row)}"
                )
            for j, value in enumerate(row):
                if not isinstance(value, Fraction):
                    raise TypeError(
                        f"row {i + 1}, column {j + 1}: expected a Fraction, "
                        f"got {type(value).__name__}"
                    )
                if value < 0:
                    raise ValueError(
                        f"row {i + 1}, column {j + 1}: negative strength {value}"
                    )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[object]]) -> "Topology":
        return cls(
            tuple(tuple(Fraction(v) for v in row) for row in rows)  # type: ignore[arg-type]
        )

    @property
    def k(self) -> int:
        return len(self.alpha)

    def direct(self, i: int) -> Fraction:
        return self.alpha[i][i]


def parse_topology(text: str) -> Topology:
    """Parse the plain-text matrix format.

    The first non-comment line holds the user count K; the next K lines
    hold K whitespace-separated strengths each.  Entries may be written
    as integers, fractions like ``1/2``, or exact decimals like ``0.25``;
    ``#`` starts a comment that runs to the end of the line.
    """
    lines: list[list[str]] = []
    for raw in text.splitlines():
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append(tokens)
    if not lines:
        raise ValueError("empty topology: no user count found")
    header = lines[0]
    if len(header) != 1:
        raise ValueError(f"header line: expected a single user count, found {len(header)} tokens")
    try:
        k = int(header[0])
    except ValueError:
        raise ValueError(f"header line: not an integer user count: {header[0]!r}") from None
    if k < 1:
        raise ValueError(f"header line: user count must be positive, got {k}")
    body = lines[1:]
    if len(body) != k:
        raise ValueError(f"expected {k} rows, found {len(body)}")
    rows: list[tuple[Fraction, ...]] = []
    for r, tokens in enumerate(body, start=1):
        if len(tokens) != k:
            raise ValueError(f"row {r}: expected {k} entries, found {len(tokens)}")
        row: list[Fraction] = []
        for c, token in enumerate(tokens, start=1):
            try:
                value = Fraction(token)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"row {r}, column {c}: not a rational number: {token!r}") from None
            if value < 0:
                raise ValueError(f"row {r}, column {c}: negative strength {value}")
            row.append(value)
        rows.append(tuple(row))
    return Topology(tuple(rows))


def format_topology(topology: Topology) -> str:
    lines = [str(topology.k)]
    for row in topology.alpha:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def extremal_small(k: int) -> Topology:
    """The known worst-case topology for k in {3, 4, 5, 6}.

    These networks maximize the ratio of optimal over binary power
    control among their user counts; the heavy users double as the
    dominant interferers.
    """
    if k == 3:
        rows = [
            [1, 0, 1],
            [0, 1, 1],
            [0, 0, 2],
        ]
    elif k == 4:
        rows = [
            [1, 0, 1, 1],
            [0, 1, 1, 1],
            [0, 0, 2, 1],
            [0, 0, 1, 2],
        ]
    elif k == 5:
        rows = [
            [2, 0, 1, 2, 2],
            [0, 2, 1, 2, 2],
            [0, 0, 2, 2, 2],
            [0, 0, 1, 4, 2],
            [0, 0, 1, 2, 4],
        ]
    elif k == 6:
        rows = [
            [8, 0, 5, 6, 8, 10],
            [0, 8, 5, 6, 8, 10],
            [0, 0, 10, 6, 8, 10],
            [0, 0, 5, 12, 8, 10],
            [0, 0, 5, 6, 16, 10],
            [0, 0, 5, 6, 8, 16],
        ]
    else:
        raise ValueError(f"no small extremal topology for k={k}; supported: 3, 4, 5, 6")
    return Topology.from_rows(rows)


def extremal_grid(m: int) -> Topology:
    """Tiered network on m**2 users arranged in m groups of m.

    Group g (1-based) has direct strength g; its transmitters hit every
    receiver in groups 1..g at strength g-1 and no one above.  The gap of
    exactly 1 between a tier's direct links and its own interference is
    what lets a graded power backoff serve every user at once, while any
    binary choice drowns all lower tiers.
    """
    if m < 1:
        raise ValueError(f"grid parameter must be positive, got m={m}")
    k = m * m
    rows = [[Fraction(0)] * k for _ in range(k)]
    for j in range(k):
        g = j // m + 1
        for i in range(k):
            h = i // m + 1
            if i == j:
                rows[i][j] = Fraction(g)
            elif h <= g:
                rows[i][j] = Fraction(g - 1)
    return Topology(tuple(tuple(row) for row in rows))


def append_isolated_user(topology: Topology, eps: Fraction) -> Topology:
    """Add one user with direct strength eps and no links to anyone else."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    k = topology.k
    zero = Fraction(0)
    rows = [row + (zero,) for row in topology.alpha]
    rows.append(tuple([zero] * k + [eps]))
    return Topology(tuple(rows))


def lift_cross_links(
    topology: Topology, allocation: PowerAllocation, subset: Iterable[int]
) -> Topology:
    """Raise cross links inside ``subset`` to each receiver's worst level.

    Within the subset, every interfering link at receiver i is lifted so
    that under ``allocation`` it arrives exactly at the receiver's current
    dominant interference level (clamped at noise).  Entries never
    decrease, and the per-user GDoF of the subset under ``allocation`` is
    unchanged because only non-dominant links move.
    """
    users = sorted(set(subset))
    k = topology.k
    if allocation.k != k:
        raise ValueError(
            f"allocation has {allocation.k} users, topology has {k}"
        )
    for i in users:
        if not 0 <= i < k:
            raise ValueError(f"user {i} out of range for {k} users")
        if not allocation.is_on(i):
            raise ValueError(f"user {i} is off; every user in the subset must transmit")
    member = set(users)
    zero = Fraction(0)
    rows = [list(row) for row in topology.alpha]
    for i in users:
        peak = zero
        for j in users:
            if j == i:
                continue
            level = topology.alpha[i][j] + allocation[j]  # type: ignore[operator]
            if level > peak:
                peak = level
        for j in users:
            if j == i:
                continue
            rows[i][j] = peak - allocation[j]  # type: ignore[operator]
    return Topology(tuple(tuple(row) for row in rows))
