"""Shared randomized-instance helpers.

Topologies whose optimum genuinely needs every user are rare under
uniform sampling once cross links can rival direct links, so the
sampler draws cross strengths from a shorter range and rejects until
the strict-positivity test passes.  Acceptance stays near or above
half, measured per user count.
"""

import random
from fractions import Fraction

from tinpower.opc import is_strictly_positive_class
from tinpower.topology import Topology

QUARTER = Fraction(1, 4)

CROSS_CAP = {2: Fraction(3, 2), 3: Fraction(3, 2), 4: Fraction(1), 5: Fraction(1)}


def sample_candidate(k: int, rng: random.Random) -> Topology:
    cap = CROSS_CAP[k]
    cross_levels = int(cap / QUARTER)
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            if i == j:
                row.append(1 + QUARTER * rng.randrange(0, 9))
            else:
                row.append(QUARTER * rng.randrange(0, cross_levels + 1))
        rows.append(row)
    return Topology.from_rows(rows)


def sample_in_class(k: int, rng: random.Random) -> Topology:
    while True:
        t = sample_candidate(k, rng)
        if is_strictly_positive_class(t):
            return t
