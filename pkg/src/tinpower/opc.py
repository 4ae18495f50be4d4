"""Optimal power control for sum GDoF, solved exactly.

The optimum splits over supports: for each candidate set of transmitting
users there is a small LP giving the best sum GDoF that keeps every
supported user at nonnegative GDoF, and the overall optimum is the best
over feasible supports.  Supports are enumerated largest first behind a
cheap upper bound, a difference-constraint feasibility filter, and an
incumbent seeded from binary power control.  The winning support is
re-solved through the general-form simplex and both values must agree,
keeping the fast path honest.

Strong cross links can make a support infeasible outright (nobody can
hold every user above water); such supports are skipped, they simply
cannot carry the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .bpc import _scaled_matrix, solve_bpc_gdof
from .gdof import GdofOutcome, sum_gdof
from .power import OFF, PowerAllocation, normalize_power
from .simplex import (
    InfeasibleError,
    LpProblem,
    UnboundedError,
    simplex_max_leq,
    simplex_solve,
)
from .topology import Topology

ENUMERATION_LIMIT = 16

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class OpcResult:
    """Exact optimum with a normalized witness.

    ``allocation`` is off exactly outside ``active_set`` and every active
    user gets strictly positive GDoF.  ``optimal_sets`` lists every
    support whose LP attains the optimum (requested explicitly, since
    collecting ties costs the pruning its teeth).
    """

    value: Fraction
    allocation: PowerAllocation
    active_set: frozenset[int]
    outcome: GdofOutcome
    optimal_sets: Optional[tuple[frozenset[int], ...]] = None


def _validate_subset(k: int, subset: Sequence[int]) -> tuple[int, ...]:
    users = tuple(sorted(set(subset)))
    if not users:
        raise ValueError("subset must name at least one user")
    if len(users) != len(tuple(subset)):
        raise ValueError(f"subset has repeated users: {tuple(subset)}")
    for i in users:
        if not 0 <= i < k:
            raise ValueError(f"user {i} out of range for {k} users")
    return users


def subset_lp(
    topology: Topology, subset: Sequence[int]
) -> Optional[tuple[Fraction, PowerAllocation]]:
    """Best sum GDoF with exactly ``subset`` transmitting, all nonnegative.

    Returns the value and a maximizing allocation (off outside the
    subset), or None when no allocation keeps every supported user at
    nonnegative GDoF, which happens under sufficiently strong mutual
    interference.
    """
    users = _validate_subset(topology.k, subset)
    n = len(users)
    alpha = topology.alpha
    # variables: backoffs r_0..r_{n-1}, then interference envelopes t_0..t_{n-1}
    nv = 2 * n
    rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = []

    def unit(index: int, sign: int) -> list[Fraction]:
        row = [_ZERO] * nv
        row[index] = _ONE if sign > 0 else -_ONE
        return row

    for p in range(n):
        rows.append((tuple(unit(p, +1)), "<=", _ZERO))  # r_p <= 0
        rows.append((tuple(unit(n + p, +1)), ">=", _ZERO))  # t_p >= 0
    for p, i in enumerate(users):
        for q, k in enumerate(users):
            if k == i:
                continue
            row = [_ZERO] * nv
            row[n + p] = _ONE
            row[q] = -_ONE
            rows.append((tuple(row), ">=", alpha[i][k]))  # t_p >= a_ik + r_q
        row = [_ZERO] * nv
        row[p] = _ONE
        row[n + p] = -_ONE
        rows.append((tuple(row), ">=", -alpha[i][i]))  # a_ii + r_p - t_p >= 0
    objective = tuple([_ONE] * n + [-_ONE] * n)
    try:
        solution = simplex_solve(LpProblem(objective=objective, rows=tuple(rows)))
    except InfeasibleError:
        return None
    base = sum((alpha[i][i] for i in users), _ZERO)
    levels: list[object] = [OFF] * topology.k
    for p, i in enumerate(users):
        levels[i] = solution.x[p]
    return base + solution.value, PowerAllocation(tuple(levels))


def _upper_bound(a: list[list[int]], users: tuple[int, ...]) -> int:
    """Direct-strength total minus a greedy matching of pair penalties.

    Any two supported users i, j satisfy d_i + d_j <= a_ii + a_jj - a_ij
    - a_ji because each one's interference envelope covers the other, so
    disjoint pairs give a valid deduction.
    """
    total = sum(a[i][i] for i in users)
    if len(users) < 2:
        return total
    pens = []
    for x in range(len(users)):
        for y in range(x + 1, len(users)):
            i, j = users[x], users[y]
            p = a[i][j] + a[j][i]
            if p > 0:
                pens.append((p, i, j))
    pens.sort(reverse=True)
    used: set[int] = set()
    for p, i, j in pens:
        if i not in used and j not in used:
            total -= p
            used.add(i)
            used.add(j)
    return total


def _support_feasible(a: list[list[int]], users: tuple[int, ...]) -> bool:
    """Difference-constraint check that some allocation keeps all above water.

    With x_i = -r_i the system is x_i <= a_ii, x_i >= 0, and
    x_i - x_k <= a_ii - a_ik; Bellman-Ford finds a negative cycle exactly
    when it has no solution.
    """
    n = len(users)
    edges: list[tuple[int, int, int]] = []
    for p, i in enumerate(users):
        edges.append((n, p, a[i][i]))  # x_i - 0 <= a_ii
        edges.append((p, n, 0))  # 0 - x_i <= 0
        for q, k in enumerate(users):
            if k != i:
                edges.append((q, p, a[i][i] - a[i][k]))
    dist = [0] * (n + 1)
    for round_ in range(n + 1):
        changed = False
        for u, v, w in edges:
            alt = dist[u] + w
            if alt < dist[v]:
                dist[v] = alt
                changed = True
        if not changed:
            return True
    return False


def _dual_value(a: list[list[int]], users: tuple[int, ...]) -> Optional[Fraction]:
    """Scaled subset value via the LP dual, which starts feasible at zero.

    Unbounded dual means infeasible support.  Pair variables y_ik price
    the interference-cover constraints, z_i the nonnegative-GDoF caps.
    """
    n = len(users)
    if n == 1:
        return Fraction(a[users[0]][users[0]])
    pairs = [(p, q) for p in range(n) for q in range(n) if p != q]
    npairs = len(pairs)
    ncols = npairs + n
    objective = [Fraction(a[users[p]][users[q]]) for p, q in pairs]
    objective += [Fraction(-a[i][i]) for i in users]
    rows: list[tuple[list[Fraction], Fraction]] = []
    for q in range(n):  # column of x_q
        row = [_ZERO] * ncols
        for idx, (p, qq) in enumerate(pairs):
            if qq == q:
                row[idx] = _ONE
        row[npairs + q] = -_ONE
        rows.append((row, _ONE))
    for p in range(n):  # column of t_p
        row = [_ZERO] * ncols
        for idx, (pp, _q) in enumerate(pairs):
            if pp == p:
                row[idx] = _ONE
        row[npairs + p] = -_ONE
        rows.append((row, _ONE))
    try:
        solution = simplex_max_leq(objective, rows)
    except UnboundedError:
        return None
    return sum(Fraction(a[i][i]) for i in users) - solution.value


def solve_opc(
    topology: Topology,
    *,
    limit: int = ENUMERATION_LIMIT,
    all_optima: bool = False,
) -> OpcResult:
    """Exact optimal power control over all supports and real backoffs."""
    k = topology.k
    if k > limit:
        raise ValueError(
            f"{k} users exceed the enumeration limit {limit}; raise it explicitly"
        )
    a, scale = _scaled_matrix(topology)
    seed = solve_bpc_gdof(topology, limit=limit).value * scale
    best: Fraction = seed  # binary control never beats the optimum
    achieving: list[tuple[int, ...]] = []
    for size in range(k, 0, -1):
        for users in combinations(range(k), size):
            if _upper_bound(a, users) < best:
                continue
            if size == 1:
                value: Optional[Fraction] = Fraction(a[users[0]][users[0]])
            else:
                if not _support_feasible(a, users):
                    continue
                value = _dual_value(a, users)
                if value is None:
                    continue
            if value > best:
                best = value
                achieving = [users]
            elif value == best:
                achieving.append(users)
    if not achieving:
        raise RuntimeError("no support matched the binary lower bound; this is a bug")
    support = min(achieving)
    value = best / scale
    optimal_sets = (
        tuple(frozenset(s) for s in sorted(achieving)) if all_optima else None
    )

    if value == 0:
        allocation = PowerAllocation(tuple([OFF] * k))
        return OpcResult(
            value=_ZERO,
            allocation=allocation,
            active_set=frozenset(),
            outcome=sum_gdof(topology, allocation),
            optimal_sets=optimal_sets,
        )

    solved = subset_lp(topology, support)
    if solved is None or solved[0] != value:
        raise RuntimeError(
            f"support {support}: general solver got "
            f"{None if solved is None else solved[0]}, enumeration got {value}"
        )
    witness = solved[1]
    active = support
    while True:
        outcome = sum_gdof(topology, witness)
        zeros = [i for i in active if outcome.per_user[i] == 0]
        if not zeros:
            break
        active = tuple(i for i in active if i not in zeros)
        if not active:
            raise RuntimeError("witness lost all users during shrink; this is a bug")
        solved = subset_lp(topology, active)
        if solved is None or solved[0] != value:
            raise RuntimeError(
                f"shrinking to {active} changed the value; this is a bug"
            )
        witness = solved[1]
    witness = normalize_power(witness)
    outcome = sum_gdof(topology, witness)
    if outcome.total != value:
        raise RuntimeError("normalization changed the witness value; this is a bug")
    return OpcResult(
        value=value,
        allocation=witness,
        active_set=frozenset(active),
        outcome=outcome,
        optimal_sets=optimal_sets,
    )


def _reaches(
    a: list[list[int]], universe: list[int], target: Fraction
) -> bool:
    """Whether some support inside ``universe`` attains the scaled target."""
    for size in range(len(universe), 0, -1):
        for users in combinations(universe, size):
            if _upper_bound(a, users) < target:
                continue
            if size == 1:
                value: Optional[Fraction] = Fraction(a[users[0]][users[0]])
            else:
                if not _support_feasible(a, users):
                    continue
                value = _dual_value(a, users)
                if value is None:
                    continue
            if value >= target:
                return True
    return False


def is_strictly_positive_class(
    topology: Topology, *, limit: int = ENUMERATION_LIMIT
) -> bool:
    """Whether every optimal allocation serves every user strictly.

    Equivalent test: no support that omits some user attains the
    optimum.  If one does, that support's witness is an optimal
    allocation with a silent user.
    """
    result = solve_opc(topology, limit=limit)
    if result.value == 0:
        return False
    a, scale = _scaled_matrix(topology)
    target = result.value * scale
    for i in range(topology.k):
        universe = [j for j in range(topology.k) if j != i]
        if not universe:
            continue
        if _reaches(a, universe, target):
            return False
    return True


def solve_opc_grid(
    topology: Topology,
    step: Fraction,
    floor: Fraction,
    *,
    budget: int = 30_000_000,
) -> OpcResult:
    """Brute-force reference: best allocation on a finite backoff grid.

    Every user independently takes off or a multiple of ``step`` in
    [floor, 0].  Runs on integers (vectorized), an arithmetic path with
    nothing in common with the LP solver, which is the point: it is the
    oracle the exact solver is checked against.  The reported witness is
    the first best grid point in odometer order (user 0 most
    significant; off before deep backoff), zero-GDoF users switched off,
    then normalized.
    """
    step = Fraction(step)
    floor = Fraction(floor)
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if floor > 0:
        raise ValueError(f"floor must be at most 0, got {floor}")
    k = topology.k
    n_back = int((-floor) / step)
    levels = n_back + 2  # off, then floor..0 in step increments
    total = levels**k
    if total > budget:
        raise ValueError(
            f"grid has {levels}^{k} = {total} points, over the budget of {budget}"
        )
    denom = 1
    for row in topology.alpha:
        for v in row:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
    denom = denom * step.denominator // math.gcd(denom, step.denominator)
    a = np.array(
        [[int(v * denom) for v in row] for row in topology.alpha], dtype=np.int64
    )
    step_scaled = int(step * denom)
    sentinel = -(1 << 40)
    lv = np.empty(levels, dtype=np.int64)
    lv[0] = sentinel
    for j in range(levels - 1):
        lv[1 + j] = -(n_back - j) * step_scaled
    weight = [levels ** (k - 1 - i) for i in range(k)]

    chunk = 1 << 18
    best_total = -1
    best_index = -1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = [lv[(idx // weight[i]) % levels] for i in range(k)]
        sums = np.zeros(len(idx), dtype=np.int64)
        for i in range(k):
            inr = np.zeros(len(idx), dtype=np.int64)
            for j in range(k):
                if j != i:
                    np.maximum(inr, a[i][j] + cols[j], out=inr)
            sig = a[i][i] + cols[i] - inr
            np.maximum(sig, 0, out=sig)
            sums += sig
        arg = int(np.argmax(sums))
        if int(sums[arg]) > best_total:
            best_total = int(sums[arg])
            best_index = start + arg

    entries: list[object] = []
    for i in range(k):
        digit = (best_index // weight[i]) % levels
        if digit == 0:
            entries.append(OFF)
        else:
            entries.append(-(n_back - (digit - 1)) * step)
    allocation = PowerAllocation(tuple(entries))
    value = Fraction(best_total, denom)

    outcome = sum_gdof(topology, allocation)
    if outcome.total != value:
        raise RuntimeError("vectorized and exact evaluations disagree; this is a bug")
    silent = [i for i in allocation.on_users() if outcome.per_user[i] == 0]
    if silent:
        trimmed = list(allocation.entries)
        for i in silent:
            trimmed[i] = OFF
        allocation = PowerAllocation(tuple(trimmed))
        outcome = sum_gdof(topology, allocation)
        if outcome.total != value:
            raise RuntimeError("muting zero-GDoF users changed the optimum; this is a bug")
    if allocation.on_users():
        allocation = normalize_power(allocation)
        outcome = sum_gdof(topology, allocation)
        if outcome.total != value:
            raise RuntimeError("normalization changed the grid value; this is a bug")
    return OpcResult(
        value=value,
        allocation=allocation,
        active_set=frozenset(allocation.on_users()),
        outcome=outcome,
        optimal_sets=None,
    )
