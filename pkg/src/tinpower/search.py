"""Randomized hunt for topologies with a large optimal-to-binary ratio.

Random sampling plus first-improvement hill climbing over single-entry
perturbations, restarted on stagnation.  Work is split into fixed-size
chains with seeds drawn up front from the master seed, so results are
identical no matter how many worker processes consume the chains.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Optional

from .bounds import envelope_holds
from .bpc import solve_bpc_gdof
from .opc import ENUMERATION_LIMIT, solve_opc
from .topology import Topology

_ONE = Fraction(1)


@dataclass(frozen=True)
class SearchReport:
    best_topology: Topology
    best_ratio: Fraction
    evaluations: int
    seed: int
    envelope_ok: bool


def random_topology(
    k: int, max_strength: Fraction, granularity: Fraction, seed: int
) -> Topology:
    """Entries drawn uniformly from the multiples of granularity in range."""
    if k < 1:
        raise ValueError(f"need at least one user, got k={k}")
    max_strength = Fraction(max_strength)
    granularity = Fraction(granularity)
    if max_strength < 0:
        raise ValueError(f"max_strength must be nonnegative, got {max_strength}")
    if granularity <= 0:
        raise ValueError(f"granularity must be positive, got {granularity}")
    levels = int(max_strength / granularity) + 1
    rng = random.Random(seed)
    rows = tuple(
        tuple(granularity * rng.randrange(levels) for _j in range(k))
        for _i in range(k)
    )
    return Topology(rows)


def ratio(topology: Topology, *, limit: int = ENUMERATION_LIMIT) -> Fraction:
    """Optimal over binary sum GDoF; defined as 1 for all-silent networks."""
    binary = solve_bpc_gdof(topology, limit=limit).value
    if binary == 0:
        return _ONE
    return solve_opc(topology, limit=limit).value / binary


def _perturbed(
    topology: Topology, i: int, j: int, delta: Fraction
) -> Optional[Topology]:
    old = topology.alpha[i][j]
    new = old + delta
    if new < 0:
        new = Fraction(0)
    if new == old:
        return None
    rows = [list(row) for row in topology.alpha]
    rows[i][j] = new
    return Topology(tuple(tuple(row) for row in rows))


def _run_chain(
    args: tuple[int, int, Fraction, int, Fraction, Fraction, Optional[Topology]],
) -> tuple[Fraction, Topology, int, bool]:
    k, budget, step, seed, max_strength, granularity, start = args
    rng = random.Random(seed)
    moves = [
        (i, j, sign * step)
        for i in range(k)
        for j in range(k)
        for sign in (1, -1)
    ]
    evals = 0
    all_ok = True

    def evaluate(t: Topology) -> Fraction:
        nonlocal evals, all_ok
        v = ratio(t)
        evals += 1
        if not envelope_holds(v, k):
            all_ok = False
        return v

    current = start if start is not None else random_topology(
        k, max_strength, granularity, rng.randrange(1 << 63)
    )
    cur_ratio = evaluate(current)
    best, best_ratio = current, cur_ratio
    while evals < budget:
        rng.shuffle(moves)
        improved = False
        for i, j, delta in moves:
            if evals >= budget:
                break
            candidate = _perturbed(current, i, j, delta)
            if candidate is None:
                continue
            v = evaluate(candidate)
            if v > cur_ratio:
                current, cur_ratio = candidate, v
                improved = True
                break
        if cur_ratio > best_ratio:
            best, best_ratio = current, cur_ratio
        if not improved and evals < budget:
            current = random_topology(
                k, max_strength, granularity, rng.randrange(1 << 63)
            )
            cur_ratio = evaluate(current)
            if cur_ratio > best_ratio:
                best, best_ratio = current, cur_ratio
    return best_ratio, best, evals, all_ok


def local_search(
    k: int,
    budget: int,
    step: Fraction,
    seed: int,
    *,
    start: Optional[Topology] = None,
    max_strength: Fraction = Fraction(3),
    granularity: Optional[Fraction] = None,
    processes: Optional[int] = None,
) -> SearchReport:
    """Hill-climb for high-ratio topologies within an evaluation budget.

    The budget is divided into chains whose seeds come from the master
    seed up front; ``processes`` only changes who runs the chains, never
    the outcome.  ``start`` seeds the first chain's climb.
    """
    if k < 1:
        raise ValueError(f"need at least one user, got k={k}")
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    step = Fraction(step)
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if start is not None and start.k != k:
        raise ValueError(f"start topology has {start.k} users, expected {k}")
    granularity = step if granularity is None else Fraction(granularity)
    chain_budget = min(budget, 40 * k)
    n_chains = -(-budget // chain_budget)
    master = random.Random(seed)
    chain_seeds = [master.randrange(1 << 63) for _ in range(n_chains)]
    tasks = []
    remaining = budget
    for c in range(n_chains):
        b = min(chain_budget, remaining)
        remaining -= b
        tasks.append(
            (k, b, step, chain_seeds[c], Fraction(max_strength), granularity,
             start if c == 0 else None)
        )
    if processes is not None and processes > 1 and len(tasks) > 1:
        with Pool(processes) as pool:
            outcomes = pool.map(_run_chain, tasks)
    else:
        outcomes = [_run_chain(t) for t in tasks]
    best_ratio, best, evals, all_ok = outcomes[0]
    for chain_ratio, chain_best, chain_evals, chain_ok in outcomes[1:]:
        evals += chain_evals
        all_ok = all_ok and chain_ok
        if chain_ratio > best_ratio:
            best_ratio, best = chain_ratio, chain_best
    envelope_ok = all_ok and envelope_holds(best_ratio, k)
    return SearchReport(
        best_topology=best,
        best_ratio=best_ratio,
        evaluations=evals,
        seed=seed,
        envelope_ok=envelope_ok,
    )
