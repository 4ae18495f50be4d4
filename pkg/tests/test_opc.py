import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from tinpower.gdof import sum_gdof
from tinpower.power import PowerAllocation
from tinpower.opc import (
    is_strictly_positive_class,
    solve_opc,
    solve_opc_grid,
    subset_lp,
)
from tinpower.bpc import solve_bpc_gdof
from tinpower.search import random_topology
from tinpower.topology import Topology, append_isolated_user, extremal_small


def test_known_extremal_values():
    expected = {
        3: (3, (0, 0, -1)),
        4: (4, (0, 0, -1, -1)),
        5: (9, (0, 0, -1, -2, -2)),
        6: (41, (0, 0, -5, -6, -8, -10)),
    }
    for k, (value, witness) in expected.items():
        res = solve_opc(extremal_small(k))
        assert res.value == value
        assert res.active_set == frozenset(range(k))
        assert tuple(res.allocation.entries) == tuple(Fraction(w) for w in witness)


def test_three_user_worked_instance():
    t = Topology.from_rows(
        [
            [3, 1, Fraction(1, 2)],
            [Fraction(3, 2), 3, 2],
            [Fraction(1, 2), Fraction(1, 2), 3],
        ]
    )
    res = solve_opc(t)
    assert res.value == Fraction(11, 2)
    # the optimum has several vertices; the returned one must reproduce it
    assert sum_gdof(t, res.allocation).total == Fraction(11, 2)
    assert res.active_set == frozenset({0, 1, 2})
    # the hand allocation from the GDoF tests is one of the ties
    hand = PowerAllocation.of(Fraction(-1, 2), -1, -1)
    assert sum_gdof(t, hand).total == Fraction(11, 2)


def test_subset_lp_singleton():
    t = extremal_small(3)
    got = subset_lp(t, (2,))
    assert got is not None
    value, alloc = got
    assert value == 2
    assert alloc.on_users() == (2,)


def test_subset_lp_pair():
    t = Topology.from_rows([[1, Fraction(1, 4)], [Fraction(1, 4), 1]])
    got = subset_lp(t, (0, 1))
    assert got is not None
    assert got[0] == Fraction(3, 2)


def test_subset_lp_strong_interference_infeasible():
    t = Topology.from_rows([[1, 5], [5, 1]])
    assert subset_lp(t, (0, 1)) is None
    # each user alone is still fine
    assert subset_lp(t, (0,))[0] == 1


def test_subset_lp_rejects_bad_subsets():
    t = extremal_small(3)
    with pytest.raises(ValueError, match="repeated"):
        subset_lp(t, (0, 0))
    with pytest.raises(ValueError, match="out of range"):
        subset_lp(t, (3,))
    with pytest.raises(ValueError, match="at least one"):
        subset_lp(t, ())


def test_value_is_max_over_subset_lps():
    rng = random.Random(12)
    for trial in range(60):
        k = rng.randrange(1, 4)
        t = random_topology(k, Fraction(3), Fraction(1, 4), seed=7000 + trial)
        best = Fraction(0)
        for size in range(1, k + 1):
            for users in combinations(range(k), size):
                got = subset_lp(t, users)
                if got is not None and got[0] > best:
                    best = got[0]
        assert solve_opc(t).value == best


def test_witness_invariants():
    rng = random.Random(99)
    for trial in range(60):
        k = rng.randrange(1, 6)
        t = random_topology(k, Fraction(3), Fraction(1, 4), seed=3000 + trial)
        res = solve_opc(t)
        assert res.outcome.total == res.value
        assert solve_bpc_gdof(t).value <= res.value
        assert res.value <= sum(t.direct(i) for i in range(k))
        assert frozenset(res.allocation.on_users()) == res.active_set
        for i in res.active_set:
            assert res.outcome.per_user[i] > 0
        if res.active_set:
            assert max(res.allocation[i] for i in res.active_set) == 0


def test_relabeling_invariance():
    rng = random.Random(8)
    t = random_topology(4, Fraction(3), Fraction(1, 4), seed=55)
    base = solve_opc(t).value
    for perm in list(permutations(range(4)))[:8]:
        shuffled = Topology.from_rows(
            [[t.alpha[perm[i]][perm[j]] for j in range(4)] for i in range(4)]
        )
        assert solve_opc(shuffled).value == base


def test_all_optima_on_symmetric_tie():
    t = Topology.from_rows([[1, 1], [1, 1]])
    res = solve_opc(t, all_optima=True)
    assert res.value == 1
    assert res.optimal_sets == (frozenset({0}), frozenset({1}))
    # default keeps the field unset
    assert solve_opc(t).optimal_sets is None


def test_isolated_user_adds_exactly_its_strength():
    t = extremal_small(4)
    eps = Fraction(1, 8)
    bigger = append_isolated_user(t, eps)
    assert solve_opc(bigger).value == solve_opc(t).value + eps
    assert solve_bpc_gdof(bigger).value == solve_bpc_gdof(t).value + eps


def test_zero_topology():
    t = Topology.from_rows([[0, 0], [0, 0]])
    res = solve_opc(t)
    assert res.value == 0
    assert res.active_set == frozenset()
    assert res.allocation.on_users() == ()
    assert not is_strictly_positive_class(t)


def test_enumeration_limit_guard():
    t = Topology.from_rows([[1] * 17 for _ in range(17)])
    with pytest.raises(ValueError, match="enumeration limit"):
        solve_opc(t)


def test_membership_on_extremals():
    for k in (3, 4, 5, 6):
        assert is_strictly_positive_class(extremal_small(k))


def test_membership_rejects_dominated_user():
    # the optimum is 1, attainable by either user alone
    t = Topology.from_rows([[1, 0], [3, 1]])
    assert solve_opc(t).value == 1
    assert not is_strictly_positive_class(t)


def test_membership_single_user():
    assert is_strictly_positive_class(Topology.from_rows([[2]]))
    assert not is_strictly_positive_class(Topology.from_rows([[0]]))


def test_grid_solver_matches_exact_on_fixed_instances():
    t = extremal_small(4)
    res = solve_opc_grid(t, Fraction(1, 2), -4)
    assert res.value == 4
    assert res.outcome.total == 4
    t2 = Topology.from_rows([[2, 1, 0], [0, 2, 1], [1, 0, 2]])
    assert solve_opc_grid(t2, Fraction(1, 4), -4).value == solve_opc(t2).value


def test_grid_solver_respects_coarseness():
    # every optimal point here needs a half-step backoff, so the unit
    # grid tops out at 5 while the half grid reaches the true 11/2
    t = Topology.from_rows(
        [
            [3, 1, 0],
            [Fraction(1, 2), Fraction(3, 2), 0],
            [Fraction(1, 2), 1, Fraction(5, 2)],
        ]
    )
    assert solve_opc(t).value == Fraction(11, 2)
    assert solve_opc_grid(t, Fraction(1), -4).value == 5
    assert solve_opc_grid(t, Fraction(1, 2), -4).value == Fraction(11, 2)


def test_grid_solver_validation():
    t = extremal_small(3)
    with pytest.raises(ValueError, match="step"):
        solve_opc_grid(t, Fraction(0), -2)
    with pytest.raises(ValueError, match="floor"):
        solve_opc_grid(t, Fraction(1, 2), 1)
    with pytest.raises(ValueError, match="budget"):
        solve_opc_grid(t, Fraction(1, 64), -6, budget=1000)


def test_grid_solver_matches_nested_loop_oracle():
    from itertools import product

    from tinpower.power import OFF, PowerAllocation

    step, floor = Fraction(1, 2), Fraction(-2)
    levels = [OFF] + [floor + n * step for n in range(int(-floor / step) + 1)]
    rng = random.Random(17)
    for trial in range(25):
        k = rng.randrange(1, 4)
        t = random_topology(k, Fraction(3), Fraction(1, 2), seed=8200 + trial)
        want = max(
            sum_gdof(t, PowerAllocation(tuple(combo))).total
            for combo in product(levels, repeat=k)
        )
        assert solve_opc_grid(t, step, floor).value == want


def test_grid_witness_is_cleaned_up():
    rng = random.Random(3)
    for trial in range(20):
        k = rng.randrange(1, 4)
        t = random_topology(k, Fraction(3), Fraction(1, 2), seed=600 + trial)
        res = solve_opc_grid(t, Fraction(1, 2), -3)
        assert res.outcome.total == res.value
        for i in res.active_set:
            assert res.outcome.per_user[i] > 0
        if res.active_set:
            assert max(res.allocation[i] for i in res.active_set) == 0
