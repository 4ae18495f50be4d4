"""Exact linear programming over rationals with Bland's rule.

Dense tableau simplex on fractions.Fraction.  Two entry points: a
general-form solver that accepts free variables and any mix of relations
(two phases, artificials), and a slack-form fast path for problems that
are already ``max c.x, A x <= b, x >= 0`` with nonnegative b, which
starts feasible and needs no first phase.  Bland's smallest-index rule
everywhere, so no cycling and fully deterministic pivots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)

_MAX_PIVOTS = 200_000

RELATIONS = ("<=", ">=", "=")


class InfeasibleError(Exception):
    """No point satisfies every constraint."""


class UnboundedError(Exception):
    """The objective can be pushed past any bound."""


@dataclass(frozen=True)
class LpProblem:
    """Maximize objective . x subject to rows; variables are unrestricted."""

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        if n == 0:
            raise ValueError("objective needs at least one variable")
        for r, (coeffs, rel, _rhs) in enumerate(self.rows):
            if len(coeffs) != n:
                raise ValueError(
                    f"row {r + 1}: expected {n} coefficients, found {len(coeffs)}"
                )
            if rel not in RELATIONS:
                raise ValueError(f"row {r + 1}: unknown relation {rel!r}")


@dataclass(frozen=True)
class LpSolution:
    value: Fraction
    x: tuple[Fraction, ...]


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot_row = tab[row]
    inv = _ONE / pivot_row[col]
    if inv != _ONE:
        tab[row] = pivot_row = [v * inv for v in pivot_row]
    for r, other in enumerate(tab):
        if r == row:
            continue
        factor = other[col]
        if factor:
            tab[r] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _bland(tab: list[list[Fraction]], basis: list[int], ncols: int) -> None:
    """Run primal simplex to optimality; raise UnboundedError otherwise.

    The last tableau row holds negated reduced costs with the objective
    value in its rhs cell; constraint rows keep nonnegative rhs.
    """
    obj = len(tab) - 1
    for _ in range(_MAX_PIVOTS):
        enter = -1
        for j in range(ncols):
            if tab[obj][j] < 0:
                enter = j
                break
        if enter < 0:
            return
        leave = -1
        best = _ZERO
        for r in range(obj):
            coef = tab[r][enter]
            if coef > 0:
                ratio = tab[r][ncols] / coef
                if leave < 0 or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave = r
                    best = ratio
        if leave < 0:
            raise UnboundedError(f"column {enter} increases the objective without limit")
        _pivot(tab, basis, leave, enter)
    raise RuntimeError("pivot limit exceeded; this is a bug")


def simplex_max_leq(
    objective: Sequence[Fraction],
    rows: Sequence[tuple[Sequence[Fraction], Fraction]],
) -> LpSolution:
    """Solve max c.x with A x <= b, x >= 0, requiring b >= 0.

    The slack basis is immediately feasible, so this skips phase one.
    """
    n = len(objective)
    m = len(rows)
    tab: list[list[Fraction]] = []
    for r, (coeffs, rhs) in enumerate(rows):
        if rhs < 0:
            raise ValueError(f"row {r + 1}: negative right-hand side {rhs}")
        slack = [_ZERO] * m
        slack[r] = _ONE
        tab.append([*coeffs, *slack, rhs])
    tab.append([-c for c in objective] + [_ZERO] * m + [_ZERO])
    basis = [n + r for r in range(m)]
    _bland(tab, basis, n + m)
    x = [_ZERO] * n
    for r, b in enumerate(basis):
        if b < n:
            x[b] = tab[r][n + m]
    return LpSolution(value=tab[-1][n + m], x=tuple(x))


def simplex_solve(problem: LpProblem) -> LpSolution:
    """Two-phase exact simplex for the general form.

    Free variables are split into positive and negative parts; >= and =
    rows get artificials that phase one drives to zero.
    """
    n = len(problem.objective)
    nsplit = 2 * n

    norm_rows: list[tuple[list[Fraction], str, Fraction]] = []
    for coeffs, rel, rhs in problem.rows:
        cs = list(coeffs)
        if rhs < 0:
            cs = [-c for c in cs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        norm_rows.append((cs, rel, rhs))

    m = len(norm_rows)
    n_slack = sum(1 for _, rel, _ in norm_rows if rel != "=")
    art_rows = [r for r, (_, rel, _) in enumerate(norm_rows) if rel != "<="]
    n_art = len(art_rows)
    ncols = nsplit + n_slack + n_art

    tab: list[list[Fraction]] = []
    basis: list[int] = []
    slack_at = nsplit
    art_at = nsplit + n_slack
    for cs, rel, rhs in norm_rows:
        row = [_ZERO] * (ncols + 1)
        for j, c in enumerate(cs):
            row[j] = c
            row[n + j] = -c
        row[ncols] = rhs
        if rel == "<=":
            row[slack_at] = _ONE
            basis.append(slack_at)
            slack_at += 1
        elif rel == ">=":
            row[slack_at] = -_ONE
            row[art_at] = _ONE
            basis.append(art_at)
            slack_at += 1
            art_at += 1
        else:
            row[art_at] = _ONE
            basis.append(art_at)
            art_at += 1
        tab.append(row)

    if n_art:
        # Phase one: maximize minus the artificial sum, priced out over the
        # starting basis.
        obj = [_ZERO] * (ncols + 1)
        for j in range(nsplit + n_slack, ncols):
            obj[j] = _ONE
        tab.append(obj)
        for r, b in enumerate(basis):
            factor = tab[-1][b]
            if factor:
                tab[-1] = [a - factor * v for a, v in zip(tab[-1], tab[r])]
        _bland(tab, basis, ncols)
        if tab[-1][ncols] != 0:
            raise InfeasibleError(
                f"constraints admit no solution (artificial residue {-tab[-1][ncols]})"
            )
        tab.pop()
        art_start = nsplit + n_slack
        r = 0
        while r < len(tab):
            if basis[r] >= art_start:
                enter = next(
                    (j for j in range(art_start) if tab[r][j] != 0), None
                )
                if enter is None:
                    tab.pop(r)  # redundant constraint
                    basis.pop(r)
                    continue
                _pivot(tab, basis, r, enter)
            r += 1
        tab = [row[:art_start] + [row[ncols]] for row in tab]
        ncols = art_start

    obj = [_ZERO] * (ncols + 1)
    for j, c in enumerate(problem.objective):
        obj[j] = -c
        obj[n + j] = c
    tab.append(obj)
    for r, b in enumerate(basis):
        factor = tab[-1][b]
        if factor:
            tab[-1] = [a - factor * v for a, v in zip(tab[-1], tab[r])]
    _bland(tab, basis, ncols)

    x = [_ZERO] * nsplit
    for r, b in enumerate(basis):
        if b < nsplit:
            x[b] = tab[r][ncols]
    solution = tuple(x[j] - x[n + j] for j in range(n))
    return LpSolution(value=tab[-1][ncols], x=solution)
