"""Dense primal simplex over exact rationals (or floats as a fallback).

Solves  maximize c.v  subject to  A v <= b, v >= 0  with b >= 0, so the
all-slack basis is feasible and no phase-1 is needed.  Bland's rule keeps
the heavily degenerate margin programs from cycling.  With Fraction
entries and tolerance 0 every returned quantity is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class UnboundedError(Exception):
    """The objective is unbounded above on the feasible region."""


@dataclass(frozen=True)
class SimplexSolution:
    objective: object
    x: tuple
    duals: tuple
    pivots: int


def solve_canonical_max(
    rows: Sequence[Sequence],
    rhs: Sequence,
    cost: Sequence,
    tol=Fraction(0),
) -> SimplexSolution:
    """Run the simplex method on max c.v s.t. rows.v <= rhs, v >= 0.

    Entries may be Fractions (tol 0, exact) or floats (tol ~1e-9).
    Returns the optimum, a primal solution, and the dual values of the
    constraints (reduced costs on the slack columns).
    """
    m = len(rows)
    n = len(cost)
    zero = tol * 0
    one = zero + 1
    for i, b in enumerate(rhs):
        if b < zero:
            raise ValueError(f"canonical form needs rhs >= 0, row {i} has {b}")
        if len(rows[i]) != n:
            raise ValueError(f"row {i} has {len(rows[i])} entries, expected {n}")

    width = n + m + 1
    tableau = []
    for i in range(m):
        row = list(rows[i]) + [zero] * m + [rhs[i]]
        row[n + i] = one
        tableau.append(row)
    # objective row stores z_j - c_j; value accumulates in the last cell
    obj = [-c for c in cost] + [zero] * m + [zero]
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        enter = -1
        for j in range(n + m):  # Bland: first improving column
            if obj[j] < -tol:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > tol:
                ratio = tableau[i][width - 1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise UnboundedError(f"column {enter} is unbounded")
        _pivot(tableau, obj, leave, enter, width)
        basis[leave] = enter
        pivots += 1

    x = [zero] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][width - 1]
    duals = tuple(obj[n + i] for i in range(m))
    return SimplexSolution(obj[width - 1], tuple(x), duals, pivots)


def _pivot(tableau, obj, leave: int, enter: int, width: int) -> None:
    pivot_row = tableau[leave]
    inv = 1 / pivot_row[enter]
    for j in range(width):
        pivot_row[j] = pivot_row[j] * inv
    for row in tableau:
        if row is pivot_row:
            continue
        factor = row[enter]
        if factor:
            for j in range(width):
                row[j] = row[j] - factor * pivot_row[j]
    factor = obj[enter]
    if factor:
        for j in range(width):
            obj[j] = obj[j] - factor * pivot_row[j]
