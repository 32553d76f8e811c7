"""Exact rational linear programming, enough for the decision procedures.

A small dense two-phase simplex over ``fractions.Fraction`` with Bland's
anti-cycling rule.  Variables are free by default and are split internally
as x = x+ - x-; constraints are <=, >= or == rows.  The sizes here are tiny
(tens of variables), so exactness beats sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import rat

LESS_EQUAL = "<="
GREATER_EQUAL = ">="
EQUAL = "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class FeasibilitySystem:
    """A finite system of linear constraints over free rational variables,
    with an optional linear objective to maximise."""

    variables: int
    constraints: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    objective: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.variables <= 0:
            raise ValueError("need at least one variable")
        normalized = []
        for coeffs, sense, rhs in self.constraints:
            coeffs = tuple(rat(c) for c in coeffs)
            if len(coeffs) != self.variables:
                raise ValueError("constraint length does not match variable count")
            if sense not in (LESS_EQUAL, GREATER_EQUAL, EQUAL):
                raise ValueError(f"unknown constraint sense {sense!r}")
            normalized.append((coeffs, sense, rat(rhs)))
        object.__setattr__(self, "constraints", tuple(normalized))
        if self.objective is not None:
            obj = tuple(rat(c) for c in self.objective)
            if len(obj) != self.variables:
                raise ValueError("objective length does not match variable count")
            object.__setattr__(self, "objective", obj)


@dataclass(frozen=True)
class LpResult:
    status: str
    objective_value: Fraction | None
    solution: tuple[Fraction, ...] | None


def _pivot(tableau: list[list[Fraction]], row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [x / piv for x in tableau[row]]
    pivot_row = tableau[row]
    for r, current in enumerate(tableau):
        if r != row and current[col] != 0:
            f = current[col]
            tableau[r] = [x - f * y for x, y in zip(current, pivot_row)]


def _run_simplex(tableau: list[list[Fraction]], basis: list[int], width: int) -> str:
    """Maximise with Bland's rule.  The last tableau row is the objective in
    the invariant form objective(x) = sum_j row[j] x_j - row[-1] for every x
    satisfying the constraint rows, so the current value is -row[-1] and any
    positive reduced cost offers improvement."""
    while True:
        obj = tableau[-1]
        enter = next((j for j in range(width) if obj[j] > 0), None)
        if enter is None:
            return OPTIMAL
        leave = None
        best_ratio = None
        best_basis = None
        for i in range(len(tableau) - 1):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < best_basis)
                ):
                    best_ratio = ratio
                    best_basis = basis[i]
                    leave = i
        if leave is None:
            return UNBOUNDED
        _pivot(tableau, leave, enter)
        basis[leave] = enter


def lp_max(system: FeasibilitySystem) -> LpResult:
    """Solve the system, maximising its objective (feasibility only when the
    objective is None).  Returns status optimal, infeasible or unbounded; on
    optimal, an exact optimal solution and objective value."""
    n = system.variables
    # Build the standard-form tableau: split variables, add slacks, then
    # artificials for rows that lack a ready basic column.
    cons = list(system.constraints)
    m = len(cons)
    split = 2 * n
    slack_count = sum(1 for _, sense, _ in cons if sense != EQUAL)
    width_no_art = split + slack_count
    body: list[list[Fraction]] = []
    senses_flipped = []
    slack_index = 0
    slack_cols = {}
    for i, (coeffs, sense, rhs) in enumerate(cons):
        row = [Fraction(0)] * width_no_art
        for j, c in enumerate(coeffs):
            row[2 * j] = c
            row[2 * j + 1] = -c
        flip = rhs < 0
        if flip:
            row = [-x for x in row]
            rhs = -rhs
            sense = {LESS_EQUAL: GREATER_EQUAL, GREATER_EQUAL: LESS_EQUAL, EQUAL: EQUAL}[sense]
        if sense != EQUAL:
            col = split + slack_index
            row[col] = Fraction(1) if sense == LESS_EQUAL else Fraction(-1)
            slack_cols[i] = (col, sense)
            slack_index += 1
        body.append(row + [rhs])
        senses_flipped.append(sense)
    # basis: slack column for <= rows, artificial otherwise
    art_cols = []
    basis = []
    for i, sense in enumerate(senses_flipped):
        if sense == LESS_EQUAL:
            basis.append(slack_cols[i][0])
        else:
            art_cols.append(i)
            basis.append(None)  # placeholder, filled next
    total_width = width_no_art + len(art_cols)
    for k, i in enumerate(art_cols):
        col = width_no_art + k
        basis[i] = col
    tableau = []
    for i, row in enumerate(body):
        extended = row[:-1] + [Fraction(0)] * len(art_cols) + [row[-1]]
        if basis[i] >= width_no_art:
            extended[basis[i]] = Fraction(1)
        tableau.append(extended)
    # phase 1: maximise -(sum of artificials)
    phase1 = [Fraction(0)] * total_width + [Fraction(0)]
    for k in range(len(art_cols)):
        phase1[width_no_art + k] = Fraction(-1)
    tableau.append(phase1)
    for i in range(m):
        if basis[i] >= width_no_art:
            # price out the basic artificial so its reduced cost starts at 0
            tableau[-1] = [x + y for x, y in zip(tableau[-1], tableau[i])]
    status = _run_simplex(tableau, basis, total_width)
    if status != OPTIMAL:
        raise RuntimeError("phase 1 cannot be unbounded")
    if -tableau[-1][-1] != 0:
        return LpResult(status=INFEASIBLE, objective_value=None, solution=None)
    # drive any zero-valued artificials out of the basis
    drop_rows = []
    for i in range(m):
        if basis[i] >= width_no_art:
            col = next((j for j in range(width_no_art) if tableau[i][j] != 0), None)
            if col is None:
                drop_rows.append(i)
            else:
                _pivot(tableau, i, col)
                basis[i] = col
    if drop_rows:
        tableau = [row for i, row in enumerate(tableau[:-1]) if i not in drop_rows] + [
            tableau[-1]
        ]
        basis = [b for i, b in enumerate(basis) if i not in drop_rows]
        m = len(basis)
    # strip artificial columns
    tableau = [row[:width_no_art] + [row[-1]] for row in tableau]
    # phase 2 objective
    if system.objective is None:
        objective = [Fraction(0)] * n
    else:
        objective = list(system.objective)
    obj_row = [Fraction(0)] * width_no_art + [Fraction(0)]
    for j, c in enumerate(objective):
        obj_row[2 * j] = c
        obj_row[2 * j + 1] = -c
    tableau[-1] = obj_row
    for i in range(m):
        c = tableau[-1][basis[i]]
        if c != 0:
            tableau[-1] = [x - c * y for x, y in zip(tableau[-1], tableau[i])]
    status = _run_simplex(tableau, basis, width_no_art)
    if status == UNBOUNDED:
        return LpResult(status=UNBOUNDED, objective_value=None, solution=None)
    values = [Fraction(0)] * width_no_art
    for i in range(m):
        values[basis[i]] = tableau[i][-1]
    solution = tuple(values[2 * j] - values[2 * j + 1] for j in range(n))
    if system.objective is None:
        return LpResult(status=OPTIMAL, objective_value=None, solution=solution)
    value = sum(c * x for c, x in zip(system.objective, solution))
    return LpResult(status=OPTIMAL, objective_value=value, solution=solution)
