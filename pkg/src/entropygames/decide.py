"""LP-backed decision procedures for extremal spectral radii.

For a square IruSet S with row sets S_1..S_n and a rational threshold alpha,
the two primitive questions are

* ``jsr(S) < alpha``: certified by a positive vector v with r . v < alpha v_i
  for every candidate row r of every row set i (a strict common
  contraction);
* ``jssr(S) >= alpha``: certified by a non-negative non-zero v with
  r . v >= alpha v_i for all candidate rows (a common expansion).

Both are single LPs thanks to the independent-row structure; strictness is
encoded by maximising a slack variable (for the first) or by pinning one
coordinate of v to at least 1 (for the second).  The non-strict variant of
the first and the strict variant of the second hold with the analogous
non-strict/strict systems only for strictly positive sets, and the
procedures refuse to answer otherwise.

Matrix multiplication game thresholds reduce to these: the minimising player
can commit to one matrix choice, and for a fixed choice the product set is
again an IruSet by ``right_product``.  Certificates carry the chosen matrix
so verification stays a one-pass exact check.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .iru import IruSet, enumerate_members, right_product
from .linalg import Matrix, one_norm, rat
from .lp import (
    EQUAL,
    FeasibilitySystem,
    GREATER_EQUAL,
    LESS_EQUAL,
    OPTIMAL,
    lp_max,
)

JSR_LT = "jsr_lt"
JSR_LE = "jsr_le"
JSSR_GT = "jssr_gt"
JSSR_GE = "jssr_ge"
MM_LT = "mm_lt"
MM_LE = "mm_le"
MM_GE = "mm_ge"

_CERTIFICATE_KINDS = (JSR_LT, JSR_LE, JSSR_GT, JSSR_GE, MM_LT, MM_LE, MM_GE)


class PositivityRequiredError(ValueError):
    """Raised by the non-strict-upper / strict-lower deciders when the input
    sets are not entrywise positive; the LP characterisations are only
    equivalences under positivity."""


@dataclass(frozen=True)
class Certificate:
    """A self-contained witness for one threshold decision.

    ``vector`` is the LP witness; ``chosen_matrix`` is the committed matrix
    for game-level (mm_*) kinds and None otherwise.  The threshold is not
    stored: verification always receives it explicitly, so a certificate can
    be re-checked against any threshold a caller cares to try."""

    kind: str
    vector: tuple[Fraction, ...]
    chosen_matrix: Matrix | None = None

    def __post_init__(self):
        if self.kind not in _CERTIFICATE_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        object.__setattr__(self, "vector", tuple(rat(x) for x in self.vector))


def _require_square(s: IruSet):
    if not s.is_square:
        raise ValueError("threshold decisions need square matrices")


def _strict_contraction_lp(s: IruSet, alpha: Fraction):
    """max eps s.t. r . v + eps <= alpha v_i, v_i >= 1, eps <= 1."""
    n = s.n_rows
    cons = []
    for i, rs in enumerate(s.row_sets):
        for row in rs.rows:
            coeffs = [row[j] - (alpha if j == i else 0) for j in range(n)]
            coeffs.append(Fraction(1))
            cons.append((tuple(coeffs), LESS_EQUAL, Fraction(0)))
    for i in range(n):
        floor = [Fraction(0)] * (n + 1)
        floor[i] = Fraction(1)
        cons.append((tuple(floor), GREATER_EQUAL, Fraction(1)))
    roof = [Fraction(0)] * (n + 1)
    roof[n] = Fraction(1)
    cons.append((tuple(roof), LESS_EQUAL, Fraction(1)))
    objective = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)
    return lp_max(FeasibilitySystem(n + 1, tuple(cons), objective))


def decide_jsr_lt(s: IruSet, alpha, cap=None) -> tuple[bool, Certificate | None]:
    """Is the joint spectral radius of S strictly below alpha?

    Exact: returns (True, certificate) or (False, None).  The certificate
    vector v >= 1 satisfies r . v < alpha v_i for every candidate row."""
    _require_square(s)
    alpha = rat(alpha)
    result = _strict_contraction_lp(s, alpha)
    if result.status != OPTIMAL:
        raise RuntimeError("contraction LP must be bounded and feasible")
    if result.objective_value > 0:
        return True, Certificate(JSR_LT, result.solution[:-1])
    return False, None


def decide_jssr_ge(s: IruSet, alpha, cap=None) -> tuple[bool, Certificate | None]:
    """Is the joint spectral subradius of S at least alpha?

    Exact.  Searches for a non-negative common expansion vector, pinning
    each coordinate in turn to break homogeneity."""
    _require_square(s)
    alpha = rat(alpha)
    n = s.n_rows
    base = []
    for i, rs in enumerate(s.row_sets):
        for row in rs.rows:
            coeffs = tuple(row[j] - (alpha if j == i else 0) for j in range(n))
            base.append((coeffs, GREATER_EQUAL, Fraction(0)))
    for i in range(n):
        nonneg = [Fraction(0)] * n
        nonneg[i] = Fraction(1)
        base.append((tuple(nonneg), GREATER_EQUAL, Fraction(0)))
    for pin in range(n):
        pinned = [Fraction(0)] * n
        pinned[pin] = Fraction(1)
        cons = tuple(base) + ((tuple(pinned), GREATER_EQUAL, Fraction(1)),)
        result = lp_max(FeasibilitySystem(n, cons, None))
        if result.status == OPTIMAL:
            return True, Certificate(JSSR_GE, result.solution)
    return False, None


def decide_jsr_le(s: IruSet, alpha, cap=None) -> tuple[bool, Certificate | None]:
    """Is the joint spectral radius at most alpha?  Positive sets only."""
    _require_square(s)
    if not s.is_positive:
        raise PositivityRequiredError(
            "non-strict upper threshold decided for positive sets only"
        )
    alpha = rat(alpha)
    n = s.n_rows
    cons = []
    for i, rs in enumerate(s.row_sets):
        for row in rs.rows:
            coeffs = tuple(row[j] - (alpha if j == i else 0) for j in range(n))
            cons.append((coeffs, LESS_EQUAL, Fraction(0)))
    for i in range(n):
        floor = [Fraction(0)] * n
        floor[i] = Fraction(1)
        cons.append((tuple(floor), GREATER_EQUAL, Fraction(1)))
    result = lp_max(FeasibilitySystem(n, tuple(cons), None))
    if result.status == OPTIMAL:
        return True, Certificate(JSR_LE, result.solution)
    return False, None


def decide_jssr_gt(s: IruSet, alpha, cap=None) -> tuple[bool, Certificate | None]:
    """Is the joint spectral subradius strictly above alpha?  Positive sets
    only; strictness via a maximised slack as in decide_jsr_lt."""
    _require_square(s)
    if not s.is_positive:
        raise PositivityRequiredError(
            "strict lower threshold decided for positive sets only"
        )
    alpha = rat(alpha)
    n = s.n_rows
    cons = []
    for i, rs in enumerate(s.row_sets):
        for row in rs.rows:
            coeffs = [row[j] - (alpha if j == i else 0) for j in range(n)]
            coeffs.append(Fraction(-1))
            cons.append((tuple(coeffs), GREATER_EQUAL, Fraction(0)))
    for i in range(n):
        floor = [Fraction(0)] * (n + 1)
        floor[i] = Fraction(1)
        cons.append((tuple(floor), GREATER_EQUAL, Fraction(1)))
    roof = [Fraction(0)] * (n + 1)
    roof[n] = Fraction(1)
    cons.append((tuple(roof), LESS_EQUAL, Fraction(1)))
    objective = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)
    result = lp_max(FeasibilitySystem(n + 1, tuple(cons), objective))
    if result.status != OPTIMAL:
        raise RuntimeError("expansion LP must be bounded and feasible")
    if result.objective_value > 0:
        return True, Certificate(JSSR_GT, result.solution[:-1])
    return False, None


def _check_game_shapes(a_set: IruSet, e_set: IruSet):
    if a_set.n_cols != e_set.n_rows or e_set.n_cols != a_set.n_rows:
        raise ValueError(
            "incompatible shapes: need a_set n x m and e_set m x n"
        )


def _mm_lt_probe(args):
    e_set, a_member_rows, alpha = args
    a0 = Matrix(a_member_rows)
    ok, cert = decide_jsr_lt(right_product(e_set, a0), alpha)
    return ok, (cert.vector if cert else None)


def _mm_ge_probe(args):
    a_set, e_member_rows, alpha = args
    e0 = Matrix(e_member_rows)
    ok, cert = decide_jssr_ge(right_product(a_set, e0), alpha)
    return ok, (cert.vector if cert else None)


def _first_hit(probe, jobs, threads):
    """Run probes over the lexicographically ordered jobs, returning the
    first success.  With threads > 1 the evaluation order is parallel but
    the selected index is still the smallest, so results are deterministic."""
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for k, (ok, payload) in enumerate(pool.map(probe, jobs, chunksize=1)):
                if ok:
                    return k, payload
        return None, None
    for k, job in enumerate(jobs):
        ok, payload = probe(job)
        if ok:
            return k, payload
    return None, None


def decide_mm_lt(
    a_set: IruSet, e_set: IruSet, alpha, cap=None, threads=None
) -> tuple[bool, Certificate | None]:
    """Is the matrix multiplication game value strictly below alpha?

    True exactly when the minimiser can commit to one member whose induced
    product set has joint spectral radius below alpha.  The certificate
    carries that matrix and the contraction vector."""
    _check_game_shapes(a_set, e_set)
    alpha = rat(alpha)
    members = list(enumerate_members(a_set, cap))
    jobs = [(e_set, m.data, alpha) for m in members]
    k, vector = _first_hit(_mm_lt_probe, jobs, threads)
    if k is None:
        return False, None
    return True, Certificate(MM_LT, vector, chosen_matrix=members[k])


def decide_mm_ge(
    a_set: IruSet, e_set: IruSet, alpha, cap=None, threads=None
) -> tuple[bool, Certificate | None]:
    """Is the game value at least alpha?  Dual to decide_mm_lt: the
    maximiser commits to one member and the induced product set must have
    joint spectral subradius at least alpha."""
    _check_game_shapes(a_set, e_set)
    alpha = rat(alpha)
    members = list(enumerate_members(e_set, cap))
    jobs = [(a_set, m.data, alpha) for m in members]
    k, vector = _first_hit(_mm_ge_probe, jobs, threads)
    if k is None:
        return False, None
    return True, Certificate(MM_GE, vector, chosen_matrix=members[k])


def decide_mm_le(
    a_set: IruSet, e_set: IruSet, alpha, cap=None, threads=None
) -> tuple[bool, Certificate | None]:
    """Is the game value at most alpha?  Positive sets only (the committed
    product sets are then positive too, which the non-strict decision
    needs)."""
    _check_game_shapes(a_set, e_set)
    if not (a_set.is_positive and e_set.is_positive):
        raise PositivityRequiredError(
            "non-strict game threshold decided for positive sets only"
        )
    alpha = rat(alpha)
    for a0 in enumerate_members(a_set, cap):
        ok, cert = decide_jsr_le(right_product(e_set, a0), alpha)
        if ok:
            return True, Certificate(MM_LE, cert.vector, chosen_matrix=a0)
    return False, None


def _verify_rows(s: IruSet, vector, alpha: Fraction, kind: str) -> bool:
    n = s.n_rows
    if len(vector) != n or s.n_cols != n:
        raise ValueError("certificate vector has the wrong dimension")
    if kind in (JSR_LT, JSR_LE, JSSR_GT):
        if any(x < 1 for x in vector):
            return False
    else:
        if any(x < 0 for x in vector) or max(vector) < 1:
            return False
    for i, rs in enumerate(s.row_sets):
        bound = alpha * vector[i]
        for row in rs.rows:
            img = sum(x * y for x, y in zip(row, vector))
            if kind == JSR_LT and not img < bound:
                return False
            if kind == JSR_LE and not img <= bound:
                return False
            if kind == JSSR_GT and not img > bound:
                return False
            if kind == JSSR_GE and not img >= bound:
                return False
    return True


def verify_certificate(cert: Certificate, a_set: IruSet, e_set=None, alpha=None) -> bool:
    """Re-check a certificate from scratch with exact arithmetic.

    No LP is solved: verification is a single pass over candidate rows (and
    an exact membership check of the chosen matrix for game-level kinds).
    Returns False when any required inequality fails; raises on structural
    mismatches such as wrong dimensions or a missing threshold."""
    if alpha is None:
        raise ValueError("verification needs the threshold alpha")
    alpha = rat(alpha)
    vector = tuple(rat(x) for x in cert.vector)
    if cert.kind in (JSR_LT, JSR_LE, JSSR_GT, JSSR_GE):
        return _verify_rows(a_set, vector, alpha, cert.kind)
    if e_set is None:
        raise ValueError("game-level certificates need both sets")
    _check_game_shapes(a_set, e_set)
    if cert.chosen_matrix is None:
        raise ValueError("game-level certificates carry the committed matrix")
    chosen = cert.chosen_matrix
    if cert.kind in (MM_LT, MM_LE):
        if not a_set.contains_matrix(chosen):
            return False
        inner = {MM_LT: JSR_LT, MM_LE: JSR_LE}[cert.kind]
        return _verify_rows(right_product(e_set, chosen), vector, alpha, inner)
    if cert.kind == MM_GE:
        if not e_set.contains_matrix(chosen):
            return False
        return _verify_rows(right_product(a_set, chosen), vector, alpha, JSSR_GE)
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


@dataclass(frozen=True)
class ValueInterval:
    """A certified rational bracket around a game value: the lower
    certificate proves value >= lower, the upper one proves value < upper."""

    lower: Fraction
    upper: Fraction
    lower_certificate: Certificate
    upper_certificate: Certificate
    bisections: int

    def width(self) -> Fraction:
        return self.upper - self.lower

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


def norm_bound(a_set: IruSet, e_set: IruSet) -> Fraction:
    """max_A ||A|| * max_E ||E|| over members, an upper bound on the game
    value.  Row independence makes the max norm a per-row-set maximum."""
    def set_bound(s: IruSet) -> Fraction:
        return sum((max(one_norm(r) for r in rs.rows) for rs in s.row_sets), Fraction(0))

    return set_bound(a_set) * set_bound(e_set)


def value_bisection(
    a_set: IruSet, e_set: IruSet, tol, cap=None, threads=None
) -> ValueInterval:
    """Bracket the game value to within tol by bisection on the strict-upper
    decision, then re-derive certificates at the final endpoints.

    The maintained exact invariant is lower <= value < upper.  The starting
    upper bound is the product of member norm maxima plus one, so the first
    strict decision is guaranteed true; endpoints stay dyadic rationals."""
    tol = rat(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _check_game_shapes(a_set, e_set)
    lower = Fraction(0)
    upper = Fraction(int(norm_bound(a_set, e_set)) + 1)
    steps = 0
    while upper - lower > tol:
        mid = (lower + upper) / 2
        below, _ = decide_mm_lt(a_set, e_set, mid, cap, threads)
        if below:
            upper = mid
        else:
            lower = mid
        steps += 1
    ge_ok, lower_cert = decide_mm_ge(a_set, e_set, lower, cap, threads)
    lt_ok, upper_cert = decide_mm_lt(a_set, e_set, upper, cap, threads)
    if not (ge_ok and lt_ok):
        raise RuntimeError("bisection invariant violated at the final bracket")
    return ValueInterval(
        lower=lower,
        upper=upper,
        lower_certificate=lower_cert,
        upper_certificate=upper_cert,
        bisections=steps,
    )
