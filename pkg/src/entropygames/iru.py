"""Independent-row-uncertainty sets of non-negative matrices.

An IruSet fixes, for each row index, a finite set of candidate rows; its
members are all matrices assembled by picking one candidate per row,
independently.  This product structure is what every decision procedure in
the package exploits: a set with row sets of sizes s_1..s_n has
s_1 * ... * s_n members but is described by only s_1 + ... + s_n rows.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from . import realroots
from .linalg import (
    DEFAULT_RADIUS_TOL,
    Matrix,
    RadiusEstimate,
    rat,
    spectral_radius,
)

DEFAULT_ENUM_CAP = 10**6
ENUM_CAP_ENV = "ENTROPYGAMES_ENUM_CAP"


class EnumerationCapError(ValueError):
    """Raised when a member enumeration would exceed the configured cap."""


def resolve_enum_cap(cap=None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(ENUM_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class RowSet:
    """A finite set of candidate rows, deduplicated and kept in lexicographic
    order so equal sets compare equal.  Entries must be non-negative; zero
    rows are allowed."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        cleaned = {tuple(rat(x) for x in row) for row in self.rows}
        if not cleaned:
            raise ValueError("row set must contain at least one row")
        rows = tuple(sorted(cleaned))
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("rows of differing lengths in one row set")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("row sets hold non-negative rows only")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows[0])

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for r in self.rows for x in r)

    def __contains__(self, row) -> bool:
        probe = tuple(rat(x) for x in row)
        return probe in self.rows

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class IruSet:
    """Independent-row-uncertainty set: one RowSet per row index."""

    row_sets: tuple[RowSet, ...]

    def __post_init__(self):
        sets = tuple(
            rs if isinstance(rs, RowSet) else RowSet(tuple(rs)) for rs in self.row_sets
        )
        if not sets:
            raise ValueError("need at least one row set")
        width = sets[0].dim
        if any(rs.dim != width for rs in sets):
            raise ValueError("all row sets must share the same row length")
        object.__setattr__(self, "row_sets", sets)

    @property
    def n_rows(self) -> int:
        return len(self.row_sets)

    @property
    def n_cols(self) -> int:
        return self.row_sets[0].dim

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @property
    def size(self) -> int:
        total = 1
        for rs in self.row_sets:
            total *= rs.size
        return total

    @property
    def is_positive(self) -> bool:
        return all(rs.is_positive for rs in self.row_sets)

    def member(self, choice) -> Matrix:
        if len(choice) != self.n_rows:
            raise ValueError("one row choice per row index required")
        return Matrix(
            tuple(self.row_sets[i].rows[k] for i, k in enumerate(choice))
        )

    def contains_matrix(self, m: Matrix) -> bool:
        if m.rows != self.n_rows or m.cols != self.n_cols:
            return False
        return all(m.row(i) in self.row_sets[i] for i in range(self.n_rows))


def iru_set(row_sets) -> IruSet:
    """Convenience constructor accepting nested plain lists."""
    return IruSet(tuple(RowSet(tuple(rs)) for rs in row_sets))


def enumerate_members(s: IruSet, cap=None):
    """Yield every member matrix in lexicographic order of row choices.

    Raises EnumerationCapError up front when the member count exceeds the
    cap (argument, else the ENTROPYGAMES_ENUM_CAP environment variable, else
    one million)."""
    limit = resolve_enum_cap(cap)
    if s.size > limit:
        raise EnumerationCapError(
            f"{s.size} members exceed the enumeration cap of {limit}"
        )
    for rows in itertools.product(*(rs.rows for rs in s.row_sets)):
        yield Matrix(rows)


def right_product(s: IruSet, b: Matrix) -> IruSet:
    """The IruSet whose row sets are {r . b : r in S_i}: multiplying every
    member on the right by b preserves the independent-row structure.
    Duplicate product rows collapse, so the result can be strictly smaller."""
    if s.n_cols != b.rows:
        raise ValueError("dimension mismatch in right product")
    bt = list(zip(*b.data))
    produced = []
    for rs in s.row_sets:
        rows = tuple(
            tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
            for row in rs.rows
        )
        produced.append(RowSet(rows))
    return IruSet(tuple(produced))


@dataclass(frozen=True)
class RadiusPair:
    """Extremal spectral radii over the members of a square IruSet, with
    certified enclosures and the first member attaining each extreme."""

    jsr: RadiusEstimate
    jssr: RadiusEstimate
    argmax: Matrix
    argmin: Matrix


def _exact_less(m_a: Matrix, est_a: RadiusEstimate, m_b: Matrix, est_b: RadiusEstimate) -> bool:
    """rho(a) < rho(b), decided by enclosures first and Sturm on a tie."""
    if est_a.upper < est_b.lower:
        return True
    if est_a.lower > est_b.upper:
        return False
    return realroots.compare_radii(m_a, m_b) < 0


def jsr_jssr(s: IruSet, tol=DEFAULT_RADIUS_TOL, cap=None) -> RadiusPair:
    """Joint spectral radius (max member radius) and joint spectral subradius
    (min member radius) of a finite IruSet, by certified enumeration.

    Under independent row uncertainty both extremes are attained by single
    members, so enumeration plus exact comparison settles them.  Ties keep
    the lexicographically first member."""
    if not s.is_square:
        raise ValueError("spectral radii need square matrices")
    best_max: tuple[Matrix, RadiusEstimate] | None = None
    best_min: tuple[Matrix, RadiusEstimate] | None = None
    for m in enumerate_members(s, cap):
        est = spectral_radius(m, tol)
        if best_max is None or _exact_less(best_max[0], best_max[1], m, est):
            best_max = (m, est)
        if best_min is None or _exact_less(m, est, best_min[0], best_min[1]):
            best_min = (m, est)
    return RadiusPair(
        jsr=best_max[1], jssr=best_min[1], argmax=best_max[0], argmin=best_min[0]
    )


def sample_conv(s: IruSet, seed: int) -> Matrix:
    """A reproducible random element of the convex hull of the members.

    The drawing protocol is part of the contract: a ``random.Random(seed)``
    stream is consumed row set by row set in order, drawing one integer
    weight ``randint(0, 999)`` per candidate row (skipped entirely for
    singleton row sets); all-zero draws retry.  Row i of the result is the
    weighted average of the candidates of row set i."""
    import random

    rng = random.Random(seed)
    rows = []
    for rs in s.row_sets:
        if rs.size == 1:
            rows.append(rs.rows[0])
            continue
        while True:
            weights = [rng.randint(0, 999) for _ in range(rs.size)]
            total = sum(weights)
            if total:
                break
        mixed = tuple(
            sum(Fraction(w) * row[j] for w, row in zip(weights, rs.rows)) / total
            for j in range(rs.dim)
        )
        rows.append(mixed)
    return Matrix(tuple(rows))


@dataclass(frozen=True)
class HourglassReport:
    """Outcome of the two alternative clauses tested by hourglass_check.

    For the given u >= 0 and member W with W u = v, exactly one branch per
    clause holds: either every member satisfies the uniform inequality, or
    the reported member witnesses the strict alternative."""

    all_ge: bool
    below_member: Matrix | None
    all_le: bool
    above_member: Matrix | None


def hourglass_check(s: IruSet, u, v, witness: Matrix, cap=None) -> HourglassReport:
    """Decide, for each direction, whether A u compares uniformly with v over
    all members, or produce a one-row modification of the witness breaking
    equality in that direction.

    Preconditions checked exactly: u is non-negative, the witness rows come
    from the respective row sets, and witness . u == v."""
    uu = tuple(rat(x) for x in u)
    vv = tuple(rat(x) for x in v)
    if len(uu) != s.n_cols or len(vv) != s.n_rows:
        raise ValueError("dimension mismatch")
    if any(x < 0 for x in uu):
        raise ValueError("u must be non-negative")
    if not s.contains_matrix(witness):
        raise ValueError("witness rows must come from the row sets")
    images = [sum(x * y for x, y in zip(witness.row(i), uu)) for i in range(s.n_rows)]
    if tuple(images) != vv:
        raise ValueError("witness does not map u to v")

    def scan(direction):
        # first (row set, candidate row) whose image crosses v[i] strictly
        for i, rs in enumerate(s.row_sets):
            for row in rs.rows:
                img = sum(x * y for x, y in zip(row, uu))
                if (direction < 0 and img < vv[i]) or (direction > 0 and img > vv[i]):
                    rows = list(witness.data)
                    rows[i] = row
                    return Matrix(tuple(rows))
        return None

    below = scan(-1)
    above = scan(+1)
    return HourglassReport(
        all_ge=below is None,
        below_member=below,
        all_le=above is None,
        above_member=above,
    )
