"""Exact rational matrices and certified spectral radius enclosures.

Everything visible here is exact: matrices and vectors carry
``fractions.Fraction`` entries, and every spectral radius comes back as a
rational interval [lower, upper] together with witness vectors that make both
bounds independently checkable.  Floats appear only inside the power
iteration kernel; its output is rationalised and then re-verified with exact
arithmetic before anything is returned.

The certificates rest on two one-line facts about a non-negative square m:

* if v > 0 and m v <= r v entrywise then rho(m) <= r;
* if v >= 0, v != 0 and m v >= r v entrywise then rho(m) >= r.

``certify_radius_upper`` and ``certify_radius_lower`` are exactly these
checks and accept any vector, so a sceptical caller can re-run them without
trusting the iteration that produced the witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .kernels import power_enclosure

Rational = Fraction

DEFAULT_RADIUS_TOL = Fraction(1, 10**10)
POWER_ITERATION_CAP = 10_000
WITNESS_DENOMINATOR_CAP = 10**12

_FLOAT_KERNEL_SLACK = 4.0


def rat(x) -> Fraction:
    """Coerce ints, ``p/q`` strings, floats and Fractions to Fraction.

    Floats convert to their exact binary value, which is what we want for
    tolerances supplied as literals like 1e-9.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


class ReducibleMatrixError(ValueError):
    """Raised when an operation needs irreducibility but the support graph
    of the matrix splits into several strongly connected components.  The
    components (lists of row indices) ride along for diagnostics."""

    def __init__(self, message, components):
        super().__init__(message)
        self.components = components


@dataclass(frozen=True)
class Vector:
    """Immutable rational vector.  Orientation is advisory metadata; the
    arithmetic helpers below take plain sequences anyway."""

    entries: tuple[Fraction, ...]
    orientation: str = "column"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(rat(x) for x in self.entries))
        if self.orientation not in ("column", "row"):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.entries)

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def to_floats(self) -> list[float]:
        return [float(x) for x in self.entries]

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


@dataclass(frozen=True)
class Matrix:
    """Immutable rational matrix stored as a tuple of row tuples."""

    data: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(rat(x) for x in row) for row in self.data)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", rows)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(
            tuple(
                tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            )
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.data for x in row)

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for row in self.data for x in row)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i]

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def to_floats(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.data]

    def flat_floats(self) -> list[float]:
        return [float(x) for row in self.data for x in row]

    def __str__(self):
        return "\n".join("[" + "  ".join(str(x) for x in row) + "]" for row in self.data)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact matrix product; raises ValueError on a dimension mismatch."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    bt = list(zip(*b.data))
    return Matrix(
        tuple(
            tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
            for row in a.data
        )
    )


def mat_vec(m: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if m.cols != len(v):
        raise ValueError("dimension mismatch in matrix-vector product")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m.data)


def vec_mat(v: Sequence[Fraction], m: Matrix) -> tuple[Fraction, ...]:
    if m.rows != len(v):
        raise ValueError("dimension mismatch in vector-matrix product")
    return tuple(
        sum(v[i] * m.data[i][j] for i in range(m.rows)) for j in range(m.cols)
    )


def one_norm(obj) -> Fraction:
    """Entrywise sum of absolute values, for matrices, Vectors or plain
    sequences.  This is the norm used throughout for growth rates."""
    if isinstance(obj, Matrix):
        return sum((abs(x) for row in obj.data for x in row), Fraction(0))
    if isinstance(obj, Vector):
        return sum((abs(x) for x in obj.entries), Fraction(0))
    return sum((abs(rat(x)) for x in obj), Fraction(0))


@dataclass(frozen=True)
class RadiusEstimate:
    """Certified enclosure lower <= rho <= upper with checkable witnesses.

    ``witness_lower`` satisfies m v >= lower v (v >= 0, v != 0) and
    ``witness_upper`` satisfies m v <= upper v (v > 0).  ``converged`` is
    False when the requested width was not reached within the iteration
    budget; the bounds are still valid in that case, just wider.
    """

    value: float
    lower: Fraction
    upper: Fraction
    iterations: int
    converged: bool
    witness_lower: Vector
    witness_upper: Vector

    def width(self) -> Fraction:
        return self.upper - self.lower


def certify_radius_upper(m: Matrix, rho, v) -> bool:
    """True iff m v <= rho v entrywise.  Requires v strictly positive, which
    is what makes the conclusion rho(m) <= rho sound for non-negative m."""
    rho = rat(rho)
    vv = tuple(rat(x) for x in v)
    if not m.is_square or m.rows != len(vv):
        raise ValueError("dimension mismatch")
    if any(x <= 0 for x in vv):
        raise ValueError("upper-bound certificate needs a strictly positive vector")
    return all(lhs <= rho * x for lhs, x in zip(mat_vec(m, vv), vv))


def certify_radius_lower(m: Matrix, rho, v) -> bool:
    """True iff m v >= rho v entrywise, for v >= 0, v != 0 and rho >= 0."""
    rho = rat(rho)
    vv = tuple(rat(x) for x in v)
    if not m.is_square or m.rows != len(vv):
        raise ValueError("dimension mismatch")
    if any(x < 0 for x in vv) or all(x == 0 for x in vv):
        raise ValueError("lower-bound certificate needs a non-negative non-zero vector")
    if rho < 0:
        raise ValueError("lower-bound certificate needs rho >= 0")
    return all(lhs >= rho * x for lhs, x in zip(mat_vec(m, vv), vv))


def strongly_connected_components(adjacency: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  Returns components as sorted index
    lists, in reverse topological order of the condensation."""
    n = len(adjacency)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_pos = work[-1]
            if child_pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            neighbours = adjacency[node]
            while child_pos < len(neighbours):
                child = neighbours[child_pos]
                child_pos += 1
                if index[child] == -1:
                    work[-1] = (node, child_pos)
                    work.append((child, 0))
                    advanced = True
                    break
                if on_stack[child]:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == node:
                        break
                comp.sort()
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def support_components(m: Matrix) -> list[list[int]]:
    """Strongly connected components of the support digraph (edge i -> j
    iff m[i][j] > 0)."""
    adj = [
        [j for j in range(m.cols) if m.data[i][j] > 0]
        for i in range(m.rows)
    ]
    return strongly_connected_components(adj)


def _rationalize_positive(values: Iterable[float]) -> tuple[Fraction, ...]:
    floor = Fraction(1, WITNESS_DENOMINATOR_CAP)
    out = []
    for x in values:
        f = Fraction(x).limit_denominator(WITNESS_DENOMINATOR_CAP)
        out.append(f if f > 0 else floor)
    return tuple(out)


def _cw_ratios(m: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Exact Collatz-Wielandt ratios min/max of (m v)_i / v_i for v > 0."""
    image = mat_vec(m, v)
    ratios = [lhs / x for lhs, x in zip(image, v)]
    return min(ratios), max(ratios)


def _float_square(cur: list[list[float]]) -> list[list[float]]:
    n = len(cur)
    nxt = [[0.0] * n for _ in range(n)]
    for i in range(n):
        row = cur[i]
        target = nxt[i]
        for k in range(n):
            a = row[k]
            if a != 0.0:
                other = cur[k]
                for j in range(n):
                    target[j] += a * other[j]
    return nxt


def gelfand_bounds(m: Matrix, doublings: int = 5) -> list[float]:
    """Float norms ||m^(2^k)||^(1/2^k) for k = 1..doublings.  Each is an
    upper bound on rho(m) up to rounding and the sequence tightens as k
    grows; used as an independent sanity check on the power iteration, never
    as a certificate.  Powers are renormalised between doublings so nothing
    overflows; the accumulated scale is carried in log space."""
    import math

    cur = m.to_floats()
    out: list[float] = []
    log_scale = 0.0
    power = 1
    for _ in range(doublings):
        nxt = _float_square(cur)
        power *= 2
        log_scale *= 2
        total = sum(x for row in nxt for x in row)
        if total == 0.0:
            out.append(0.0)
            break
        log_norm = log_scale + math.log(total)
        out.append(math.exp(log_norm / power))
        inv = 1.0 / total
        cur = [[x * inv for x in row] for row in nxt]
        log_scale = log_norm
    return out


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination over the rationals; returns the solution list or
    None when the matrix is singular."""
    n = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _submatrix(m: Matrix, indices: list[int]) -> Matrix:
    return Matrix(tuple(tuple(m.data[i][j] for j in indices) for i in indices))


def _kernel_enclosure(m: Matrix, tol_float: float):
    flat = m.flat_floats()
    return power_enclosure(flat, m.rows, tol_float, POWER_ITERATION_CAP)


def _block_path(m: Matrix, tol: Fraction, spent_iterations: int) -> RadiusEstimate:
    """Certified enclosure for matrices where the single-witness iteration
    stalls (reducible support, or clustered moduli).  Works per strongly
    connected block, then stitches exact global bounds back together:

    * lower: the best block lower bound, witnessed by the block vector
      extended with zeros;
    * upper: an exact resolvent solve (r I - m) u = 1 at a trial r just above
      the lower bound, escalating r until u > 0 and m u <= r u hold exactly.
    """
    n = m.rows
    comps = support_components(m)
    total_iters = spent_iterations
    best_lower = Fraction(0)
    best_block: list[int] | None = None
    best_witness: tuple[Fraction, ...] | None = None
    block_upper = Fraction(0)
    tol_float = float(tol) / _FLOAT_KERNEL_SLACK
    for comp in comps:
        if len(comp) == 1:
            i = comp[0]
            lo = hi = m.data[i][i]
            wit = (Fraction(1),)
        else:
            sub = _submatrix(m, comp)
            klo, khi, iters, vf = _kernel_enclosure(sub, tol_float)
            total_iters += iters
            wit = _rationalize_positive(vf)
            lo, hi = _cw_ratios(sub, wit)
        if lo > best_lower or best_block is None:
            best_lower = lo
            best_block = comp
            best_witness = wit
        if hi > block_upper:
            block_upper = hi
    # global lower bound witness: block vector extended by zeros
    lower_vec = [Fraction(0)] * n
    for idx, value in zip(best_block, best_witness):
        lower_vec[idx] = value
    lower_witness = tuple(lower_vec)
    if not certify_radius_lower(m, best_lower, lower_witness):
        # cannot happen: off-block rows get 0 >= lower * 0; keep the guard
        raise RuntimeError("internal certification failure (lower bound)")
    # global upper bound via exact resolvent solve at escalating trial radii
    step = tol / 2 if tol > 0 else Fraction(1, 10**9)
    trial = best_lower + step
    upper = None
    upper_witness = None
    identity = Matrix.identity(n)
    for _ in range(200):
        rows = [
            [trial * identity.data[i][j] - m.data[i][j] for j in range(n)]
            for i in range(n)
        ]
        sol = _solve_exact(rows, [Fraction(1)] * n)
        if sol is not None and all(x > 0 for x in sol):
            if certify_radius_upper(m, trial, sol):
                upper = trial
                upper_witness = tuple(sol)
                break
        step *= 2
        trial = best_lower + step
        if trial > block_upper + step:
            # overshoot far beyond any possible radius; next round certifies
            trial = block_upper + step
    if upper is None:
        raise RuntimeError("resolvent escalation failed to certify an upper bound")
    converged = (upper - best_lower) <= tol
    mid = (best_lower + upper) / 2
    return RadiusEstimate(
        value=float(mid),
        lower=best_lower,
        upper=upper,
        iterations=total_iters,
        converged=converged,
        witness_lower=Vector(lower_witness),
        witness_upper=Vector(upper_witness),
    )


def spectral_radius(m: Matrix, tol=DEFAULT_RADIUS_TOL) -> RadiusEstimate:
    """Certified rational enclosure of the spectral radius of a non-negative
    square matrix.

    Fast path: float power iteration on m + I from the all-ones vector, the
    iterate rationalised and re-checked exactly via Collatz-Wielandt ratios,
    so one positive witness certifies both bounds.  When the gap refuses to
    close (reducible support is the usual culprit) the computation reruns per
    strongly connected block and the upper bound comes from an exact
    resolvent solve; see _block_path.
    """
    if not m.is_square:
        raise ValueError("spectral radius needs a square matrix")
    if not m.is_nonnegative:
        raise ValueError("spectral radius defined here for non-negative matrices only")
    tol = rat(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    kernel_tol = float(tol) / _FLOAT_KERNEL_SLACK
    klo, khi, iterations, vf = _kernel_enclosure(m, kernel_tol)
    witness = _rationalize_positive(vf)
    lower, upper = _cw_ratios(m, witness)
    if upper - lower <= tol:
        bounds = gelfand_bounds(m, 4)
        if bounds and lower > 0 and bounds[-1] < float(lower) * (1 - 1e-6):
            # Gelfand norms bound rho from above, so falling below the
            # certified lower bound means an arithmetic bug somewhere
            raise RuntimeError("power iteration and Gelfand bound disagree")
        mid = (lower + upper) / 2
        return RadiusEstimate(
            value=float(mid),
            lower=lower,
            upper=upper,
            iterations=iterations,
            converged=True,
            witness_lower=Vector(witness),
            witness_upper=Vector(witness),
        )
    return _block_path(m, tol, iterations)


def perron_vector(m: Matrix, tol=DEFAULT_RADIUS_TOL) -> Vector:
    """Positive right eigenvector of an irreducible non-negative matrix,
    normalised to entrywise sum 1, with residual below tol.

    Raises ReducibleMatrixError (carrying the detected block structure) when
    the support digraph is not strongly connected.
    """
    if not m.is_square:
        raise ValueError("perron vector needs a square matrix")
    if not m.is_nonnegative:
        raise ValueError("perron vector defined for non-negative matrices only")
    tol = rat(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    comps = support_components(m)
    if len(comps) != 1:
        raise ReducibleMatrixError(
            f"matrix is reducible: {len(comps)} strongly connected blocks", comps
        )
    estimate = spectral_radius(m, tol)
    rho = rat(estimate.value)
    kernel_tol = float(tol)
    for attempt in range(6):
        klo, khi, iters, vf = power_enclosure(
            m.flat_floats(), m.rows, kernel_tol, POWER_ITERATION_CAP
        )
        v = _rationalize_positive(vf)
        total = sum(v)
        v = tuple(x / total for x in v)
        residual = one_norm(
            [lhs - rho * x for lhs, x in zip(mat_vec(m, v), v)]
        )
        if residual <= tol:
            return Vector(v)
        kernel_tol /= 16.0
    raise RuntimeError("perron iteration failed to reach the requested residual")


def rationalize(value: float, verifier, max_denominator=WITNESS_DENOMINATOR_CAP):
    """Snap a float to a nearby rational accepted by ``verifier`` (a
    predicate on Fractions), widening the denominator cap if the first
    attempt is rejected.  Returns the accepted Fraction or None."""
    cap = 10**6
    while cap <= max_denominator:
        candidate = Fraction(value).limit_denominator(cap)
        if verifier(candidate):
            return candidate
        cap *= 1000
    exact = Fraction(value)
    return exact if verifier(exact) else None
