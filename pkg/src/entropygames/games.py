"""Entropy games: arenas, translation to matrix games, solving, simulation.

An entropy game is played on a bipartite arena by Despot (who wants the
forest of possible trajectories to grow slowly) and Tribune (who wants it to
grow fast).  One full turn is one Despot move followed by one Tribune move.
Fixing positional strategies turns the dynamics into repeated multiplication
by a pair of non-negative matrices, and quantifying over strategies yields a
matrix multiplication game whose sets have independent row uncertainty: each
state picks its row (its action) independently of the others.  That
translation is lossless and is how every solver here works.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .decide import ValueInterval, value_bisection
from .iru import IruSet, RowSet, enumerate_members
from .linalg import (
    Matrix,
    RadiusEstimate,
    Vector,
    mat_mul,
    rat,
    spectral_radius,
)
from . import realroots
from .kernels import power_enclosure

DESPOT = "despot"
TRIBUNE = "tribune"


@dataclass(frozen=True)
class Arena:
    """A bipartite game arena.

    States are split between the two players; every transition goes from one
    side to the other and is labelled with an action and a positive integer
    multiplicity (how many distinct successors it spawns in the trajectory
    forest).  Construction validates the bipartite structure and
    non-blockingness: a state with no outgoing transition would strand the
    token, so it is rejected with the offending state named.
    """

    despot_states: tuple[str, ...]
    tribune_states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[str, str, str, int], ...]

    def __post_init__(self):
        despot = tuple(self.despot_states)
        tribune = tuple(self.tribune_states)
        alphabet = tuple(self.alphabet)
        if not despot or not tribune:
            raise ValueError("both players need at least one state")
        if len(set(despot)) != len(despot) or len(set(tribune)) != len(tribune):
            raise ValueError("duplicate state names")
        if set(despot) & set(tribune):
            raise ValueError("state sets must be disjoint")
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet must be non-empty without duplicates")
        d_set, t_set, a_set = set(despot), set(tribune), set(alphabet)
        merged: dict[tuple[str, str, str], int] = {}
        for frm, action, to, weight in self.transitions:
            if action not in a_set:
                raise ValueError(f"unknown action {action!r}")
            if frm in d_set:
                if to not in t_set:
                    raise ValueError(
                        f"transition {frm}->{to} must cross to the other player"
                    )
            elif frm in t_set:
                if to not in d_set:
                    raise ValueError(
                        f"transition {frm}->{to} must cross to the other player"
                    )
            else:
                raise ValueError(f"unknown state {frm!r}")
            w = int(weight)
            if w <= 0:
                raise ValueError("transition multiplicities must be positive")
            merged[(frm, action, to)] = merged.get((frm, action, to), 0) + w
        cleaned = tuple(
            (frm, action, to, w) for (frm, action, to), w in sorted(merged.items())
        )
        outgoing = {s: 0 for s in despot + tribune}
        for frm, _, _, _ in cleaned:
            outgoing[frm] += 1
        for state, count in outgoing.items():
            if count == 0:
                raise ValueError(f"blocking state {state!r} has no outgoing transition")
        object.__setattr__(self, "despot_states", despot)
        object.__setattr__(self, "tribune_states", tribune)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", cleaned)

    def actions_from(self, state: str) -> tuple[str, ...]:
        return tuple(sorted({a for f, a, _, _ in self.transitions if f == state}))


@dataclass(frozen=True)
class PositionalStrategy:
    """One action per state of the owning player, independent of history."""

    owner: str
    choice: Mapping[str, str]

    def __post_init__(self):
        if self.owner not in (DESPOT, TRIBUNE):
            raise ValueError(f"unknown owner {self.owner!r}")
        object.__setattr__(self, "choice", dict(self.choice))

    def action(self, state: str) -> str:
        return self.choice[state]


@dataclass(frozen=True)
class Translation:
    """Result of arena_to_iru: the two IruSets plus the bookkeeping that maps
    canonical rows back to actions, for strategy extraction.  Iterating
    unpacks as (a_set, e_set)."""

    a_set: IruSet
    e_set: IruSet
    despot_states: tuple[str, ...]
    tribune_states: tuple[str, ...]
    despot_row_actions: tuple[dict, ...]
    tribune_row_actions: tuple[dict, ...]

    def __iter__(self):
        yield self.a_set
        yield self.e_set

    def _strategy(self, owner, states, tables, member: Matrix) -> PositionalStrategy:
        choice = {}
        for i, state in enumerate(states):
            actions = tables[i].get(member.row(i))
            if actions is None:
                raise ValueError(f"row {i} of the matrix is not a row of state {state!r}")
            choice[state] = actions[0]
        return PositionalStrategy(owner=owner, choice=choice)

    def despot_strategy_for(self, member: Matrix) -> PositionalStrategy:
        return self._strategy(
            DESPOT, self.despot_states, self.despot_row_actions, member
        )

    def tribune_strategy_for(self, member: Matrix) -> PositionalStrategy:
        return self._strategy(
            TRIBUNE, self.tribune_states, self.tribune_row_actions, member
        )

    def member_for(self, strategy: PositionalStrategy) -> Matrix:
        """The matrix a positional strategy induces; inverse of the
        extraction above up to action aliasing."""
        if strategy.owner == DESPOT:
            states, tables = self.despot_states, self.despot_row_actions
        else:
            states, tables = self.tribune_states, self.tribune_row_actions
        rows = []
        for i, state in enumerate(states):
            wanted = strategy.action(state)
            for row, actions in tables[i].items():
                if wanted in actions:
                    rows.append(row)
                    break
            else:
                raise ValueError(f"state {state!r} has no action {wanted!r}")
        return Matrix(tuple(rows))


def arena_to_iru(a: Arena) -> Translation:
    """Translate an arena into the pair of independent-row-uncertainty sets.

    Despot's set has one row set per despot state with coordinates indexed
    by tribune states, one candidate row per action (entry = summed
    multiplicity of that action's transitions to each tribune state), and
    symmetrically for Tribune.  Actions with identical rows collapse onto
    one candidate; the returned tables remember every action behind each
    row, lexicographically smallest first.
    """

    def side(states: tuple[str, ...], targets: tuple[str, ...]):
        target_index = {s: j for j, s in enumerate(targets)}
        row_sets = []
        tables = []
        for state in states:
            per_action: dict[str, list[Fraction]] = {}
            for frm, action, to, weight in a.transitions:
                if frm != state:
                    continue
                row = per_action.setdefault(
                    action, [Fraction(0)] * len(targets)
                )
                row[target_index[to]] += weight
            rows_to_actions: dict[tuple, list[str]] = {}
            for action in sorted(per_action):
                row = tuple(per_action[action])
                rows_to_actions.setdefault(row, []).append(action)
            table = {row: tuple(actions) for row, actions in rows_to_actions.items()}
            row_sets.append(RowSet(tuple(table.keys())))
            tables.append(table)
        return tuple(row_sets), tuple(tables)

    despot_sets, despot_tables = side(a.despot_states, a.tribune_states)
    tribune_sets, tribune_tables = side(a.tribune_states, a.despot_states)
    return Translation(
        a_set=IruSet(despot_sets),
        e_set=IruSet(tribune_sets),
        despot_states=a.despot_states,
        tribune_states=a.tribune_states,
        despot_row_actions=despot_tables,
        tribune_row_actions=tribune_tables,
    )


@dataclass(frozen=True)
class SaddlePoint:
    """A pair of members certified extremal against all unilateral
    deviations, with a certified enclosure of the product's radius."""

    despot_matrix: Matrix
    tribune_matrix: Matrix
    radius: RadiusEstimate


def _radius_cmp(cache, p: Matrix, q: Matrix) -> int:
    """Exact sign(rho(p) - rho(q)) with an enclosure fast path."""
    if p.data == q.data:
        return 0
    ep = cache.setdefault(p.data, spectral_radius(p))
    eq = cache.setdefault(q.data, spectral_radius(q))
    if ep.upper < eq.lower:
        return -1
    if ep.lower > eq.upper:
        return 1
    return realroots.compare_radii(p, q)


def find_saddle(a_set: IruSet, e_set: IruSet, cap=None) -> SaddlePoint:
    """Search the member grid for a saddle point of rho(A E): a pair where
    no unilateral member swap raises Despot's guarantee or lowers Tribune's.

    Float radii (power iteration) prune the grid; every surviving candidate
    is confirmed with exact comparisons, so the returned pair is a true
    saddle.  The lexicographically first confirmed pair wins, making the
    result deterministic."""
    if a_set.n_cols != e_set.n_rows or e_set.n_cols != a_set.n_rows:
        raise ValueError("incompatible shapes: need a_set n x m and e_set m x n")
    a_members = list(enumerate_members(a_set, cap))
    e_members = list(enumerate_members(e_set, cap))
    na, ne = len(a_members), len(e_members)
    kernel_tol = 1e-10
    table = [[0.0] * ne for _ in range(na)]
    products: dict[tuple[int, int], Matrix] = {}

    def product(i: int, j: int) -> Matrix:
        m = products.get((i, j))
        if m is None:
            m = mat_mul(a_members[i], e_members[j])
            products[(i, j)] = m
        return m

    for i in range(na):
        for j in range(ne):
            m = product(i, j)
            lo, hi, _, _ = power_enclosure(
                m.flat_floats(), m.rows, kernel_tol, 2000
            )
            table[i][j] = (lo + hi) / 2.0
    row_max = [max(table[i]) for i in range(na)]
    col_min = [min(table[i][j] for i in range(na)) for j in range(ne)]
    slack = 1e-7
    cache: dict = {}
    for i in range(na):
        for j in range(ne):
            if table[i][j] < row_max[i] - slack or table[i][j] > col_min[j] + slack:
                continue
            centre = product(i, j)
            if any(
                _radius_cmp(cache, product(i, jj), centre) > 0 for jj in range(ne)
            ):
                continue
            if any(
                _radius_cmp(cache, product(ii, j), centre) < 0 for ii in range(na)
            ):
                continue
            estimate = cache.setdefault(centre.data, spectral_radius(centre))
            return SaddlePoint(
                despot_matrix=a_members[i],
                tribune_matrix=e_members[j],
                radius=estimate,
            )
    raise RuntimeError("no saddle point found; the input violates the minimax structure")


def verify_saddle(a_set: IruSet, e_set: IruSet, a0: Matrix, e0: Matrix, cap=None) -> bool:
    """Exact check that (a0, e0) is a saddle of rho(A E) over the members:
    rho(a0 E) <= rho(a0 e0) <= rho(A e0) for every member E and A."""
    if not a_set.contains_matrix(a0) or not e_set.contains_matrix(e0):
        return False
    centre = mat_mul(a0, e0)
    cache: dict = {}
    for e in enumerate_members(e_set, cap):
        if _radius_cmp(cache, mat_mul(a0, e), centre) > 0:
            return False
    for a in enumerate_members(a_set, cap):
        if _radius_cmp(cache, mat_mul(a, e0), centre) < 0:
            return False
    return True


@dataclass(frozen=True)
class GameSolution:
    """Solved entropy game: a certified value bracket, optimal positional
    strategies for both players, and the saddle pair behind them."""

    value: ValueInterval
    despot_strategy: PositionalStrategy
    tribune_strategy: PositionalStrategy
    saddle: SaddlePoint

    def entropy_bits(self) -> float:
        """Entropy of the game: log2 of the value, divided by the four
        quarter-moves that make up one full turn."""
        mid = float(self.value.midpoint())
        if mid <= 0:
            return float("-inf")
        return math.log2(mid) / 4


def solve(a: Arena, tol=Fraction(1, 10**6), cap=None, threads=None) -> GameSolution:
    """Solve an entropy game end to end.

    Translates the arena, finds and exactly verifies a saddle pair (which
    yields optimal positional strategies), and brackets the value by
    certified bisection.  The returned interval is the hull of the bisection
    bracket and the saddle radius enclosure, so it always contains the
    latter; its width stays within tol because both parts are run at tol/2.
    """
    tol = rat(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    tr = arena_to_iru(a)
    sp = find_saddle(tr.a_set, tr.e_set, cap)
    vi = value_bisection(tr.a_set, tr.e_set, tol / 2, cap, threads)
    lower = min(vi.lower, sp.radius.lower)
    upper = max(vi.upper, sp.radius.upper)
    interval = ValueInterval(
        lower=lower,
        upper=upper,
        lower_certificate=vi.lower_certificate,
        upper_certificate=vi.upper_certificate,
        bisections=vi.bisections,
    )
    return GameSolution(
        value=interval,
        despot_strategy=tr.despot_strategy_for(sp.despot_matrix),
        tribune_strategy=tr.tribune_strategy_for(sp.tribune_matrix),
        saddle=sp,
    )


StrategyOracle = Callable[[str, int, list], str]


def as_action_oracle(spec, arena: Arena | None = None) -> StrategyOracle:
    """Normalise the accepted strategy descriptions to a callable
    (state, half_turn, history) -> action.

    Accepted forms: a callable (used as is), a PositionalStrategy, a mapping
    state -> action, a pair ("constant", action), ("script", actions) where
    the script advances one letter per full turn and repeats cyclically, or
    ("random", seed) drawing uniformly among the legal actions of the state
    (requires the arena for legality)."""
    if callable(spec):
        return spec
    if isinstance(spec, PositionalStrategy):
        return lambda state, half, history: spec.action(state)
    if isinstance(spec, Mapping):
        table = dict(spec)
        return lambda state, half, history: table[state]
    if isinstance(spec, tuple) and len(spec) == 2:
        tag, payload = spec
        if tag == "constant":
            return lambda state, half, history: payload
        if tag == "script":
            letters = list(payload)
            if not letters:
                raise ValueError("empty script")
            return lambda state, half, history: letters[(half // 2) % len(letters)]
        if tag == "random":
            import random

            if arena is None:
                raise ValueError("random strategies need the arena for legality")
            rng = random.Random(payload)
            moves = {
                s: arena.actions_from(s)
                for s in arena.despot_states + arena.tribune_states
            }
            return lambda state, half, history: rng.choice(moves[state])
    raise ValueError(f"unrecognised strategy description {spec!r}")


def forest_counts(
    a: Arena, despot, tribune, turns: int
) -> list[Vector]:
    """Trajectory-forest population counts, half turn by half turn.

    Starts from one trajectory per despot state and applies, alternately,
    the despot and tribune actions chosen by the given oracles; each chosen
    transition multiplies the population by its multiplicity.  Returns the
    2*turns+1 population vectors (over despot states at even indices,
    tribune states at odd ones)."""
    if turns < 0:
        raise ValueError("turns must be non-negative")
    despot_oracle = as_action_oracle(despot, a)
    tribune_oracle = as_action_oracle(tribune, a)
    by_source: dict[str, dict[str, list[tuple[str, int]]]] = {}
    for frm, action, to, weight in a.transitions:
        by_source.setdefault(frm, {}).setdefault(action, []).append((to, weight))
    levels: list[Vector] = []
    current = {s: Fraction(1) for s in a.despot_states}
    levels.append(Vector(tuple(current[s] for s in a.despot_states), orientation="row"))
    sides = (
        (a.despot_states, a.tribune_states, despot_oracle),
        (a.tribune_states, a.despot_states, tribune_oracle),
    )
    history: list[Vector] = [levels[0]]
    for half in range(2 * turns):
        sources, targets, oracle = sides[half % 2]
        nxt = {s: Fraction(0) for s in targets}
        for state in sources:
            action = oracle(state, half, history)
            options = by_source.get(state, {}).get(action)
            if options is None:
                raise ValueError(
                    f"oracle chose action {action!r} illegal in state {state!r}"
                )
            count = current[state]
            if count:
                for to, weight in options:
                    nxt[to] += count * weight
        current = nxt
        vec = Vector(tuple(current[s] for s in targets), orientation="row")
        levels.append(vec)
        history.append(vec)
    return levels


def population_trace(a: Arena, damien, theo, turns: int) -> list[Vector]:
    """forest_counts under its population reading: damien tends the despot
    states' populations, theo the tribune states'."""
    return forest_counts(a, damien, theo, turns)


@dataclass(frozen=True)
class GrowthReport:
    """Per-turn growth estimates of a simulated matrix product.

    ``per_turn[k-1]`` approximates ||m_1 ... m_k||^(1/k); ``tail`` is the
    maximum over the last quarter of the run, a practical stand-in for the
    limsup.  ``zeroed_at`` marks the first turn whose product vanished
    entirely; growth is reported as 0 from there on."""

    steps: int
    per_turn: tuple[float, ...]
    tail: float
    zeroed_at: int | None


def _as_matrix_oracle(source, chooser, side: str):
    if callable(source):
        return source
    if isinstance(source, Matrix):
        return lambda turn, history: source
    if isinstance(source, IruSet):
        if chooser is not None:
            return chooser
        if source.size == 1:
            only = next(iter(enumerate_members(source)))
            return lambda turn, history: only
        raise ValueError(
            f"{side} set has several members; supply a chooser oracle"
        )
    raise ValueError(f"cannot interpret {side} source {source!r}")


def simulate_payoff(
    a_source, e_source, adam=None, eve=None, steps: int = 100
) -> GrowthReport:
    """Simulate a play of the matrix multiplication game and report growth.

    Sources may be single matrices, IruSets (with an accompanying chooser
    ``(turn, history) -> Matrix``), or matrix-valued callables.  One turn
    multiplies by one Adam choice and one Eve choice.  Products are tracked
    in floats with per-step renormalisation, so long plays neither overflow
    nor underflow."""
    if steps <= 0:
        raise ValueError("steps must be positive")
    import numpy as np

    adam_oracle = _as_matrix_oracle(a_source, adam, "adam")
    eve_oracle = _as_matrix_oracle(e_source, eve, "eve")
    history: list[tuple[Matrix, Matrix]] = []
    product = None
    log_norm = 0.0
    per_turn: list[float] = []
    zeroed_at = None
    for turn in range(1, steps + 1):
        a = adam_oracle(turn, history)
        e = eve_oracle(turn, history)
        if not isinstance(a, Matrix) or not isinstance(e, Matrix):
            raise ValueError("matrix oracles must return Matrix instances")
        history.append((a, e))
        step_np = np.array(a.to_floats()) @ np.array(e.to_floats())
        product = step_np if product is None else product @ step_np
        total = float(np.abs(product).sum())
        if total == 0.0:
            zeroed_at = turn
            per_turn.extend([0.0] * (steps - turn + 1))
            break
        log_norm += math.log(total)
        product = product / total
        per_turn.append(math.exp(log_norm / turn))
    tail_start = (3 * steps) // 4
    tail = max(per_turn[tail_start:]) if per_turn[tail_start:] else 0.0
    return GrowthReport(
        steps=steps,
        per_turn=tuple(per_turn),
        tail=tail,
        zeroed_at=zeroed_at,
    )


def eg_payoff_entropy(growth) -> float:
    """Entropy reading of a payoff: log2(P)/4 with P the per-turn growth
    (one turn spans four quarter-moves).  Accepts a GrowthReport (uses its
    tail) or a positive number."""
    if isinstance(growth, GrowthReport):
        p = growth.tail
    else:
        p = float(growth)
    if p <= 0:
        raise ValueError("growth must be positive to take its entropy")
    return math.log2(p) / 4


@dataclass(frozen=True)
class MpgArena:
    """A bipartite mean payoff game with non-negative integer weights.
    Transitions are (source, target, weight); Despot minimises and Tribune
    maximises the long-run average weight per full turn."""

    despot_states: tuple[str, ...]
    tribune_states: tuple[str, ...]
    transitions: tuple[tuple[str, str, int], ...]

    def __post_init__(self):
        despot = tuple(self.despot_states)
        tribune = tuple(self.tribune_states)
        if not despot or not tribune:
            raise ValueError("both players need at least one state")
        if set(despot) & set(tribune):
            raise ValueError("state sets must be disjoint")
        d_set, t_set = set(despot), set(tribune)
        cleaned = []
        for frm, to, weight in self.transitions:
            if frm in d_set:
                if to not in t_set:
                    raise ValueError(f"transition {frm}->{to} must alternate sides")
            elif frm in t_set:
                if to not in d_set:
                    raise ValueError(f"transition {frm}->{to} must alternate sides")
            else:
                raise ValueError(f"unknown state {frm!r}")
            w = int(weight)
            if w < 0:
                raise ValueError("weights must be non-negative")
            cleaned.append((frm, to, w))
        cleaned = tuple(sorted(set(cleaned)))
        outgoing = {s: 0 for s in despot + tribune}
        for frm, _, _ in cleaned:
            outgoing[frm] += 1
        for state, count in outgoing.items():
            if count == 0:
                raise ValueError(f"blocking state {state!r} has no outgoing transition")
        object.__setattr__(self, "despot_states", despot)
        object.__setattr__(self, "tribune_states", tribune)
        object.__setattr__(self, "transitions", cleaned)


def mpg_to_weighted_eg(m: MpgArena) -> Arena:
    """Encode a mean payoff game as an entropy game: a weight-w edge becomes
    a transition of multiplicity 2^w under a fresh action named after the
    edge.  Long-run average weight mp then satisfies value = 2^mp, so mean
    payoffs are recovered as log2 of the entropy game value."""
    actions = []
    transitions = []
    seen: dict[tuple[str, str], int] = {}
    for frm, to, weight in m.transitions:
        base = f"{frm}>{to}"
        bump = seen.get((frm, to), 0)
        seen[(frm, to)] = bump + 1
        action = base if bump == 0 else f"{base}#{bump}"
        actions.append(action)
        transitions.append((frm, action, to, 2**weight))
    return Arena(
        despot_states=m.despot_states,
        tribune_states=m.tribune_states,
        alphabet=tuple(actions),
        transitions=tuple(transitions),
    )


def mpg_value(m: MpgArena, tol=Fraction(1, 10**6), cap=None, threads=None):
    """Mean payoff value bracket [log2 lower, log2 upper] via the entropy
    game encoding, together with the full entropy game solution."""
    solution = solve(mpg_to_weighted_eg(m), tol, cap, threads)
    lo = float(solution.value.lower)
    hi = float(solution.value.upper)
    if lo <= 0:
        raise RuntimeError("weighted encoding must have value >= 1")
    return (math.log2(lo), math.log2(hi)), solution
