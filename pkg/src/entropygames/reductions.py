"""Machine-to-game encodings behind the undecidability results.

Both encoders turn a two-counter machine into a matrix multiplication game
in which Eve's matrices enact machine transitions on a vector of named
coordinates (row vectors acting on the right) and Adam's matrices audit the
run.  Faithful play keeps an exact arithmetic invariant; the only way Eve
can misreport the machine is to break it in a way Adam's audit matrices can
convert into growth suppression.

Integer variant: coordinates are the states plus x, y, One, E, Neg.  A lie
drives some coordinate negative; Adam flashes it into Neg, tops it up to -1
with adjustment steps, adds it to E and reinitialises, which zeroes the
whole product exactly.

Non-negative variant: coordinates are the states plus x+, x-, y+, y-, with
counter value c carried as the ratio pair (2^(n+c), 2^(n-c)) at time scale
2^n.  A lie leaves some coordinate lagging at least a factor 2 behind the
scale; Adam's reset matrices restart the clock from the lagging coordinate,
capping long-run growth strictly below 2 on punished plays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, mat_mul, one_norm, vec_mat
from .minsky import INC, JZDEC, STOP, TwoCounterMachine, step

INTEGER = "integer"
NONNEG = "nonnegative"


@dataclass(frozen=True)
class EncodedMmg:
    """A machine encoded as a matrix multiplication game.

    ``adam_matrices`` and ``eve_matrices`` pair human-readable move names
    with the matrices; ``start_vector`` is the row vector the play acts on.
    ``degenerate`` flags machines whose every state halts, which give Eve an
    empty move set."""

    variant: str
    dimension: int
    coordinate_labels: tuple[str, ...]
    adam_matrices: tuple[tuple[str, Matrix], ...]
    eve_matrices: tuple[tuple[str, Matrix], ...]
    start_vector: tuple[Fraction, ...]
    degenerate: bool

    def adam_named(self, name: str) -> Matrix:
        for n, m in self.adam_matrices:
            if n == name:
                return m
        raise KeyError(name)


def machine_transitions(m: TwoCounterMachine):
    """Eve's move list in encoder order: per state, an increment move, or
    the zero branch followed by the decrement branch.  Each entry is
    (kind, state, counter, target) with kind inc/zero/dec."""
    moves = []
    for q in m.states:
        ins = m.program[q]
        if ins.kind == INC:
            moves.append(("inc", q, ins.counter, ins.target))
        elif ins.kind == JZDEC:
            moves.append(("zero", q, ins.counter, ins.target))
            moves.append(("dec", q, ins.counter, ins.else_target))
    return moves


_MOVE_PREFIX = {"inc": "I", "zero": "K", "dec": "D"}


def _move_name(kind: str, state: str, counter: str, target: str) -> str:
    return f"{_MOVE_PREFIX[kind]}[{state}->{target},{counter}]"


def encode_integer(m: TwoCounterMachine) -> EncodedMmg:
    """Integer-matrix encoding; see the module docstring for the audit
    mechanism.  Eve's matrices are sequential coordinate assignments: leave
    the source state, enter the target state, and update the counter (add
    One, negate, or subtract One for inc, zero-test and decrement)."""
    labels = list(m.states) + ["x", "y", "One", "E", "Neg"]
    index = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)

    def assignment_product(*steps):
        # run the assignment program on each basis row vector; the images
        # are the matrix rows
        rows = []
        for i in range(dim):
            vec = [Fraction(0)] * dim
            vec[i] = Fraction(1)
            for target, combo in steps:
                vec[index[target]] = sum(
                    coeff * vec[index[src]] for src, coeff in combo.items()
                )
            rows.append(tuple(vec))
        return Matrix(tuple(rows))

    counter_updates = {
        "inc": lambda c: {c: 1, "One": 1},
        "zero": lambda c: {c: -1},
        "dec": lambda c: {c: 1, "One": -1},
    }
    eve = []
    for kind, state, counter, target in machine_transitions(m):
        matrix = assignment_product(
            (state, {state: 1, "One": -1}),
            (target, {target: 1, "One": 1}),
            (counter, counter_updates[kind](counter)),
        )
        eve.append((_move_name(kind, state, counter, target), matrix))

    start = m.initial_state
    init_rows = [[Fraction(0)] * dim for _ in range(dim)]
    for lab in (start, "One", "E"):
        init_rows[index["E"]][index[lab]] = Fraction(1)
    adam = [("Init", Matrix(tuple(tuple(r) for r in init_rows)))]
    adam.append(("Id", Matrix.identity(dim)))
    for lab in list(m.states) + ["x", "y"]:
        adam.append((f"F[{lab}]", assignment_product(("Neg", {lab: 1}))))
    adam.append(("A", assignment_product(("Neg", {"Neg": 1, "One": 1}))))
    adam.append(("P", assignment_product(("E", {"E": 1, "Neg": 1}))))

    v0 = [Fraction(0)] * dim
    for lab in (start, "One", "E"):
        v0[index[lab]] = Fraction(1)
    return EncodedMmg(
        variant=INTEGER,
        dimension=dim,
        coordinate_labels=tuple(labels),
        adam_matrices=tuple(adam),
        eve_matrices=tuple(eve),
        start_vector=tuple(v0),
        degenerate=not eve,
    )


def encode_nonneg(m: TwoCounterMachine) -> EncodedMmg:
    """Non-negative encoding; counter c at time scale 2^n rides as the pair
    (2^(n+c), 2^(n-c)).  Eve's matrices are simultaneous column assignments:
    the state token doubles and moves, the touched counter coordinate
    quadruples (inc: plus, dec: minus), the zero branch swaps the tested
    pair at weight 2, and everything else doubles except the stalled mate of
    a touched counter."""
    labels = list(m.states) + ["x+", "x-", "y+", "y-"]
    index = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)
    counter_labels = ["x+", "x-", "y+", "y-"]

    def column_matrix(columns):
        # columns: label -> {source label: coefficient}; omitted columns
        # default to the identity column
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        for lab in labels:
            combo = columns.get(lab, {lab: 1})
            for src, coeff in combo.items():
                rows[index[src]][index[lab]] = Fraction(coeff)
        return Matrix(tuple(tuple(r) for r in rows))

    def transition_columns(state, target, counter, kind):
        cols = {target: {state: 2}}
        if target != state:
            cols[state] = {}
        other = "y" if counter == "x" else "x"
        cols[other + "+"] = {other + "+": 2}
        cols[other + "-"] = {other + "-": 2}
        plus, minus = counter + "+", counter + "-"
        if kind == "inc":
            cols[plus] = {plus: 4}
            # minus stalls at the identity column
        elif kind == "zero":
            cols[plus] = {minus: 2}
            cols[minus] = {plus: 2}
        else:
            cols[minus] = {minus: 4}
            # plus stalls
        return cols

    eve = []
    for kind, state, counter, target in machine_transitions(m):
        matrix = column_matrix(transition_columns(state, target, counter, kind))
        eve.append((_move_name(kind, state, counter, target), matrix))

    start = m.initial_state
    adam = [("Id", column_matrix({}))]
    for counter in ("x", "y"):
        source = counter + "+"
        cols = {lab: {source: 1} for lab in counter_labels}
        cols[start] = {source: 1}
        for q in m.states:
            if q != start:
                cols[q] = {}
        adam.append((f"P[{counter}]", column_matrix(cols)))
    spread = {q: 1 for q in m.states}
    cols = {lab: dict(spread) for lab in counter_labels}
    cols[start] = dict(spread)
    for q in m.states:
        if q != start:
            cols[q] = {}
    adam.append(("P[q]", column_matrix(cols)))

    v0 = [Fraction(0)] * dim
    v0[index[start]] = Fraction(1)
    for lab in counter_labels:
        v0[index[lab]] = Fraction(1)
    return EncodedMmg(
        variant=NONNEG,
        dimension=dim,
        coordinate_labels=tuple(labels),
        adam_matrices=tuple(adam),
        eve_matrices=tuple(eve),
        start_vector=tuple(v0),
        degenerate=not eve,
    )


class _EveSimulation:
    """Eve's private machine run: faithful moves, forced moves once halted,
    and optional deliberate deviations.  After any deviation the simulation
    follows the formal semantics of the move actually played, so it stays in
    step with the public vector."""

    def __init__(self, machine: TwoCounterMachine, moves, move_index):
        self.machine = machine
        self.moves = moves
        self.move_index = move_index
        self.reset()

    def reset(self):
        self.state = self.machine.initial_state
        self.counters = {"x": 0, "y": 0}

    def halted(self) -> bool:
        return self.machine.program[self.state].kind == STOP

    def faithful_move(self):
        ins = self.machine.program[self.state]
        if ins.kind == STOP:
            return None
        if ins.kind == INC:
            return self.move_index[("inc", self.state)]
        branch = "zero" if self.counters[ins.counter] == 0 else "dec"
        return self.move_index[(branch, self.state)]

    def deviating_move(self):
        """A deterministic lie: the wrong branch from the current state when
        one exists, otherwise the first move from another state.  None when
        every available move is the faithful one."""
        faithful = self.faithful_move()
        ins = self.machine.program[self.state]
        if ins.kind == JZDEC:
            other = "dec" if self.counters[ins.counter] == 0 else "zero"
            return self.move_index[(other, self.state)]
        for k, (kind, state, counter, target) in enumerate(self.moves):
            if k != faithful:
                return k
        return None

    def apply(self, move_id: int):
        kind, state, counter, target = self.moves[move_id]
        self.state = target
        if kind == "inc":
            self.counters[counter] += 1
        elif kind == "dec":
            self.counters[counter] -= 1
        elif kind == "zero":
            self.counters[counter] = -self.counters[counter]


class _EveSimulationNonneg(_EveSimulation):
    def apply(self, move_id: int):
        kind, state, counter, target = self.moves[move_id]
        self.state = target
        if kind == "inc":
            self.counters[counter] += 1
        elif kind == "dec":
            self.counters[counter] -= 1
        # the zero branch leaves the counter untouched


@dataclass(frozen=True)
class ScriptedPlayReport:
    """Transcript of a scripted integer-variant play.

    ``faithful_invariant_ok`` covers the turns before the first deviation:
    the vector must mirror the machine configuration exactly (single state
    token, true counter values, One = E = 1, Neg = 0).  ``flashes`` records
    (turn, coordinate, value) for each audit trigger; ``undetectable``
    lists deviations that left no negative coordinate, which the audit
    cannot punish.  ``cheat_played`` is None when no cheat was requested and
    False when the requested turn offered no alternative move."""

    turns: int
    adam_moves: tuple[str, ...]
    eve_moves: tuple[str, ...]
    vectors: tuple[tuple[Fraction, ...], ...]
    faithful_invariant_ok: bool
    deviations: tuple[tuple[int, str, str | None], ...]
    flashes: tuple[tuple[int, str, Fraction], ...]
    undetectable: tuple[int, ...]
    machine_halted_turn: int | None
    annihilation_turn: int | None
    cheat_played: bool | None
    final_product: Matrix


def run_scripted_play(
    g: EncodedMmg,
    m: TwoCounterMachine,
    max_turns: int,
    cheat_turn: int | None = None,
) -> ScriptedPlayReport:
    """Play the integer-variant game with Adam running his audit script and
    Eve simulating the machine (forced to keep moving after a halt, and
    optionally told to cheat deliberately at ``cheat_turn``).

    Adam opens with Init, monitors with Id, and on observing a move that
    contradicts his own simulation flashes the negative coordinate, adjusts
    it up to -1, punishes and reinitialises; that zeroes the running product
    exactly.  Deviations that leave no negative coordinate are reported as
    undetectable."""
    if g.variant != INTEGER:
        raise ValueError("scripted plays are defined for the integer variant")
    if g.degenerate:
        raise ValueError("degenerate encoding: Eve has no moves")
    if max_turns <= 0:
        raise ValueError("max_turns must be positive")
    moves = machine_transitions(m)
    if len(moves) != len(g.eve_matrices):
        raise ValueError("encoding does not match the machine")
    move_index = {(kind, state): k for k, (kind, state, _, _) in enumerate(moves)}
    labels = g.coordinate_labels
    index = {lab: i for i, lab in enumerate(labels)}

    eve_sim = _EveSimulation(m, moves, move_index)
    adam_sim = _EveSimulation(m, moves, move_index)

    v = list(g.start_vector)
    omega = Matrix.identity(g.dimension)
    dim = g.dimension
    adam_moves: list[str] = []
    eve_moves: list[str] = []
    vectors: list[tuple[Fraction, ...]] = []
    deviations = []
    flashes = []
    undetectable = []
    queue: list[str] = []
    faithful_so_far = True
    invariant_ok = True
    halted_turn = None
    annihilation_turn = None
    cheat_played = None if cheat_turn is None else False
    adam_by_name = dict(g.adam_matrices)

    for turn in range(1, max_turns + 1):
        # Adam's move
        if turn == 1:
            adam_name = "Init"
        elif queue:
            adam_name = queue.pop(0)
        else:
            adam_name = "Id"
        adam_matrix = adam_by_name[adam_name]
        v = list(vec_mat(v, adam_matrix))
        omega = mat_mul(omega, adam_matrix)
        adam_moves.append(adam_name)
        if adam_name == "P" and v[index["E"]] != 0:
            # the punish step is built to cancel E exactly; anything else
            # means the audit arithmetic is broken
            raise RuntimeError(
                f"punish step left E = {v[index['E']]} instead of 0 at turn {turn}"
            )
        if adam_name == "Init":
            adam_sim.reset()
            eve_sim.reset()

        # Eve's move
        expected = adam_sim.faithful_move()
        choice = eve_sim.faithful_move()
        if cheat_turn == turn:
            lie = eve_sim.deviating_move()
            if lie is not None:
                choice = lie
                cheat_played = True
        if choice is None:
            if halted_turn is None and eve_sim.halted():
                halted_turn = turn
            choice = 0  # forced: the machine halted but the play goes on
        eve_name, eve_matrix = g.eve_matrices[choice]
        v = list(vec_mat(v, eve_matrix))
        omega = mat_mul(omega, eve_matrix)
        eve_moves.append(eve_name)
        eve_sim.apply(choice)

        # Adam's audit; once the product is zero the game is decided and
        # nothing remains to monitor
        if not queue and annihilation_turn is None:
            if expected is None or choice != expected:
                faithful_so_far = False
                deviations.append(
                    (turn, eve_name, g.eve_matrices[expected][0] if expected is not None else None)
                )
                negatives = [i for i, val in enumerate(v) if val < 0]
                if negatives:
                    target = negatives[0]
                    value = v[target]
                    flashes.append((turn, labels[target], value))
                    queue = (
                        [f"F[{labels[target]}]"]
                        + ["A"] * (int(-value) - 1)
                        + ["P", "Init"]
                    )
                else:
                    undetectable.append(turn)
                    adam_sim.apply(choice)
            else:
                adam_sim.apply(choice)

        vectors.append(tuple(v))
        if annihilation_turn is None and all(
            x == 0 for row in omega.data for x in row
        ):
            annihilation_turn = turn

        # exact invariant check while the play is still faithful
        if faithful_so_far and invariant_ok:
            ok = (
                v[index["One"]] == 1
                and v[index["E"]] == 1
                and v[index["Neg"]] == 0
                and v[index["x"]] == eve_sim.counters["x"]
                and v[index["y"]] == eve_sim.counters["y"]
            )
            if ok:
                for q in m.states:
                    want = 1 if q == eve_sim.state else 0
                    if v[index[q]] != want:
                        ok = False
                        break
            invariant_ok = ok
        if halted_turn is None and eve_sim.halted():
            halted_turn = turn

    return ScriptedPlayReport(
        turns=max_turns,
        adam_moves=tuple(adam_moves),
        eve_moves=tuple(eve_moves),
        vectors=tuple(vectors),
        faithful_invariant_ok=invariant_ok,
        deviations=tuple(deviations),
        flashes=tuple(flashes),
        undetectable=tuple(undetectable),
        machine_halted_turn=halted_turn,
        annihilation_turn=annihilation_turn,
        cheat_played=cheat_played,
        final_product=omega,
    )


@dataclass(frozen=True)
class PunishmentSegment:
    """One stretch of play ending in a reset: ``turns`` is its length f,
    ``ratio`` the exact norm growth across it, and the bound to meet is
    2^(f-1)."""

    start_turn: int
    end_turn: int
    turns: int
    ratio: Fraction
    within_bound: bool


@dataclass(frozen=True)
class NonnegPunishmentReport:
    """Outcome of auditing a non-negative-variant play.

    In faithful (never-punished) play the state token must sit at exactly
    unit * 2^k after k turns of a segment and the counter pairs must
    multiply to its square; ``magnitude_ok`` records that.  When resets
    happen, each completed segment's growth must stay within 2^(f-1) and
    the whole play's per-turn growth strictly below 2."""

    turns: int
    adam_moves: tuple[str, ...]
    eve_moves: tuple[str, ...]
    halted_turn: int | None
    punished: bool
    magnitude_ok: bool
    segments: tuple[PunishmentSegment, ...]
    segment_bounds_ok: bool
    aggregate_growth: float
    aggregate_below_two: bool
    final_norm: Fraction


def check_nonneg_punishment(
    g: EncodedMmg,
    m: TwoCounterMachine,
    horizon: int,
    cheat_turn: int | None = None,
) -> NonnegPunishmentReport:
    """Audit the non-negative encoding over a bounded horizon.

    Eve simulates the machine (forced to keep playing after a halt,
    optionally cheating once); Adam watches with Id and answers any
    contradiction with the matching reset: P[q] for a state lie, P[x]/P[y]
    for a counter lie.  The report collects the exact per-segment growth
    ratios and the structural magnitude checks of faithful play."""
    if g.variant != NONNEG:
        raise ValueError("punishment audits are defined for the non-negative variant")
    if g.degenerate:
        raise ValueError("degenerate encoding: Eve has no moves")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    moves = machine_transitions(m)
    if len(moves) != len(g.eve_matrices):
        raise ValueError("encoding does not match the machine")
    move_index = {(kind, state): k for k, (kind, state, _, _) in enumerate(moves)}
    labels = g.coordinate_labels
    index = {lab: i for i, lab in enumerate(labels)}

    eve_sim = _EveSimulationNonneg(m, moves, move_index)
    adam_sim = _EveSimulationNonneg(m, moves, move_index)

    v = list(g.start_vector)
    adam_moves: list[str] = []
    eve_moves: list[str] = []
    pending_reset: str | None = None
    halted_turn = None
    punished = False
    magnitude_ok = True
    segments: list[PunishmentSegment] = []
    segment_start = 1
    segment_base_norm = one_norm(v)
    unit = Fraction(1)
    turns_into_segment = 0
    adam_by_name = dict(g.adam_matrices)
    start_norm = one_norm(v)

    for turn in range(1, horizon + 1):
        if pending_reset is not None:
            adam_name = pending_reset
            pending_reset = None
        else:
            adam_name = "Id"
        adam_matrix = adam_by_name[adam_name]
        v = list(vec_mat(v, adam_matrix))
        adam_moves.append(adam_name)
        if adam_name != "Id":
            punished = True
            after_norm = one_norm(v)
            f = turn - segment_start + 1
            ratio = (
                after_norm / segment_base_norm if segment_base_norm else Fraction(0)
            )
            segments.append(
                PunishmentSegment(
                    start_turn=segment_start,
                    end_turn=turn,
                    turns=f,
                    ratio=ratio,
                    within_bound=ratio <= Fraction(2) ** (f - 1),
                )
            )
            segment_start = turn + 1
            segment_base_norm = after_norm
            adam_sim.reset()
            eve_sim.reset()
            unit = v[index[m.initial_state]]
            turns_into_segment = 0

        expected = adam_sim.faithful_move()
        choice = eve_sim.faithful_move()
        if cheat_turn == turn:
            lie = eve_sim.deviating_move()
            if lie is not None:
                choice = lie
        if choice is None:
            if halted_turn is None:
                halted_turn = turn
            choice = 0
        eve_name, eve_matrix = g.eve_matrices[choice]
        v = list(vec_mat(v, eve_matrix))
        eve_moves.append(eve_name)
        kind, state, counter, target = moves[choice]

        if pending_reset is None:
            if expected is None or choice != expected:
                if expected is None or state != adam_sim.state:
                    pending_reset = "P[q]"
                else:
                    pending_reset = f"P[{counter}]"
            else:
                adam_sim.apply(choice)
                eve_sim.apply(choice)
                turns_into_segment += 1
                # structural checks of faithful play at scale unit * 2^k;
                # once a reset has wiped the vector (unit 0) the play is
                # dead and carries no structure to audit
                if unit > 0:
                    token = v[index[adam_sim.state]]
                    if token != unit * Fraction(2) ** turns_into_segment:
                        magnitude_ok = False
                    for q in m.states:
                        if q != adam_sim.state and v[index[q]] != 0:
                            magnitude_ok = False
                    for c in ("x", "y"):
                        plus = v[index[c + "+"]]
                        minus = v[index[c + "-"]]
                        if plus * minus != token * token:
                            magnitude_ok = False
                        if (adam_sim.counters[c] == 0) != (plus == minus):
                            magnitude_ok = False
        else:
            # keep the private runs out of sync no further: both restart on
            # the reset Adam is about to play
            pass

        if halted_turn is None and eve_sim.halted():
            halted_turn = turn

    final_norm = one_norm(v)
    total_growth = (
        float(final_norm / start_norm) ** (1.0 / horizon) if final_norm else 0.0
    )
    return NonnegPunishmentReport(
        turns=horizon,
        adam_moves=tuple(adam_moves),
        eve_moves=tuple(eve_moves),
        halted_turn=halted_turn,
        punished=punished,
        magnitude_ok=magnitude_ok,
        segments=tuple(segments),
        segment_bounds_ok=all(s.within_bound for s in segments),
        aggregate_growth=total_growth,
        aggregate_below_two=total_growth < 2.0,
        final_norm=final_norm,
    )
