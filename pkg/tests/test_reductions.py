from fractions import Fraction

import pytest

import _frozen as frozen
import oracle_helpers
from entropygames.linalg import Matrix, vec_mat
from entropygames.minsky import parse_machine, run_machine
from entropygames.reductions import (
    INTEGER,
    NONNEG,
    check_nonneg_punishment,
    encode_integer,
    encode_nonneg,
    machine_transitions,
    run_scripted_play,
)

M1 = parse_machine(frozen.M1_PROGRAM_TEXT)
M2 = parse_machine("q0: inc x -> q1\nq1: ifz x -> q2 else dec -> q1\nq2: stop\n")
M3 = parse_machine(
    "q0: ifz x -> q1 else dec -> q0\n"
    "q1: inc x -> q2\n"
    "q2: ifz x -> q3 else dec -> q2\n"
    "q3: stop\n"
)
LOOPER = parse_machine("q0: inc x -> q0\n")
ZEROLOOP = parse_machine("q0: ifz y -> q0 else dec -> q0\n")
HALTERS = [M1, M2, M3]
EVERYTHING = HALTERS + [LOOPER, ZEROLOOP]


def as_program(m):
    prog = {}
    for state in m.states:
        ins = m.program[state]
        if ins.kind == "inc":
            prog[state] = ("inc", ins.counter, ins.target)
        elif ins.kind == "jzdec":
            prog[state] = ("jzdec", ins.counter, ins.target, ins.else_target)
        else:
            prog[state] = ("stop",)
    return prog


def assert_same_matrices(got, want):
    assert [name for name, _ in got] == [name for name, _ in want]
    for (_, g), (_, w) in zip(got, want):
        assert g.data == tuple(tuple(Fraction(x) for x in row) for row in w)


def test_machine_transitions_order():
    assert machine_transitions(M2) == [
        ("inc", "q0", "x", "q1"),
        ("zero", "q1", "x", "q2"),
        ("dec", "q1", "x", "q1"),
    ]


@pytest.mark.parametrize("machine", EVERYTHING, ids=lambda m: m.states[0] + str(len(m.states)))
def test_integer_encoding_matches_reference(machine):
    g = encode_integer(machine)
    labels, adam, eve, v0 = oracle_helpers.reference_integer_encoding(
        list(machine.states), as_program(machine)
    )
    assert g.variant == INTEGER
    assert list(g.coordinate_labels) == labels
    assert g.dimension == len(labels)
    assert_same_matrices(g.adam_matrices, adam)
    assert_same_matrices(g.eve_matrices, eve)
    assert list(g.start_vector) == [Fraction(x) for x in v0]


@pytest.mark.parametrize("machine", EVERYTHING, ids=lambda m: m.states[0] + str(len(m.states)))
def test_nonneg_encoding_matches_reference(machine):
    g = encode_nonneg(machine)
    labels, adam, eve, v0 = oracle_helpers.reference_nonneg_encoding(
        list(machine.states), as_program(machine)
    )
    assert g.variant == NONNEG
    assert list(g.coordinate_labels) == labels
    assert g.dimension == len(labels)
    assert_same_matrices(g.adam_matrices, adam)
    assert_same_matrices(g.eve_matrices, eve)
    assert list(g.start_vector) == [Fraction(x) for x in v0]


def test_frozen_m1_integer_shape():
    g = encode_integer(M1)
    assert g.dimension == frozen.M1_INT_DIM
    assert len(g.adam_matrices) == frozen.M1_INT_ADAM
    assert len(g.eve_matrices) == frozen.M1_INT_EVE
    assert g.start_vector == frozen.M1_INT_V0
    after = vec_mat(g.start_vector, g.eve_matrices[0][1])
    assert after == frozen.M1_INT_V0_AFTER_I


def test_frozen_m1_nonneg_shape():
    g = encode_nonneg(M1)
    assert g.dimension == frozen.M1_NN_DIM
    assert g.start_vector == frozen.M1_NN_V0
    name, i_matrix = g.eve_matrices[0]
    assert name == "I[q0->q1,x]"
    assert i_matrix == Matrix(frozen.M1_NN_I_MATRIX)
    after = vec_mat(g.start_vector, i_matrix)
    assert after == frozen.M1_NN_V0_AFTER_I


def test_adam_move_names():
    g = encode_integer(M1)
    assert [name for name, _ in g.adam_matrices] == [
        "Init", "Id", "F[q0]", "F[q1]", "F[x]", "F[y]", "A", "P",
    ]
    gn = encode_nonneg(M1)
    assert [name for name, _ in gn.adam_matrices] == ["Id", "P[x]", "P[y]", "P[q]"]


def test_degenerate_machine_flagged():
    stopper = parse_machine("q0: stop\n")
    for encode in (encode_integer, encode_nonneg):
        g = encode(stopper)
        assert g.degenerate and not g.eve_matrices


def test_nonneg_looper_closed_form():
    g = encode_nonneg(LOOPER)
    i_matrix = g.eve_matrices[0][1]
    v = g.start_vector
    for n in range(10):
        assert v == frozen.nn_looper_vector(n)
        v = vec_mat(v, i_matrix)


def test_scripted_play_faithful_looper():
    g = encode_integer(LOOPER)
    report = run_scripted_play(g, LOOPER, 50)
    assert report.turns == 50
    assert report.faithful_invariant_ok
    assert report.deviations == () and report.undetectable == ()
    assert report.flashes == ()
    assert report.machine_halted_turn is None
    assert report.annihilation_turn is None
    assert report.cheat_played is None
    assert any(x != 0 for row in report.final_product.data for x in row)


@pytest.mark.parametrize("machine", HALTERS, ids=["m1", "m2", "m3"])
def test_scripted_play_halting_annihilates(machine):
    trace, halted = run_machine(machine, 1000)
    assert halted
    steps = len(trace) - 1
    max_counter = max(max(x, y) for _, x, y in trace)
    bound = steps + len(machine.states) + max_counter + 3
    g = encode_integer(machine)
    report = run_scripted_play(g, machine, bound + 5)
    assert report.faithful_invariant_ok
    assert report.machine_halted_turn is not None
    assert report.annihilation_turn is not None
    assert report.annihilation_turn <= bound
    assert all(x == 0 for row in report.final_product.data for x in row)
    assert report.undetectable == ()
    # the forced post-halt move is the only deviation the audit sees
    assert len(report.deviations) == 1
    turn, played, expected = report.deviations[0]
    assert expected is None and played


def test_scripted_play_annihilation_turns_exact():
    assert run_scripted_play(encode_integer(M1), M1, 20).annihilation_turn == 5
    assert run_scripted_play(encode_integer(M2), M2, 20).annihilation_turn == 7
    assert run_scripted_play(encode_integer(M3), M3, 20).annihilation_turn == 8


def test_cheat_wrong_source_flashes_minus_one():
    g = encode_integer(M2)
    # at turn 1 Eve sits in q0; the cheat plays a move sourced elsewhere
    report = run_scripted_play(g, M2, 20, cheat_turn=1)
    assert report.cheat_played is True
    assert len(report.flashes) == 1
    _, label, value = report.flashes[0]
    assert label in M2.states and value == -1
    assert report.annihilation_turn is not None
    assert report.undetectable == ()


def test_cheat_wrong_branch_flashes_counter_value():
    big = parse_machine(
        "q0: inc x -> q1\n"
        "q1: inc x -> q2\n"
        "q2: inc x -> q3\n"
        "q3: ifz x -> q4 else dec -> q3\n"
        "q4: stop\n"
    )
    g = encode_integer(big)
    # turn 4: the simulation sits at q3 with x = 3; the cheat takes the
    # zero branch, leaving the counter coordinate at -3
    report = run_scripted_play(g, big, 30, cheat_turn=4)
    assert report.cheat_played is True
    turn, label, value = report.flashes[0]
    assert label == "x" and value == -3
    # the adjust step runs value-1 times before the punish
    k = report.adam_moves.index("F[x]")
    assert report.adam_moves[k + 1 : k + 3] == ("A", "A")
    assert report.adam_moves[k + 3 : k + 5] == ("P", "Init")
    assert report.annihilation_turn is not None


def test_cheat_impossible_reports_false():
    g = encode_integer(LOOPER)
    report = run_scripted_play(g, LOOPER, 10, cheat_turn=3)
    assert report.cheat_played is False
    assert report.deviations == ()
    assert report.annihilation_turn is None


def test_scripted_play_errors():
    g_nn = encode_nonneg(M1)
    with pytest.raises(ValueError, match="integer variant"):
        run_scripted_play(g_nn, M1, 10)
    g = encode_integer(M1)
    with pytest.raises(ValueError, match="positive"):
        run_scripted_play(g, M1, 0)
    with pytest.raises(ValueError, match="does not match"):
        run_scripted_play(g, M2, 10)
    stopper = parse_machine("q0: stop\n")
    with pytest.raises(ValueError, match="degenerate"):
        run_scripted_play(encode_integer(stopper), stopper, 10)


def test_nonneg_faithful_looper_not_punished():
    g = encode_nonneg(LOOPER)
    report = check_nonneg_punishment(g, LOOPER, 12)
    assert not report.punished
    assert report.magnitude_ok
    assert report.segments == ()
    assert report.segment_bounds_ok
    # unbridled growth tends to 4 for an ever-incremented counter
    assert report.aggregate_growth > 2


def test_nonneg_faithful_zeroloop_growth_two():
    g = encode_nonneg(ZEROLOOP)
    report = check_nonneg_punishment(g, ZEROLOOP, 10)
    assert not report.punished and report.magnitude_ok
    assert report.aggregate_growth == pytest.approx(2.0)


@pytest.mark.parametrize("machine", HALTERS, ids=["m1", "m2", "m3"])
def test_nonneg_halting_punished_below_two(machine):
    g = encode_nonneg(machine)
    report = check_nonneg_punishment(g, machine, 14)
    assert report.punished
    assert report.magnitude_ok
    assert report.segment_bounds_ok
    assert all(seg.within_bound for seg in report.segments)
    assert report.aggregate_below_two
    assert report.aggregate_growth < 2
    # the state lie after the halt draws the state reset
    assert "P[q]" in report.adam_moves


def test_nonneg_cheat_draws_counter_reset():
    g = encode_nonneg(ZEROLOOP)
    report = check_nonneg_punishment(g, ZEROLOOP, 12, cheat_turn=5)
    assert report.punished
    assert "P[y]" in report.adam_moves
    assert report.segment_bounds_ok
    assert report.aggregate_growth < 2


def test_nonneg_segment_ratios_exact():
    g = encode_nonneg(M2)
    report = check_nonneg_punishment(g, M2, 14)
    assert report.segments
    first = report.segments[0]
    assert first.ratio <= Fraction(2) ** (first.turns - 1)
    assert first.within_bound


def test_nonneg_errors():
    g_int = encode_integer(M1)
    with pytest.raises(ValueError, match="non-negative variant"):
        check_nonneg_punishment(g_int, M1, 10)
    g = encode_nonneg(M1)
    with pytest.raises(ValueError, match="positive"):
        check_nonneg_punishment(g, M1, 0)
    with pytest.raises(ValueError, match="does not match"):
        check_nonneg_punishment(g, M2, 10)
    stopper = parse_machine("q0: stop\n")
    with pytest.raises(ValueError, match="degenerate"):
        check_nonneg_punishment(encode_nonneg(stopper), stopper, 10)
