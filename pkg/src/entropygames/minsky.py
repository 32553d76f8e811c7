"""Two-counter machines: parsing, formatting, direct execution.

The textual format is one instruction per line:

    q0: inc x -> q1
    q1: ifz x -> q2 else dec -> q3
    q2: stop

``inc c -> q`` increments counter c and jumps; ``ifz c -> q else dec -> q'``
jumps to q when c is zero and otherwise decrements c and jumps to q'.
Blank lines and ``#`` comments are ignored.  The machine starts in the first
listed state with both counters at zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

INC = "inc"
JZDEC = "jzdec"
STOP = "stop"

COUNTERS = ("x", "y")

_INC_RE = re.compile(r"^(\w+)\s*:\s*inc\s+([xy])\s*->\s*(\w+)$")
_JZDEC_RE = re.compile(
    r"^(\w+)\s*:\s*ifz\s+([xy])\s*->\s*(\w+)\s+else\s+dec\s*->\s*(\w+)$"
)
_STOP_RE = re.compile(r"^(\w+)\s*:\s*stop$")


@dataclass(frozen=True)
class Instruction:
    kind: str
    counter: str | None = None
    target: str | None = None
    else_target: str | None = None

    def __post_init__(self):
        if self.kind not in (INC, JZDEC, STOP):
            raise ValueError(f"unknown instruction kind {self.kind!r}")
        if self.kind == INC and (self.counter not in COUNTERS or not self.target):
            raise ValueError("inc needs a counter and a target")
        if self.kind == JZDEC and (
            self.counter not in COUNTERS or not self.target or not self.else_target
        ):
            raise ValueError("ifz/dec needs a counter and two targets")


@dataclass(frozen=True)
class TwoCounterMachine:
    """A two-counter machine; the initial state is the first one listed."""

    states: tuple[str, ...]
    program: Mapping[str, Instruction]

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("machine needs at least one state")
        if len(set(states)) != len(states):
            raise ValueError("duplicate state names")
        program = dict(self.program)
        for state in states:
            if state not in program:
                raise ValueError(f"state {state!r} has no instruction")
        for state, ins in program.items():
            if state not in states:
                raise ValueError(f"instruction for unknown state {state!r}")
            for target in (ins.target, ins.else_target):
                if target is not None and target not in states:
                    raise ValueError(f"jump to unknown state {target!r}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "program", program)

    @property
    def initial_state(self) -> str:
        return self.states[0]


def parse_machine(text: str) -> TwoCounterMachine:
    states: list[str] = []
    program: dict[str, Instruction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _INC_RE.match(line)
        if m:
            state, counter, target = m.groups()
            ins = Instruction(INC, counter=counter, target=target)
        else:
            m = _JZDEC_RE.match(line)
            if m:
                state, counter, zero_target, dec_target = m.groups()
                ins = Instruction(
                    JZDEC, counter=counter, target=zero_target, else_target=dec_target
                )
            else:
                m = _STOP_RE.match(line)
                if m:
                    state = m.group(1)
                    ins = Instruction(STOP)
                else:
                    raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        if state in program:
            raise ValueError(f"line {lineno}: duplicate instruction for {state!r}")
        states.append(state)
        program[state] = ins
    return TwoCounterMachine(states=tuple(states), program=program)


def format_machine(m: TwoCounterMachine) -> str:
    lines = []
    for state in m.states:
        ins = m.program[state]
        if ins.kind == INC:
            lines.append(f"{state}: inc {ins.counter} -> {ins.target}")
        elif ins.kind == JZDEC:
            lines.append(
                f"{state}: ifz {ins.counter} -> {ins.target} else dec -> {ins.else_target}"
            )
        else:
            lines.append(f"{state}: stop")
    return "\n".join(lines) + "\n"


def step(m: TwoCounterMachine, config: tuple[str, int, int]):
    """One execution step; None when the configuration is halted."""
    state, x, y = config
    ins = m.program[state]
    if ins.kind == STOP:
        return None
    if ins.kind == INC:
        if ins.counter == "x":
            return (ins.target, x + 1, y)
        return (ins.target, x, y + 1)
    value = x if ins.counter == "x" else y
    if value == 0:
        return (ins.target, x, y)
    if ins.counter == "x":
        return (ins.else_target, x - 1, y)
    return (ins.else_target, x, y - 1)


def run_machine(m: TwoCounterMachine, max_steps: int):
    """Execute from (initial, 0, 0); returns (trace, halted) where the trace
    lists every visited configuration including the last."""
    config = (m.initial_state, 0, 0)
    trace = [config]
    for _ in range(max_steps):
        nxt = step(m, config)
        if nxt is None:
            return trace, True
        config = nxt
        trace.append(config)
    return trace, m.program[config[0]].kind == STOP
