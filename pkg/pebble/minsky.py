"""Two-counter Minsky machines: program text, validation and deterministic runs.

Program text, one labelled instruction per line::

    1: ADD 1 TO S1; GOTO 2
    2: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 2 ELSE GOTO 3
    3: STOP

Labels run from 1 to L and the only STOP is instruction L. ``SUBTRACT`` may be
written for ``SUB``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import pandas as pd

from .utils.error_handler import MachineError
from .utils.validation import validate_minimum


@dataclass(frozen=True)
class Add:
    """``ADD 1 TO S<counter>; GOTO <goto>``."""

    counter: int
    goto: int


@dataclass(frozen=True)
class SubOrJump:
    """Decrement and jump to ``goto_nonzero``, or jump to ``goto_zero`` on zero."""

    counter: int
    goto_nonzero: int
    goto_zero: int


@dataclass(frozen=True)
class Stop:
    """Halt."""


Instruction = Add | SubOrJump | Stop


@dataclass(frozen=True)
class MinskyMachine:
    """A two-counter machine; instruction ``i`` has label ``i + 1``."""

    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        validate_machine(self.instructions)

    @property
    def L(self) -> int:
        """Number of instructions; ``L`` is the STOP label."""
        return len(self.instructions)

    def instruction(self, label: int) -> Instruction:
        """Instruction with the given 1-based label."""
        return self.instructions[label - 1]


@dataclass(frozen=True)
class MachineState:
    """Label about to execute and the counters ``(S1, S2)``."""

    label: int
    counters: tuple[int, int]


@dataclass(frozen=True)
class Run:
    """States visited from the initial state; ``halted`` when STOP was reached."""

    states: tuple[MachineState, ...]
    halted: bool


def validate_machine(instructions: tuple[Instruction, ...]) -> None:
    """Check the well-formedness of a program.

    Args:
        instructions: Instructions in label order

    Raises:
        MachineError: If the program is empty, STOP is not exactly the last
            instruction, a counter is not 1 or 2, or a jump leaves ``1..L``

    """
    L = len(instructions)
    if L == 0:
        raise MachineError("machine has no instructions")
    stops = [i + 1 for i, instr in enumerate(instructions) if isinstance(instr, Stop)]
    if stops != [L]:
        raise MachineError(
            "exactly one STOP is required and it must be the last instruction",
            {"stop_labels": stops, "L": L},
        )
    for label, instr in enumerate(instructions, start=1):
        match instr:
            case Add(counter=k, goto=goto):
                targets = [goto]
            case SubOrJump(counter=k, goto_nonzero=nonzero, goto_zero=zero):
                targets = [nonzero, zero]
            case _:
                continue
        if k not in (1, 2):
            raise MachineError(
                f"instruction {label}: counter S{k} does not exist",
                {"label": label, "counter": k},
            )
        bad = [t for t in targets if not 1 <= t <= L]
        if bad:
            raise MachineError(
                f"instruction {label}: goto target(s) outside 1..{L}: "
                f"{', '.join(map(str, bad))}",
                {"label": label, "targets": bad},
            )


def step(m: MinskyMachine, s: MachineState) -> MachineState | None:
    """The successor of ``s``, or None when ``s`` is at STOP."""
    s1, s2 = s.counters
    match m.instruction(s.label):
        case Add(counter=k, goto=goto):
            return MachineState(goto, (s1 + 1, s2) if k == 1 else (s1, s2 + 1))
        case SubOrJump(counter=k, goto_nonzero=nonzero, goto_zero=zero):
            value = s1 if k == 1 else s2
            if value == 0:
                return MachineState(zero, s.counters)
            return MachineState(nonzero, (s1 - 1, s2) if k == 1 else (s1, s2 - 1))
    return None


def run_from(m: MinskyMachine, state: MachineState, max_steps: int) -> Run:
    """Run from an arbitrary state, collecting at most ``max_steps`` states."""
    validate_minimum(max_steps, "max_steps", 1)
    if min(state.counters) < 0:
        raise MachineError("counters must be non-negative", {"state": state})
    states = [state]
    while len(states) < max_steps:
        successor = step(m, states[-1])
        if successor is None:
            break
        states.append(successor)
    return Run(tuple(states), states[-1].label == m.L)


def run(m: MinskyMachine, max_steps: int) -> Run:
    """The run from label 1 with both counters at zero."""
    return run_from(m, MachineState(1, (0, 0)), max_steps)


_ADD = re.compile(r"^ADD\s+1\s+TO\s+S(\d+)\s*;\s*GOTO\s+(\d+)$", re.IGNORECASE)
_SUB = re.compile(
    r"^IF\s+S(\d+)\s*!=\s*0\s+THEN\s+SUB(?:TRACT)?\s+1\s+FROM\s+S(\d+)\s*;"
    r"\s*GOTO\s+(\d+)\s+ELSE\s+GOTO\s+(\d+)$",
    re.IGNORECASE,
)
_STOP = re.compile(r"^STOP$", re.IGNORECASE)
_LABELLED = re.compile(r"^(\d+)\s*:\s*(.*?)\s*;?\s*$")


def _parse_instruction(text: str, lineno: int) -> Instruction:
    if match := _ADD.match(text):
        return Add(int(match.group(1)), int(match.group(2)))
    if match := _SUB.match(text):
        tested, decremented = int(match.group(1)), int(match.group(2))
        if tested != decremented:
            raise MachineError(
                f"line {lineno}: tests S{tested} but subtracts from S{decremented}",
                {"line": lineno},
            )
        return SubOrJump(tested, int(match.group(3)), int(match.group(4)))
    if _STOP.match(text):
        return Stop()
    raise MachineError(f"line {lineno}: unknown instruction '{text}'", {"line": lineno})


def parse_machine(text: str) -> MinskyMachine:
    """Parse and validate a machine program.

    Raises:
        MachineError: On unknown instructions, duplicate or missing labels, goto
            targets outside 1..L, and a missing or misplaced STOP

    """
    by_label: dict[int, Instruction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LABELLED.match(line)
        if match is None:
            raise MachineError(
                f"line {lineno}: expected '<label>: <instruction>'", {"line": lineno}
            )
        label = int(match.group(1))
        if label in by_label:
            raise MachineError(
                f"line {lineno}: duplicate label {label}", {"label": label}
            )
        by_label[label] = _parse_instruction(match.group(2), lineno)

    if sorted(by_label) != list(range(1, len(by_label) + 1)):
        raise MachineError(
            "labels must be 1..L without gaps", {"labels": sorted(by_label)}
        )
    return MinskyMachine(tuple(by_label[label] for label in sorted(by_label)))


def format_instruction(instr: Instruction) -> str:
    """The instruction in machine file syntax."""
    match instr:
        case Add(counter=k, goto=goto):
            return f"ADD 1 TO S{k}; GOTO {goto}"
        case SubOrJump(counter=k, goto_nonzero=nonzero, goto_zero=zero):
            return (
                f"IF S{k} != 0 THEN SUB 1 FROM S{k}; GOTO {nonzero} ELSE GOTO {zero}"
            )
    return "STOP"


def format_machine(m: MinskyMachine) -> str:
    """The program as a machine file that ``parse_machine`` reads back."""
    return "".join(
        f"{label}: {format_instruction(instr)}\n"
        for label, instr in enumerate(m.instructions, start=1)
    )


def run_table(m: MinskyMachine, r: Run) -> pd.DataFrame:
    """One row per state: step, label, the instruction about to run, counters."""
    return pd.DataFrame(
        [
            {
                "step": j,
                "label": s.label,
                "instruction": format_instruction(m.instruction(s.label)),
                "S1": s.counters[0],
                "S2": s.counters[1],
            }
            for j, s in enumerate(r.states)
        ],
        columns=["step", "label", "instruction", "S1", "S2"],
    ).set_index("step")
