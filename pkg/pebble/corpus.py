"""Sample machines and sentences shared by the CLI samples and the test sweeps."""

from __future__ import annotations

from . import props
from .minsky import MinskyMachine, parse_machine
from .syntax import And, Eventually, Formula, Next, Not, Once

HALTING = (
    "add_stop",
    "add_then_drain",
    "nested_loops",
    "transfer_double",
    "countdown_s2",
    "zero_jump",
    "stop_only",
)
NON_HALTING = (
    "self_loop_add",
    "ping_pong",
    "add_sub_pump",
    "zero_spin",
    "counter_race",
)

_PROGRAMS = {
    "add_stop": """
        1: ADD 1 TO S1; GOTO 2
        2: STOP
    """,
    "add_then_drain": """
        1: ADD 1 TO S1; GOTO 2
        2: ADD 1 TO S1; GOTO 3
        3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 3 ELSE GOTO 4
        4: STOP
    """,
    "nested_loops": """
        1: ADD 1 TO S1; GOTO 2
        2: ADD 1 TO S1; GOTO 3
        3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 7
        4: ADD 1 TO S2; GOTO 5
        5: ADD 1 TO S2; GOTO 6
        6: IF S2 != 0 THEN SUB 1 FROM S2; GOTO 6 ELSE GOTO 3
        7: STOP
    """,
    "transfer_double": """
        1: ADD 1 TO S1; GOTO 2
        2: ADD 1 TO S1; GOTO 3
        3: ADD 1 TO S1; GOTO 4
        4: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 5 ELSE GOTO 7
        5: ADD 1 TO S2; GOTO 6
        6: ADD 1 TO S2; GOTO 4
        7: STOP
    """,
    "countdown_s2": """
        1: ADD 1 TO S2; GOTO 2
        2: ADD 1 TO S2; GOTO 3
        3: ADD 1 TO S2; GOTO 4
        4: IF S2 != 0 THEN SUBTRACT 1 FROM S2; GOTO 4 ELSE GOTO 5
        5: STOP
    """,
    "zero_jump": """
        1: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 1 ELSE GOTO 2
        2: STOP
    """,
    "stop_only": """
        1: STOP
    """,
    "self_loop_add": """
        1: ADD 1 TO S1; GOTO 1
        2: STOP
    """,
    "ping_pong": """
        1: ADD 1 TO S1; GOTO 2
        2: ADD 1 TO S2; GOTO 1
        3: STOP
    """,
    "add_sub_pump": """
        1: ADD 1 TO S1; GOTO 2
        2: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 1 ELSE GOTO 3
        3: STOP
    """,
    "zero_spin": """
        1: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 2 ELSE GOTO 1
        2: STOP
    """,
    "counter_race": """
        1: ADD 1 TO S1; GOTO 2
        2: ADD 1 TO S1; GOTO 3
        3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 1
        4: ADD 1 TO S2; GOTO 3
        5: STOP
    """,
}


def machine_source(name: str) -> str:
    """Program text of a corpus machine, one instruction per line."""
    lines = _PROGRAMS[name].strip().splitlines()
    return "".join(line.strip() + "\n" for line in lines)


def machine_corpus() -> dict[str, MinskyMachine]:
    """Parsed corpus machines, halting ones first, keyed by name."""
    return {name: parse_machine(_PROGRAMS[name]) for name in HALTING + NON_HALTING}


def sentence_corpus() -> dict[str, Formula]:
    """Named sentences over constants a, b, c, d and the binary predicate E."""
    return {
        "same_ab": props.same("a", "b"),
        "apart_ab": Not(props.same("a", "b")),
        "same_aa": props.same("a", "a"),
        "always_new_d": props.always_new("d"),
        "same_in_past_ad": props.same_in_past("a", "d"),
        "no_change_c": props.no_change("c"),
        "always_return_a": props.always_return("a"),
        "next_new1": props.next_new(1, "a", "d", "c"),
        "next_new2": props.next_new(2, "a", "d"),
        "next_new_agreement": props.next_new_agreement("a", "d", "c"),
        "rigid_on_visited": props.rigid_on_visited("E", "a", "b"),
        "forwarding": props.forwarding_protocol("a", "b", "c"),
        "meet_later": Eventually(props.same("a", "b")),
        "met_before": Next(Once(props.same("a", "d"))),
        "stay_and_meet": And(props.no_change("c"), Eventually(props.same("c", "a"))),
    }
