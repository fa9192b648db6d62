"""
Turing machines - normalization to a cellwise rule, the cellwise stepper and a
direct simulator used as the oracle.

A configuration is a word of length s: the tape cells with the state symbol
inserted in front of the head cell. The tape therefore has s - 1 real cells;
when the state sits in the last position the head reads a virtual blank.
Positions -1 and s of a configuration read as blank.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import ConstructionError, Nondeterministic, SpaceBoundViolation
from models import Configuration, LocalRule, RunResult, TuringMachine, next_power_of_two

logger = logging.getLogger(__name__)

LEFT_SUFFIX = "^L"
PAD_PREFIX = "pad"


def left_state(state: str) -> str:
    return state + LEFT_SUFFIX


def normalize(tm: TuringMachine) -> LocalRule:
    """
    Turn tm into tau: Gamma^3 -> Gamma.

    A left move (p, c) -> (q, d, L) is split into (p, c) -> (q^L, d, N) and an
    unconditional left step of q^L. Gamma is padded to a power of two with
    inert symbols; any window containing one maps to the first of them.
    """
    if len(set(tm.rules)) != len(tm.rules):
        raise Nondeterministic("duplicate rule keys")
    rules: Dict[Tuple[str, str], Tuple[str, str, str]] = {}
    intermediate: Dict[str, None] = {}
    for (p, c), (q, d, move) in tm.rules.items():
        if move == "L":
            hat = left_state(q)
            intermediate.setdefault(hat, None)
            rules[(p, c)] = (hat, d, "N")
        else:
            rules[(p, c)] = (q, d, move)

    states = tm.states + tuple(intermediate)
    tape = tm.tape_alphabet
    if set(states) & set(tape):
        raise ConstructionError("state and tape names collide after normalization")
    base = len(states) + len(tape)
    size = max(2, next_power_of_two(base))
    padding = tuple(f"{PAD_PREFIX}{i}" for i in range(size - base))
    dead = padding[0] if padding else tm.blank

    state_set, hats, pads = set(states), set(intermediate), set(padding)

    def cell(left: str, middle: str, right: str) -> str:
        if left in pads or middle in pads or right in pads:
            return dead
        if middle in state_set:
            if middle in hats:
                return left if left not in state_set else middle
            rule = rules.get((middle, right)) if right not in state_set else None
            if rule is None:
                return middle
            q, d, move = rule
            return q if move == "N" else d
        if left in state_set and left not in hats:
            rule = rules.get((left, middle))
            if rule is not None:
                q, d, move = rule
                return q if move == "R" else d
        if right in hats:
            return right[: -len(LEFT_SUFFIX)]
        return middle

    gamma = states + tape + padding
    tau = {(l, m, r): cell(l, m, r) for l in gamma for m in gamma for r in gamma}
    logger.debug("normalized %s: |Gamma|=%d (%d intermediate, %d padding)",
                 tm.name, len(gamma), len(intermediate), len(padding))
    return LocalRule(
        states=states,
        tape=tape,
        padding=padding,
        blank=tm.blank,
        initial=tm.initial,
        accepting=tm.accepting,
        tau=tau,
        intermediate=frozenset(intermediate),
        space_bound=tm.space_bound,
    )


def step(rule: LocalRule, conf: Configuration) -> Configuration:
    padded = (rule.blank,) + tuple(conf) + (rule.blank,)
    return tuple(rule.tau[(padded[i - 1], padded[i], padded[i + 1])] for i in range(1, len(padded) - 1))


def _state_count(rule: LocalRule, conf: Configuration) -> int:
    states = set(rule.states)
    return sum(1 for x in conf if x in states)


def initial_configuration(rule: LocalRule, w: Sequence[str], space: int) -> Configuration:
    w = tuple(w)
    if len(w) > space - 1:
        raise ValueError(f"input of length {len(w)} does not fit space {space}")
    return (rule.initial,) + w + (rule.blank,) * (space - len(w) - 1)


def run(rule: LocalRule, w: Iterable[str], max_steps: int, space: Optional[int] = None) -> RunResult:
    """Iterate step from p0 w blank^(s-n-1); Accept once an accepting state shows up."""
    w = tuple(w)
    space = space if space is not None else rule.space_bound(len(w))
    conf = initial_configuration(rule, w, space)
    computation: List[Configuration] = [conf]
    seen = {conf}
    steps = 0
    while True:
        if any(x in rule.accepting for x in conf):
            return RunResult("Accept", computation)
        if steps >= max_steps:
            return RunResult("Timeout", computation)
        nxt = step(rule, conf)
        steps += 1
        if _state_count(rule, nxt) != 1:
            raise SpaceBoundViolation(f"step {steps} leaves the tape segment of length {space}")
        if nxt in seen:
            return RunResult("Reject", computation)
        seen.add(nxt)
        computation.append(nxt)
        conf = nxt


def simulate(tm: TuringMachine, w: Iterable[str], space: Optional[int] = None, max_steps: int = 1000) -> RunResult:
    """Direct head-and-tape simulation reporting configurations in the same word format."""
    w = tuple(w)
    space = space if space is not None else tm.space_bound(len(w))
    cells = space - 1
    tape = list(w) + [tm.blank] * (cells - len(w))
    head, state = 0, tm.initial

    def snapshot() -> Configuration:
        return tuple(tape[:head]) + (state,) + tuple(tape[head:])

    conf = snapshot()
    computation = [conf]
    seen = {conf}
    steps = 0
    while True:
        if state in tm.accepting:
            return RunResult("Accept", computation)
        if steps >= max_steps:
            return RunResult("Timeout", computation)
        symbol = tape[head] if head < cells else tm.blank
        rule = tm.rules.get((state, symbol))
        if rule is None:
            return RunResult("Reject", computation)
        state, written, move = rule
        if head < cells:
            tape[head] = written
        elif written != tm.blank:
            raise SpaceBoundViolation("write beyond the last tape cell")
        if move == "R":
            head += 1
            if head > cells:
                raise SpaceBoundViolation("head moved past the tape segment")
        elif move == "L":
            head -= 1
            if head < 0:
                raise SpaceBoundViolation("head moved left of cell 0")
        steps += 1
        conf = snapshot()
        if conf in seen:
            return RunResult("Reject", computation)
        seen.add(conf)
        computation.append(conf)


def project_tableau(rule: LocalRule, computation: Sequence[Configuration]) -> List[Configuration]:
    """Drops the configurations of the extra left-move steps."""
    return [conf for conf in computation if not any(x in rule.intermediate for x in conf)]
