"""
Straight-line programs over signed states - expansion, length accounting,
inversion, streaming action and the twisted-commutator grammar.

A body symbol is a variable iff its name has a rule; a negative variable
occurrence stands for the inverse of that variable's word, resolved on the
fly so inverse rules never need to be written out.
"""

import itertools
import logging
import os
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from errors import CyclicGrammar, GuardExceeded
from models import (
    Budget, BoundedResult, Decision, LevelMap, SLP, SignedState, StateSequence, Verdict, Word,
    EPSILON_MAP, log2_exact,
)
from services.transducer_core import MealyAutomaton
from services.word_problem import WordProblemSolver

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 1_000_000
INVERSE_MARK = "⁻¹"


def expand_guard() -> int:
    """AUTGROUPS_EXPAND_GUARD, default 10^6 letters."""
    return int(float(os.environ.get("AUTGROUPS_EXPAND_GUARD", DEFAULT_GUARD)))


# ============================================================================
# STRUCTURE
# ============================================================================

def topological_order(slp: SLP) -> List[str]:
    """Variables reachable from the start, every variable after the ones it uses."""
    order: List[str] = []
    state: Dict[str, int] = {}          # 1 = on stack, 2 = done
    stack: List[Tuple[str, int]] = [(slp.start, 0)]
    state[slp.start] = 1
    while stack:
        var, pos = stack.pop()
        body = slp.rules[var]
        while pos < len(body) and not slp.is_variable(body[pos]):
            pos += 1
        if pos == len(body):
            state[var] = 2
            order.append(var)
            continue
        stack.append((var, pos + 1))
        child = body[pos].state
        mark = state.get(child)
        if mark == 1:
            raise CyclicGrammar(f"variable {child!r} derives itself")
        if mark is None:
            state[child] = 1
            stack.append((child, 0))
    return order


def expanded_lengths(slp: SLP) -> Dict[str, int]:
    lengths: Dict[str, int] = {}
    for var in topological_order(slp):
        lengths[var] = sum(lengths[s.state] if slp.is_variable(s) else 1 for s in slp.rules[var])
    return lengths


def expanded_length(slp: SLP) -> int:
    """Length of the generated word, exact, without expanding."""
    return expanded_lengths(slp)[slp.start]


def variable_count(slp: SLP) -> int:
    return len(topological_order(slp))


# ============================================================================
# EXPANSION AND INVERSION
# ============================================================================

def expand(slp: SLP, max_len: Optional[int] = None) -> StateSequence:
    """The generated word; GuardExceeded beyond max_len (default AUTGROUPS_EXPAND_GUARD)."""
    guard = expand_guard() if max_len is None else max_len
    length = expanded_length(slp)
    if length > guard:
        raise GuardExceeded(f"expansion has {length} letters, guard is {guard}")
    words: Dict[str, Tuple[SignedState, ...]] = {}
    for var in topological_order(slp):
        out: List[SignedState] = []
        for s in slp.rules[var]:
            if not slp.is_variable(s):
                out.append(s)
            elif s.negative:
                out.extend(x.inverse() for x in reversed(words[s.state]))
            else:
                out.extend(words[s.state])
        words[var] = tuple(out)
    return StateSequence(words[slp.start])


def inverse_name(var: str) -> str:
    return var[: -len(INVERSE_MARK)] if var.endswith(INVERSE_MARK) else var + INVERSE_MARK


def invert(slp: SLP) -> SLP:
    """Mirrored rules: X^-1 -> reversed body with flipped signs."""
    rules = {}
    for var in topological_order(slp):
        body = []
        for s in reversed(slp.rules[var]):
            if slp.is_variable(s):
                body.append(SignedState(inverse_name(s.state), s.negative))
            else:
                body.append(s.inverse())
        rules[inverse_name(var)] = tuple(body)
    return SLP(rules, inverse_name(slp.start))


def from_sequence(seq: StateSequence, start: str = "S") -> SLP:
    return SLP({start: tuple(seq)}, start)


# ============================================================================
# STREAMING ACTION
# ============================================================================

class SlpEvaluator:
    """
    Applies the generated word of an SLP to input words without expanding it.

    Results are memoized per (variable, sign, input word). The residual comes
    back as an SLP whose variables name those triples.
    """

    def __init__(self, automaton: MealyAutomaton, slp: SLP, debug_logger: Optional[Callable] = None):
        self.automaton = automaton
        self.slp = slp
        self.debug_log = debug_logger or (lambda msg, data=None: None)
        topological_order(slp)
        self._memo: Dict[Tuple[str, bool, Tuple[int, ...]], Tuple[Tuple[int, ...], str]] = {}
        self._residual_rules: Dict[str, Tuple[SignedState, ...]] = {}

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def clear(self) -> None:
        self._memo.clear()
        self._residual_rules.clear()

    def _name(self, var: str, negative: bool, word: Tuple[int, ...]) -> str:
        sign = INVERSE_MARK if negative else ""
        return f"⟨{var}{sign}@{self.automaton.alphabet.format_word(self.automaton.decode_word(word))}⟩"

    def _terminal(self, s: SignedState, word: Tuple[int, ...]) -> Tuple[Tuple[int, ...], SignedState]:
        code = self.automaton.encode(StateSequence((s,)))
        out, end = self.automaton.cross_codes(code, word)
        return tuple(out), self.automaton.decode(end)[0]

    def _variable(self, var: str, negative: bool, word: Tuple[int, ...]) -> Tuple[Tuple[int, ...], str]:
        key = (var, negative, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        body = self.slp.rules[var]
        # action order: the rightmost symbol reads first
        symbols = [s.inverse() for s in body] if negative else list(reversed(body))
        current = word
        residual: List[SignedState] = []
        for s in symbols:
            if self.slp.is_variable(s):
                current, name = self._variable(s.state, s.negative, current)
                residual.append(SignedState(name))
            else:
                current, end = self._terminal(s, current)
                residual.append(end)
        name = self._name(var, negative, word)
        self._residual_rules[name] = tuple(reversed(residual))
        self._memo[key] = (current, name)
        return current, name

    def output(self, u: Sequence[str]) -> Word:
        out, _ = self._variable(self.slp.start, False, tuple(self.automaton.encode_word(u)))
        return self.automaton.decode_word(out)

    def act(self, u: Sequence[str]) -> Tuple[Word, SLP]:
        out, name = self._variable(self.slp.start, False, tuple(self.automaton.encode_word(u)))
        rules = {}
        pending = [name]
        while pending:
            var = pending.pop()
            if var in rules:
                continue
            rules[var] = self._residual_rules[var]
            pending.extend(s.state for s in rules[var] if s.state in self._residual_rules)
        return self.automaton.decode_word(out), SLP(rules, name)


def act_streaming(automaton: MealyAutomaton, slp: SLP, u: Sequence[str]) -> Tuple[Word, SLP]:
    """Output and residual (as an SLP) of the generated word on u."""
    return SlpEvaluator(automaton, slp).act(u)


def streaming_bounded_triviality(
    automaton: MealyAutomaton,
    slp: SLP,
    max_len: int,
    letters: Optional[Sequence[str]] = None,
    evaluator: Optional[SlpEvaluator] = None,
) -> BoundedResult:
    """
    Checks every word of length max_len; the action is prefix-preserving, so
    that covers all shorter words. The moved word reported is the shortest
    moved prefix, length-lex smallest among those.
    """
    evaluator = evaluator or SlpEvaluator(automaton, slp)
    alphabet = tuple(letters) if letters is not None else automaton.alphabet.names
    best: Optional[Word] = None
    explored = 0
    for u in itertools.product(alphabet, repeat=max_len):
        explored += 1
        out = evaluator.output(u)
        if out == u:
            continue
        cut = next(i for i in range(max_len) if out[i] != u[i]) + 1
        moved = u[:cut]
        if best is None or (len(moved), moved) < (len(best), best):
            best = moved
    return BoundedResult(best is None, best, max_len, explored)


# ============================================================================
# TWISTED COMMUTATOR GRAMMAR
# ============================================================================

def twisted_rules(
    p: StateSequence,
    size: int,
    gamma: StateSequence,
    alpha: LevelMap = EPSILON_MAP,
    beta: LevelMap = EPSILON_MAP,
    prefix: str = "",
    power_prefix: Optional[str] = None,
) -> Tuple[Dict[str, Tuple[SignedState, ...]], str]:
    """
    Rules M_1 -> gamma, M_{2D} -> M_D M_D, A_1 -> p and

        A_{2D} -> beta^-1 M^-1 A^-1 M beta  alpha^-1 A^-1 alpha  beta^-1 M^-1 A M beta  alpha^-1 A alpha

    with M = M_D, A = A_D, alpha = alpha(d), beta = beta(d), D = 2^d.
    Grammars sharing power_prefix share their M chain.
    """
    log2_exact(size)
    power_prefix = prefix if power_prefix is None else power_prefix

    def m(k: int) -> str:
        return f"{power_prefix}M_{k}"

    def a(k: int) -> str:
        return f"{prefix}A_{k}"

    rules: Dict[str, Tuple[SignedState, ...]] = {a(1): tuple(p)}
    if size > 1:
        rules[m(1)] = tuple(gamma)
    current = 1
    while current < size:
        level = current.bit_length() - 1
        bt, al = beta(level), alpha(level)
        bt_inv, al_inv = bt.inverse(), al.inverse()
        M, A = SignedState(m(current)), SignedState(a(current))
        M_, A_ = M.inverse(), A.inverse()
        body = (
            bt_inv.entries + (M_, A_, M) + bt.entries
            + al_inv.entries + (A_,) + al.entries
            + bt_inv.entries + (M_, A, M) + bt.entries
            + al_inv.entries + (A,) + al.entries
        )
        rules[a(2 * current)] = body
        if 2 * current < size:
            rules[m(2 * current)] = (M, M)
        current *= 2
    return rules, a(size)


def slp_twisted(
    p: StateSequence,
    size: int,
    gamma: StateSequence,
    alpha: LevelMap = EPSILON_MAP,
    beta: LevelMap = EPSILON_MAP,
) -> SLP:
    """Grammar with start A_D generating twisted(p, D, gamma, alpha, beta)."""
    rules, start = twisted_rules(p, size, gamma, alpha, beta)
    return SLP(rules, start)


# ============================================================================
# DECISION
# ============================================================================

def compressed_is_identity(
    automaton: MealyAutomaton,
    slp: SLP,
    budget: Optional[Budget] = None,
    guard: Optional[int] = None,
    debug_logger: Optional[Callable] = None,
) -> Decision:
    """Expand and decide; past the guard, stream every word up to the witness length."""
    budget = budget or Budget.from_env()
    try:
        seq = expand(slp, guard)
    except GuardExceeded as e:
        logger.info("%s; streaming words up to length %d", e, budget.max_witness_length)
        evaluator = SlpEvaluator(automaton, slp, debug_logger)
        result = streaming_bounded_triviality(automaton, slp, budget.max_witness_length, evaluator=evaluator)
        if not result.fixed_all:
            return Decision(Verdict.NOT_IDENTITY, result.moved, explored=result.explored)
        return Decision(
            Verdict.LIMIT_EXCEEDED,
            explored=result.explored,
            evidence=f"fixes every word of length <= {result.max_len}",
        )
    return WordProblemSolver(automaton, budget, debug_logger).is_identity(seq)
