"""
Word problem - exact closure decider and bounded enumeration.

The closure of a sequence p is the set of residuals p.u over all words u; p is
the identity exactly when no member of the closure moves a single letter. The
closure is finite for every automaton (at most (2|Q|)^|p| members), so the
breadth-first search below terminates, but it can be large; Budget caps it.
"""

import logging
from collections import deque
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from models import BoundedResult, Budget, Decision, StateSequence, Verdict, Word
from services.transducer_core import MealyAutomaton, free_reduce, invert_seq

logger = logging.getLogger(__name__)


class WordProblemSolver:
    """Deciders bound to one automaton and one budget."""

    def __init__(
        self,
        automaton: MealyAutomaton,
        budget: Optional[Budget] = None,
        debug_logger: Optional[Callable] = None,
    ):
        self.automaton = automaton
        self.budget = budget or Budget.from_env()
        self.debug_log = debug_logger or (lambda msg, data=None: None)

    def _prune(self, codes: Tuple[int, ...], ids: frozenset) -> Tuple[int, ...]:
        return tuple(x for x in codes if x not in ids)

    def is_identity(self, seq: StateSequence, pre_reduce: bool = False, prune: bool = False) -> Decision:
        """
        Breadth-first closure with parent pointers.

        Args:
            seq: sequence to decide
            pre_reduce: freely reduce the input once before exploring
            prune: drop identity-state entries from every residual (exact, keeps
                the closure smaller)

        Returns:
            Decision with the length-lex smallest witness when the sequence moves a word
        """
        automaton = self.automaton
        if pre_reduce:
            seq = free_reduce(seq)
        ids = automaton.identity_codes() if prune else frozenset()
        start = automaton.encode(seq)
        if prune:
            start = self._prune(start, ids)

        parents: Dict[Tuple[int, ...], Optional[Tuple[Tuple[int, ...], int]]] = {start: None}
        queue = deque([start])
        peak = 1
        letters = range(len(automaton.alphabet))
        while queue:
            current = queue.popleft()
            for a in letters:
                b, child = automaton.step_letter(current, a)
                if b != a:
                    witness = self._path(parents, current) + [a]
                    self.debug_log("closure found a moved word", {"length": len(witness), "explored": len(parents)})
                    return Decision(
                        verdict=Verdict.NOT_IDENTITY,
                        witness=automaton.decode_word(witness),
                        explored=len(parents),
                        frontier_peak=peak,
                    )
                if prune:
                    child = self._prune(child, ids)
                if child not in parents:
                    if len(parents) >= self.budget.max_residuals:
                        logger.info("closure budget of %d residuals exhausted", self.budget.max_residuals)
                        return Decision(
                            verdict=Verdict.LIMIT_EXCEEDED,
                            explored=len(parents),
                            frontier_peak=peak,
                            evidence=f"no moved word among {len(parents)} residuals",
                        )
                    parents[child] = (current, a)
                    queue.append(child)
            peak = max(peak, len(queue))
        self.debug_log("closure exhausted", {"explored": len(parents), "frontier_peak": peak})
        return Decision(verdict=Verdict.IDENTITY, explored=len(parents), frontier_peak=peak)

    @staticmethod
    def _path(parents, node) -> List[int]:
        path: List[int] = []
        link = parents[node]
        while link is not None:
            node, letter = link
            path.append(letter)
            link = parents[node]
        path.reverse()
        return path

    def bounded_triviality(
        self,
        seq: StateSequence,
        max_len: int,
        letters: Optional[Iterable[str]] = None,
        prune: bool = True,
        settled: Optional[Callable[[StateSequence], bool]] = None,
    ) -> BoundedResult:
        """
        Enumerates every word of length <= max_len (over `letters` if given).

        Depth-first in lexicographic order with a memo of residuals already known
        to fix every continuation of a given length; the reported moved word is the
        length-lex smallest one. `settled(residual)` returning True means the
        residual is the identity in the group, so its subtree is skipped.
        """
        automaton = self.automaton
        ids = automaton.identity_codes() if prune else frozenset()
        start = automaton.encode(seq)
        if prune:
            start = self._prune(start, ids)
        alphabet = list(range(len(automaton.alphabet))) if letters is None else [
            automaton.alphabet.index(a) for a in letters]

        best: List[Optional[Tuple[int, ...]]] = [None]
        memo: Dict[Tuple[int, ...], int] = {}
        counter = [0]
        cap = self.budget.max_residuals

        def explore(res: Tuple[int, ...], prefix: Tuple[int, ...], remaining: int) -> None:
            if not res or remaining <= 0:
                return
            bound = remaining
            if best[0] is not None:
                bound = min(bound, len(best[0]) - len(prefix) - 1)
                if bound <= 0:
                    return
            if memo.get(res, 0) >= bound:
                return
            counter[0] += 1
            if settled is not None and settled(automaton.decode(res)):
                if len(memo) < cap:
                    memo[res] = max_len
                return
            children = []
            for a in alphabet:
                b, child = automaton.step_letter(res, a)
                if b != a:
                    best[0] = prefix + (a,)
                    return
                children.append((a, self._prune(child, ids) if prune else child))
            for a, child in children:
                explore(child, prefix + (a,), bound - 1)
                if best[0] is not None and len(best[0]) <= len(prefix) + 2:
                    return
            if best[0] is None and len(memo) < cap:
                memo[res] = max(memo.get(res, 0), bound)

        explore(start, (), max_len)
        self.debug_log("bounded enumeration done", {"max_len": max_len, "nodes": counter[0], "memo": len(memo)})
        if best[0] is not None:
            return BoundedResult(
                fixed_all=False,
                moved=automaton.decode_word(best[0]),
                max_len=max_len,
                explored=counter[0],
            )
        return BoundedResult(fixed_all=True, max_len=max_len, explored=counter[0])


# ============================================================================
# MODULE-LEVEL SHORTCUTS
# ============================================================================

def is_identity(
    automaton: MealyAutomaton,
    seq: StateSequence,
    budget: Optional[Budget] = None,
    pre_reduce: bool = False,
    prune: bool = False,
) -> Decision:
    return WordProblemSolver(automaton, budget).is_identity(seq, pre_reduce=pre_reduce, prune=prune)


def bounded_triviality(
    automaton: MealyAutomaton,
    seq: StateSequence,
    max_len: int,
    letters: Optional[Sequence[str]] = None,
) -> BoundedResult:
    return WordProblemSolver(automaton).bounded_triviality(seq, max_len, letters=letters)


def equal_in_group(
    automaton: MealyAutomaton,
    s1: StateSequence,
    s2: StateSequence,
    budget: Optional[Budget] = None,
) -> Decision:
    """s1 = s2 in the group iff s2^-1 s1 (s1 acting first) is the identity."""
    return is_identity(automaton, invert_seq(s2) + s1, budget)


def moves(automaton: MealyAutomaton, seq: StateSequence, word: Word) -> bool:
    out, _ = automaton.cross_codes(automaton.encode(seq), automaton.encode_word(word))
    return tuple(out) != tuple(automaton.encode_word(word))
