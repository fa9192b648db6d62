"""
Transducer core - Mealy automata, validation and the two group actions.

A sequence acts right-to-left: its last entry reads the input first and every
entry to its left reads the output of the entry to its right. Negative entries
are never stored; they are answered from an inverted index of the positive
rows, built the first time a negative entry is applied.
"""

import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import graphviz
import numpy as np

from errors import AlphabetMismatch, ConstructionError, NotInvertible
from models import Alphabet, SignedState, StateSequence, ValidationReport, Word

logger = logging.getLogger(__name__)

Transition = Tuple[str, str, str, str]   # (from, in, out, to)

IDENTITY_NAME = "id"


class MealyAutomaton:
    """Letter-to-letter transducer; immutable once built."""

    def __init__(
        self,
        name: str,
        alphabet: Union[Alphabet, Sequence[str]],
        states: Sequence[str],
        transitions: Iterable[Transition],
    ):
        self.name = name
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
        self.states: Tuple[str, ...] = tuple(states)
        if not self.states:
            raise ConstructionError(f"automaton {name!r} has no states")
        if len(set(self.states)) != len(self.states):
            raise ConstructionError(f"automaton {name!r} has duplicate state names")
        self._state_index: Dict[str, int] = {s: i for i, s in enumerate(self.states)}

        self._raw: List[Transition] = []
        for src, a, b, dst in transitions:
            if src not in self._state_index or dst not in self._state_index:
                raise ConstructionError(f"transition {src} -{a}/{b}-> {dst} uses an unknown state")
            if a not in self.alphabet or b not in self.alphabet:
                raise ConstructionError(f"transition {src} -{a}/{b}-> {dst} uses an unknown letter")
            self._raw.append((src, a, b, dst))

        n, k = len(self.states), len(self.alphabet)
        # -1 marks a missing entry; incomplete automata can be validated but not run
        self._out = np.full((n, k), -1, dtype=np.int64)
        self._next = np.full((n, k), -1, dtype=np.int64)
        self._duplicates: List[Tuple[str, str]] = []
        for src, a, b, dst in self._raw:
            i, j = self._state_index[src], self.alphabet.index(a)
            if self._out[i, j] >= 0:
                self._duplicates.append((src, a))
                continue
            self._out[i, j] = self.alphabet.index(b)
            self._next[i, j] = self._state_index[dst]

        self._report: Optional[ValidationReport] = None
        self._step_out: Optional[List[Optional[List[int]]]] = None
        self._step_next: Optional[List[Optional[List[int]]]] = None
        self._identity: Optional[frozenset] = None

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def from_table(
        cls,
        name: str,
        alphabet: Sequence[str],
        table: Mapping[str, Mapping[str, Tuple[str, str]]],
    ) -> "MealyAutomaton":
        """table[state][letter] = (output, next)."""
        transitions = [
            (src, a, out, dst)
            for src, row in table.items()
            for a, (out, dst) in row.items()
        ]
        return cls(name, alphabet, list(table), transitions)

    def __repr__(self) -> str:
        return f"MealyAutomaton({self.name!r}, {len(self.states)} states, {len(self.alphabet)} letters)"

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self._state_index

    def transitions(self) -> List[Transition]:
        """All transitions sorted by (from, in) in declaration order of states and letters."""
        result = []
        for i, src in enumerate(self.states):
            for j, a in enumerate(self.alphabet):
                if self._out[i, j] >= 0:
                    result.append((src, a, self.alphabet.names[self._out[i, j]], self.states[self._next[i, j]]))
        return result

    def transition(self, state: str, letter: str) -> Tuple[str, str]:
        i, j = self.state_index(state), self.alphabet.index(letter)
        if self._out[i, j] < 0:
            raise ConstructionError(f"no transition for ({state}, {letter})")
        return self.alphabet.names[self._out[i, j]], self.states[self._next[i, j]]

    def state_index(self, state: str) -> int:
        try:
            return self._state_index[state]
        except KeyError:
            raise ConstructionError(f"state {state!r} is not in automaton {self.name!r}") from None

    # ------------------------------------------------------------------
    # validation
    # ------------------------------------------------------------------

    def report(self) -> ValidationReport:
        if self._report is None:
            offending: List[Tuple[str, str]] = list(self._duplicates)
            missing = np.argwhere(self._out < 0)
            for i, j in missing:
                offending.append((self.states[i], self.alphabet.names[j]))
            complete = missing.size == 0
            k = len(self.alphabet)
            invertible = False
            if complete:
                rows_sorted = np.sort(self._out, axis=1)
                bad_rows = np.flatnonzero((rows_sorted != np.arange(k)).any(axis=1))
                for i in bad_rows:
                    offending.append((self.states[i], "*"))
                invertible = bad_rows.size == 0
            self._report = ValidationReport(
                deterministic=not self._duplicates,
                complete=complete,
                invertible=invertible,
                offending=offending,
            )
        return self._report

    @property
    def invertible(self) -> bool:
        return self.report().invertible

    # ------------------------------------------------------------------
    # compiled form: signed state x = 2 * index + (1 if negative)
    # ------------------------------------------------------------------

    def _tables(self) -> Tuple[List[Optional[List[int]]], List[Optional[List[int]]]]:
        if self._step_out is None:
            report = self.report()
            if not (report.deterministic and report.complete):
                raise ConstructionError(f"automaton {self.name!r} is not deterministic and complete")
            out_rows = self._out.tolist()
            next_rows = self._next.tolist()
            step_out: List[Optional[List[int]]] = []
            step_next: List[Optional[List[int]]] = []
            for i in range(len(self.states)):
                step_out.append(out_rows[i])
                step_next.append([2 * t for t in next_rows[i]])
                if report.invertible:
                    inv = np.argsort(self._out[i]).tolist()
                    step_out.append(inv)
                    step_next.append([2 * next_rows[i][a] + 1 for a in inv])
                else:
                    step_out.append(None)
                    step_next.append(None)
            self._step_out, self._step_next = step_out, step_next
        return self._step_out, self._step_next

    def encode(self, seq: StateSequence) -> Tuple[int, ...]:
        codes = []
        for s in seq:
            codes.append(2 * self.state_index(s.state) + (1 if s.negative else 0))
        return tuple(codes)

    def decode(self, codes: Iterable[int]) -> StateSequence:
        return StateSequence(tuple(SignedState(self.states[x >> 1], bool(x & 1)) for x in codes))

    def encode_word(self, word: Iterable[str]) -> List[int]:
        return [self.alphabet.index(a) for a in word]

    def decode_word(self, letters: Iterable[int]) -> Word:
        names = self.alphabet.names
        return tuple(names[a] for a in letters)

    def _negative_error(self, x: int) -> NotInvertible:
        return NotInvertible(
            f"state {self.states[x >> 1]!r}^-1 applied but automaton {self.name!r} is not invertible"
        )

    def cross_codes(self, codes: Sequence[int], letters: Sequence[int]) -> Tuple[List[int], List[int]]:
        """Entry-major evaluation of the cross diagram; returns (output, end sequence)."""
        step_out, step_next = self._tables()
        word = list(letters)
        end = list(codes)
        if not word:
            return word, end
        for pos in range(len(end) - 1, -1, -1):
            x = end[pos]
            if step_out[x] is None:
                raise self._negative_error(x)
            for j, a in enumerate(word):
                word[j] = step_out[x][a]
                x = step_next[x][a]
            end[pos] = x
        return word, end

    def step_letter(self, codes: Sequence[int], letter: int) -> Tuple[int, Tuple[int, ...]]:
        """Feeds one letter through the whole sequence; returns (output, residual)."""
        step_out, step_next = self._tables()
        end = list(codes)
        a = letter
        for pos in range(len(end) - 1, -1, -1):
            x = end[pos]
            outs = step_out[x]
            if outs is None:
                raise self._negative_error(x)
            end[pos] = step_next[x][a]
            a = outs[a]
        return a, tuple(end)

    def moved_letters(self, codes: Sequence[int]) -> List[int]:
        """Letters a with seq(a) != a, in alphabet order."""
        moved = []
        for a in range(len(self.alphabet)):
            b, _ = self.step_letter(codes, a)
            if b != a:
                moved.append(a)
        return moved

    def identity_codes(self) -> frozenset:
        """Signed codes of identity states (both signs)."""
        names = identity_states(self)
        return frozenset(2 * self._state_index[s] + sign for s in names for sign in (0, 1))


# ============================================================================
# OPERATIONS
# ============================================================================

def validate(automaton: MealyAutomaton) -> ValidationReport:
    return automaton.report()


def act_letter(automaton: MealyAutomaton, s: SignedState, a: str) -> Tuple[str, SignedState]:
    out, end = automaton.cross_codes(automaton.encode(StateSequence((s,))), [automaton.alphabet.index(a)])
    return automaton.alphabet.names[out[0]], automaton.decode(end)[0]


def cross(automaton: MealyAutomaton, seq: StateSequence, u: Iterable[str]) -> Tuple[Word, StateSequence]:
    """Output word and residual sequence, computed in one pass."""
    out, end = automaton.cross_codes(automaton.encode(seq), automaton.encode_word(u))
    return automaton.decode_word(out), automaton.decode(end)


def act_word(automaton: MealyAutomaton, seq: StateSequence, u: Iterable[str]) -> Word:
    return cross(automaton, seq, u)[0]


def residual(automaton: MealyAutomaton, seq: StateSequence, u: Iterable[str]) -> StateSequence:
    return cross(automaton, seq, u)[1]


def invert_seq(seq: StateSequence) -> StateSequence:
    return seq.inverse()


def free_reduce(seq: StateSequence) -> StateSequence:
    stack: List[SignedState] = []
    for s in seq:
        if stack and stack[-1].state == s.state and stack[-1].negative != s.negative:
            stack.pop()
        else:
            stack.append(s)
    return StateSequence(tuple(stack))


def identity_states(automaton: MealyAutomaton) -> frozenset:
    """Greatest set of states with identity output rows whose successors stay in the set."""
    if automaton._identity is None:
        k = len(automaton.alphabet)
        complete = (automaton._out >= 0).all(axis=1)
        candidate = complete & (automaton._out == np.arange(k)).all(axis=1)
        changed = True
        while changed:
            stays = candidate[np.where(automaton._next >= 0, automaton._next, 0)].all(axis=1)
            updated = candidate & stays
            changed = bool((updated != candidate).any())
            candidate = updated
        automaton._identity = frozenset(automaton.states[i] for i in np.flatnonzero(candidate))
    return automaton._identity


def is_identity_state(automaton: MealyAutomaton, state: str) -> bool:
    return state in identity_states(automaton)


def prune_identity(automaton: MealyAutomaton, seq: StateSequence) -> StateSequence:
    """Drops identity-state entries; actions and residuals are unchanged up to those entries."""
    ids = identity_states(automaton)
    return StateSequence(tuple(s for s in seq if s.state not in ids))


def qualify(tag: str, state: str, share_identity: bool = True) -> str:
    if share_identity and state == IDENTITY_NAME:
        return IDENTITY_NAME
    return f"{tag}:{state}"


def retag(seq: StateSequence, tag: str, share_identity: bool = True) -> StateSequence:
    """Renames the entries of seq the way disjoint_union renames the states of part `tag`."""
    return StateSequence(tuple(SignedState(qualify(tag, s.state, share_identity), s.negative) for s in seq))


def disjoint_union(
    parts: Sequence[MealyAutomaton],
    share_identity: bool = True,
    tags: Optional[Sequence[str]] = None,
    name: Optional[str] = None,
) -> MealyAutomaton:
    """Tags every state with its part name; with share_identity all "id" states become one."""
    if not parts:
        raise ConstructionError("union of no automata")
    alphabet = parts[0].alphabet
    for part in parts[1:]:
        if part.alphabet.names != alphabet.names:
            raise AlphabetMismatch(f"{part.name!r} and {parts[0].name!r} have different alphabets")
    if tags is None:
        tags, counts = [], {}
        for part in parts:
            counts[part.name] = counts.get(part.name, 0) + 1
            tags.append(part.name if counts[part.name] == 1 else f"{part.name}#{counts[part.name]}")
    if len(set(tags)) != len(tags):
        raise ConstructionError(f"duplicate part tags {list(tags)}")

    states: List[str] = []
    transitions: List[Transition] = []
    merged = False
    for tag, part in zip(tags, parts):
        shared = share_identity and IDENTITY_NAME in part and IDENTITY_NAME in identity_states(part)
        for state in part.states:
            if shared and state == IDENTITY_NAME:
                if merged:
                    continue
                merged = True
                states.append(IDENTITY_NAME)
                transitions.extend((IDENTITY_NAME, a, a, IDENTITY_NAME) for a in alphabet)
                continue
            states.append(qualify(tag, state, shared))
        for src, a, b, dst in part.transitions():
            if shared and src == IDENTITY_NAME:
                continue
            transitions.append((qualify(tag, src, shared), a, b, qualify(tag, dst, shared)))

    union = MealyAutomaton(name or "+".join(tags), alphabet, states, transitions)
    logger.debug("union of %d parts: %d states", len(parts), len(union.states))
    return union


def _signed_arrays(automaton: MealyAutomaton) -> Tuple[np.ndarray, np.ndarray]:
    step_out, step_next = automaton._tables()
    k = len(automaton.alphabet)
    outs = np.array([row if row is not None else [0] * k for row in step_out], dtype=np.int64)
    nexts = np.array([row if row is not None else [0] * k for row in step_next], dtype=np.int64)
    return outs, nexts


def level_action(automaton: MealyAutomaton, seq: StateSequence, level: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Applies seq to every word of the given length at once.

    Returns (words, images) as letter-index arrays of shape (k^level, level),
    rows in lexicographic order.
    """
    step_out, _ = automaton._tables()
    k = len(automaton.alphabet)
    if level == 0:
        empty = np.zeros((1, 0), dtype=np.int64)
        return empty, empty.copy()
    count = k ** level
    words = np.stack(np.unravel_index(np.arange(count), (k,) * level), axis=1).astype(np.int64)
    images = words.copy()
    outs, nexts = _signed_arrays(automaton)
    for x in reversed(automaton.encode(seq)):
        if step_out[x] is None:
            raise automaton._negative_error(x)
        state = np.full(count, x, dtype=np.int64)
        for j in range(level):
            column = images[:, j]
            images[:, j] = outs[state, column]
            state = nexts[state, column]
    return words, images


def first_moved_word(automaton: MealyAutomaton, seq: StateSequence, max_level: int) -> Optional[Word]:
    """Length-lex smallest word moved by seq, searched level by level up to max_level."""
    for level in range(1, max_level + 1):
        words, images = level_action(automaton, seq, level)
        moved = np.flatnonzero((words != images).any(axis=1))
        if moved.size:
            return automaton.decode_word(words[moved[0]].tolist())
    return None


def to_dot(automaton: MealyAutomaton) -> str:
    """Graphviz source with "in/out" edge labels, parallel edges merged."""
    dot = graphviz.Digraph(name=automaton.name)
    dot.attr(rankdir="LR")
    for state in automaton.states:
        dot.node(state, shape="circle")
    labels: Dict[Tuple[str, str], List[str]] = {}
    for src, a, b, dst in automaton.transitions():
        labels.setdefault((src, dst), []).append(f"{a}/{b}")
    for (src, dst), parts in labels.items():
        dot.edge(src, dst, label="\n".join(parts))
    return dot.source


# ============================================================================
# SMALL FIXTURES
# ============================================================================

def adding_machine() -> MealyAutomaton:
    """q: 1/0 loops, 0/1 goes to id; q acts as +1 on reversed binary numerals."""
    return MealyAutomaton.from_table("adding-machine", ["0", "1"], {
        "q": {"0": ("1", IDENTITY_NAME), "1": ("0", "q")},
        IDENTITY_NAME: {"0": ("0", IDENTITY_NAME), "1": ("1", IDENTITY_NAME)},
    })


def checkmark_automaton() -> MealyAutomaton:
    """Plain check-marking (letters g and g*): both letters come out marked, so no inverse."""
    return MealyAutomaton.from_table("checkmark", ["g", "g*"], {
        "check": {"g*": ("g*", "check"), "g": ("g*", "wait")},
        "wait": {"g": ("g", "wait"), "g*": ("g*", "wait")},
    })
