"""
Models module - Data structures for automaton groups and the reduction builders.
Consolidates all dataclasses used across the application.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple, TYPE_CHECKING, Union

from errors import ConstructionError, FormatError, GammaNotPowerOfTwo, Nondeterministic, NotPowerOfTwo

if TYPE_CHECKING:
    from services.transducer_core import MealyAutomaton


Word = Tuple[str, ...]
Configuration = Tuple[str, ...]

INVERSE_SUFFIX = "^-1"


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


def next_power_of_two(value: int) -> int:
    """Smallest power of two >= value (value >= 1)."""
    return 1 << max(0, (value - 1).bit_length())


def log2_exact(value: int) -> int:
    if not is_power_of_two(value):
        raise NotPowerOfTwo(f"{value} is not a power of two")
    return value.bit_length() - 1


# ============================================================================
# ALPHABETS AND WORDS
# ============================================================================

@dataclass(frozen=True)
class Alphabet:
    """Ordered letters; the position of a name is its dense index."""

    names: Tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ConstructionError("alphabet must not be empty")
        if len(set(self.names)) != len(self.names):
            raise ConstructionError(f"duplicate letter names in {self.names}")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ConstructionError(f"unknown letter {name!r}") from None

    def parse_word(self, text: str) -> Word:
        """Reads "0110" letter by letter when every name is one character, else "a1,a2,$"."""
        if not text:
            return ()
        if "," in text or any(len(n) != 1 for n in self.names):
            letters = tuple(t.strip() for t in text.split(",") if t.strip())
        else:
            letters = tuple(text)
        for letter in letters:
            if letter not in self:
                raise FormatError(f"letter {letter!r} is not in the alphabet {list(self.names)}")
        return letters

    def format_word(self, word: Iterable[str]) -> str:
        word = tuple(word)
        if all(len(n) == 1 for n in self.names):
            return "".join(word)
        return ",".join(word)


# ============================================================================
# SIGNED STATES AND SEQUENCES
# ============================================================================

@dataclass(frozen=True, order=True)
class SignedState:
    """A state or its formal inverse."""

    state: str
    negative: bool = False

    def inverse(self) -> SignedState:
        return SignedState(self.state, not self.negative)

    def __str__(self) -> str:
        return self.state + INVERSE_SUFFIX if self.negative else self.state

    @classmethod
    def parse(cls, token: str) -> SignedState:
        token = token.strip()
        if not token:
            raise FormatError("empty state name in sequence literal")
        if token.endswith(INVERSE_SUFFIX):
            name = token[: -len(INVERSE_SUFFIX)]
            if not name:
                raise FormatError(f"bad state token {token!r}")
            return cls(name, True)
        return cls(token, False)


@dataclass(frozen=True)
class StateSequence:
    """Word over signed states. entries[-1] acts first, entries[0] acts last."""

    entries: Tuple[SignedState, ...] = ()

    def __post_init__(self):
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[SignedState]:
        return iter(self.entries)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return StateSequence(self.entries[item])
        return self.entries[item]

    def __add__(self, other: StateSequence) -> StateSequence:
        return StateSequence(self.entries + other.entries)

    def __str__(self) -> str:
        return self.to_literal()

    def inverse(self) -> StateSequence:
        return StateSequence(tuple(s.inverse() for s in reversed(self.entries)))

    def power(self, k: int) -> StateSequence:
        """self^k; negative exponents use the inverse."""
        base = self if k >= 0 else self.inverse()
        return StateSequence(base.entries * abs(k))

    def states(self) -> List[str]:
        return [s.state for s in self.entries]

    def to_literal(self) -> str:
        return ",".join(str(s) for s in self.entries)

    @classmethod
    def of(cls, *tokens: Union[str, SignedState]) -> StateSequence:
        """StateSequence.of("b^-1", "a")."""
        return cls(tuple(t if isinstance(t, SignedState) else SignedState.parse(t) for t in tokens))

    @classmethod
    def from_literal(cls, text: str) -> StateSequence:
        """Parses "q,q^-1"; the empty string is the empty sequence."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(SignedState.parse(t) for t in text.split(",")))


EMPTY = StateSequence(())


# ============================================================================
# WORD PROBLEM MODELS
# ============================================================================

class Verdict(str, Enum):
    IDENTITY = "Identity"
    NOT_IDENTITY = "NotIdentity"
    LIMIT_EXCEEDED = "LimitExceeded"


@dataclass
class Decision:
    """Outcome of an identity check; witness is set iff the verdict is NotIdentity."""

    verdict: Verdict
    witness: Optional[Word] = None
    explored: int = 0
    frontier_peak: int = 0
    evidence: Optional[str] = None

    @property
    def is_identity(self) -> bool:
        return self.verdict is Verdict.IDENTITY

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'verdict': self.verdict.value,
            'witness': list(self.witness) if self.witness is not None else None,
            'stats': {'explored': self.explored, 'frontier_peak': self.frontier_peak},
        }
        if self.evidence:
            result['evidence'] = self.evidence
        return result


@dataclass(frozen=True)
class Budget:
    """Limits for the closure decider and for bounded enumeration."""

    max_residuals: int = 200_000
    max_witness_length: int = 12

    def __post_init__(self):
        if self.max_residuals <= 0 or self.max_witness_length <= 0:
            raise ValueError("budget limits must be positive")

    @classmethod
    def from_env(cls) -> Budget:
        """Defaults overridable through AUTGROUPS_MAX_RESIDUALS / AUTGROUPS_MAX_WITNESS_LENGTH."""
        return cls(
            max_residuals=int(os.environ.get("AUTGROUPS_MAX_RESIDUALS", 200_000)),
            max_witness_length=int(os.environ.get("AUTGROUPS_MAX_WITNESS_LENGTH", 12)),
        )


@dataclass
class BoundedResult:
    """Result of enumerating all words up to a length."""

    fixed_all: bool
    moved: Optional[Word] = None
    max_len: int = 0
    explored: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'fixed_all': self.fixed_all,
            'moved': list(self.moved) if self.moved is not None else None,
            'max_len': self.max_len,
            'explored': self.explored,
        }


@dataclass
class ValidationReport:
    """Structural checks of a transducer; failures are listed, never raised."""

    deterministic: bool
    complete: bool
    invertible: bool
    offending: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def is_group_automaton(self) -> bool:
        return self.deterministic and self.complete and self.invertible

    def to_dict(self) -> Dict[str, Any]:
        return {
            'deterministic': self.deterministic,
            'complete': self.complete,
            'invertible': self.invertible,
            'offending': [list(pair) for pair in self.offending],
        }


# ============================================================================
# COMMUTATOR MODELS
# ============================================================================

@dataclass(frozen=True)
class LevelMap:
    """Level-indexed conjugator d -> StateSequence (alpha or beta)."""

    evaluator: Callable[[int], StateSequence]
    description: str = ""

    def __call__(self, level: int) -> StateSequence:
        if level < 0:
            raise ValueError("levels are natural numbers")
        return self.evaluator(level)

    @classmethod
    def constant(cls, seq: StateSequence, description: Optional[str] = None) -> LevelMap:
        return cls(lambda _d: seq, description or f"const({seq.to_literal() or 'ε'})")

    @classmethod
    def alternating(cls, even: StateSequence, odd: StateSequence, description: Optional[str] = None) -> LevelMap:
        return cls(
            lambda d: even if d % 2 == 0 else odd,
            description or f"alt({even.to_literal()}|{odd.to_literal()})",
        )


EPSILON_MAP = LevelMap.constant(EMPTY, "ε")


@dataclass(frozen=True)
class CommutatorSpec:
    """entries[i] is p_i; the nesting reads p_{D-1}, ..., p_0 from left to right."""

    entries: Tuple[StateSequence, ...]
    alpha: LevelMap = EPSILON_MAP
    beta: LevelMap = EPSILON_MAP

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not is_power_of_two(len(self.entries)):
            raise NotPowerOfTwo(f"commutator needs 2^d entries, got {len(self.entries)}")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def depth(self) -> int:
        return log2_exact(len(self.entries))


# ============================================================================
# GROUP BACKEND MODELS
# ============================================================================

@dataclass(frozen=True)
class BackendBundle:
    """A group with non-trivial balanced commutators of every depth."""

    name: str
    automaton: 'MealyAutomaton'
    alpha: LevelMap
    beta: LevelMap
    b: Optional[Callable[[int, int], StateSequence]] = None
    certifier: Optional[Callable[[StateSequence], bool]] = None
    code_letters: Tuple[str, str] = ("0", "1")
    mover: Optional[Word] = None

    def generators(self, size: int) -> List[str]:
        """Non-identity states occurring in b(size, .), alpha(d), beta(d) for d < log2(size)."""
        seen: Dict[str, None] = {}
        depth = log2_exact(size)
        pieces = [self.b(size, i) for i in range(size)] if self.b else []
        for level in range(max(depth, 1)):
            pieces.append(self.alpha(level))
            pieces.append(self.beta(level))
        for piece in pieces:
            for entry in piece:
                seen.setdefault(entry.state, None)
        return list(seen)


# ============================================================================
# UNIFORM REDUCTION MODELS
# ============================================================================

@dataclass(frozen=True)
class DfaAcceptor:
    """Deterministic complete acceptor over a shared alphabet."""

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    transitions: Dict[Tuple[str, str], str]
    initial: str
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if not self.states:
            raise ConstructionError("acceptor without states")
        if self.initial not in self.states:
            raise ConstructionError(f"initial state {self.initial!r} unknown")
        if not self.finals <= set(self.states):
            raise ConstructionError("final states must be states")
        for p in self.states:
            for a in self.alphabet:
                target = self.transitions.get((p, a))
                if target is None:
                    raise ConstructionError(f"acceptor incomplete at ({p}, {a})")
                if target not in self.states:
                    raise ConstructionError(f"transition ({p}, {a}) goes to unknown {target!r}")

    def delta(self, state: str, letter: str) -> str:
        return self.transitions[(state, letter)]

    def accepts(self, word: Iterable[str]) -> bool:
        state = self.initial
        for letter in word:
            state = self.delta(state, letter)
        return state in self.finals

    @classmethod
    def from_dict(cls, data: Dict[str, Any], alphabet: Optional[Iterable[str]] = None) -> DfaAcceptor:
        """Create DfaAcceptor from {states, initial, finals, transitions: [{from, in, to}]}."""
        try:
            transitions = {(t['from'], t['in']): t['to'] for t in data['transitions']}
            letters = tuple(alphabet) if alphabet is not None else tuple(
                data.get('alphabet') or sorted({a for _, a in transitions}))
            return cls(
                states=tuple(data['states']),
                alphabet=letters,
                transitions=transitions,
                initial=data['initial'],
                finals=frozenset(data.get('finals', [])),
            )
        except KeyError as e:
            raise FormatError(f"acceptor document misses {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'states': list(self.states),
            'alphabet': list(self.alphabet),
            'initial': self.initial,
            'finals': sorted(self.finals),
            'transitions': [
                {'from': p, 'in': a, 'to': self.transitions[(p, a)]}
                for p in self.states for a in self.alphabet
            ],
        }


@dataclass(frozen=True)
class UniformInstance:
    automaton: 'MealyAutomaton'
    sequence: StateSequence
    size: int
    acceptor_count: int
    entries: Tuple[StateSequence, ...] = ()

    @property
    def padded(self) -> bool:
        return self.size != self.acceptor_count


# ============================================================================
# TURING MACHINE MODELS
# ============================================================================

MOVES = ("L", "N", "R")


@dataclass(frozen=True)
class SpaceBound:
    """s(n): a polynomial, n+1+2^k (test mode) or n+1+2^(2n^e) (true mode)."""

    kind: str = "polynomial"
    coefficients: Tuple[int, ...] = (1, 1)
    k: int = 0
    e: int = 1

    def __post_init__(self):
        if self.kind not in ("polynomial", "test", "true"):
            raise FormatError(f"unknown space bound kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    def __call__(self, n: int) -> int:
        if self.kind == "polynomial":
            value = sum(c * n ** i for i, c in enumerate(self.coefficients))
            return max(value, n + 1)
        if self.kind == "test":
            return n + 1 + 2 ** self.k
        return n + 1 + 2 ** (2 * n ** self.e)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "polynomial":
            return {'kind': 'polynomial', 'coefficients': list(self.coefficients)}
        if self.kind == "test":
            return {'kind': 'test', 'k': self.k}
        return {'kind': 'true', 'e': self.e}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SpaceBound:
        kind = data.get('kind', 'polynomial')
        return cls(
            kind=kind,
            coefficients=tuple(data.get('coefficients', (1, 1))),
            k=int(data.get('k', 0)),
            e=int(data.get('e', 1)),
        )


@dataclass(frozen=True)
class TuringMachine:
    """Deterministic single-tape machine; missing rules mean the machine halts."""

    states: Tuple[str, ...]
    input_alphabet: Tuple[str, ...]
    tape_alphabet: Tuple[str, ...]
    blank: str
    initial: str
    accepting: frozenset
    rules: Dict[Tuple[str, str], Tuple[str, str, str]]
    space_bound: SpaceBound = field(default_factory=SpaceBound)
    name: str = "machine"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "tape_alphabet", tuple(self.tape_alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if self.blank not in self.tape_alphabet:
            raise ConstructionError("the blank must be a tape symbol")
        if not set(self.input_alphabet) <= set(self.tape_alphabet):
            raise ConstructionError("input symbols must be tape symbols")
        if self.blank in self.input_alphabet:
            raise ConstructionError("the blank cannot be an input symbol")
        if self.initial not in self.states or not self.accepting <= set(self.states):
            raise ConstructionError("initial/accepting states must be states")
        if set(self.states) & set(self.tape_alphabet):
            raise ConstructionError("state names and tape symbols must be disjoint")
        for (p, c), (q, d, move) in self.rules.items():
            if p not in self.states or q not in self.states:
                raise ConstructionError(f"rule ({p}, {c}) uses an unknown state")
            if c not in self.tape_alphabet or d not in self.tape_alphabet:
                raise ConstructionError(f"rule ({p}, {c}) uses an unknown tape symbol")
            if move not in MOVES:
                raise ConstructionError(f"rule ({p}, {c}) has move {move!r}")

    def initial_configuration(self, w: Iterable[str], s: int) -> Configuration:
        """p0 w blank^(s-n-1), a word of length s."""
        w = tuple(w)
        if len(w) > s - 1:
            raise ValueError(f"input of length {len(w)} does not fit space {s}")
        return (self.initial,) + w + (self.blank,) * (s - len(w) - 1)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> TuringMachine:
        """Create TuringMachine from the JSON rule list [{state, read, next, write, move}]."""
        rules: Dict[Tuple[str, str], Tuple[str, str, str]] = {}
        try:
            for rule in data['rules']:
                key = (rule['state'], rule['read'])
                if key in rules:
                    raise Nondeterministic(f"two rules for {key}")
                rules[key] = (rule['next'], rule['write'], rule.get('move', 'N'))
            return cls(
                states=tuple(data['states']),
                input_alphabet=tuple(data['input_alphabet']),
                tape_alphabet=tuple(data['tape_alphabet']),
                blank=data['blank'],
                initial=data['initial'],
                accepting=frozenset(data['accepting']),
                rules=rules,
                space_bound=SpaceBound.from_dict(data.get('space_bound', {})),
                name=data.get('name', 'machine'),
            )
        except KeyError as e:
            raise FormatError(f"machine document misses {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'states': list(self.states),
            'input_alphabet': list(self.input_alphabet),
            'tape_alphabet': list(self.tape_alphabet),
            'blank': self.blank,
            'initial': self.initial,
            'accepting': sorted(self.accepting),
            'rules': [
                {'state': p, 'read': c, 'next': q, 'write': d, 'move': m}
                for (p, c), (q, d, m) in sorted(self.rules.items())
            ],
            'space_bound': self.space_bound.to_dict(),
        }


@dataclass(frozen=True)
class LocalRule:
    """Cellwise transition function tau on Gamma^3, Gamma = states + tape + padding."""

    states: Tuple[str, ...]
    tape: Tuple[str, ...]
    padding: Tuple[str, ...]
    blank: str
    initial: str
    accepting: frozenset
    tau: Dict[Tuple[str, str, str], str]
    intermediate: frozenset = frozenset()
    space_bound: SpaceBound = field(default_factory=SpaceBound)

    @property
    def gamma(self) -> Tuple[str, ...]:
        return self.states + self.tape + self.padding

    @property
    def dead(self) -> str:
        return self.padding[0] if self.padding else self.blank

    def __call__(self, left: str, middle: str, right: str) -> str:
        return self.tau[(left, middle, right)]


@dataclass
class RunResult:
    """Accept carries the whole tableau; Reject and Timeout carry what was computed."""

    outcome: str
    computation: List[Configuration] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.outcome == "Accept"


# ============================================================================
# TM REDUCTION MODELS
# ============================================================================

@dataclass(frozen=True)
class TmModeAutomaton:
    """The TM-mode automaton over {0,1,#,$} + Gamma with its named sub-parts."""

    automaton: 'MealyAutomaton'
    gamma: Tuple[str, ...]
    blank: str
    parts: Dict[str, Tuple[str, ...]]
    accepting: frozenset = frozenset()
    r: str = "r"
    id: str = "id"

    def checker(self, symbol: str) -> str:
        """Name of q_gamma, the transition checker started on `symbol`."""
        return f"zero({symbol}|{self.blank})"


@dataclass(frozen=True)
class CodeTable:
    """Binary prefix code for {0,1,#,$} + Gamma over two code letters."""

    gamma: Tuple[str, ...]
    b0: str = "0"
    b1: str = "1"

    def __post_init__(self):
        if not is_power_of_two(len(self.gamma)) or len(self.gamma) < 2:
            raise GammaNotPowerOfTwo(f"|Gamma| = {len(self.gamma)} is not a power of two >= 2")

    @property
    def width(self) -> int:
        """L with |Gamma| = 2^L."""
        return len(self.gamma).bit_length() - 1

    def encode_symbol(self, symbol: str) -> Word:
        b0, b1 = self.b0, self.b1
        fixed = {"0": (b1, b0, b0), "1": (b1, b0, b1), "#": (b1, b1, b0), "$": (b1, b1, b1)}
        if symbol in fixed:
            return fixed[symbol]
        try:
            index = self.gamma.index(symbol)
        except ValueError:
            raise FormatError(f"symbol {symbol!r} has no code") from None
        bits = format(index, f"0{self.width}b") if self.width else ""
        return (b0,) + tuple(b1 if bit == "1" else b0 for bit in bits)

    def encode_word(self, symbols: Iterable[str]) -> Word:
        out: List[str] = []
        for symbol in symbols:
            out.extend(self.encode_symbol(symbol))
        return tuple(out)

    def code_words(self) -> Dict[Word, str]:
        symbols = ["0", "1", "#", "$"] + list(self.gamma)
        return {self.encode_symbol(s): s for s in symbols}

    def proper_prefixes(self) -> List[Word]:
        """PPre X: eps, b1, b1b0, b1b1 and b0 followed by fewer than L bits."""
        b0, b1 = self.b0, self.b1
        prefixes: List[Word] = [(), (b1,), (b1, b0), (b1, b1)]
        layer: List[Word] = [(b0,)]
        for _ in range(self.width):
            prefixes.extend(layer)
            layer = [p + (bit,) for p in layer for bit in (b0, b1)]
        return prefixes

    def decode(self, word: Iterable[str]) -> Tuple[List[str], Word]:
        """Splits into code symbols; returns (symbols, remaining proper prefix)."""
        table = self.code_words()
        symbols: List[str] = []
        pending: List[str] = []
        for letter in word:
            if letter not in (self.b0, self.b1):
                raise FormatError(f"{letter!r} is not a code letter")
            pending.append(letter)
            symbol = table.get(tuple(pending))
            if symbol is not None:
                symbols.append(symbol)
                pending = []
        return symbols, tuple(pending)


@dataclass(frozen=True)
class HardInstance:
    """Automaton plus sequence q with q = 1 iff the machine rejects the input."""

    automaton: 'MealyAutomaton'
    sequence: StateSequence
    entries: Tuple[StateSequence, ...]
    alpha: LevelMap
    beta: LevelMap
    provenance: Dict[str, Any] = field(default_factory=dict)


# ============================================================================
# STRAIGHT-LINE PROGRAM MODELS
# ============================================================================

@dataclass(frozen=True)
class SLP:
    """One production per variable; a body symbol is a variable iff it names a rule."""

    rules: Dict[str, Tuple[SignedState, ...]]
    start: str

    def __post_init__(self):
        if self.start not in self.rules:
            raise ConstructionError(f"start variable {self.start!r} has no rule")
        object.__setattr__(self, "rules", {k: tuple(v) for k, v in self.rules.items()})
        empty = [var for var, body in self.rules.items() if not body]
        if empty:
            raise ConstructionError(f"empty production for {empty[0]!r}")

    def is_variable(self, symbol: SignedState) -> bool:
        return symbol.state in self.rules

    def size(self) -> int:
        return sum(len(body) for body in self.rules.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'start': self.start,
            'rules': [{'var': var, 'body': [str(s) for s in body]} for var, body in self.rules.items()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SLP:
        try:
            rules = {r['var']: tuple(SignedState.parse(t) for t in r['body']) for r in data['rules']}
            return cls(rules=rules, start=data['start'])
        except KeyError as e:
            raise FormatError(f"grammar document misses {e}") from None


@dataclass(frozen=True)
class CompressedInstance:
    automaton: 'MealyAutomaton'
    slp: SLP
    provenance: Dict[str, Any] = field(default_factory=dict)


@dataclass
class DeskReport:
    """Bounded instantiation of the compressed iff."""

    accepting: bool
    fixed_all: bool
    moved: Optional[Word] = None
    bound: int = 0
    words_checked: int = 0
    certified: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        """Accepting needs a moved word or a freeness certificate; rejecting needs every word fixed."""
        if self.accepting:
            return self.moved is not None or bool(self.certified)
        return self.fixed_all

    def to_dict(self) -> Dict[str, Any]:
        return {
            'accepting': self.accepting,
            'fixed_all': self.fixed_all,
            'moved': list(self.moved) if self.moved is not None else None,
            'bound': self.bound,
            'words_checked': self.words_checked,
            'certified': self.certified,
            'consistent': self.consistent,
        }
