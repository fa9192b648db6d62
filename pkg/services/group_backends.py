"""
Group backends - concrete groups in which balanced commutators of every depth
can be kept non-trivial: A5 (permutation automaton over five letters), the
Aleshin automaton generating a free group of rank three, and the Grigorchuk
automaton as a plain fixture.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from errors import ConstructionError
from models import BackendBundle, CommutatorSpec, LevelMap, SignedState, StateSequence, EMPTY
from services.commutators import balanced
from services.transducer_core import IDENTITY_NAME, MealyAutomaton, adding_machine, checkmark_automaton, free_reduce

logger = logging.getLogger(__name__)

INV = "⁻¹"
PRODUCT = "·"


# ============================================================================
# A5
# ============================================================================

@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; images[i - 1] = pi(i)."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ConstructionError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, n: int = 5) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, text: str, n: int = 5) -> "Permutation":
        """Parses "(1 3 2 5 4)" or "(2 3)(4 5)"."""
        images = list(range(1, n + 1))
        for chunk in text.replace(")", "").split("("):
            cycle = [int(t) for t in chunk.split()]
            for pos, point in enumerate(cycle):
                images[point - 1] = cycle[(pos + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int64) - 1

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def after(self, other: "Permutation") -> "Permutation":
        """self o other: other acts first."""
        return Permutation(tuple(int(x) + 1 for x in self.array[other.array]))

    def inverse(self) -> "Permutation":
        return Permutation(tuple(int(x) + 1 for x in np.argsort(self.array)))

    @property
    def is_even(self) -> bool:
        arr = self.images
        inversions = sum(1 for i in range(len(arr)) for j in range(i + 1, len(arr)) if arr[i] > arr[j])
        return inversions % 2 == 0

    def cycles(self) -> str:
        seen, parts = set(), []
        for start in range(1, len(self.images) + 1):
            if start in seen or self(start) == start:
                continue
            cycle, point = [], start
            while point not in seen:
                seen.add(point)
                cycle.append(point)
                point = self(point)
            parts.append("(" + " ".join(map(str, cycle)) + ")")
        return "".join(parts) or IDENTITY_NAME


SIGMA = Permutation.from_cycles("(1 3 2 5 4)")
ALPHA = Permutation.from_cycles("(2 3)(4 5)")
BETA = Permutation.from_cycles("(2 4 5)")

A5_LETTERS = ("1", "2", "3", "4", "5")
_NAMED = {"sigma": SIGMA, "alpha": ALPHA, "beta": BETA}


def even_permutations(n: int = 5) -> List[Permutation]:
    perms = [Permutation(tuple(p)) for p in itertools.permutations(range(1, n + 1))]
    return [p for p in perms if p.is_even]


def permutation_automaton(name: str, perms: Dict[str, Permutation], letters: Sequence[str] = A5_LETTERS) -> MealyAutomaton:
    """Each state maps letter i to pi(i) and then behaves as the identity."""
    table = {}
    for state, perm in perms.items():
        table[state] = {letters[i - 1]: (letters[perm(i) - 1], IDENTITY_NAME) for i in range(1, len(letters) + 1)}
    table[IDENTITY_NAME] = {a: (a, IDENTITY_NAME) for a in letters}
    return MealyAutomaton.from_table(name, letters, table)


def evaluate_permutation(seq: StateSequence, perms: Dict[str, Permutation]) -> Permutation:
    """Product of the permutations of seq, rightmost applied first."""
    current = np.arange(5, dtype=np.int64)
    inverses: Dict[str, np.ndarray] = {}
    for entry in reversed(seq.entries):
        if entry.state == IDENTITY_NAME:
            continue
        if entry.state not in perms:
            raise ConstructionError(f"state {entry.state!r} is not a permutation state")
        arr = perms[entry.state].array
        if entry.negative:
            if entry.state not in inverses:
                inverses[entry.state] = np.argsort(arr)
            arr = inverses[entry.state]
        current = arr[current]
    return Permutation(tuple(int(x) + 1 for x in current))


def a5_backend(full: bool = False) -> BackendBundle:
    """sigma = (1 3 2 5 4), alpha = (2 3)(4 5), beta = (2 4 5); [sigma^beta, sigma^alpha] = sigma."""
    perms: Dict[str, Permutation] = dict(_NAMED)
    if full:
        named = {p.images: name for name, p in _NAMED.items()}
        for perm in even_permutations():
            if perm.images == Permutation.identity().images:
                continue
            perms.setdefault(named.get(perm.images, perm.cycles()), perm)
    automaton = permutation_automaton("a5-full" if full else "a5", perms)
    sigma = StateSequence.of("sigma")

    def certifier(seq: StateSequence) -> bool:
        return evaluate_permutation(seq, perms) != Permutation.identity()

    return BackendBundle(
        name="a5",
        automaton=automaton,
        alpha=LevelMap.constant(StateSequence.of("alpha"), "alpha"),
        beta=LevelMap.constant(StateSequence.of("beta"), "beta"),
        b=lambda _size, _i: sigma,
        certifier=certifier,
        code_letters=("1", "2"),
        mover=("1",),
    )


# ============================================================================
# ALESHIN (FREE GROUP OF RANK THREE)
# ============================================================================

ALESHIN_TABLE = {
    "a": {"0": ("1", "c"), "1": ("0", "b")},
    "b": {"0": ("1", "b"), "1": ("0", "c")},
    "c": {"0": ("0", "a"), "1": ("1", "a")},
}


def aleshin_automaton() -> MealyAutomaton:
    return MealyAutomaton.from_table("aleshin", ["0", "1"], ALESHIN_TABLE)


def signed_name(s: SignedState) -> str:
    return s.state + INV if s.negative else s.state


def parse_signed_name(name: str) -> SignedState:
    if name.endswith(INV):
        return SignedState(name[: -len(INV)], True)
    return SignedState(name, False)


def product_name(left: SignedState, right: SignedState) -> str:
    return f"{signed_name(left)}{PRODUCT}{signed_name(right)}"


def aleshin_square_automaton() -> MealyAutomaton:
    """Aleshin with inverses as real states, plus one state x·y for every ordered pair.

    The state x·y acts like the sequence (x y): y reads first, x reads y's output.
    """
    base = aleshin_automaton()
    singles = [SignedState(s, neg) for neg in (False, True) for s in base.states]

    def step(s: SignedState, a: str) -> Tuple[str, SignedState]:
        if not s.negative:
            out, nxt = base.transition(s.state, a)
            return out, SignedState(nxt)
        for b in base.alphabet:
            out, nxt = base.transition(s.state, b)
            if out == a:
                return b, SignedState(nxt, True)
        raise ConstructionError("aleshin rows are permutations")

    table: Dict[str, Dict[str, Tuple[str, str]]] = {}
    for s in singles:
        table[signed_name(s)] = {}
        for a in base.alphabet:
            out, nxt = step(s, a)
            table[signed_name(s)][a] = (out, signed_name(nxt))
    for x, y in itertools.product(singles, singles):
        row = {}
        for a in base.alphabet:
            mid, y_next = step(y, a)
            out, x_next = step(x, mid)
            row[a] = (out, product_name(x_next, y_next))
        table[product_name(x, y)] = row
    return MealyAutomaton.from_table("aleshin-sq", ["0", "1"], table)


def project_aleshin(seq: StateSequence) -> StateSequence:
    """Rewrites square/inverse state names back to plain signed a, b, c; drops identities."""
    letters: List[SignedState] = []
    for entry in seq:
        name = entry.state
        if name == IDENTITY_NAME or name.endswith(":" + IDENTITY_NAME):
            continue
        name = name.rsplit(":", 1)[-1]
        pieces = [parse_signed_name(part) for part in name.split(PRODUCT)]
        for piece in pieces:
            if piece.state not in ALESHIN_TABLE:
                raise ConstructionError(f"{entry.state!r} is not an Aleshin state")
        word = StateSequence(tuple(pieces))
        letters.extend((word.inverse() if entry.negative else word).entries)
    return StateSequence(tuple(letters))


def certify_free_nontrivial(seq: StateSequence) -> bool:
    """Free reduction over {a, b, c}; non-empty means non-trivial since the group is free."""
    return len(free_reduce(project_aleshin(seq))) > 0


ALESHIN_BETA = LevelMap.alternating(StateSequence.of("c"), StateSequence.of("b"), "c|b")
ALESHIN_ALPHA = LevelMap.constant(EMPTY, "ε")
B_INV_A = StateSequence.of("b^-1", "a")


def aleshin_b3(size: int) -> StateSequence:
    """B_3(D) over plain Aleshin states: every entry b^-1 a, beta = c/b, alpha = ε."""
    return balanced(CommutatorSpec(tuple(B_INV_A for _ in range(size)), ALESHIN_ALPHA, ALESHIN_BETA))


def aleshin_backend(include_square: bool = True) -> BackendBundle:
    if include_square:
        automaton = aleshin_square_automaton()
        entry = StateSequence.of(product_name(SignedState("b", True), SignedState("a")))
    else:
        automaton = aleshin_automaton()
        entry = B_INV_A
    return BackendBundle(
        name="f3",
        automaton=automaton,
        alpha=ALESHIN_ALPHA,
        beta=ALESHIN_BETA,
        b=lambda _size, _i: entry,
        certifier=certify_free_nontrivial,
        code_letters=("0", "1"),
    )


# ============================================================================
# GRIGORCHUK
# ============================================================================

def grigorchuk_automaton() -> MealyAutomaton:
    return MealyAutomaton.from_table("grigorchuk", ["0", "1"], {
        "a": {"0": ("1", IDENTITY_NAME), "1": ("0", IDENTITY_NAME)},
        "b": {"0": ("0", "a"), "1": ("1", "c")},
        "c": {"0": ("0", "a"), "1": ("1", "d")},
        "d": {"0": ("0", IDENTITY_NAME), "1": ("1", "b")},
        IDENTITY_NAME: {"0": ("0", IDENTITY_NAME), "1": ("1", IDENTITY_NAME)},
    })


# ============================================================================
# REGISTRY
# ============================================================================

@lru_cache(maxsize=None)
def _cached(name: str) -> MealyAutomaton:
    return FIXTURES[name]()


FIXTURES: Dict[str, Callable[[], MealyAutomaton]] = {
    "adding-machine": adding_machine,
    "a5": lambda: a5_backend().automaton,
    "a5-full": lambda: a5_backend(full=True).automaton,
    "aleshin": aleshin_automaton,
    "aleshin-sq": aleshin_square_automaton,
    "grigorchuk": grigorchuk_automaton,
    "checkmark": checkmark_automaton,
}


def fixture(name: str) -> MealyAutomaton:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    return _cached(name)


def backend(name: str) -> BackendBundle:
    if name == "a5":
        return a5_backend()
    if name in ("f3", "aleshin"):
        return aleshin_backend(include_square=True)
    raise KeyError(f"unknown backend {name!r}; known: a5, f3")


def fixture_registry() -> Dict[str, Callable[[], MealyAutomaton]]:
    """Fixture names mapped to their constructors, sorted by name."""
    return {name: FIXTURES[name] for name in sorted(FIXTURES)}
