"""
Commutators - balanced iterated commutators, their streaming emitter, leaf
conjugators and the twisted variant.

Conventions: p^g = g^-1 p g and [h, g] = h^-1 g^-1 h g. For 2^d entries the
outermost commutator uses level d-1:

    B[p_{2D-1}..p_0] = [ B[p_{2D-1}..p_D]^beta(d), B[p_{D-1}..p_0]^alpha(d) ]   (D = 2^d)
"""

import logging
from typing import Callable, Iterator, Sequence, Tuple

from models import CommutatorSpec, LevelMap, SignedState, StateSequence, EPSILON_MAP, log2_exact
from services.transducer_core import invert_seq

logger = logging.getLogger(__name__)

Token = Tuple[str, int, bool]   # ("p", i, inverted) | ("a", level, inverted) | ("b", level, inverted)

# [X^b, Y^a] = b^-1 X^-1 b  a^-1 Y^-1 a  b^-1 X b  a^-1 Y a
COMMUTATOR_SHAPE = (
    ("b", True), ("X", True), ("b", False),
    ("a", True), ("Y", True), ("a", False),
    ("b", True), ("X", False), ("b", False),
    ("a", True), ("Y", False), ("a", False),
)


def conjugate(p: StateSequence, g: StateSequence) -> StateSequence:
    return invert_seq(g) + p + g


def commutator(h: StateSequence, g: StateSequence) -> StateSequence:
    return invert_seq(h) + invert_seq(g) + h + g


def _block_tokens(lo: int, size: int, inverted: bool) -> Iterator[Token]:
    if size == 1:
        yield ("p", lo, inverted)
        return
    half = size // 2
    level = half.bit_length() - 1
    shape = COMMUTATOR_SHAPE
    if inverted:
        shape = tuple((kind, not neg) for kind, neg in reversed(shape))
    for kind, neg in shape:
        if kind == "X":
            yield from _block_tokens(lo + half, half, neg)
        elif kind == "Y":
            yield from _block_tokens(lo, half, neg)
        else:
            yield (kind, level, neg)


def balanced_tokens(size: int) -> Iterator[Token]:
    """Entry-letter structure of a balanced commutator over `size` entries."""
    log2_exact(size)
    return _block_tokens(0, size, False)


def entry_letter_length(size: int) -> int:
    """Closed form (11 D^2 - 8) / 3; satisfies l(1) = 1, l(2D) = 8 + 4 l(D)."""
    log2_exact(size)
    return (11 * size * size - 8) // 3


def _emit(spec: CommutatorSpec, sink: Callable[[SignedState], None]) -> None:
    cache = {}
    for kind, index, inverted in balanced_tokens(spec.size):
        key = (kind, index)
        if key not in cache:
            if kind == "p":
                cache[key] = spec.entries[index]
            elif kind == "a":
                cache[key] = spec.alpha(index)
            else:
                cache[key] = spec.beta(index)
        piece = cache[key]
        if inverted:
            for entry in reversed(piece.entries):
                sink(entry.inverse())
        else:
            for entry in piece.entries:
                sink(entry)


def balanced(spec: CommutatorSpec) -> StateSequence:
    """The word B_{beta,alpha}[p_{D-1}, ..., p_0], no reduction applied."""
    out = []
    _emit(spec, out.append)
    return StateSequence(tuple(out))


def balanced_stream(spec: CommutatorSpec, sink: Callable[[SignedState], None]) -> None:
    """Feeds the letters of balanced(spec) to sink, left to right, without building the word."""
    _emit(spec, sink)


def generator_letter_length(spec: CommutatorSpec) -> int:
    """Length in states, with alpha(d), beta(d) and entries expanded."""

    def block(lo: int, size: int) -> int:
        if size == 1:
            return len(spec.entries[lo])
        half = size // 2
        level = half.bit_length() - 1
        return 4 * len(spec.beta(level)) + 4 * len(spec.alpha(level)) + 2 * block(lo + half, half) + 2 * block(lo, half)

    return block(0, spec.size)


def twisted(
    p: StateSequence,
    size: int,
    gamma: StateSequence,
    alpha: LevelMap = EPSILON_MAP,
    beta: LevelMap = EPSILON_MAP,
) -> StateSequence:
    """B^gamma(p, 1) = p; B^gamma(p, 2D) = [(gamma^-D B^gamma(p, D) gamma^D)^beta(d), B^gamma(p, D)^alpha(d)]."""
    log2_exact(size)
    word = p
    current = 1
    while current < size:
        level = current.bit_length() - 1
        left = conjugate(conjugate(word, gamma.power(current)), beta(level))
        right = conjugate(word, alpha(level))
        word = commutator(left, right)
        current *= 2
    return word


def leaf_conjugator(size: int, i: int, alpha: LevelMap, beta: LevelMap) -> StateSequence:
    """w(D, i): bit k of i (least significant first) contributes alpha(k) for 0, beta(k) for 1."""
    depth = log2_exact(size)
    if not 0 <= i < size:
        raise ValueError(f"index {i} out of range for {size} entries")
    word = StateSequence(())
    for k in range(depth):
        word = word + (beta(k) if (i >> k) & 1 else alpha(k))
    return word


def hoisted_spec(spec: CommutatorSpec) -> CommutatorSpec:
    """Same element with every conjugation moved to the leaves and trivial level maps."""
    entries = tuple(
        conjugate(entry, leaf_conjugator(spec.size, i, spec.alpha, spec.beta))
        for i, entry in enumerate(spec.entries)
    )
    return CommutatorSpec(entries, EPSILON_MAP, EPSILON_MAP)


def conjugated_entries(p: StateSequence, size: int, gamma: StateSequence) -> Tuple[StateSequence, ...]:
    """entries[i] = gamma^-i p gamma^i, the list a twisted commutator stands for."""
    return tuple(conjugate(p, gamma.power(i)) for i in range(size))
