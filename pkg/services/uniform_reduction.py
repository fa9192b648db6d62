"""
Uniform reduction - intersection emptiness of finite acceptors to the word
problem of a group automaton over five letters.

Every acceptor becomes a block of identity-output states that follows its own
transitions; on $ a final state continues as sigma and a non-final state as
id. The sequence is the balanced commutator of the initial states with the
gadgets alpha0/beta0, which behave like the identity until $ and like
alpha/beta afterwards. Reading w$ leaves B[sigma, ..., sigma] = sigma when
every acceptor accepts w, and a commutator with an id entry otherwise.
"""

import logging
import random
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from errors import AlphabetMismatch, EmptyInput
from models import CommutatorSpec, DfaAcceptor, LevelMap, StateSequence, UniformInstance, Word, next_power_of_two
from services.commutators import balanced
from services.group_backends import ALPHA, BETA, SIGMA
from services.transducer_core import IDENTITY_NAME, MealyAutomaton

logger = logging.getLogger(__name__)

END = "$"
GAMMA = ("a1", "a2", "a3", "a4")


def _check_alphabets(dfas: Sequence[DfaAcceptor]) -> Tuple[str, ...]:
    if not dfas:
        raise EmptyInput("at least one acceptor is required")
    alphabet = dfas[0].alphabet
    for dfa in dfas[1:]:
        if dfa.alphabet != alphabet:
            raise AlphabetMismatch(f"acceptors disagree on the alphabet: {alphabet} vs {dfa.alphabet}")
    return alphabet


def build_uniform(dfas: Sequence[DfaAcceptor]) -> UniformInstance:
    """
    Build the automaton and the sequence p with p = 1 iff no word is accepted by all acceptors.

    Args:
        dfas: acceptors over the same four-letter alphabet

    Returns:
        UniformInstance; D is padded to a power of two by repeating the last acceptor
    """
    gamma = _check_alphabets(dfas)
    if len(gamma) != 4 or END in gamma:
        raise AlphabetMismatch(f"the acceptors must share a four-letter alphabet without $, got {gamma}")
    letters = gamma + (END,)

    table: Dict[str, Dict[str, Tuple[str, str]]] = {}
    for name, perm in (("sigma", SIGMA), ("alpha", ALPHA), ("beta", BETA)):
        table[name] = {letters[i - 1]: (letters[perm(i) - 1], IDENTITY_NAME) for i in range(1, 6)}
    for gadget, target in (("alpha0", "alpha"), ("beta0", "beta")):
        row = {a: (a, gadget) for a in gamma}
        row[END] = (END, target)
        table[gadget] = row

    initials: List[str] = []
    for j, dfa in enumerate(dfas):
        for p in dfa.states:
            row = {a: (a, f"dfa{j}:{dfa.delta(p, a)}") for a in gamma}
            row[END] = (END, "sigma" if p in dfa.finals else IDENTITY_NAME)
            table[f"dfa{j}:{p}"] = row
        initials.append(f"dfa{j}:{dfa.initial}")
    table[IDENTITY_NAME] = {a: (a, IDENTITY_NAME) for a in letters}

    automaton = MealyAutomaton.from_table("uniform", letters, table)
    size = next_power_of_two(len(dfas))
    initials += [initials[-1]] * (size - len(initials))
    entries = tuple(StateSequence.of(p) for p in initials)
    spec = CommutatorSpec(
        entries,
        alpha=LevelMap.constant(StateSequence.of("alpha0"), "alpha0"),
        beta=LevelMap.constant(StateSequence.of("beta0"), "beta0"),
    )
    sequence = balanced(spec)
    logger.info("uniform instance: %d acceptors, D=%d, %d states, |p|=%d",
                len(dfas), size, len(automaton.states), len(sequence))
    return UniformInstance(automaton, sequence, size, len(dfas), entries)


def _product_search(dfas: Sequence[DfaAcceptor]) -> Optional[Word]:
    alphabet = _check_alphabets(dfas)
    start = tuple(d.initial for d in dfas)
    parents: Dict[tuple, Optional[Tuple[tuple, str]]] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if all(p in d.finals for p, d in zip(node, dfas)):
            word: List[str] = []
            while parents[node] is not None:
                node, letter = parents[node]
                word.append(letter)
            return tuple(reversed(word))
        for a in alphabet:
            child = tuple(d.delta(p, a) for p, d in zip(node, dfas))
            if child not in parents:
                parents[child] = (node, a)
                queue.append(child)
    return None


def dfa_intersection_empty(dfas: Sequence[DfaAcceptor]) -> bool:
    """Reachability in the product acceptor."""
    return _product_search(dfas) is None


def shortest_common_word(dfas: Sequence[DfaAcceptor]) -> Optional[Word]:
    """Length-lex smallest word accepted by every acceptor, or None."""
    return _product_search(dfas)


def random_dfa(rng: random.Random, n_states: int, alphabet: Sequence[str] = GAMMA, final_rate: float = 0.4) -> DfaAcceptor:
    states = tuple(f"s{i}" for i in range(n_states))
    transitions = {(p, a): rng.choice(states) for p in states for a in alphabet}
    finals = frozenset(p for p in states if rng.random() < final_rate)
    return DfaAcceptor(states, tuple(alphabet), transitions, states[0], finals)


def all_words_acceptor(alphabet: Sequence[str] = GAMMA) -> DfaAcceptor:
    return DfaAcceptor(("s",), tuple(alphabet), {("s", a): "s" for a in alphabet}, "s", frozenset({"s"}))


def star_acceptor(letter: str, alphabet: Sequence[str] = GAMMA) -> DfaAcceptor:
    """Accepts letter*."""
    transitions = {}
    for a in alphabet:
        transitions[("ok", a)] = "ok" if a == letter else "dead"
        transitions[("dead", a)] = "dead"
    return DfaAcceptor(("ok", "dead"), tuple(alphabet), transitions, "ok", frozenset({"ok"}))


def contains_acceptor(letter: str, alphabet: Sequence[str] = GAMMA) -> DfaAcceptor:
    """Accepts the words containing letter."""
    transitions = {}
    for a in alphabet:
        transitions[("wait", a)] = "seen" if a == letter else "wait"
        transitions[("seen", a)] = "seen"
    return DfaAcceptor(("wait", "seen"), tuple(alphabet), transitions, "wait", frozenset({"seen"}))
