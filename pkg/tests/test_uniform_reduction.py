import random

import pytest

from errors import AlphabetMismatch, EmptyInput
from models import Verdict
from services.transducer_core import act_word, validate
from services.uniform_reduction import (
    GAMMA, all_words_acceptor, build_uniform, contains_acceptor, dfa_intersection_empty, random_dfa,
    shortest_common_word, star_acceptor,
)
from services.word_problem import is_identity


def test_empty_intersection_gives_identity(dfas_empty):
    assert dfa_intersection_empty(dfas_empty)
    instance = build_uniform(dfas_empty)
    assert instance.size == 2 and not instance.padded
    assert is_identity(instance.automaton, instance.sequence).verdict is Verdict.IDENTITY


def test_common_word_gives_witness(dfas_nonempty):
    w = shortest_common_word(dfas_nonempty)
    assert w == ("a1", "a2")
    instance = build_uniform(dfas_nonempty)
    candidate = w + ("$", "a1")
    assert act_word(instance.automaton, instance.sequence, candidate) != candidate
    assert is_identity(instance.automaton, instance.sequence).verdict is Verdict.NOT_IDENTITY


def test_automaton_shape(dfas_nonempty):
    instance = build_uniform(dfas_nonempty)
    automaton = instance.automaton
    assert automaton.alphabet.names == GAMMA + ("$",)
    # sigma, alpha, beta, two gadgets, id and the acceptor states
    assert len(automaton.states) == 6 + sum(len(d.states) for d in dfas_nonempty)
    assert validate(automaton).is_group_automaton
    assert len(instance.sequence) == 12


def test_three_acceptors_pad_to_four():
    dfas = [all_words_acceptor(), star_acceptor("a2"), contains_acceptor("a2")]
    instance = build_uniform(dfas)
    assert instance.size == 4 and instance.padded
    assert instance.entries[3] == instance.entries[2]
    assert shortest_common_word(dfas) == ("a2",)
    assert not is_identity(instance.automaton, instance.sequence).is_identity


def test_empty_word_is_a_common_word():
    dfas = [all_words_acceptor(), star_acceptor("a3")]
    assert shortest_common_word(dfas) == ()
    instance = build_uniform(dfas)
    assert act_word(instance.automaton, instance.sequence, ("$", "a1")) != ("$", "a1")


def test_no_acceptors():
    with pytest.raises(EmptyInput):
        build_uniform([])


def test_wrong_alphabet():
    with pytest.raises(AlphabetMismatch):
        build_uniform([all_words_acceptor(("x", "y"))])
    with pytest.raises(AlphabetMismatch):
        build_uniform([all_words_acceptor(), all_words_acceptor(("b1", "b2", "b3", "b4"))])


def test_random_corpus_agrees_with_product_emptiness():
    rng = random.Random(20240611)
    agreements = 0
    for _ in range(50):
        dfas = [random_dfa(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        instance = build_uniform(dfas)
        decision = is_identity(instance.automaton, instance.sequence)
        assert decision.verdict is not Verdict.LIMIT_EXCEEDED
        empty = dfa_intersection_empty(dfas)
        assert decision.is_identity == empty
        if not empty:
            candidate = shortest_common_word(dfas) + ("$", GAMMA[0])
            assert act_word(instance.automaton, instance.sequence, candidate) != candidate
        agreements += 1
    assert agreements == 50
