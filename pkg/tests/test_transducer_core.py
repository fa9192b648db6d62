import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from errors import ConstructionError, FormatError, NotInvertible
from models import SignedState, StateSequence
from services.group_backends import fixture
from services.transducer_core import (
    MealyAutomaton, act_letter, act_word, cross, disjoint_union, first_moved_word, free_reduce,
    identity_states, level_action, prune_identity, residual, retag, to_dot, validate,
)


def revbin(n: int, k: int):
    """k binary digits of n, least significant first."""
    return tuple(str((n >> i) & 1) for i in range(k))


# ============================================================================
# construction and validation
# ============================================================================

def test_adding_machine_is_a_group_automaton(adding_machine):
    report = validate(adding_machine)
    assert report.is_group_automaton
    assert report.offending == []


def test_checkmark_is_not_invertible():
    report = validate(fixture("checkmark"))
    assert report.deterministic and report.complete
    assert not report.invertible
    assert ("check", "*") in report.offending


def test_inverse_of_non_invertible_state_raises():
    checkmark = fixture("checkmark")
    with pytest.raises(NotInvertible):
        act_word(checkmark, StateSequence.of("check^-1"), ("g",))


def test_duplicate_state_names_rejected():
    with pytest.raises(ConstructionError):
        MealyAutomaton("dup", ["0"], ["p", "p"], [])


def test_transition_to_unknown_state_rejected():
    with pytest.raises(ConstructionError):
        MealyAutomaton("bad", ["0"], ["p"], [("p", "0", "0", "ghost")])


def test_incomplete_automaton_reports_missing_entries():
    partial = MealyAutomaton("partial", ["0", "1"], ["p"], [("p", "0", "0", "p")])
    report = partial.report()
    assert not report.complete
    assert ("p", "1") in report.offending
    with pytest.raises(ConstructionError):
        act_word(partial, StateSequence.of("p"), ("0",))


def test_nondeterministic_automaton_reports_duplicates():
    twice = MealyAutomaton("twice", ["0"], ["p"], [("p", "0", "0", "p"), ("p", "0", "0", "p")])
    assert not twice.report().deterministic


def test_word_literal_parsing(adding_machine):
    assert adding_machine.alphabet.parse_word("0110") == ("0", "1", "1", "0")
    with pytest.raises(FormatError):
        adding_machine.alphabet.parse_word("012")


# ============================================================================
# actions
# ============================================================================

def test_adding_machine_examples(adding_machine):
    q = StateSequence.of("q")
    assert act_word(adding_machine, q, ("0",)) == ("1",)
    assert act_word(adding_machine, q, ("1", "1", "0")) == ("0", "0", "1")
    assert residual(adding_machine, q, ("1",)) == q
    assert residual(adding_machine, q, ("0",)) == StateSequence.of("id")


@given(k=st.integers(min_value=1, max_value=10), data=st.data())
@settings(max_examples=200, deadline=None)
def test_adding_machine_increments(k, data):
    automaton = fixture("adding-machine")
    n = data.draw(st.integers(min_value=0, max_value=2 ** k - 1))
    assert act_word(automaton, StateSequence.of("q"), revbin(n, k)) == revbin((n + 1) % 2 ** k, k)


@given(word=st.lists(st.sampled_from(["0", "1"]), max_size=12))
@settings(max_examples=100, deadline=None)
def test_inverse_undoes_the_action(word):
    automaton = fixture("aleshin")
    seq = StateSequence.from_literal("a,b^-1,c")
    image = act_word(automaton, seq, word)
    assert act_word(automaton, seq.inverse(), image) == tuple(word)


@given(
    u=st.lists(st.sampled_from(["0", "1"]), max_size=6),
    v=st.lists(st.sampled_from(["0", "1"]), max_size=6),
)
@settings(max_examples=100, deadline=None)
def test_cross_composes_along_words(u, v):
    automaton = fixture("grigorchuk")
    seq = StateSequence.from_literal("b,a,c^-1,d")
    out_u, rest_u = cross(automaton, seq, u)
    out_v, rest_uv = cross(automaton, rest_u, v)
    out_all, rest_all = cross(automaton, seq, tuple(u) + tuple(v))
    assert out_all == out_u + out_v
    assert rest_all == rest_uv


def test_act_letter_on_negative_state(aleshin):
    out, nxt = act_letter(aleshin, SignedState("a", True), "1")
    assert out == "0"
    assert nxt == SignedState("c", True)


def test_free_reduce_cancels_adjacent_pairs():
    seq = StateSequence.from_literal("a,b,b^-1,a^-1,c")
    assert free_reduce(seq) == StateSequence.of("c")


# ============================================================================
# identity states and unions
# ============================================================================

def test_identity_states(adding_machine):
    assert identity_states(adding_machine) == frozenset({"id"})
    assert identity_states(fixture("aleshin")) == frozenset()


def test_prune_identity_keeps_action(adding_machine):
    seq = StateSequence.from_literal("id,q,id^-1,q")
    pruned = prune_identity(adding_machine, seq)
    assert pruned == StateSequence.of("q", "q")
    for n in range(16):
        assert act_word(adding_machine, seq, revbin(n, 4)) == act_word(adding_machine, pruned, revbin(n, 4))


def test_disjoint_union_shares_identity():
    parts = [fixture("adding-machine"), fixture("grigorchuk")]
    union = disjoint_union(parts)
    assert len(union.states) == 2 + 5 - 1
    assert "id" in union
    seq = retag(StateSequence.of("q"), "adding-machine")
    assert act_word(union, seq, ("1", "0")) == ("0", "1")


# ============================================================================
# level search and export
# ============================================================================

def test_level_action_lists_all_words(adding_machine):
    words, images = level_action(adding_machine, StateSequence.of("q"), 2)
    assert words.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert images.tolist() == [[1, 0], [1, 1], [0, 1], [0, 0]]


def test_level_action_matches_act_word(aleshin):
    seq = StateSequence.from_literal("a,b^-1,c,a")
    words, images = level_action(aleshin, seq, 5)
    for row, image in zip(words.tolist(), images.tolist()):
        word = aleshin.decode_word(row)
        assert act_word(aleshin, seq, word) == aleshin.decode_word(image)


def test_first_moved_word(adding_machine):
    assert first_moved_word(adding_machine, StateSequence.of("q"), 3) == ("0",)
    assert first_moved_word(adding_machine, StateSequence.from_literal("q,q^-1"), 6) is None


def test_level_action_empty_level(adding_machine):
    words, images = level_action(adding_machine, StateSequence.of("q"), 0)
    assert words.shape == (1, 0)
    assert np.array_equal(words, images)


def test_to_dot_labels_edges(adding_machine):
    source = to_dot(adding_machine)
    assert source.startswith("digraph")
    assert "0/1" in source
    assert "1/0" in source
