import pytest
from hypothesis import given, settings, strategies as st

from models import Budget, SignedState, StateSequence, Verdict
from services.group_backends import fixture
from services.transducer_core import act_word, free_reduce
from services.word_problem import WordProblemSolver, bounded_triviality, equal_in_group, is_identity, moves

aleshin_letters = st.builds(SignedState, st.sampled_from(["a", "b", "c"]), st.booleans())


def test_inverse_pair_is_identity(adding_machine):
    decision = is_identity(adding_machine, StateSequence.from_literal("q,q^-1"))
    assert decision.verdict is Verdict.IDENTITY
    assert decision.witness is None


def test_adding_machine_generator_moves_zero(adding_machine):
    decision = is_identity(adding_machine, StateSequence.of("q"))
    assert decision.verdict is Verdict.NOT_IDENTITY
    assert decision.witness == ("0",)


def test_empty_sequence_is_identity(adding_machine):
    assert is_identity(adding_machine, StateSequence()).is_identity


@pytest.mark.parametrize("literal", ["a,a", "b,b", "b,c,d", "d,c,b", "c,c"])
def test_grigorchuk_relations(literal):
    assert is_identity(fixture("grigorchuk"), StateSequence.from_literal(literal)).is_identity


def test_grigorchuk_product_equals_third_generator():
    decision = equal_in_group(fixture("grigorchuk"), StateSequence.from_literal("b,c"), StateSequence.of("d"))
    assert decision.is_identity


def test_grigorchuk_non_relation_has_witness():
    automaton = fixture("grigorchuk")
    seq = StateSequence.from_literal("a,b")
    decision = is_identity(automaton, seq)
    assert decision.verdict is Verdict.NOT_IDENTITY
    assert moves(automaton, seq, decision.witness)


def test_budget_exhaustion_is_a_verdict(adding_machine):
    solver = WordProblemSolver(adding_machine, Budget(max_residuals=1))
    decision = solver.is_identity(StateSequence.from_literal("q,q^-1"))
    assert decision.verdict is Verdict.LIMIT_EXCEEDED
    assert decision.evidence


def test_pruning_and_reduction_do_not_change_verdicts():
    automaton = fixture("grigorchuk")
    solver = WordProblemSolver(automaton)
    for literal in ("a,id,a", "b,c,id^-1,d", "a,b,b^-1,c"):
        seq = StateSequence.from_literal(literal)
        plain = solver.is_identity(seq).verdict
        assert solver.is_identity(seq, prune=True).verdict is plain
        assert solver.is_identity(seq, pre_reduce=True).verdict is plain


def test_debug_logger_receives_progress(adding_machine):
    messages = []
    solver = WordProblemSolver(adding_machine, debug_logger=lambda msg, data=None: messages.append(msg))
    solver.is_identity(StateSequence.from_literal("q,q^-1"))
    assert messages == ["closure exhausted"]


@given(word=st.lists(aleshin_letters, min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_aleshin_reduced_words_are_non_trivial(word):
    automaton = fixture("aleshin")
    seq = free_reduce(StateSequence(tuple(word)))
    decision = is_identity(automaton, seq)
    if len(seq) == 0:
        assert decision.verdict is Verdict.IDENTITY
    else:
        assert decision.verdict is Verdict.NOT_IDENTITY
        assert act_word(automaton, seq, decision.witness) != decision.witness


@given(word=st.lists(aleshin_letters, max_size=4))
@settings(max_examples=40, deadline=None)
def test_word_times_inverse_is_identity(word):
    seq = StateSequence(tuple(word))
    assert is_identity(fixture("aleshin"), seq + seq.inverse()).is_identity


# ============================================================================
# bounded enumeration
# ============================================================================

def test_bounded_fixes_everything_for_identity(adding_machine):
    result = bounded_triviality(adding_machine, StateSequence.from_literal("q,q^-1"), 6)
    assert result.fixed_all
    assert result.moved is None


def test_bounded_reports_shortest_moved_word(adding_machine):
    result = bounded_triviality(adding_machine, StateSequence.of("q"), 4)
    assert not result.fixed_all
    assert result.moved == ("0",)


def test_bounded_respects_letter_set(adding_machine):
    result = bounded_triviality(adding_machine, StateSequence.of("q"), 3, letters=["1"])
    assert result.moved == ("1",)


def test_bounded_finds_deep_words(adding_machine):
    # q^4 moves nothing before the third letter
    result = bounded_triviality(adding_machine, StateSequence.of("q", "q", "q", "q"), 5)
    assert result.moved == ("0", "0", "0")
    assert not bounded_triviality(adding_machine, StateSequence.of("q", "q", "q", "q"), 2).moved


def test_bounded_skips_settled_residuals(adding_machine):
    solver = WordProblemSolver(adding_machine)
    result = solver.bounded_triviality(StateSequence.of("q"), 4, settled=lambda residual: True)
    assert result.fixed_all
    assert result.explored == 1


def test_bounded_settled_hook_sees_pruned_residuals(adding_machine):
    seen = []
    solver = WordProblemSolver(adding_machine)

    def settled(residual):
        seen.append(residual)
        return False

    result = solver.bounded_triviality(StateSequence.from_literal("q,q^-1"), 3, settled=settled)
    assert result.fixed_all
    assert StateSequence.from_literal("q,q^-1") in seen


@given(word=st.lists(aleshin_letters, min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_bounded_agrees_with_closure_witness(word):
    automaton = fixture("aleshin")
    seq = StateSequence(tuple(word))
    decision = is_identity(automaton, seq)
    result = bounded_triviality(automaton, seq, 12)
    if decision.verdict is Verdict.IDENTITY or len(decision.witness) > 12:
        assert result.fixed_all
    else:
        assert result.moved == decision.witness
