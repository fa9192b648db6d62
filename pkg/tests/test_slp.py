import pytest
from hypothesis import given, settings, strategies as st

from errors import ConstructionError, CyclicGrammar, GuardExceeded
from models import SLP, Budget, LevelMap, SignedState, StateSequence, Verdict
from services.commutators import twisted
from services.group_backends import fixture
from services.slp import (
    SlpEvaluator, act_streaming, compressed_is_identity, expand, expanded_length, from_sequence,
    invert, slp_twisted, streaming_bounded_triviality, topological_order, variable_count,
)
from services.transducer_core import cross

aleshin_letters = st.builds(SignedState, st.sampled_from(["a", "b", "c"]), st.booleans())


def _doubling(depth: int, tail: tuple = ()) -> SLP:
    """X_0 -> q, X_k -> X_{k-1} X_{k-1}, S -> X_depth tail."""
    rules = {"X_0": (SignedState("q"),)}
    for k in range(1, depth + 1):
        rules[f"X_{k}"] = (SignedState(f"X_{k - 1}"),) * 2
    rules["S"] = (SignedState(f"X_{depth}"),) + tuple(tail)
    return SLP(rules, "S")


def test_expand_resolves_negative_variables():
    slp = SLP({"S": StateSequence.from_literal("X,X^-1,a").entries, "X": StateSequence.of("a", "b").entries}, "S")
    assert expand(slp) == StateSequence.from_literal("a,b,b^-1,a^-1,a")
    assert expanded_length(slp) == 5
    assert topological_order(slp) == ["X", "S"]


def test_lengths_without_expansion():
    slp = _doubling(60)
    assert expanded_length(slp) == 2 ** 60
    assert variable_count(slp) == 62
    with pytest.raises(GuardExceeded):
        expand(slp)


def test_guard_from_environment(monkeypatch):
    monkeypatch.setenv("AUTGROUPS_EXPAND_GUARD", "100")
    with pytest.raises(GuardExceeded):
        expand(_doubling(7))
    assert len(expand(_doubling(6))) == 64


def test_malformed_grammars():
    with pytest.raises(CyclicGrammar):
        topological_order(SLP({"S": (SignedState("a"), SignedState("T")), "T": (SignedState("S"),)}, "S"))
    with pytest.raises(ConstructionError):
        SLP({"S": ()}, "S")
    with pytest.raises(ConstructionError):
        SLP({"X": (SignedState("a"),)}, "S")


def test_inverse_grammar():
    slp = SLP({"S": StateSequence.from_literal("X,c^-1,X").entries, "X": StateSequence.from_literal("a,b^-1").entries}, "S")
    inverse = invert(slp)
    assert inverse.start == "S⁻¹"
    assert expand(inverse) == expand(slp).inverse()
    assert expand(invert(inverse)) == expand(slp)


@pytest.mark.parametrize("size", [1, 2, 4, 8, 16])
def test_twisted_grammar_generates_the_twisted_commutator(size):
    p, gamma = StateSequence.from_literal("a,b^-1"), StateSequence.of("c")
    alpha = LevelMap.constant(StateSequence.of("b"))
    beta = LevelMap(lambda d: StateSequence.of("c" if d % 2 else "a"))
    slp = slp_twisted(p, size, gamma, alpha, beta)
    assert expand(slp) == twisted(p, size, gamma, alpha, beta)


def test_twisted_grammar_is_logarithmic():
    slp = slp_twisted(StateSequence.of("a"), 16, StateSequence.of("c"))
    # A_1..A_16 and M_1..M_8
    assert variable_count(slp) == 9
    large = slp_twisted(StateSequence.of("a"), 2 ** 40, StateSequence.of("c"))
    assert variable_count(large) == 41 + 40


# ============================================================================
# streaming action
# ============================================================================

@st.composite
def grammars(draw):
    x = draw(st.lists(aleshin_letters, min_size=1, max_size=3))
    y = draw(st.lists(st.one_of(aleshin_letters, st.builds(SignedState, st.just("X"), st.booleans())), min_size=1, max_size=4))
    s = draw(st.lists(st.one_of(aleshin_letters, st.builds(SignedState, st.sampled_from(["X", "Y"]), st.booleans())), min_size=1, max_size=4))
    return SLP({"S": tuple(s), "X": tuple(x), "Y": tuple(y)}, "S")


@given(slp=grammars(), u=st.lists(st.sampled_from(["0", "1"]), max_size=6))
@settings(max_examples=150, deadline=None)
def test_streaming_matches_expanded_action(slp, u):
    automaton = fixture("aleshin")
    out, res = act_streaming(automaton, slp, u)
    expected_out, expected_res = cross(automaton, expand(slp), u)
    assert out == expected_out
    assert expand(res) == expected_res


def test_evaluator_memoizes_repeated_subwords():
    automaton = fixture("adding-machine")
    evaluator = SlpEvaluator(automaton, _doubling(30))
    assert evaluator.output(("0", "1", "1")) == ("0", "1", "1")
    assert 0 < evaluator.memo_size <= 31 * 8
    evaluator.clear()
    assert evaluator.memo_size == 0


def test_streaming_enumeration_on_huge_powers():
    automaton = fixture("adding-machine")
    even = streaming_bounded_triviality(automaton, _doubling(40), 5)
    assert even.fixed_all
    assert even.explored == 32
    odd = streaming_bounded_triviality(automaton, _doubling(40, (SignedState("q"),)), 5)
    assert odd.moved == ("0",)
    only_ones = streaming_bounded_triviality(automaton, _doubling(40, (SignedState("q"),)), 3, letters=["1"])
    assert only_ones.moved == ("1",)


def test_compressed_decision_expands_small_grammars():
    automaton = fixture("adding-machine")
    assert compressed_is_identity(automaton, from_sequence(StateSequence.from_literal("q,q^-1"))).is_identity
    decision = compressed_is_identity(automaton, _doubling(3))
    assert decision.verdict is Verdict.NOT_IDENTITY


def test_compressed_decision_streams_past_the_guard():
    automaton = fixture("adding-machine")
    budget = Budget(max_witness_length=4)
    moved = compressed_is_identity(automaton, _doubling(40, (SignedState("q"),)), budget=budget, guard=100)
    assert moved.verdict is Verdict.NOT_IDENTITY
    assert moved.witness == ("0",)
    fixed = compressed_is_identity(automaton, _doubling(40), budget=budget, guard=100)
    assert fixed.verdict is Verdict.LIMIT_EXCEEDED
    assert "length <= 4" in fixed.evidence
