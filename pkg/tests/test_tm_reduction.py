import itertools

import pytest

from errors import GammaNotPowerOfTwo, NoComputation
from models import CodeTable, StateSequence, Verdict
from services.group_backends import a5_backend
from services.tm_reduction import (
    PLACEHOLDER, TmReductionBuilder, assemble, build_tm_mode, encode_binary, encoded_count,
    full_fidelity_count, in_id_r_id, in_identity_star, one_configuration_bound, r0_automaton,
    tm_mode_count, tm_mode_sequences, witness_symbols, witness_word, zero_block_length,
)
from services.transducer_core import act_word, cross, residual, validate
from services.turing import run
from services.word_problem import WordProblemSolver


def _accepting_symbols(rule, w):
    result = run(rule, w, max_steps=100)
    assert result.accepted
    return witness_symbols(result.computation, len(result.computation[0]))


# ============================================================================
# size formulas
# ============================================================================

def test_size_formulas():
    assert tm_mode_count(4) == 70
    assert tm_mode_count(8) == 3 * 64 + 8 + 18
    assert encoded_count(70, 4) == 68 * 7 + 2
    assert full_fidelity_count(3, 4) == 1 + 3 * (3 * 64 + 160 + 80 + 52)


@pytest.mark.parametrize("space,length", [(1, 1), (2, 2), (3, 3), (4, 3), (5, 4), (9, 5)])
def test_zero_block_length(space, length):
    assert zero_block_length(space) == length


def test_tm_mode_automaton(empty_input_rule, left_mover_rule):
    small = build_tm_mode(empty_input_rule)
    assert len(small.automaton.states) == 70
    assert validate(small.automaton).is_group_automaton
    assert small.checker("p0") == "zero(p0|_)"
    large = build_tm_mode(left_mover_rule)
    assert len(large.automaton.states) == tm_mode_count(8)


def test_sequences_are_padded_to_a_power_of_two(empty_input_rule):
    seqs = tm_mode_sequences(empty_input_rule, (), 3)
    # s, three c_i, c', three q_i, f
    assert len(seqs) == 16
    assert all(seq == seqs[8] for seq in seqs[8:])
    with pytest.raises(ValueError):
        tm_mode_sequences(empty_input_rule, ("x", "x", "x"), 3)


# ============================================================================
# TM mode on claimed computations
# ============================================================================

@pytest.mark.parametrize("machine,w", [("empty_input_rule", ()), ("left_mover_rule", ("x",))])
def test_accepting_computation_sends_every_sequence_to_r(request, machine, w):
    rule = request.getfixturevalue(machine)
    tmode = build_tm_mode(rule)
    u = _accepting_symbols(rule, w)
    for seq in tm_mode_sequences(rule, w, rule.space_bound(len(w))):
        out, end = cross(tmode.automaton, seq, u)
        assert out == tuple(u)
        assert in_id_r_id(tmode.automaton, end)


def test_rejected_input_leaves_a_trivial_sequence(empty_input_rule):
    tmode = build_tm_mode(empty_input_rule)
    seqs = tm_mode_sequences(empty_input_rule, ("x",), 3)
    # the accepting computation on the empty input does not start from p0 x _
    u = _accepting_symbols(empty_input_rule, ())
    assert any(in_identity_star(tmode.automaton, residual(tmode.automaton, seq, u)) for seq in seqs)
    # neither does the stuck computation, which never reaches acc
    stuck = run(empty_input_rule, ("x",), max_steps=10)
    u = witness_symbols(stuck.computation, 3)
    assert in_identity_star(tmode.automaton, residual(tmode.automaton, seqs[-1], u))


def test_malformed_words_fail_the_form_check(empty_input_rule):
    tmode = build_tm_mode(empty_input_rule)
    form = tm_mode_sequences(empty_input_rule, (), 3)[0]
    assert in_identity_star(tmode.automaton, residual(tmode.automaton, form, ("0", "$")))
    assert in_id_r_id(tmode.automaton, residual(tmode.automaton, form, ("0", "p0", "$")))


# ============================================================================
# binary encoding
# ============================================================================

def test_code_table_shapes():
    code = CodeTable(("p", "q", "a", "b"))
    assert code.width == 2
    assert code.encode_symbol("$") == ("1", "1", "1")
    assert code.encode_symbol("b") == ("0", "1", "1")
    assert len(code.proper_prefixes()) == 4 + 3
    with pytest.raises(GammaNotPowerOfTwo):
        CodeTable(("p", "q", "a"))


@pytest.mark.parametrize("gamma", [("p", "q"), ("p", "q", "a", "b"), tuple("abcdefgh")])
def test_every_binary_word_splits_into_codes_and_a_proper_prefix(gamma):
    code = CodeTable(gamma)
    prefixes = set(code.proper_prefixes())
    for n in range(9):
        for word in itertools.product("01", repeat=n):
            symbols, rest = code.decode(word)
            assert rest in prefixes
            assert code.encode_word(symbols) + rest == word


@pytest.mark.parametrize("machine,w", [("empty_input_rule", ()), ("left_mover_rule", ("x",))])
def test_encoded_automaton_simulates_tm_mode(request, machine, w):
    rule = request.getfixturevalue(machine)
    tmode = build_tm_mode(rule)
    binary = encode_binary(rule)
    assert len(binary.states) == encoded_count(len(tmode.automaton.states), len(rule.gamma))
    assert validate(binary).is_group_automaton
    code = CodeTable(rule.gamma)
    u = _accepting_symbols(rule, w)
    for seq in tm_mode_sequences(rule, w, rule.space_bound(len(w))):
        out, end = cross(tmode.automaton, seq, u)
        encoded_out, encoded_end = cross(binary, seq, code.encode_word(u))
        assert encoded_out == code.encode_word(out)
        assert encoded_end == end


def test_extra_letters_go_to_identity(empty_input_rule):
    binary = encode_binary(empty_input_rule, extra_letters=("2",))
    assert binary.transition("s", "2") == ("2", "id")
    gadget = r0_automaton(empty_input_rule)
    assert len(gadget.states) == 2 + len(empty_input_rule.gamma) + 3
    dollar = CodeTable(empty_input_rule.gamma).encode_symbol("$")
    assert residual(gadget, StateSequence.of("r0"), dollar) == StateSequence.of(PLACEHOLDER)


# ============================================================================
# assembly
# ============================================================================

def test_full_fidelity_state_count(empty_input_rule):
    instance = assemble(empty_input_rule, a5_backend(), (), full_fidelity=True)
    assert len(instance.automaton.states) == full_fidelity_count(3, 4)
    assert instance.provenance['D'] == 16
    assert validate(instance.automaton).is_group_automaton


def test_partial_assembly_copies_only_used_states(empty_input_rule, a5):
    instance = assemble(empty_input_rule, a5, ())
    assert instance.provenance['copies'] == ["sigma"]
    assert set(instance.provenance['gadgets']) == {"alpha", "beta"}
    assert len(instance.entries) == 16


def test_padded_alphabet_for_binary_backends(empty_input_rule, f3):
    instance = assemble(empty_input_rule, f3, (), padded_alphabet=True)
    assert len(instance.automaton.alphabet) == 3
    assert instance.provenance['padded_alphabet']


@pytest.mark.parametrize("w", [(), ("x",)])
def test_padded_letter_sends_every_entry_to_identity(empty_input_rule, f3, w):
    instance = assemble(empty_input_rule, f3, w, padded_alphabet=True)
    (extra,) = [a for a in instance.automaton.alphabet.names if a not in f3.code_letters]
    for length in range(7):
        for u in itertools.product(f3.code_letters, repeat=length):
            for entry in set(instance.entries):
                assert in_identity_star(instance.automaton, residual(instance.automaton, entry, u + (extra,)))


@pytest.mark.parametrize("machine,w", [("empty_input_rule", ()), ("left_mover_rule", ("x",))])
def test_accepting_run_gives_a_moving_witness(request, machine, w, a5):
    rule = request.getfixturevalue(machine)
    instance = assemble(rule, a5, w)
    result = run(rule, w, max_steps=100)
    candidate = witness_word(rule, w, result, code_letters=a5.code_letters) + a5.mover
    assert act_word(instance.automaton, instance.sequence, candidate) != candidate


def test_rejected_input_has_no_witness(empty_input_rule):
    result = run(empty_input_rule, ("x",), max_steps=10)
    with pytest.raises(NoComputation):
        witness_word(empty_input_rule, ("x",), result)
    with pytest.raises(NoComputation):
        witness_word(empty_input_rule, ("x",), None)


def test_builder_reports_progress(empty_input_rule):
    messages = []
    builder = TmReductionBuilder(empty_input_rule, debug_logger=lambda msg, data=None: messages.append(msg))
    builder.build_tm_mode()
    builder.build_tm_mode()
    assert messages == ["TM-mode automaton built"]


@pytest.mark.slow
def test_rejected_input_never_yields_a_witness(empty_input_rule, a5):
    instance = assemble(empty_input_rule, a5, ("x",))
    decision = WordProblemSolver(instance.automaton).is_identity(instance.sequence, pre_reduce=True, prune=True)
    assert decision.verdict is not Verdict.NOT_IDENTITY


@pytest.mark.slow
def test_rejected_input_fixes_every_word_up_to_one_configuration(empty_input_rule, a5):
    instance = assemble(empty_input_rule, a5, ("x",))
    bound = one_configuration_bound(empty_input_rule.gamma, instance.provenance['space'], a5.code_letters)
    assert bound == 39
    # off the code letters the whole product falls to id
    assert in_identity_star(instance.automaton, residual(instance.automaton, instance.sequence, ("3",)))
    found = WordProblemSolver(instance.automaton).bounded_triviality(
        instance.sequence, bound, letters=a5.code_letters)
    assert found.fixed_all
    assert found.moved is None
