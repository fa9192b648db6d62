import json

import pytest

import storage
from errors import FormatError, Nondeterministic
from models import SLP, Decision, SignedState, StateSequence, Verdict
from services.group_backends import fixture
from services.transducer_core import act_word


def test_automaton_document_round_trip(tmp_path, aleshin):
    path = tmp_path / "aleshin.json"
    storage.save_automaton(path, aleshin)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data['format'] == storage.AUTOMATON_FORMAT
    assert {"from": "a", "in": "0", "out": "1", "to": "c"} in data['transitions']
    loaded = storage.load_automaton(str(path))
    assert loaded.states == aleshin.states
    assert sorted(loaded.transitions()) == sorted(aleshin.transitions())


def test_saved_files_are_stable(tmp_path, aleshin):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    storage.save_automaton(first, aleshin)
    storage.save_automaton(second, storage.load_automaton(str(first)))
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text(encoding="utf-8").endswith("}\n")
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_fixture_names_resolve_before_paths():
    automaton = storage.load_automaton("grigorchuk")
    assert automaton is fixture("grigorchuk")


def test_unreadable_documents(tmp_path):
    with pytest.raises(FormatError):
        storage.load_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        storage.load_json(broken)


def test_schema_violations(aleshin):
    data = storage.automaton_to_dict(aleshin)
    data['format'] = "autgroups/automaton@0"
    with pytest.raises(FormatError):
        storage.automaton_from_dict(data)
    data = storage.automaton_to_dict(aleshin)
    del data['states']
    with pytest.raises(FormatError):
        storage.automaton_from_dict(data)


def test_machine_documents(empty_input_tm):
    data = storage.tm_to_dict(empty_input_tm)
    data['rules'][0]['move'] = "X"
    with pytest.raises(FormatError):
        storage.tm_from_dict(data)
    data = storage.tm_to_dict(empty_input_tm)
    data['rules'].append(dict(data['rules'][0], write="x"))
    with pytest.raises(Nondeterministic):
        storage.tm_from_dict(data)


def test_data_directory_from_environment(tmp_path, monkeypatch, empty_input_tm):
    monkeypatch.setenv("AUTGROUPS_DATA_DIR", str(tmp_path))
    storage.save_tm(tmp_path / "mine.json", empty_input_tm)
    assert storage.load_tm("mine") == empty_input_tm


def test_acceptor_lists(tmp_path, dfas_nonempty):
    assert [d.alphabet for d in dfas_nonempty] == [("a1", "a2", "a3", "a4")] * 2
    path = tmp_path / "dfas.json"
    storage.save_dfas(path, dfas_nonempty)
    assert storage.load_dfas(path) == dfas_nonempty


def test_grammar_documents(tmp_path):
    slp = SLP({"S": (SignedState("X"), SignedState("X", True), SignedState("a")), "X": (SignedState("b", True),)}, "S")
    path = tmp_path / "g.json"
    storage.save_slp(path, slp)
    assert storage.load_slp(path) == slp
    with pytest.raises(FormatError):
        storage.slp_from_dict({'format': storage.SLP_FORMAT, 'start': "S"})


def test_instance_documents(tmp_path, adding_machine):
    path = tmp_path / "instance.json"
    seq = StateSequence.from_literal("q,q^-1")
    storage.save_instance(path, "sequence", adding_machine, sequence=seq, provenance={'note': 'inverse pair'})
    automaton, loaded, slp, provenance = storage.load_instance(path)
    assert loaded == seq
    assert slp is None
    assert provenance == {'note': 'inverse pair'}
    assert act_word(automaton, loaded, ("1", "0")) == ("1", "0")


def test_decision_documents():
    data = storage.decision_to_dict(Decision(Verdict.NOT_IDENTITY, ("0",), explored=3))
    assert data['format'] == storage.DECISION_FORMAT
    assert data['verdict'] == "NotIdentity"
    assert data['witness'] == ["0"]
    assert data['stats']['explored'] == 3


def test_sequence_literals():
    assert storage.parse_sequence("") == StateSequence()
    assert storage.parse_sequence("a,b^-1") == StateSequence((SignedState("a"), SignedState("b", True)))
