import json

import pytest

import storage
from app import EXIT_ASSERTION, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


# ============================================================================
# decide
# ============================================================================

def test_decide_identity(capsys):
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q,q^-1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Identity"


def test_decide_reports_a_witness(capsys):
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q", "--json"]) == EXIT_OK
    data = _json(capsys)
    assert data['verdict'] == "NotIdentity"
    assert data['witness'] == ["0"]


def test_expectations_set_the_exit_code():
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q", "--expect", "identity"]) == EXIT_ASSERTION
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q,q^-1", "--expect", "not-identity"]) == EXIT_ASSERTION
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q", "--expect", "not-identity"]) == EXIT_OK


def test_exhausted_budget_exits_with_three(capsys):
    code = main(["decide", "--automaton", "adding-machine", "--seq", "q,q^-1", "--max-residuals", "1"])
    assert code == EXIT_LIMIT
    assert capsys.readouterr().out.startswith("LimitExceeded")


def test_bounded_decision(capsys):
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q,q,q,q", "--bounded", "2"]) == EXIT_OK
    assert "fixes every word of length <= 2" in capsys.readouterr().out
    assert main(["decide", "--automaton", "adding-machine", "--seq", "q,q,q,q", "--bounded", "3", "--json"]) == EXIT_OK
    assert _json(capsys)['moved'] == ["0", "0", "0"]


def test_decision_document(tmp_path):
    out = tmp_path / "decision.json"
    assert main(["decide", "--automaton", "grigorchuk", "--seq", "b,c,d", "--out", str(out)]) == EXIT_OK
    data = storage.load_json(out)
    assert data['format'] == storage.DECISION_FORMAT
    assert data['verdict'] == "Identity"


# ============================================================================
# usage errors
# ============================================================================

@pytest.mark.parametrize("argv", [
    [],
    ["decide"],
    ["decide", "--automaton", "adding-machine"],
    ["decide", "--automaton", "no-such-automaton", "--seq", "q"],
    ["decide", "--automaton", "adding-machine", "--seq", "z"],
    ["act", "--automaton", "adding-machine", "--seq", "q", "--word", "2"],
    ["build-compressed", "--tm", "tm_empty_input", "--out", "x.json"],
    ["witness"],
])
def test_usage_errors_exit_with_two(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_errors_are_reported_on_stderr(capsys):
    main(["decide", "--automaton", "adding-machine", "--seq", "z"])
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("error: ")


# ============================================================================
# automaton commands
# ============================================================================

def test_act_and_residual(capsys):
    assert main(["act", "--automaton", "adding-machine", "--seq", "q", "--word", "110"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "001"
    assert main(["residual", "--automaton", "adding-machine", "--seq", "q,q", "--word", "1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "id,q"
    assert main(["residual", "--automaton", "adding-machine", "--seq", "q,q", "--word", "1", "--prune"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "q"


def test_validate_flags_non_invertible_automata(capsys):
    assert main(["validate", "--automaton", "checkmark", "--json"]) == EXIT_OK
    data = _json(capsys)
    assert data['invertible'] is False
    assert data['offending']


def test_export_dot(capsys, tmp_path):
    assert main(["export-dot", "--automaton", "adding-machine"]) == EXIT_OK
    source = capsys.readouterr().out
    assert source.lstrip().startswith("digraph")
    assert "1/0" in source
    out = tmp_path / "adding.dot"
    assert main(["export-dot", "--automaton", "adding-machine", "--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8") == source


def test_fixtures_list_and_export(capsys, tmp_path):
    assert main(["fixtures", "list", "--json"]) == EXIT_OK
    names = [row['name'] for row in _json(capsys)['fixtures']]
    assert names == sorted(names)
    assert main(["fixtures", "export", "--dir", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    exported = storage.load_automaton(str(tmp_path / "aleshin.json"))
    assert len(exported.states) == 3


# ============================================================================
# builders
# ============================================================================

def test_uniform_pipeline(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    assert main(["build-uniform", "--dfas", "dfas_empty", "--out", str(empty)]) == EXIT_OK
    assert main(["decide", "--instance", str(empty), "--expect", "identity"]) == EXIT_OK
    nonempty = tmp_path / "nonempty.json"
    assert main(["build-uniform", "--dfas", "dfas_nonempty", "--out", str(nonempty)]) == EXIT_OK
    assert main(["decide", "--instance", str(nonempty), "--expect", "identity"]) == EXIT_ASSERTION
    capsys.readouterr()
    assert main(["witness", "--dfas", "dfas_nonempty"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "a1,a2,$,a1"


def test_random_uniform_instance_records_its_seed(tmp_path, capsys):
    out = tmp_path / "random.json"
    assert main(["build-uniform", "--random", "2", "--states", "2", "--seed", "7", "--out", str(out), "--json"]) == EXIT_OK
    assert _json(capsys)['seed'] == 7
    _, seq, _, provenance = storage.load_instance(out)
    assert provenance['length'] == len(seq)


def test_machine_witness(capsys):
    assert main(["witness", "--tm", "tm_empty_input", "--backend", "a5", "--json"]) == EXIT_OK
    data = _json(capsys)
    assert data['mover'] == ["1"]
    assert data['witness'][-1] == "1"
    assert set(data['encoded_run']) <= {"1", "2"}
    assert main(["witness", "--tm", "tm_empty_input", "--input", "x"]) == EXIT_USAGE


def test_build_tm(tmp_path, capsys):
    out = tmp_path / "tm.json"
    assert main(["build-tm", "--tm", "tm_empty_input", "--backend", "a5", "--out", str(out), "--json"]) == EXIT_OK
    provenance = _json(capsys)
    assert provenance['D'] == 16
    automaton, seq, _, _ = storage.load_instance(out)
    assert len(automaton.states) == provenance['states']


def test_compressed_pipeline(tmp_path, capsys):
    out = tmp_path / "compressed.json"
    assert main(["build-compressed", "--tm", "tm_empty_input", "--test-k", "0", "--out", str(out), "--json"]) == EXIT_OK
    provenance = _json(capsys)
    assert main(["slp", "length", "--instance", str(out)]) == EXIT_OK
    assert int(capsys.readouterr().out) == provenance['expanded_length']
    assert main(["slp", "expand", "--instance", str(out), "--guard", "10"]) == EXIT_USAGE


def test_grammar_commands(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({
        'format': storage.SLP_FORMAT,
        'start': "S",
        'rules': [{'var': "S", 'body': ["X", "X^-1", "q"]}, {'var': "X", 'body': ["q", "q"]}],
    }), encoding="utf-8")
    assert main(["slp", "expand", "--slp", str(path)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "q,q,q^-1,q^-1,q"
    assert main(["slp", "decide", "--slp", str(path), "--automaton", "adding-machine", "--json"]) == EXIT_OK
    assert _json(capsys)['witness'] == ["0"]
    assert main(["act", "--automaton", "adding-machine", "--slp", str(path), "--word", "1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0"
