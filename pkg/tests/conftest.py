"""Shared fixtures: small automata, the data/ machines and acceptor tuples."""

import pytest

import storage
from models import Budget
from services.group_backends import a5_backend, aleshin_automaton, aleshin_backend, fixture
from services.turing import normalize


@pytest.fixture
def adding_machine():
    return fixture("adding-machine")


@pytest.fixture
def aleshin():
    return aleshin_automaton()


@pytest.fixture
def a5():
    return a5_backend()


@pytest.fixture
def f3():
    return aleshin_backend(include_square=True)


@pytest.fixture
def small_budget():
    return Budget(max_residuals=50_000, max_witness_length=10)


@pytest.fixture(scope="session")
def empty_input_tm():
    return storage.load_tm("tm_empty_input")


@pytest.fixture(scope="session")
def empty_input_rule(empty_input_tm):
    return normalize(empty_input_tm)


@pytest.fixture(scope="session")
def left_mover_tm():
    return storage.load_tm("tm_left_mover")


@pytest.fixture(scope="session")
def left_mover_rule(left_mover_tm):
    return normalize(left_mover_tm)


@pytest.fixture
def dfas_empty():
    return storage.load_dfas("dfas_empty")


@pytest.fixture
def dfas_nonempty():
    return storage.load_dfas("dfas_nonempty")
