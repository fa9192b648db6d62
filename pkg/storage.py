"""
Storage module - JSON interchange for automata, acceptors, machines, grammars,
instances and decisions.
Consolidates document schemas, atomic writes and fixture lookup in one place.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from errors import FormatError
from models import Decision, DfaAcceptor, SLP, StateSequence, TuringMachine
from services.group_backends import FIXTURES, fixture
from services.transducer_core import MealyAutomaton

logger = logging.getLogger(__name__)

AUTOMATON_FORMAT = "autgroups/automaton@1"
DFA_FORMAT = "autgroups/dfa@1"
TM_FORMAT = "autgroups/tm@1"
SLP_FORMAT = "autgroups/slp@1"
INSTANCE_FORMAT = "autgroups/instance@1"
DECISION_FORMAT = "autgroups/decision@1"


def data_dir() -> Path:
    """AUTGROUPS_DATA_DIR, default <repo>/data."""
    default = Path(__file__).resolve().parent / "data"
    return Path(os.environ.get("AUTGROUPS_DATA_DIR", default))


# ============================================================================
# DOCUMENT SCHEMAS
# ============================================================================

class TransitionDoc(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    letter: str = Field(alias="in")
    out: str
    to: str


class AutomatonDoc(BaseModel):
    format: Literal["autgroups/automaton@1"] = AUTOMATON_FORMAT
    name: str = "automaton"
    alphabet: List[str]
    states: List[str]
    transitions: List[TransitionDoc]


class DfaTransitionDoc(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    letter: str = Field(alias="in")
    to: str


class DfaDoc(BaseModel):
    states: List[str]
    initial: str
    finals: List[str] = []
    transitions: List[DfaTransitionDoc]


class DfaListDoc(BaseModel):
    format: Literal["autgroups/dfa@1"] = DFA_FORMAT
    alphabet: List[str]
    dfas: List[DfaDoc]


class TmRuleDoc(BaseModel):
    state: str
    read: str
    next: str
    write: str
    move: Literal["L", "N", "R"] = "N"


class TmDoc(BaseModel):
    format: Literal["autgroups/tm@1"] = TM_FORMAT
    name: str = "machine"
    states: List[str]
    input_alphabet: List[str]
    tape_alphabet: List[str]
    blank: str
    initial: str
    accepting: List[str]
    rules: List[TmRuleDoc]
    space_bound: Dict[str, Any] = {}


class SlpRuleDoc(BaseModel):
    var: str
    body: List[str]


class SlpDoc(BaseModel):
    format: Literal["autgroups/slp@1"] = SLP_FORMAT
    start: str
    rules: List[SlpRuleDoc]


class InstanceDoc(BaseModel):
    format: Literal["autgroups/instance@1"] = INSTANCE_FORMAT
    kind: Literal["uniform", "tm", "compressed", "sequence"]
    automaton: AutomatonDoc
    sequence: Optional[str] = None
    slp: Optional[SlpDoc] = None
    provenance: Dict[str, Any] = {}


class DecisionDoc(BaseModel):
    format: Literal["autgroups/decision@1"] = DECISION_FORMAT
    verdict: str
    witness: Optional[List[str]] = None
    stats: Dict[str, int] = {}
    evidence: Optional[str] = None


# ============================================================================
# RAW JSON
# ============================================================================

def load_json(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise FormatError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_json(path: Union[str, Path], data: Dict[str, Any]) -> None:
    """Sorted keys, two-space indent, trailing newline; temp file + os.replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(dumps(data))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("wrote %s", path)


def _validate(model: type, data: Dict[str, Any], what: str) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise FormatError(f"invalid {what} document: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from None


# ============================================================================
# AUTOMATA
# ============================================================================

def automaton_to_doc(automaton: MealyAutomaton) -> AutomatonDoc:
    return AutomatonDoc(
        name=automaton.name,
        alphabet=list(automaton.alphabet.names),
        states=list(automaton.states),
        transitions=[
            TransitionDoc(source=src, letter=a, out=b, to=dst)
            for src, a, b, dst in automaton.transitions()
        ],
    )


def automaton_from_doc(doc: AutomatonDoc) -> MealyAutomaton:
    return MealyAutomaton(
        doc.name,
        doc.alphabet,
        doc.states,
        [(t.source, t.letter, t.out, t.to) for t in doc.transitions],
    )


def automaton_to_dict(automaton: MealyAutomaton) -> Dict[str, Any]:
    return automaton_to_doc(automaton).model_dump(by_alias=True)


def automaton_from_dict(data: Dict[str, Any]) -> MealyAutomaton:
    return automaton_from_doc(_validate(AutomatonDoc, data, "automaton"))


def load_automaton(ref: str) -> MealyAutomaton:
    """A fixture name or a path to an automaton document."""
    if ref in FIXTURES:
        return fixture(ref)
    return automaton_from_dict(load_json(ref))


def save_automaton(path: Union[str, Path], automaton: MealyAutomaton) -> None:
    save_json(path, automaton_to_dict(automaton))


def parse_sequence(text: str) -> StateSequence:
    """Comma-separated state names, ^-1 for inverses; the empty string is the empty sequence."""
    return StateSequence.from_literal(text)


# ============================================================================
# ACCEPTORS, MACHINES, GRAMMARS
# ============================================================================

def dfas_to_dict(dfas: List[DfaAcceptor]) -> Dict[str, Any]:
    alphabet = list(dfas[0].alphabet) if dfas else []
    dfa_docs = []
    for dfa in dfas:
        data = dfa.to_dict()
        data.pop('alphabet', None)
        dfa_docs.append(data)
    return {'format': DFA_FORMAT, 'alphabet': alphabet, 'dfas': dfa_docs}


def dfas_from_dict(data: Dict[str, Any]) -> List[DfaAcceptor]:
    doc = _validate(DfaListDoc, data, "acceptor list")
    return [DfaAcceptor.from_dict(d.model_dump(by_alias=True), alphabet=doc.alphabet) for d in doc.dfas]


def load_dfas(path: Union[str, Path]) -> List[DfaAcceptor]:
    return dfas_from_dict(load_json(_resolve(path)))


def save_dfas(path: Union[str, Path], dfas: List[DfaAcceptor]) -> None:
    save_json(path, dfas_to_dict(dfas))


def tm_from_dict(data: Dict[str, Any]) -> TuringMachine:
    doc = _validate(TmDoc, data, "machine")
    return TuringMachine.from_dict(doc.model_dump())


def tm_to_dict(tm: TuringMachine) -> Dict[str, Any]:
    return {'format': TM_FORMAT, **tm.to_dict()}


def load_tm(path: Union[str, Path]) -> TuringMachine:
    return tm_from_dict(load_json(_resolve(path)))


def save_tm(path: Union[str, Path], tm: TuringMachine) -> None:
    save_json(path, tm_to_dict(tm))


def slp_from_dict(data: Dict[str, Any]) -> SLP:
    doc = _validate(SlpDoc, data, "grammar")
    return SLP.from_dict(doc.model_dump())


def slp_to_dict(slp: SLP) -> Dict[str, Any]:
    return {'format': SLP_FORMAT, **slp.to_dict()}


def load_slp(path: Union[str, Path]) -> SLP:
    return slp_from_dict(load_json(path))


def save_slp(path: Union[str, Path], slp: SLP) -> None:
    save_json(path, slp_to_dict(slp))


def _resolve(path: Union[str, Path]) -> Path:
    """Paths that do not exist are looked up by name in the data directory."""
    path = Path(path)
    if path.exists():
        return path
    for candidate in (data_dir() / path, data_dir() / f"{path}.json"):
        if candidate.exists():
            return candidate
    return path


# ============================================================================
# INSTANCES AND DECISIONS
# ============================================================================

def instance_to_dict(
    kind: str,
    automaton: MealyAutomaton,
    sequence: Optional[StateSequence] = None,
    slp: Optional[SLP] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    doc = InstanceDoc(
        kind=kind,
        automaton=automaton_to_doc(automaton),
        sequence=sequence.to_literal() if sequence is not None else None,
        slp=_validate(SlpDoc, slp_to_dict(slp), "grammar") if slp is not None else None,
        provenance=provenance or {},
    )
    return doc.model_dump(by_alias=True, exclude_none=True)


def save_instance(path: Union[str, Path], kind: str, automaton: MealyAutomaton, **payload: Any) -> None:
    save_json(path, instance_to_dict(kind, automaton, **payload))


def load_instance(path: Union[str, Path]) -> Tuple[MealyAutomaton, Optional[StateSequence], Optional[SLP], Dict[str, Any]]:
    doc = _validate(InstanceDoc, load_json(path), "instance")
    automaton = automaton_from_doc(doc.automaton)
    sequence = parse_sequence(doc.sequence) if doc.sequence is not None else None
    slp = SLP.from_dict(doc.slp.model_dump()) if doc.slp is not None else None
    return automaton, sequence, slp, doc.provenance


def decision_to_dict(decision: Decision) -> Dict[str, Any]:
    return DecisionDoc(**decision.to_dict()).model_dump()
