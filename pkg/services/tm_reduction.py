"""
TM reduction - from a space-bounded machine and an input w to an automaton T
and a sequence q with q = 1 iff the machine rejects w.

Three layers:
  * TM mode: an automaton over {0,1,#,$} + Gamma whose sequences p_i check one
    aspect each of a claimed computation u; after u$ every p_i sits in
    id* r id* if u is a valid accepting computation, some p_i in id* otherwise.
  * binary encoding: the same automaton over two code letters through a prefix
    code, states (p', x) for x a proper prefix of a code word.
  * assembly: one copy of the encoded automaton per backend state r (with r in
    place of the placeholder), gadgets that turn into r after $, and the
    balanced commutator of the per-entry products.
"""

import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from errors import ConstructionError, GammaNotPowerOfTwo, NoComputation
from models import (
    BackendBundle, CodeTable, CommutatorSpec, Configuration, HardInstance, LevelMap, LocalRule,
    RunResult, SignedState, StateSequence, TmModeAutomaton, Word, is_power_of_two, next_power_of_two,
)
from services.commutators import balanced
from services.transducer_core import IDENTITY_NAME, MealyAutomaton, identity_states

logger = logging.getLogger(__name__)

PLACEHOLDER = "r"
CONTROL = ("0", "1", "#", "$")

Row = Dict[str, Tuple[str, str]]


# ============================================================================
# SIZE FORMULAS
# ============================================================================

def tm_mode_count(gamma_size: int) -> int:
    return 3 * gamma_size ** 2 + gamma_size + 18


def encoded_count(tm_mode_size: int, gamma_size: int) -> int:
    return (tm_mode_size - 2) * (gamma_size + 3) + 2


def full_fidelity_count(copies: int, gamma_size: int) -> int:
    """Shared id plus, per backend state: the state, its encoded copy and its gadget."""
    g = gamma_size
    return 1 + copies * (3 * g ** 3 + 10 * g ** 2 + 20 * g + 52)


def zero_block_length(space: int) -> int:
    return math.ceil(math.log2(space)) + 1 if space > 1 else 1


# ============================================================================
# TM MODE
# ============================================================================

class _Table:
    """Rows over a fixed alphabet; letters without a transition go to id unchanged."""

    def __init__(self, letters: Sequence[str]):
        self.letters = tuple(letters)
        self.rows: Dict[str, Row] = {}

    def state(self, name: str) -> Row:
        if name in self.rows:
            raise ConstructionError(f"state {name!r} defined twice")
        self.rows[name] = {}
        return self.rows[name]

    def loop(self, name: str, letters: Iterable[str]) -> None:
        for a in letters:
            self.rows[name][a] = (a, name)

    def go(self, name: str, letters: Iterable[str], target: str, out: Optional[str] = None) -> None:
        for a in letters:
            self.rows[name][a] = (out if out is not None else a, target)

    def automaton(self, name: str) -> MealyAutomaton:
        table = {}
        for state, row in self.rows.items():
            table[state] = {a: row.get(a, (a, IDENTITY_NAME)) for a in self.letters}
        return MealyAutomaton.from_table(name, self.letters, table)


def _zero(g0: str, gm1: str) -> str:
    return f"zero({g0}|{gm1})"


def _one(g0: str, gm1: str) -> str:
    return f"one({g0}|{gm1})"


def _pair(gm1: str, g0: str) -> str:
    return f"pair({gm1}|{g0})"


def _skip(g: str) -> str:
    return f"skip({g})"


def check_state(g: str, part: str = "") -> str:
    return f"check_{g}/{part}" if part else f"check_{g}"


class TmReductionBuilder:
    """Builds the three layers for one local rule."""

    def __init__(self, rule: LocalRule, debug_logger: Optional[Callable] = None):
        self.rule = rule
        self.debug_log = debug_logger or (lambda msg, data=None: None)
        gamma = rule.gamma
        if not is_power_of_two(len(gamma)):
            raise GammaNotPowerOfTwo(f"|Gamma| = {len(gamma)}")
        if set(gamma) & set(CONTROL):
            raise ConstructionError(f"Gamma must not contain {CONTROL}")
        self.gamma = gamma
        self._tm_mode: Optional[TmModeAutomaton] = None

    # ------------------------------------------------------------------
    # TM-mode automaton
    # ------------------------------------------------------------------

    def build_tm_mode(self) -> TmModeAutomaton:
        if self._tm_mode is not None:
            return self._tm_mode
        rule, gamma = self.rule, self.gamma
        blank = rule.blank
        final = set(rule.accepting)
        letters = CONTROL + gamma
        t = _Table(letters)
        parts: Dict[str, Tuple[str, ...]] = {}

        t.state(PLACEHOLDER)
        t.loop(PLACEHOLDER, letters)
        t.state(IDENTITY_NAME)
        t.loop(IDENTITY_NAME, letters)

        # form: (0* Gamma)+ (# (0* Gamma)+)*
        t.state("s")
        t.loop("s", ["0"])
        t.go("s", gamma, "s/sym")
        t.state("s/sym")
        t.loop("s/sym", gamma)
        t.go("s/sym", ["0", "#"], "s")
        t.go("s/sym", ["$"], PLACEHOLDER)
        parts["s"] = ("s", "s/sym")

        # some configuration symbol is accepting
        t.state("f")
        t.loop("f", ["0", "1", "#"] + [g for g in gamma if g not in final])
        t.go("f", [g for g in gamma if g in final], "f/seen")
        t.state("f/seen")
        t.loop("f/seen", [a for a in letters if a != "$"])
        t.go("f/seen", ["$"], PLACEHOLDER)
        parts["f"] = ("f", "f/seen")

        # generalized check-marking, once ending in r and once in id
        for g, end in (("r", PLACEHOLDER), ("id", IDENTITY_NAME)):
            check, two, three, four, skip = (check_state(g, p) for p in ("", "2", "3", "4", "skip"))
            for name in (check, two, three, four, skip):
                t.state(name)
            t.go(check, ["0"], two, out="1")
            t.go(check, ["1"], four, out="0")
            t.loop(two, ["0"])
            t.go(two, ["1"], three)
            t.go(two, gamma, skip)
            t.loop(three, ["0", "1"])
            t.go(three, gamma, check)
            t.go(four, ["1"], four, out="0")
            t.go(four, ["0"], three, out="1")
            t.loop(skip, list(gamma) + ["0"])
            t.go(skip, ["#"], check)
            t.go(skip, ["$"], end)
            parts[check] = (check, two, three, four, skip)

        # every block non-zero
        t.state("c")
        t.loop("c", ["0", "#"])
        t.go("c", ["1"], "c/ok")
        t.go("c", ["$"], PLACEHOLDER)
        t.state("c/ok")
        t.loop("c/ok", ["0", "1"])
        t.go("c/ok", list(gamma) + ["#"], "c")
        t.go("c/ok", ["$"], PLACEHOLDER)
        parts["c"] = ("c", "c/ok")

        # transition checkers
        zeros, ones, pairs, skips = [], [], [], []
        for g0 in gamma:
            for gm1 in gamma:
                zeros.append(_zero(g0, gm1))
                ones.append(_one(g0, gm1))
                pairs.append(_pair(gm1, g0))
        skips = [_skip(g) for g in gamma]
        for name in zeros + ones + pairs + skips:
            t.state(name)
        for g0 in gamma:
            for gm1 in gamma:
                zero, one, pair = _zero(g0, gm1), _one(g0, gm1), _pair(gm1, g0)
                t.loop(zero, ["0"])
                t.go(zero, ["1"], one)
                t.go(zero, [g0], pair)
                t.loop(one, ["0", "1"])
                for g in gamma:
                    t.go(one, [g], _zero(g0, g))
                t.loop(pair, ["0"])
                t.go(pair, ["#"], _zero(rule(gm1, g0, blank), blank))
                t.go(pair, ["$"], PLACEHOLDER)
                for g1 in gamma:
                    t.go(pair, [g1], _skip(rule(gm1, g0, g1)))
        for g in gamma:
            skip = _skip(g)
            t.loop(skip, list(gamma) + ["0"])
            t.go(skip, ["$"], PLACEHOLDER)
            t.go(skip, ["#"], _zero(g, blank))
        parts["checker"] = tuple(zeros + ones + pairs + skips)

        automaton = t.automaton("tm-mode")
        expected = tm_mode_count(len(gamma))
        if len(automaton.states) != expected:
            raise ConstructionError(f"TM-mode automaton has {len(automaton.states)} states, expected {expected}")
        self.debug_log("TM-mode automaton built", {"states": len(automaton.states), "gamma": len(gamma)})
        self._tm_mode = TmModeAutomaton(
            automaton=automaton,
            gamma=gamma,
            blank=blank,
            parts=parts,
            accepting=frozenset(final),
        )
        return self._tm_mode

    # ------------------------------------------------------------------
    # sequences
    # ------------------------------------------------------------------

    def tm_mode_sequences(self, w: Sequence[str], space: int) -> List[StateSequence]:
        """[s, c_0..c_{s-1}, c', q_0..q_{s-1}, f], padded to a power of two by repeating f."""
        tmode = self.build_tm_mode()
        w = tuple(w)
        if len(w) > space - 1:
            raise ValueError(f"input of length {len(w)} does not fit space {space}")
        check_id = StateSequence.of(check_state("id"))
        check_r = StateSequence.of(check_state("r"))

        def around(core: StateSequence, k: int) -> StateSequence:
            return check_id.power(-k) + core + check_id.power(k)

        entries = [StateSequence.of("s")]
        for i in range(space):
            entries.append(check_id.power(-(i + 1)) + check_r + check_id.power(i))
        entries.append(around(StateSequence.of("c"), space))
        initial = (self.rule.initial,) + w + (self.rule.blank,) * (space - len(w) - 1)
        for i, symbol in enumerate(initial):
            entries.append(around(StateSequence.of(tmode.checker(symbol)), i))
        entries.append(StateSequence.of("f"))
        size = next_power_of_two(len(entries))
        entries += [entries[-1]] * (size - len(entries))
        return entries

    # ------------------------------------------------------------------
    # binary encoding
    # ------------------------------------------------------------------

    def code_table(self, code_letters: Tuple[str, str] = ("0", "1")) -> CodeTable:
        return CodeTable(self.gamma, code_letters[0], code_letters[1])

    def _encode_rows(
        self,
        source: MealyAutomaton,
        code: CodeTable,
        extra: Sequence[str],
        rename: Callable[[str], str],
    ) -> Dict[str, Row]:
        prefixes = code.proper_prefixes()
        prefix_set = set(prefixes)
        codes = code.code_words()
        rows: Dict[str, Row] = {}
        for p in source.states:
            if p in (PLACEHOLDER, IDENTITY_NAME):
                continue
            for x in prefixes:
                row: Row = {}
                for bit in (code.b0, code.b1):
                    y = x + (bit,)
                    if y in prefix_set:
                        row[bit] = (bit, rename(encoded_name(p, y)))
                        continue
                    symbol = codes[y]
                    out_symbol, nxt = source.transition(p, symbol)
                    out_code = code.encode_symbol(out_symbol)
                    if out_code[:-1] != x:
                        raise ConstructionError(f"{p} rewrites {symbol} to {out_symbol}: codes differ before the last letter")
                    row[bit] = (out_code[-1], rename(nxt))
                for a in extra:
                    row[a] = (a, IDENTITY_NAME)
                rows[rename(encoded_name(p, x))] = row
        return rows

    def encode_binary(
        self,
        extra_letters: Sequence[str] = (),
        code_letters: Tuple[str, str] = ("0", "1"),
    ) -> MealyAutomaton:
        """States (p', x) for x in PPre X plus id and r; letters outside the code go to id."""
        tmode = self.build_tm_mode()
        code = self.code_table(code_letters)
        letters = tuple(code_letters) + tuple(extra_letters)
        rows = {
            PLACEHOLDER: {a: (a, PLACEHOLDER) for a in letters},
            IDENTITY_NAME: {a: (a, IDENTITY_NAME) for a in letters},
        }
        rows.update(self._encode_rows(tmode.automaton, code, extra_letters, lambda n: n))
        automaton = MealyAutomaton.from_table("tm-mode-binary", letters, rows)
        expected = encoded_count(len(tmode.automaton.states), len(self.gamma))
        if len(automaton.states) != expected:
            raise ConstructionError(f"encoded automaton has {len(automaton.states)} states, expected {expected}")
        return automaton

    def r0_automaton(
        self,
        extra_letters: Sequence[str] = (),
        code_letters: Tuple[str, str] = ("0", "1"),
    ) -> MealyAutomaton:
        """The gadget over the code letters: Gamma + 3 states besides r and id."""
        code = self.code_table(code_letters)
        letters = tuple(code_letters) + tuple(extra_letters)
        rows = {
            PLACEHOLDER: {a: (a, PLACEHOLDER) for a in letters},
            IDENTITY_NAME: {a: (a, IDENTITY_NAME) for a in letters},
        }
        rows.update(self._encode_rows(self.gadget_automaton(), code, extra_letters, lambda n: n))
        return MealyAutomaton.from_table("gadget-binary", letters, rows)

    def gadget_automaton(self) -> MealyAutomaton:
        """R0 over the TM-mode alphabet: r0 waits for $ then becomes r."""
        letters = CONTROL + self.gamma
        t = _Table(letters)
        t.state(PLACEHOLDER)
        t.loop(PLACEHOLDER, letters)
        t.state(IDENTITY_NAME)
        t.loop(IDENTITY_NAME, letters)
        t.state("r0")
        t.loop("r0", [a for a in letters if a != "$"])
        t.go("r0", ["$"], PLACEHOLDER)
        return t.automaton("gadget")

    # ------------------------------------------------------------------
    # assembly
    # ------------------------------------------------------------------

    def hard_automaton(
        self,
        backend: BackendBundle,
        copy_states: Sequence[str],
        gadget_states: Sequence[str],
        padded_alphabet: bool = False,
    ) -> MealyAutomaton:
        """Backend rows, one encoded copy per state in copy_states, one gadget per state in gadget_states."""
        tmode = self.build_tm_mode()
        base = backend.automaton
        code_letters = backend.code_letters
        base_letters = tuple(base.alphabet.names)
        letters = base_letters
        extra = tuple(a for a in letters if a not in code_letters)
        if padded_alphabet and not extra:
            extra = ("2",) if "2" not in letters else ("pad",)
            letters = letters + extra
        code = self.code_table(code_letters)

        rows: Dict[str, Row] = {}
        for state in base.states:
            row: Row = {}
            for a in base_letters:
                row[a] = base.transition(state, a)
            for a in letters[len(base_letters):]:
                row[a] = (a, IDENTITY_NAME)
            rows[state] = row
        if IDENTITY_NAME not in rows:
            rows[IDENTITY_NAME] = {a: (a, IDENTITY_NAME) for a in letters}

        for r in copy_states:
            rows.update(self._encode_rows(tmode.automaton, code, extra, _renamer(copy_tag(r), r)))
        gadget = self.gadget_automaton()
        for r in gadget_states:
            rows.update(self._encode_rows(gadget, code, extra, _renamer(gadget_tag(r), r)))
        automaton = MealyAutomaton.from_table(f"hard-{backend.name}", letters, rows)
        self.debug_log("hard automaton built", {
            "states": len(automaton.states), "copies": list(copy_states), "gadgets": list(gadget_states),
        })
        return automaton

    def assemble(
        self,
        backend: BackendBundle,
        w: Sequence[str],
        space: int,
        full_fidelity: bool = False,
        padded_alphabet: bool = False,
    ) -> HardInstance:
        """
        Combine the encoded automaton with a group backend.

        Args:
            backend: group with non-trivial balanced commutators
            w: machine input
            space: s(n), the configuration length
            full_fidelity: one encoded copy and one gadget per backend state
                (otherwise only for the states the commutator uses)
            padded_alphabet: add an inert letter when the backend alphabet is binary

        Returns:
            HardInstance with q = B[b'_{D-1}, ..., b'_0] over the lifted level maps
        """
        sequences = self.tm_mode_sequences(w, space)
        size = len(sequences)
        depth = size.bit_length() - 1

        entries_b = [backend.b(size, i) if backend.b else StateSequence() for i in range(size)]
        levels = range(max(depth, 1))
        level_seqs = [backend.alpha(d) for d in levels] + [backend.beta(d) for d in levels]
        if full_fidelity:
            ids = identity_states(backend.automaton)
            copy_states = [s for s in backend.automaton.states if s not in ids]
            gadget_states = list(copy_states)
        else:
            copy_states = _states_in(entries_b)
            gadget_states = _states_in(level_seqs)
        automaton = self.hard_automaton(backend, copy_states, gadget_states, padded_alphabet)

        products: List[StateSequence] = []
        for i in range(size):
            product = StateSequence()
            for letter in entries_b[i]:
                piece = copy_sequence(sequences[i], letter.state)
                product = product + (piece.inverse() if letter.negative else piece)
            products.append(product)

        alpha0, beta0 = lifted_level_maps(backend)
        q = balanced(CommutatorSpec(tuple(products), alpha0, beta0))

        provenance = {
            'machine_input': list(w),
            'space': space,
            'D': size,
            'backend': backend.name,
            'gamma': list(self.gamma),
            'zero_block': zero_block_length(space),
            'states': len(automaton.states),
            'copies': list(copy_states),
            'gadgets': list(gadget_states),
            'full_fidelity': full_fidelity,
            'padded_alphabet': len(automaton.alphabet) > 2,
        }
        if full_fidelity:
            # backend states acting trivially (a·a⁻¹ in the Aleshin square) get no copy
            trivial = len(identity_states(backend.automaton) - {IDENTITY_NAME})
            expected = full_fidelity_count(len(copy_states), len(self.gamma)) + trivial
            if len(automaton.states) != expected:
                raise ConstructionError(f"assembled automaton has {len(automaton.states)} states, expected {expected}")
        logger.info("hard instance: backend=%s D=%d |T|=%d |q|=%d", backend.name, size, len(automaton.states), len(q))
        return HardInstance(automaton, q, tuple(products), alpha0, beta0, provenance)


def copy_tag(r: str) -> str:
    return f"T2[{r}]"


def gadget_tag(r: str) -> str:
    return f"R0[{r}]"


def copy_sequence(seq: StateSequence, r: str) -> StateSequence:
    """A TM-mode sequence moved into the encoded copy whose placeholder is r."""
    rename = _renamer(copy_tag(r), r)
    return StateSequence(tuple(SignedState(rename(e.state), e.negative) for e in seq))


def lift_sequence(seq: StateSequence) -> StateSequence:
    """Backend states replaced by their gadgets, which act as id until $."""
    return StateSequence(tuple(SignedState(f"{gadget_tag(e.state)}:r0", e.negative) for e in seq))


def lifted_level_maps(backend: BackendBundle) -> Tuple[LevelMap, LevelMap]:
    alpha0 = LevelMap(lambda d: lift_sequence(backend.alpha(d)), f"lift({backend.alpha.description})")
    beta0 = LevelMap(lambda d: lift_sequence(backend.beta(d)), f"lift({backend.beta.description})")
    return alpha0, beta0


def encoded_name(state: str, prefix: Word) -> str:
    """(p', x); the empty prefix keeps the plain name, so sequences carry over unchanged."""
    if not prefix or state in (PLACEHOLDER, IDENTITY_NAME):
        return state
    return f"{state}@{''.join(prefix)}"


def _renamer(tag: str, r: str) -> Callable[[str], str]:
    def rename(name: str) -> str:
        if name == PLACEHOLDER:
            return r
        if name == IDENTITY_NAME:
            return IDENTITY_NAME
        return f"{tag}:{name}"
    return rename


def _states_in(seqs: Iterable[StateSequence]) -> List[str]:
    seen: Dict[str, None] = {}
    for seq in seqs:
        for entry in seq:
            seen.setdefault(entry.state, None)
    return list(seen)


# ============================================================================
# WITNESS WORDS
# ============================================================================

def witness_symbols(computation: Sequence[Configuration], space: int, ell: Optional[int] = None) -> List[str]:
    """u over {0, #} + Gamma: every symbol behind a 0-block, configurations split by #, then $."""
    ell = zero_block_length(space) if ell is None else ell
    symbols: List[str] = []
    for t, conf in enumerate(computation):
        if t:
            symbols.append("#")
        for g in conf:
            symbols.extend(["0"] * ell)
            symbols.append(g)
    symbols.append("$")
    return symbols


def one_configuration_bound(
    gamma: Sequence[str],
    space: int,
    code_letters: Tuple[str, str] = ("0", "1"),
    ell: Optional[int] = None,
) -> int:
    """Length of one encoded configuration, its 0-blocks included, followed by the code of $."""
    code = CodeTable(tuple(gamma), code_letters[0], code_letters[1])
    configuration = (gamma[0],) * space
    return len(code.encode_word(witness_symbols([configuration], space, ell)))


def witness_word(
    rule: LocalRule,
    w: Sequence[str],
    computation: Optional[RunResult],
    code_letters: Tuple[str, str] = ("0", "1"),
    ell: Optional[int] = None,
) -> Word:
    """The encoded u$ for an accepting run."""
    if computation is None or not computation.accepted:
        raise NoComputation(f"the machine does not accept {''.join(w)!r}")
    space = len(computation.computation[0])
    code = CodeTable(rule.gamma, code_letters[0], code_letters[1])
    return code.encode_word(witness_symbols(computation.computation, space, ell))


# ============================================================================
# MODULE-LEVEL SHORTCUTS
# ============================================================================

def build_tm_mode(rule: LocalRule) -> TmModeAutomaton:
    return TmReductionBuilder(rule).build_tm_mode()


def tm_mode_sequences(rule: LocalRule, w: Sequence[str], space: int) -> List[StateSequence]:
    return TmReductionBuilder(rule).tm_mode_sequences(w, space)


def encode_binary(rule: LocalRule, extra_letters: Sequence[str] = (), code_letters: Tuple[str, str] = ("0", "1")) -> MealyAutomaton:
    return TmReductionBuilder(rule).encode_binary(extra_letters, code_letters)


def r0_automaton(rule: LocalRule, extra_letters: Sequence[str] = (), code_letters: Tuple[str, str] = ("0", "1")) -> MealyAutomaton:
    return TmReductionBuilder(rule).r0_automaton(extra_letters, code_letters)


def assemble(
    rule: LocalRule,
    backend: BackendBundle,
    w: Sequence[str],
    space: Optional[int] = None,
    full_fidelity: bool = False,
    padded_alphabet: bool = False,
) -> HardInstance:
    space = space if space is not None else rule.space_bound(len(w))
    return TmReductionBuilder(rule).assemble(backend, w, space, full_fidelity, padded_alphabet)


def in_identity_star(automaton: MealyAutomaton, seq: StateSequence, r: str = PLACEHOLDER) -> bool:
    """Every entry is an identity state other than the placeholder r."""
    ids = identity_states(automaton) - {r}
    return all(e.state in ids for e in seq)


def in_id_r_id(automaton: MealyAutomaton, seq: StateSequence, r: str = PLACEHOLDER) -> bool:
    """seq lies in id* r id*, ids of either sign, r positive."""
    ids = identity_states(automaton) - {r}
    hits = [e for e in seq if e.state not in ids]
    return len(hits) == 1 and hits[0].state == r and not hits[0].negative
