"""
Compressed reduction - the TM reduction with its long commutator blocks
written as grammars.

The entry list is

    [f, T(q-seed), q_n .. q_0, c', T(c-seed), c_n .. c_0, s]

over the single encoded copy whose placeholder is b^-1·a in the Aleshin
square automaton. T(seed) is the twisted commutator with gamma = check_id of
2^k entries; it equals in the group the balanced commutator of the missing
c_i (resp. q_i) for i = n+1 .. s-1, because check_id never touches the part
that the gadgets act on. c' reuses the shared M chain for check_id^s.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from errors import ConstructionError
from models import (
    BackendBundle, Budget, CommutatorSpec, CompressedInstance, DeskReport, LocalRule, SLP,
    SignedState, StateSequence, next_power_of_two,
)
from services.commutators import COMMUTATOR_SHAPE, balanced, twisted
from services.group_backends import aleshin_backend, certify_free_nontrivial
from services.slp import (
    SlpEvaluator, expand, expand_guard, expanded_length, streaming_bounded_triviality, twisted_rules,
    variable_count,
)
from services.tm_reduction import (
    TmReductionBuilder, check_state, copy_sequence, lifted_level_maps, one_configuration_bound, witness_word,
)
from services.transducer_core import IDENTITY_NAME, first_moved_word, prune_identity
from services.turing import run
from services.word_problem import WordProblemSolver

logger = logging.getLogger(__name__)

Rules = Dict[str, Tuple[SignedState, ...]]


def space_for(n: int, k: Optional[int] = None, e: Optional[int] = None) -> Tuple[int, int]:
    """(exponent, s): s = n + 1 + 2^k in test mode, n + 1 + 2^(2 n^e) in true mode."""
    if (k is None) == (e is None):
        raise ValueError("give exactly one of k (test mode) and e (true mode)")
    exponent = k if k is not None else 2 * n ** e
    if exponent < 0:
        raise ValueError("the exponent must be a natural number")
    return exponent, n + 1 + 2 ** exponent


class CompressedBuilder:
    """Builds the grammar instance and its explicit counterpart for one machine and input.

    The first leaf, which also pads the leaf list, is the copy of the form checker s;
    the backend entry b^-1·a only appears as the placeholder inside the copy.
    """

    def __init__(
        self,
        rule: LocalRule,
        w: Sequence[str],
        k: Optional[int] = None,
        e: Optional[int] = None,
        backend: Optional[BackendBundle] = None,
        debug_logger: Optional[Callable] = None,
    ):
        self.rule = rule
        self.w = tuple(w)
        self.n = len(self.w)
        self.k, self.e = k, e
        self.exponent, self.space = space_for(self.n, k, e)
        self.backend = backend or aleshin_backend(include_square=True)
        self.debug_log = debug_logger or (lambda msg, data=None: None)
        self.builder = TmReductionBuilder(rule, debug_logger)
        self.tmode = self.builder.build_tm_mode()
        b = self.backend.b(1, 0) if self.backend.b else StateSequence()
        if len(b) != 1 or b[0].negative:
            raise ConstructionError("the compressed instance needs a backend whose entry is a single positive state")
        self.r = b[0].state
        self.alpha0, self.beta0 = lifted_level_maps(self.backend)

    # ------------------------------------------------------------------
    # entries, in TM-mode names
    # ------------------------------------------------------------------

    def _gamma(self) -> StateSequence:
        return StateSequence.of(check_state("id"))

    def _around(self, core: StateSequence, exponent: int) -> StateSequence:
        gamma = self._gamma()
        return gamma.power(-exponent) + core + gamma.power(exponent)

    def _c(self, i: int) -> StateSequence:
        gamma = self._gamma()
        return gamma.power(-(i + 1)) + StateSequence.of(check_state("r")) + gamma.power(i)

    def _q(self, i: int, symbol: str) -> StateSequence:
        return self._around(StateSequence.of(self.tmode.checker(symbol)), i)

    def _c_seed(self) -> StateSequence:
        gamma = self._gamma()
        return self._around(gamma.inverse() + StateSequence.of(check_state("r")), self.n + 1)

    def _q_seed(self) -> StateSequence:
        return self._around(StateSequence.of(self.tmode.checker(self.rule.blank)), self.n + 1)

    def _prefix_symbols(self) -> Tuple[str, ...]:
        return (self.rule.initial,) + self.w

    def _copy(self, seq: StateSequence) -> StateSequence:
        return copy_sequence(seq, self.r)

    # ------------------------------------------------------------------
    # grammar
    # ------------------------------------------------------------------

    def _outer_rules(self, leaves: List[SignedState], rules: Rules) -> str:
        def block(lo: int, size: int) -> SignedState:
            if size == 1:
                return leaves[lo]
            half = size // 2
            level = half.bit_length() - 1
            x, y = block(lo + half, half), block(lo, half)
            pieces = {"a": self.alpha0(level), "b": self.beta0(level)}
            body: List[SignedState] = []
            for kind, neg in COMMUTATOR_SHAPE:
                if kind in pieces:
                    piece = pieces[kind]
                    body.extend((piece.inverse() if neg else piece).entries)
                else:
                    symbol = x if kind == "X" else y
                    body.append(symbol.inverse() if neg else symbol)
            name = f"B[{lo}:{lo + size}]"
            rules[name] = tuple(body)
            return SignedState(name)

        return block(0, len(leaves)).state

    def build(self) -> CompressedInstance:
        automaton = self.builder.hard_automaton(
            self.backend,
            copy_states=[self.r],
            gadget_states=self._gadget_states(),
        )
        size = 2 ** self.exponent
        gamma = self._copy(self._gamma())
        rules: Rules = {}

        c_rules, c_start = twisted_rules(
            self._copy(self._c_seed()), size, gamma, self.alpha0, self.beta0, prefix="C/", power_prefix="")
        q_rules, q_start = twisted_rules(
            self._copy(self._q_seed()), size, gamma, self.alpha0, self.beta0, prefix="Q/", power_prefix="")
        rules.update(c_rules)
        rules.update(q_rules)

        # M_{2^k} generates check_id^(2^k)
        rules.setdefault("M_1", tuple(gamma))
        current = 1
        while current < size:
            rules.setdefault(f"M_{2 * current}", (SignedState(f"M_{current}"),) * 2)
            current *= 2
        power = SignedState(f"M_{size}")
        rules["C'"] = (
            (power.inverse(),)
            + tuple(self._copy(self._around(StateSequence.of("c"), self.n + 1)))
            + (power,)
        )

        leaves: List[SignedState] = []

        def literal(name: str, seq: StateSequence) -> None:
            rules[name] = tuple(self._copy(seq))
            leaves.append(SignedState(name))

        literal("E:s", StateSequence.of("s"))
        for i in range(self.n + 1):
            literal(f"E:c{i}", self._c(i))
        leaves.append(SignedState(c_start))
        leaves.append(SignedState("C'"))
        for i, symbol in enumerate(self._prefix_symbols()):
            literal(f"E:q{i}", self._q(i, symbol))
        leaves.append(SignedState(q_start))
        literal("E:f", StateSequence.of("f"))
        raw = len(leaves)
        outer = next_power_of_two(raw)
        leaves += [leaves[0]] * (outer - raw)

        start = self._outer_rules(leaves, rules)
        slp = SLP(rules, start)
        provenance = {
            'machine_input': list(self.w),
            'mode': 'test' if self.k is not None else 'true',
            'k': self.k,
            'e': self.e,
            'space': self.space,
            'D': outer,
            'entries': raw,
            'inner_size_log2': self.exponent,
            'states': len(automaton.states),
            'variables': variable_count(slp),
            'expanded_length': expanded_length(slp),
            'r': self.r,
        }
        logger.info("compressed instance: s=%d D=%d |T|=%d variables=%d",
                    self.space, outer, len(automaton.states), provenance['variables'])
        return CompressedInstance(automaton, slp, provenance)

    def _gadget_states(self) -> List[str]:
        levels = max(self.exponent, 2, next_power_of_two(2 * self.n + 7).bit_length())
        seen: Dict[str, None] = {}
        for d in range(levels):
            for seq in (self.backend.alpha(d), self.backend.beta(d)):
                for entry in seq:
                    seen.setdefault(entry.state, None)
        return list(seen)

    # ------------------------------------------------------------------
    # explicit words
    # ------------------------------------------------------------------

    def direct_target(self) -> StateSequence:
        """The same nested commutator built without a grammar; letter-equal to the expansion."""
        size = 2 ** self.exponent
        gamma = self._copy(self._gamma())

        def inner(seed: StateSequence) -> StateSequence:
            return twisted(self._copy(seed), size, gamma, self.alpha0, self.beta0)

        entries: List[StateSequence] = [self._copy(StateSequence.of("s"))]
        entries += [self._copy(self._c(i)) for i in range(self.n + 1)]
        entries.append(inner(self._c_seed()))
        entries.append(self._copy(self._around(StateSequence.of("c"), self.space)))
        entries += [self._copy(self._q(i, symbol)) for i, symbol in enumerate(self._prefix_symbols())]
        entries.append(inner(self._q_seed()))
        entries.append(self._copy(StateSequence.of("f")))
        outer = next_power_of_two(len(entries))
        entries += [entries[0]] * (outer - len(entries))
        return balanced(CommutatorSpec(tuple(entries), self.alpha0, self.beta0))

    def block_seed(self, which: str) -> StateSequence:
        """Seed of the c or q twisted block, in copy names; its gamma^i conjugates are the block entries."""
        if which == "c":
            return self._copy(self._c_seed())
        if which == "q":
            return self._copy(self._q_seed())
        raise ValueError(f"unknown block {which!r}")

    def block_gamma(self) -> StateSequence:
        return self._copy(self._gamma())

    def explicit_block(self, which: str) -> Tuple[StateSequence, ...]:
        """The listed entries a twisted block stands for: c_{n+1}..c_{s-1} or q_{n+1}..q_{s-1}."""
        if which == "c":
            return tuple(self._copy(self._c(i)) for i in range(self.n + 1, self.space))
        if which == "q":
            return tuple(self._copy(self._q(i, self.rule.blank)) for i in range(self.n + 1, self.space))
        raise ValueError(f"unknown block {which!r}")


# ============================================================================
# MODULE-LEVEL OPERATIONS
# ============================================================================

def build_compressed(
    rule: LocalRule,
    w: Sequence[str],
    k: Optional[int] = None,
    e: Optional[int] = None,
    debug_logger: Optional[Callable] = None,
) -> CompressedInstance:
    return CompressedBuilder(rule, w, k=k, e=e, debug_logger=debug_logger).build()


def direct_target(rule: LocalRule, w: Sequence[str], k: int) -> StateSequence:
    return CompressedBuilder(rule, w, k=k).direct_target()


def grammar_variable_count(instance: CompressedInstance) -> int:
    return variable_count(instance.slp)


def backend_settles(backend: BackendBundle) -> Optional[Callable[[StateSequence], bool]]:
    """True on sequences of backend states the certifier proves trivial; None without a certifier."""
    certifier = backend.certifier
    if certifier is None:
        return None
    names = frozenset(backend.automaton.states) - {IDENTITY_NAME}

    def settled(seq: StateSequence) -> bool:
        core = StateSequence(tuple(e for e in seq if e.state != IDENTITY_NAME))
        return all(e.state in names for e in core) and not certifier(core)

    return settled


def verify_desk_scale(
    instance: CompressedInstance,
    rule: LocalRule,
    accepting: bool,
    bound: Optional[int] = None,
    search_level: int = 12,
    max_steps: int = 10_000,
    budget: Optional[Budget] = None,
    backend: Optional[BackendBundle] = None,
) -> DeskReport:
    """
    Bounded check of "q = 1 iff the machine rejects".

    Accepting: stream the witness u$ through the grammar, certify the residual
    through the free group and look for a word v with u$v moved. Rejecting:
    every word up to the bound (default: one encoded configuration and $) is
    fixed; residuals made of backend states only are settled by the backend's
    certifier.
    """
    budget = budget or Budget.from_env()
    backend = backend or aleshin_backend(include_square=True)
    automaton, slp = instance.automaton, instance.slp
    w = tuple(instance.provenance.get('machine_input', ()))
    space = instance.provenance['space']

    if accepting:
        result = run(rule, w, max_steps, space)
        u = witness_word(rule, w, result, code_letters=("0", "1"))
        out, residual_slp = SlpEvaluator(automaton, slp).act(u)
        if out != u:
            return DeskReport(True, False, moved=u, bound=len(u), words_checked=1)
        residual = prune_identity(automaton, expand(residual_slp, expand_guard()))
        certified = certify_free_nontrivial(residual)
        v = first_moved_word(automaton, residual, search_level)
        moved = u + v if v is not None else None
        logger.info("accepting check: |u$|=%d certified=%s mover=%s", len(u), certified, v)
        return DeskReport(True, moved is None, moved, len(u) + search_level, 1, certified)

    bound = bound if bound is not None else one_configuration_bound(rule.gamma, space)
    if expanded_length(slp) <= expand_guard():
        seq = expand(slp)
        found = WordProblemSolver(automaton, budget).bounded_triviality(
            seq, bound, prune=True, settled=backend_settles(backend))
    else:
        found = streaming_bounded_triviality(automaton, slp, bound)
    return DeskReport(False, found.fixed_all, found.moved, bound, found.explored)
