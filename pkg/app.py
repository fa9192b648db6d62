"""
Automaton groups - command-line entry point for transducer groups, word-problem
deciders and the hardness-instance builders.

Flat architecture with consolidated modules:
- storage.py: JSON documents, atomic writes and fixture lookup
- models.py: All dataclasses
- errors.py: Exception hierarchy
- services/: Transducers, deciders, commutators, backends and the three reductions

Usage:
    python app.py decide --automaton adding-machine --seq "q,q^-1"
    python app.py build-uniform --dfas data/dfas_empty.json --out uniform.json
    python app.py decide --instance uniform.json --expect identity
"""

import argparse
import dataclasses
import logging
import random
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

# Load environment variables
from dotenv import load_dotenv
load_dotenv()

from errors import AutomatonGroupError, FormatError, NoComputation
from models import SLP, Alphabet, Budget, Decision, StateSequence, Verdict
import storage
from services import compressed_reduction, slp as slp_tools, tm_reduction
from services.group_backends import backend as get_backend, fixture_registry
from services.transducer_core import MealyAutomaton, cross, prune_identity, to_dot
from services.turing import normalize, run
from services.uniform_reduction import build_uniform, random_dfa, shortest_common_word
from services.word_problem import WordProblemSolver

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def debug_log(message: str, data: Dict[str, Any] = None):
    """Progress reports from the Service classes."""
    if data:
        logger.debug(f"{message}: {data}")
    else:
        logger.debug(message)


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


# ============================================================================
# HELPERS
# ============================================================================

def _emit(args: argparse.Namespace, data: Dict[str, Any], text: str) -> None:
    """Results go to stdout; --json switches to the sorted JSON rendering."""
    if getattr(args, "json", False):
        sys.stdout.write(storage.dumps(data))
    else:
        print(text)


def _budget(args: argparse.Namespace) -> Budget:
    budget = Budget.from_env()
    overrides = {}
    if getattr(args, "max_residuals", None) is not None:
        overrides['max_residuals'] = args.max_residuals
    if getattr(args, "max_witness_length", None) is not None:
        overrides['max_witness_length'] = args.max_witness_length
    return dataclasses.replace(budget, **overrides) if overrides else budget


def _load_target(args: argparse.Namespace) -> Tuple[MealyAutomaton, Optional[StateSequence], Optional[SLP]]:
    """(automaton, sequence, grammar) from --instance or from --automaton with --seq/--slp."""
    if getattr(args, "instance", None):
        automaton, seq, grammar, _ = storage.load_instance(args.instance)
        if getattr(args, "automaton", None):
            automaton = storage.load_automaton(args.automaton)
        return automaton, seq, grammar
    if not getattr(args, "automaton", None):
        raise FormatError("give --instance, or --automaton with a sequence")
    automaton = storage.load_automaton(args.automaton)
    if getattr(args, "slp", None):
        return automaton, None, storage.load_slp(args.slp)
    if getattr(args, "seq", None) is None:
        raise FormatError("give --seq (or --instance)")
    return automaton, storage.parse_sequence(args.seq), None


def _verdict_exit(verdict: Verdict, expect: Optional[str]) -> int:
    if verdict is Verdict.LIMIT_EXCEEDED:
        return EXIT_LIMIT
    if expect == "identity" and verdict is Verdict.NOT_IDENTITY:
        return EXIT_ASSERTION
    if expect == "not-identity" and verdict is Verdict.IDENTITY:
        return EXIT_ASSERTION
    return EXIT_OK


def _describe(automaton: MealyAutomaton, decision: Decision) -> str:
    if decision.verdict is Verdict.NOT_IDENTITY:
        return f"NotIdentity witness={automaton.alphabet.format_word(decision.witness)}"
    if decision.verdict is Verdict.LIMIT_EXCEEDED:
        return f"LimitExceeded ({decision.evidence or 'budget exhausted'})"
    return "Identity"


def _machine(args: argparse.Namespace):
    tm = storage.load_tm(args.tm)
    w = Alphabet(tm.input_alphabet).parse_word(args.input) if args.input else ()
    return tm, normalize(tm), w


# ============================================================================
# AUTOMATON COMMANDS
# ============================================================================

def cmd_validate(args: argparse.Namespace) -> int:
    automaton = storage.load_automaton(args.automaton)
    report = automaton.report()
    data = {'automaton': automaton.name, 'states': len(automaton.states), **report.to_dict()}
    lines = [
        f"{automaton.name}: {len(automaton.states)} states over {list(automaton.alphabet.names)}",
        f"deterministic={report.deterministic} complete={report.complete} invertible={report.invertible}",
    ]
    lines += [f"offending: {state} / {letter}" for state, letter in report.offending]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_act(args: argparse.Namespace) -> int:
    automaton, seq, grammar = _load_target(args)
    u = automaton.alphabet.parse_word(args.word)
    if grammar is not None:
        out = slp_tools.SlpEvaluator(automaton, grammar, debug_log).output(u)
    else:
        out, _ = cross(automaton, seq, u)
    _emit(args, {'input': list(u), 'output': list(out)}, automaton.alphabet.format_word(out))
    return EXIT_OK


def cmd_residual(args: argparse.Namespace) -> int:
    automaton, seq, grammar = _load_target(args)
    u = automaton.alphabet.parse_word(args.word)
    if grammar is not None:
        _, rest = slp_tools.SlpEvaluator(automaton, grammar, debug_log).act(u)
        data = storage.slp_to_dict(rest)
        _emit(args, data, storage.dumps(data).rstrip("\n"))
        return EXIT_OK
    _, rest = cross(automaton, seq, u)
    if args.prune:
        rest = prune_identity(automaton, rest)
    _emit(args, {'residual': rest.to_literal()}, rest.to_literal())
    return EXIT_OK


def cmd_decide(args: argparse.Namespace) -> int:
    automaton, seq, grammar = _load_target(args)
    budget = _budget(args)

    if args.bounded is not None:
        if grammar is not None:
            result = slp_tools.streaming_bounded_triviality(automaton, grammar, args.bounded)
        else:
            result = WordProblemSolver(automaton, budget, debug_log).bounded_triviality(seq, args.bounded)
        verdict = Verdict.IDENTITY if result.fixed_all else Verdict.NOT_IDENTITY
        text = (f"fixes every word of length <= {args.bounded}" if result.fixed_all
                else f"moves {automaton.alphabet.format_word(result.moved)}")
        _emit(args, result.to_dict(), text)
        return _verdict_exit(verdict, args.expect)

    if grammar is not None:
        decision = slp_tools.compressed_is_identity(automaton, grammar, budget, args.guard, debug_log)
    else:
        decision = WordProblemSolver(automaton, budget, debug_log).is_identity(
            seq, pre_reduce=args.reduce, prune=args.prune)
    data = storage.decision_to_dict(decision)
    if args.out:
        storage.save_json(args.out, data)
    _emit(args, data, _describe(automaton, decision))
    return _verdict_exit(decision.verdict, args.expect)


def cmd_witness(args: argparse.Namespace) -> int:
    if args.dfas:
        dfas = storage.load_dfas(args.dfas)
        w = shortest_common_word(dfas)
        if w is None:
            raise NoComputation("the acceptors share no word")
        word = tuple(w) + ("$", dfas[0].alphabet[0])
        _emit(args, {'witness': list(word)}, ",".join(word))
        return EXIT_OK
    if not args.tm:
        raise FormatError("give --dfas or --tm with --input")

    tm, rule, w = _machine(args)
    bundle = get_backend(args.backend)
    space = args.space if args.space is not None else rule.space_bound(len(w))
    result = run(rule, w, args.max_steps, space)
    u = tm_reduction.witness_word(rule, w, result, code_letters=bundle.code_letters)
    word = u + tuple(bundle.mover or ())
    data = {'witness': list(word), 'encoded_run': list(u), 'mover': list(bundle.mover or ())}
    _emit(args, data, "".join(word) if all(len(a) == 1 for a in word) else ",".join(word))
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    source = to_dot(storage.load_automaton(args.automaton))
    if args.out:
        Path(args.out).write_text(source, encoding="utf-8")
        logger.info("wrote %s", args.out)
    else:
        sys.stdout.write(source)
    return EXIT_OK


# ============================================================================
# BUILDERS
# ============================================================================

def cmd_build_uniform(args: argparse.Namespace) -> int:
    if args.random:
        rng = random.Random(args.seed)
        dfas = [random_dfa(rng, args.states) for _ in range(args.random)]
    elif args.dfas:
        dfas = storage.load_dfas(args.dfas)
    else:
        raise FormatError("give --dfas or --random")
    instance = build_uniform(dfas)
    provenance = {
        'acceptors': instance.acceptor_count,
        'D': instance.size,
        'states': len(instance.automaton.states),
        'length': len(instance.sequence),
    }
    if args.random:
        provenance['seed'] = args.seed
    storage.save_instance(args.out, "uniform", instance.automaton, sequence=instance.sequence, provenance=provenance)
    _emit(args, provenance, f"uniform instance: D={instance.size}, {provenance['states']} states, |p|={len(instance.sequence)} -> {args.out}")
    return EXIT_OK


def cmd_build_tm(args: argparse.Namespace) -> int:
    _, rule, w = _machine(args)
    instance = tm_reduction.assemble(
        rule,
        get_backend(args.backend),
        w,
        space=args.space,
        full_fidelity=args.full_fidelity,
        padded_alphabet=args.padded_alphabet,
    )
    storage.save_instance(
        args.out, "tm", instance.automaton, sequence=instance.sequence, provenance=instance.provenance)
    p = instance.provenance
    _emit(args, p, f"tm instance: backend={p['backend']} D={p['D']} {p['states']} states, |q|={len(instance.sequence)} -> {args.out}")
    return EXIT_OK


def cmd_build_compressed(args: argparse.Namespace) -> int:
    if (args.test_k is None) == (args.true_e is None):
        raise FormatError("give exactly one of --test-k and --true-e")
    _, rule, w = _machine(args)
    instance = compressed_reduction.build_compressed(rule, w, k=args.test_k, e=args.true_e, debug_logger=debug_log)
    storage.save_instance(args.out, "compressed", instance.automaton, slp=instance.slp, provenance=instance.provenance)
    p = instance.provenance
    _emit(args, p, f"compressed instance: s={p['space']} {p['variables']} variables, |expansion|={p['expanded_length']} -> {args.out}")
    return EXIT_OK


# ============================================================================
# GRAMMARS AND FIXTURES
# ============================================================================

def _grammar(args: argparse.Namespace) -> SLP:
    if args.instance:
        _, _, grammar, _ = storage.load_instance(args.instance)
        if grammar is None:
            raise FormatError(f"{args.instance} carries no grammar")
        return grammar
    if not args.slp:
        raise FormatError("give --slp or --instance")
    return storage.load_slp(args.slp)


def cmd_slp_expand(args: argparse.Namespace) -> int:
    seq = slp_tools.expand(_grammar(args), args.guard if args.guard is not None else slp_tools.expand_guard())
    _emit(args, {'sequence': seq.to_literal(), 'length': len(seq)}, seq.to_literal())
    return EXIT_OK


def cmd_slp_length(args: argparse.Namespace) -> int:
    grammar = _grammar(args)
    data = {
        'expanded_length': slp_tools.expanded_length(grammar),
        'variables': slp_tools.variable_count(grammar),
        'size': grammar.size(),
    }
    _emit(args, data, str(data['expanded_length']))
    return EXIT_OK


def cmd_fixtures_list(args: argparse.Namespace) -> int:
    rows = []
    for name, build in fixture_registry().items():
        automaton = build()
        rows.append({'name': name, 'states': len(automaton.states), 'alphabet': list(automaton.alphabet.names)})
    _emit(args, {'fixtures': rows}, "\n".join(f"{r['name']}\t{r['states']} states" for r in rows))
    return EXIT_OK


def cmd_fixtures_export(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    written = []
    for name, build in fixture_registry().items():
        path = directory / f"{name}.json"
        storage.save_automaton(path, build())
        written.append(str(path))
    _emit(args, {'written': written}, "\n".join(written))
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def _add_target(p: argparse.ArgumentParser) -> None:
    p.add_argument("--automaton", help="fixture name or automaton JSON file")
    p.add_argument("--seq", help='state sequence, e.g. "q,q^-1"')
    p.add_argument("--slp", help="grammar JSON file (instead of --seq)")
    p.add_argument("--instance", help="instance JSON file written by a build command")


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-residuals", type=int, default=None)
    p.add_argument("--max-witness-length", type=int, default=None)
    p.add_argument("--guard", type=int, default=None, help="expansion guard for grammars")


def _add_machine(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tm", help="machine JSON file or data fixture name")
    p.add_argument("--input", default="", help="machine input word")
    p.add_argument("--space", type=int, default=None, help="override s(n)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autgroups", description="Automaton groups and their word problems")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural checks of an automaton")
    p.add_argument("--automaton", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_validate)

    for name, handler in (("act", cmd_act), ("residual", cmd_residual)):
        p = sub.add_parser(name)
        _add_target(p)
        p.add_argument("--word", required=True)
        p.add_argument("--json", action="store_true")
        if name == "residual":
            p.add_argument("--prune", action="store_true", help="drop identity states")
        p.set_defaults(handler=handler)

    p = sub.add_parser("decide", help="is the sequence the identity?")
    _add_target(p)
    _add_budget(p)
    p.add_argument("--bounded", type=int, default=None, metavar="N", help="only check words up to length N")
    p.add_argument("--reduce", action="store_true", help="free-reduce before deciding")
    p.add_argument("--prune", action="store_true", help="drop identity states from residuals")
    p.add_argument("--expect", choices=("identity", "not-identity"))
    p.add_argument("--out", help="write the decision document here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("witness", help="word moved by the instance built from the same input")
    p.add_argument("--dfas")
    _add_machine(p)
    p.add_argument("--backend", choices=("a5", "f3"), default="f3")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("build-uniform")
    p.add_argument("--dfas")
    p.add_argument("--random", type=int, default=0, metavar="N", help="use N random acceptors")
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_build_uniform)

    p = sub.add_parser("build-tm")
    _add_machine(p)
    p.add_argument("--backend", choices=("a5", "f3"), default="f3")
    p.add_argument("--full-fidelity", action="store_true")
    p.add_argument("--padded-alphabet", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_build_tm)

    p = sub.add_parser("build-compressed")
    _add_machine(p)
    p.add_argument("--test-k", type=int, default=None)
    p.add_argument("--true-e", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_build_compressed)

    p = sub.add_parser("slp", help="straight-line program tools")
    slp_sub = p.add_subparsers(dest="slp_command", required=True)
    for name, handler in (("expand", cmd_slp_expand), ("length", cmd_slp_length), ("decide", cmd_decide)):
        q = slp_sub.add_parser(name)
        q.add_argument("--slp")
        q.add_argument("--instance")
        q.add_argument("--json", action="store_true")
        if name == "expand":
            q.add_argument("--guard", type=int, default=None)
        if name == "decide":
            q.add_argument("--automaton", help="overrides the instance automaton")
            _add_budget(q)
            q.add_argument("--bounded", type=int, default=None, metavar="N")
            q.add_argument("--expect", choices=("identity", "not-identity"))
            q.add_argument("--out")
            q.set_defaults(reduce=False, prune=False)
        q.set_defaults(handler=handler)

    p = sub.add_parser("fixtures")
    fix_sub = p.add_subparsers(dest="fixtures_command", required=True)
    q = fix_sub.add_parser("list")
    q.add_argument("--json", action="store_true")
    q.set_defaults(handler=cmd_fixtures_list)
    q = fix_sub.add_parser("export")
    q.add_argument("--dir", required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(handler=cmd_fixtures_export)

    p = sub.add_parser("export-dot", help="Graphviz source of an automaton")
    p.add_argument("--automaton", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_export_dot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    configure_logging(args.verbose, args.quiet)
    try:
        return args.handler(args)
    except (AutomatonGroupError, KeyError, ValueError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
