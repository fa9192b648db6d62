"""Exécute les critères d'acceptation et mesure leur durée.

Chaque critère est une vérification exacte à petite échelle (oracle direct :
permutations, produit d'automates, simulation de la machine, expansion de la
grammaire). Le harness chronomètre chaque critère (horloge murale), compare à la
limite de temps visée et écrit un tableau Markdown + un JSON détaillé.

Les critères 10 et 13 sont « bornés » : côté rejet on vérifie que q fixe tous
les mots jusqu'à la longueur B, ce qui est un argument sain mais pas une preuve
d'identité dans le groupe.

Usage :
  ./venv/bin/python -m evaluation.run_acceptance
  ./venv/bin/python -m evaluation.run_acceptance --only 1,2,3 --seed 7
"""
from __future__ import annotations

import os
import sys
import json
import time
import random
import logging
import argparse
import itertools
from typing import Callable, Dict, List, Optional, Tuple

from dotenv import load_dotenv

import storage
from evaluation import metrics as M
from models import CodeTable, CommutatorSpec, EPSILON_MAP, LevelMap, SignedState, SLP, StateSequence, Verdict
from services import commutators as C
from services import compressed_reduction as CR
from services import group_backends as G
from services import slp as S
from services import tm_reduction as TR
from services import uniform_reduction as U
from services.transducer_core import act_word, adding_machine, cross, free_reduce, residual
from services.turing import normalize, run
from services.word_problem import WordProblemSolver, equal_in_group

logger = logging.getLogger(__name__)

HERE = os.path.dirname(__file__)
RESULTS_DIR = os.path.join(HERE, "results")

Outcome = Tuple[bool, str, int]   # (réussi, détail, nombre de vérifications)

A5_SHORT = ("sigma", "alpha", "beta")
A5_LEVEL_MAPS = (
    EPSILON_MAP,
    LevelMap.constant(StateSequence.of("alpha")),
    LevelMap.alternating(StateSequence.of("beta"), StateSequence.of("alpha", "sigma")),
)


def _random_a5_sequence(rng: random.Random, max_len: int = 2) -> StateSequence:
    return StateSequence(tuple(
        SignedState(rng.choice(A5_SHORT), rng.random() < 0.5) for _ in range(rng.randint(0, max_len))
    ))


def _revbin(n: int, k: int) -> Tuple[str, ...]:
    return tuple(str((n >> i) & 1) for i in range(k))


# ============================================================================
# CRITÈRES
# ============================================================================

def c01_adding_machine(rng: random.Random) -> Outcome:
    automaton = adding_machine()
    q = StateSequence.of("q")
    checks = 0
    for k in range(11):
        for n in range(2 ** k):
            if act_word(automaton, q, _revbin(n, k)) != _revbin((n + 1) % 2 ** k, k):
                return False, f"k={k}, n={n} : incrément faux", checks
            checks += 1
    return True, "q incrémente revbin_k(n) pour tout k ≤ 10", checks


def c02_a5_algebra(rng: random.Random) -> Outcome:
    word = C.commutator(
        C.conjugate(StateSequence.of("sigma"), StateSequence.of("beta")),
        C.conjugate(StateSequence.of("sigma"), StateSequence.of("alpha")),
    )
    perms = {"sigma": G.SIGMA, "alpha": G.ALPHA, "beta": G.BETA}
    if G.evaluate_permutation(word, perms) != G.SIGMA:
        return False, "[σ^β, σ^α] ≠ σ", 1
    a5 = G.a5_backend()
    spec = CommutatorSpec((StateSequence.of("sigma"),) * 2, a5.alpha, a5.beta)
    decision = WordProblemSolver(a5.automaton).is_identity(C.balanced(spec))
    if decision.verdict is not Verdict.NOT_IDENTITY:
        return False, f"décideur : {decision.verdict.value} sur B[σ,σ]", 2
    return True, f"[σ^β, σ^α] = σ ; B[σ,σ] bouge {''.join(decision.candidate)}", 2


def c03_length_formula(rng: random.Random) -> Outcome:
    previous = None
    for size in (1, 2, 4, 8, 16):
        counted = sum(1 for _ in C.balanced_tokens(size))
        closed = C.entry_letter_length(size)
        if counted != closed or 3 * closed != 11 * size * size - 8:
            return False, f"D={size} : {counted} lettres, formule {closed}", size
        if previous is not None and closed != 8 + 4 * previous:
            return False, f"D={size} : récurrence 8 + 4ℓ(D/2) violée", size
        previous = closed
    return True, "ℓ(D) = (11D² − 8)/3 pour D ∈ {1,2,4,8,16}", 5


def c04_collapse_and_conjugation(rng: random.Random, trials: int = 200) -> Outcome:
    automaton = G.fixture("a5")
    solver = WordProblemSolver(automaton)
    trivial = StateSequence.from_literal("alpha,alpha")
    for t in range(trials):
        size = rng.choice((2, 4))
        entries = [_random_a5_sequence(rng) for _ in range(size)]
        alpha, beta = rng.choice(A5_LEVEL_MAPS), rng.choice(A5_LEVEL_MAPS)
        collapsed = list(entries)
        collapsed[rng.randrange(size)] = trivial
        decision = solver.is_identity(C.balanced(CommutatorSpec(tuple(collapsed), alpha, beta)), prune=True)
        if not decision.is_identity:
            return False, f"essai {t} : entrée triviale sans effondrement ({decision.verdict.value})", 2 * t
        spec = CommutatorSpec(tuple(entries), alpha, beta)
        if not equal_in_group(automaton, C.balanced(spec), C.balanced(C.hoisted_spec(spec))).is_identity:
            return False, f"essai {t} : conjugaison remontée aux feuilles différente", 2 * t + 1
    return True, f"{trials} essais × 2 faits sur l'automate A5, 0 échec", 2 * trials


def c05_streaming(rng: random.Random, trials: int = 100) -> Outcome:
    for t in range(trials):
        size = rng.choice((1, 2, 4, 8))
        spec = CommutatorSpec(
            tuple(_random_a5_sequence(rng) for _ in range(size)),
            rng.choice(A5_LEVEL_MAPS), rng.choice(A5_LEVEL_MAPS),
        )
        streamed: List[SignedState] = []
        C.balanced_stream(spec, streamed.append)
        if tuple(streamed) != C.balanced(spec).entries:
            return False, f"commutateur {t} (D={size}) : flux différent", t
    return True, f"{trials} commutateurs aléatoires, égalité lettre à lettre", trials


def c06_free_certificates(rng: random.Random) -> Outcome:
    for depth in range(11):
        word = G.aleshin_b3(2 ** depth)
        first = SignedState("b", True) if depth % 2 == 0 else SignedState("c", True)
        if not word or free_reduce(word) != word:
            return False, f"d={depth} : B₃ non réduit", depth
        if word[0] != first or word[-1] != SignedState("a"):
            return False, f"d={depth} : motif de parité faux", depth
    return True, "B₃(2^d) réduit, non vide, extrémités attendues pour d ≤ 10", 11


def c07_uniform(rng: random.Random, tuples: int = 50) -> Outcome:
    nonempty = 0
    for t in range(tuples):
        dfas = [U.random_dfa(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        instance = U.build_uniform(dfas)
        decision = WordProblemSolver(instance.automaton).is_identity(instance.sequence)
        empty = U.dfa_intersection_empty(dfas)
        if decision.verdict is Verdict.LIMIT_EXCEEDED or decision.is_identity != empty:
            return False, f"tuple {t} : verdict {decision.verdict.value}, intersection vide={empty}", t
        if not empty:
            nonempty += 1
            candidate = U.shortest_common_word(dfas) + ("$", U.GAMMA[0])
            if act_word(instance.automaton, instance.sequence, candidate) == candidate:
                return False, f"tuple {t} : w$a₁ non déplacé", t
    return True, f"{tuples} tuples, 100 % d'accord ({nonempty} intersections non vides)", tuples


def c08_encoding(rng: random.Random) -> Outcome:
    checks = 0
    for gamma in (("p", "q"), ("p", "q", "a", "b"), tuple("abcdefgh")):
        code = CodeTable(gamma)
        prefixes = set(code.proper_prefixes())
        for n in range(9):
            for word in itertools.product("01", repeat=n):
                symbols, rest = code.decode(word)
                if rest not in prefixes or code.encode_word(symbols) + rest != word:
                    return False, f"Γ={len(gamma)} : {''.join(word)} mal factorisé", checks
                checks += 1
    code = CodeTable(("p", "q", "a", "b"))
    prefixes = set(code.proper_prefixes())
    for n in range(7):
        for word in itertools.product("012", repeat=n):
            cut = word.index("2") if "2" in word else n
            symbols, rest = code.decode(word[:cut])
            if rest not in prefixes or code.encode_word(symbols) + rest != word[:cut]:
                return False, f"alphabet complété : {''.join(word)} mal factorisé", checks
            checks += 1
    return True, "mots binaires ≤ 8 (Γ ∈ {2,4,8}) et mots sur {0,1,2} ≤ 6 factorisés", checks


def _structured_words(gamma: Tuple[str, ...], space: int, zeros: int, configurations: int):
    for confs in itertools.product(itertools.product(gamma, repeat=space), repeat=configurations):
        symbols: List[str] = []
        for t, conf in enumerate(confs):
            if t:
                symbols.append("#")
            for g in conf:
                symbols.extend(["0"] * zeros)
                symbols.append(g)
        symbols.append("$")
        yield symbols


def c09_tm_mode(rng: random.Random) -> Outcome:
    rule = normalize(storage.load_tm("tm_empty_input"))
    space = rule.space_bound(0)
    tmode = TR.build_tm_mode(rule)
    automaton = tmode.automaton
    result = run(rule, (), max_steps=100, space=space)
    u = TR.witness_symbols(result.computation, space)
    for seq in TR.tm_mode_sequences(rule, (), space):
        out, end = cross(automaton, seq, u)
        if tuple(out) != tuple(u) or not TR.in_id_r_id(automaton, end):
            return False, f"calcul acceptant : {seq.to_literal()} hors de id* r id*", 1
    seqs = TR.tm_mode_sequences(rule, ("x",), space)
    checks = 1
    for zeros in (1, 2):
        for configurations in (1, 2):
            for symbols in _structured_words(rule.gamma, space, zeros, configurations):
                if not any(TR.in_identity_star(automaton, residual(automaton, seq, symbols)) for seq in seqs):
                    return False, f"entrée rejetée : {' '.join(symbols)} sans résidu trivial", checks
                checks += 1
    return True, f"s={space} : témoin dans id* r id*, {checks - 1} mots structurés rejetés", checks


def c10_hard_instance(rng: random.Random) -> Outcome:
    rule = normalize(storage.load_tm("tm_empty_input"))
    a5 = G.a5_backend()
    accepting = TR.assemble(rule, a5, ())
    result = run(rule, (), max_steps=100)
    candidate = TR.witness_word(rule, (), result, code_letters=a5.code_letters) + a5.mover
    if act_word(accepting.automaton, accepting.sequence, candidate) == candidate:
        return False, "entrée acceptée : témoin u$v non déplacé", 1
    rejecting = TR.assemble(rule, a5, ("x",))
    bound = TR.one_configuration_bound(rule.gamma, rejecting.provenance["space"], a5.code_letters)
    # hors des lettres de code tout le produit part vers id
    found = WordProblemSolver(rejecting.automaton).bounded_triviality(
        rejecting.sequence, bound, letters=a5.code_letters)
    if not found.fixed_all:
        return False, f"entrée rejetée : {''.join(found.moved)} déplacé", 2
    return True, (f"témoin |u$v|={len(candidate)} déplacé ; rejet : tous les mots ≤ {bound} fixés "
                  f"({found.explored} nœuds, borné)"), 2


def c11_sizes(rng: random.Random) -> Outcome:
    rule = normalize(storage.load_tm("tm_empty_input"))
    gamma = len(rule.gamma)
    tm_mode = len(TR.build_tm_mode(rule).automaton.states)
    binary = len(TR.encode_binary(rule).states)
    full = TR.assemble(rule, G.a5_backend(), (), full_fidelity=True)
    copies = len(full.provenance["copies"])
    expected = (3 * gamma ** 2 + gamma + 18, TR.encoded_count(tm_mode, gamma), TR.full_fidelity_count(copies, gamma))
    got = (tm_mode, binary, len(full.automaton.states))
    if got != expected or expected[1] != (tm_mode - 2) * (gamma + 3) + 2:
        return False, f"tailles {got}, attendues {expected}", 3
    return True, f"Γ={gamma} : |T′|={tm_mode}, |T₂|={binary}, |T|={got[2]}", 3


def _random_aleshin_grammar(rng: random.Random) -> SLP:
    def letters(pool, lo, hi):
        return tuple(SignedState(rng.choice(pool), rng.random() < 0.5) for _ in range(rng.randint(lo, hi)))

    plain = ("a", "b", "c")
    return SLP({
        "X": letters(plain, 1, 3),
        "Y": letters(plain + ("X",), 1, 4),
        "S": letters(plain + ("X", "Y"), 1, 4),
    }, "S")


def c12_slp(rng: random.Random, corpus: int = 200) -> Outcome:
    p, gamma = StateSequence.from_literal("a,b^-1"), StateSequence.of("c")
    alpha = LevelMap.constant(StateSequence.of("b"))
    beta = LevelMap(lambda d: StateSequence.of("c" if d % 2 else "a"))
    checks = 0
    for size in (1, 2, 4, 8, 16):
        if S.expand(S.slp_twisted(p, size, gamma, alpha, beta)) != C.twisted(p, size, gamma, alpha, beta):
            return False, f"D={size} : grammaire tordue ≠ récursion directe", checks
        checks += 1
    aleshin = G.fixture("aleshin")
    for t in range(corpus):
        slp = _random_aleshin_grammar(rng)
        u = tuple(rng.choice("01") for _ in range(rng.randint(0, 6)))
        out, res = S.act_streaming(aleshin, slp, u)
        if (out, S.expand(res)) != cross(aleshin, S.expand(slp), u):
            return False, f"grammaire {t} : action en flux ≠ action développée", checks
        checks += 1
    a5 = G.fixture("a5")
    p5, gamma5 = StateSequence.of("sigma", "beta"), StateSequence.of("alpha", "sigma")
    alpha5, beta5 = LevelMap.constant(StateSequence.of("beta")), LevelMap.constant(StateSequence.of("sigma"))
    for size in (2, 4):
        direct = C.balanced(CommutatorSpec(C.conjugated_entries(p5, size, gamma5), alpha5, beta5))
        if not equal_in_group(a5, C.twisted(p5, size, gamma5, alpha5, beta5), direct).is_identity:
            return False, f"D={size} : commutateur tordu ≠ commutateur des conjugués", checks
        checks += 1
    return True, f"D ≤ 16 exact, {corpus} grammaires en flux, égalité de groupe D ∈ {{2,4}}", checks


def c13_compressed(rng: random.Random) -> Outcome:
    rule = normalize(storage.load_tm("tm_empty_input"))
    checks = 0
    for k in (0, 1, 2):
        instance = CR.build_compressed(rule, (), k=k)
        if S.expand(instance.slp) != CR.direct_target(rule, (), k):
            return False, f"k={k} : grammaire ≠ mot construit directement", checks
        checks += 1
    accepting = CR.verify_desk_scale(CR.build_compressed(rule, (), k=0), rule, accepting=True)
    rejecting = CR.verify_desk_scale(CR.build_compressed(rule, ("x",), k=0), rule, accepting=False)
    checks += 2
    if not (accepting.consistent and rejecting.consistent):
        return False, f"acceptation cohérente={accepting.consistent}, rejet cohérent={rejecting.consistent}", checks
    mover = normalize(storage.load_tm("tm_left_mover"))
    true_mode = CR.build_compressed(mover, ("x",), e=1)
    if true_mode.provenance['expanded_length'] != S.expanded_length(true_mode.slp):
        return False, "mode réel : longueur annoncée ≠ longueur calculée", checks + 1
    return True, (f"k ≤ 2 exact ; rejet borné à {rejecting.bound} ; mode réel : "
                  f"{S.variable_count(true_mode.slp)} variables → {true_mode.provenance['expanded_length']} lettres"), checks + 1


# (numéro, titre, limite en secondes, fonction)
CRITERIA: List[Tuple[int, str, Optional[float], Callable[[random.Random], Outcome]]] = [
    (1, "Machine à additionner", 1.0, c01_adding_machine),
    (2, "Algèbre A5", 1.0, c02_a5_algebra),
    (3, "Longueur des commutateurs", None, c03_length_formula),
    (4, "Effondrement et conjugaison", 30.0, c04_collapse_and_conjugation),
    (5, "Émetteur en flux", 5.0, c05_streaming),
    (6, "Certificats du groupe libre", 5.0, c06_free_certificates),
    (7, "Réduction uniforme", 300.0, c07_uniform),
    (8, "Code préfixe", 60.0, c08_encoding),
    (9, "Mode TM à petite échelle", 300.0, c09_tm_mode),
    (10, "Instance difficile à petite échelle", 600.0, c10_hard_instance),
    (11, "Formules de taille", None, c11_sizes),
    (12, "Grammaires (SLP)", 120.0, c12_slp),
    (13, "Réduction compressée", 600.0, c13_compressed),
]


def evaluate(number: int, title: str, limit_s: Optional[float], fn: Callable, seed: int) -> M.CriterionResult:
    cr = M.CriterionResult(number=number, title=title, limit_s=limit_s)
    t0 = time.perf_counter()
    try:
        cr.passed, cr.detail, cr.checks = fn(random.Random(seed + number))
    except Exception as e:  # noqa: BLE001
        logger.exception("critère %d", number)
        cr.error = f"{type(e).__name__}: {e}"
    cr.seconds = time.perf_counter() - t0
    return cr


def _fmt_table(summary: M.Summary) -> str:
    lines = ["| # | Critère | Statut | Vérifications | Durée | Limite | Détail |",
             "|" + "---|" * 7]
    for r in summary.results:
        limit = f"{r.limit_s:.0f}s" if r.limit_s is not None else "—"
        detail = r.error or r.detail
        lines.append(f"| {r.number} | {r.title} | {r.status} | {r.checks} | {r.seconds:.2f}s | {limit} | {detail} |")
    return "\n".join(lines)


def _parse_only(text: Optional[str]) -> Optional[set]:
    if not text:
        return None
    return {int(x) for x in text.split(",") if x.strip()}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", default=None, help="numéros de critères séparés par des virgules")
    ap.add_argument("--seed", type=int, default=20240611, help="graine des corpus aléatoires")
    ap.add_argument("--verbose", action="store_true", help="journal INFO des services")
    args = ap.parse_args()

    load_dotenv()
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )

    only = _parse_only(args.only)
    results = []
    for number, title, limit_s, fn in CRITERIA:
        if only is not None and number not in only:
            continue
        print(f"▶️  Critère {number} : {title}…")
        cr = evaluate(number, title, limit_s, fn, args.seed)
        print(f"   {cr.status} en {cr.seconds:.2f}s — {cr.error or cr.detail}")
        results.append(cr)

    if not results:
        sys.exit("Aucun critère sélectionné.")

    summary = M.summarize(results)
    report = (
        "# Critères d'acceptation — groupes d'automates\n\n"
        f"{summary.passed}/{summary.total} critères réussis, {summary.slow} hors limite de temps, "
        f"{summary.errors} en erreur ; durée totale {summary.seconds:.1f}s (graine {args.seed}).\n\n"
        + _fmt_table(summary) + "\n\n"
        "_Critères 10 et 13 : côté rejet, vérification bornée (tous les mots jusqu'à B sont fixés), "
        "saine mais pas une preuve d'identité. Durées = horloge murale._\n"
    )
    print("\n" + report)

    os.makedirs(RESULTS_DIR, exist_ok=True)
    with open(os.path.join(RESULTS_DIR, "results.md"), "w", encoding="utf-8") as f:
        f.write(report)
    serializable: Dict[str, object] = {
        "seed": args.seed,
        "passed": summary.passed,
        "total": summary.total,
        "seconds": round(summary.seconds, 3),
        "criteria": [r.to_dict() for r in summary.results],
    }
    with open(os.path.join(RESULTS_DIR, "results.json"), "w", encoding="utf-8") as f:
        json.dump(serializable, f, ensure_ascii=False, indent=2)
    print(f"\n📄 Rapport écrit dans {RESULTS_DIR}/results.md et results.json")
    if not summary.all_passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
