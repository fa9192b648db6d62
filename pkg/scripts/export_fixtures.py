#!/usr/bin/env python3
"""
Génère les fixtures de data/ : deux machines de Turing et deux listes d'automates
finis utilisées par les tests, le harnais d'acceptation et la ligne de commande.

  - tm_empty_input.json  : accepte exactement le mot vide (|Γ| = 4, s(n) = max(3, n+1))
  - tm_left_mover.json   : marque la première case, va à droite puis revient à
                           gauche ; accepte « x » (|Γ| = 8 après normalisation)
  - dfas_empty.json      : a1* et « contient a2 », intersection vide
  - dfas_nonempty.json   : « contient a1 » et « contient a2 », mot commun a1 a2

Usage :
    python scripts/export_fixtures.py                  # réécrit data/
    python scripts/export_fixtures.py --dir /tmp/fx    # ailleurs
    python scripts/export_fixtures.py --automata       # exporte aussi les automates
"""
import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import storage
from models import SpaceBound, TuringMachine
from services.group_backends import fixture_registry
from services.uniform_reduction import contains_acceptor, star_acceptor

logging.basicConfig(level=logging.INFO, format="%(message)s")
log = logging.getLogger("export_fixtures")

BLANK = "_"


def empty_input_machine() -> TuringMachine:
    return TuringMachine(
        name="empty-input",
        states=("p0", "acc"),
        input_alphabet=("x",),
        tape_alphabet=(BLANK, "x"),
        blank=BLANK,
        initial="p0",
        accepting=frozenset({"acc"}),
        rules={("p0", BLANK): ("acc", BLANK, "N")},
        space_bound=SpaceBound("polynomial", (3,)),
    )


def left_mover_machine() -> TuringMachine:
    return TuringMachine(
        name="left-mover",
        states=("p0", "seen", "back", "acc"),
        input_alphabet=("x",),
        tape_alphabet=(BLANK, "x", "y"),
        blank=BLANK,
        initial="p0",
        accepting=frozenset({"acc"}),
        rules={
            ("p0", "x"): ("seen", "y", "R"),
            ("seen", "x"): ("seen", "x", "R"),
            ("seen", BLANK): ("back", BLANK, "L"),
            ("back", "x"): ("back", "x", "L"),
            ("back", "y"): ("acc", "y", "N"),
        },
        space_bound=SpaceBound("polynomial", (2, 1)),
    )


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--dir", default=None, help="dossier cible (défaut : data/)")
    parser.add_argument("--automata", action="store_true", help="exporte aussi les automates du registre")
    args = parser.parse_args()

    target = Path(args.dir) if args.dir else storage.data_dir()
    storage.save_tm(target / "tm_empty_input.json", empty_input_machine())
    storage.save_tm(target / "tm_left_mover.json", left_mover_machine())
    storage.save_dfas(target / "dfas_empty.json", [star_acceptor("a1"), contains_acceptor("a2")])
    storage.save_dfas(target / "dfas_nonempty.json", [contains_acceptor("a1"), contains_acceptor("a2")])
    log.info("✓ 4 fixtures écrites dans %s", target)

    if args.automata:
        for name, build in fixture_registry().items():
            storage.save_automaton(target / "automata" / f"{name}.json", build())
            log.info("  ✓ %s", name)


if __name__ == "__main__":
    main()
