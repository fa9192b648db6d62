"""Résultats du harness d'acceptation, purs et sans I/O.

Chaque critère produit un CriterionResult (verdict, durée mesurée, limite de
temps visée, détail lisible). L'agrégat compte les réussites et les dépassements
de limite : un critère peut être juste mais trop lent, on le signale à part.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool = False
    seconds: float = 0.0
    limit_s: Optional[float] = None     # None = pas de limite annoncée
    detail: str = ""
    checks: int = 0                     # nombre de vérifications élémentaires
    error: Optional[str] = None

    @property
    def within_limit(self) -> bool:
        return self.limit_s is None or self.seconds <= self.limit_s

    @property
    def status(self) -> str:
        if self.error is not None:
            return "erreur"
        if not self.passed:
            return "échec"
        return "ok" if self.within_limit else "ok (lent)"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "limit_s": self.limit_s,
            "within_limit": self.within_limit,
            "checks": self.checks,
            "detail": self.detail,
            "error": self.error,
        }


@dataclass
class Summary:
    results: List[CriterionResult] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def slow(self) -> int:
        return sum(1 for r in self.results if r.passed and not r.within_limit)

    @property
    def errors(self) -> int:
        return sum(1 for r in self.results if r.error is not None)

    @property
    def seconds(self) -> float:
        return sum(r.seconds for r in self.results)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total


def summarize(results: List[CriterionResult]) -> Summary:
    return Summary(results=sorted(results, key=lambda r: r.number))
