"""
Aplatissement d'un problème d'unification.

Chaque sous-terme non variable reçoit une variable fraîche ; les sommes
imbriquées donnent directement une seule équation n-aire.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from src.problem.equations import (
    FlatEquation,
    FreeEq,
    FreshVarSource,
    HEq,
    SumEq,
    VarVar,
    equations_variables,
)
from src.terms.term import Term, canonicalize

logger = logging.getLogger(__name__)

# Noms des règles d'aplatissement comptées dans les statistiques
FBS = "FBS"
FL = "FL"
FU = "FU"
FA = "FA"
ORIENT = "Orient"


@dataclass(frozen=True)
class FlattenResult:
    equations: tuple[FlatEquation, ...]
    depths: dict[str, int]
    rule_counts: Counter


class _Flattener:
    def __init__(self, fresh: FreshVarSource):
        self.fresh = fresh
        self.out: list[FlatEquation] = []
        self.counts: Counter = Counter()

    def name_of(self, t: Term, rule: str) -> str:
        if t.is_var:
            return t.name
        self.counts[rule] += 1
        v = self.fresh.fresh()
        self.define(v, t)
        return v

    def define(self, x: str, t: Term) -> None:
        """Émet les équations plates équivalentes à x ≐ t."""
        if t.is_var:
            self.out.append(VarVar(x, t.name))
        elif t.is_h:
            self.out.append(HEq(x, self.name_of(t.args[0], FU)))
        elif t.is_sum:
            self.out.append(SumEq(x, tuple(self.name_of(a, FL) for a in t.args)))
        else:
            self.out.append(FreeEq(x, t.head, tuple(self.name_of(a, FA) for a in t.args)))

    def equation(self, s: Term, t: Term) -> None:
        if s.is_var:
            self.define(s.name, t)
        elif t.is_var:
            self.counts[ORIENT] += 1
            self.define(t.name, s)
        else:
            self.counts[FBS] += 1
            v = self.fresh.fresh()
            self.define(v, s)
            self.define(v, t)


def flatten(equations: Sequence[tuple[Term, Term]], fresh: FreshVarSource) -> FlattenResult:
    """
    Args:
        equations: paires de termes (canonisées ici si besoin)
        fresh: source de noms frais, avancée en place

    Returns:
        FlattenResult: équations plates (doublons retirés), Δ initial à 0
        et nombre d'applications de chaque règle
    """
    flattener = _Flattener(fresh)
    for s, t in equations:
        flattener.equation(canonicalize(s), canonicalize(t))

    flat = tuple(dict.fromkeys(flattener.out))
    depths = {v: 0 for v in equations_variables(flat)}
    logger.debug(
        "Aplatissement: %d équation(s) -> %d équation(s) plates, règles %s",
        len(equations), len(flat), dict(flattener.counts)
    )
    return FlattenResult(flat, depths, flattener.counts)
