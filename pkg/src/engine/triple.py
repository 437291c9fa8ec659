"""
État du moteur Γ || Δ || σ, résultats d'une étape et mesure de terminaison.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Literal

from src.problem.equations import FlatEquation, FreshVarSource, HEq, SumEq, VarVar, equations_variables
from src.terms.substitution import Substitution

BottomReason = Literal["occur", "clash", "bound"]


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    before: Measure
    after: Measure | None


@dataclass(frozen=True)
class Triple:
    """
    Une branche de la recherche. La source de noms frais est propre à la
    triple : toute règle qui en consomme travaille sur une copie.
    """

    gamma: tuple[FlatEquation, ...]
    delta: dict[str, int]
    sigma: Substitution = field(default_factory=Substitution)
    fresh: FreshVarSource = field(default_factory=FreshVarSource)
    ac_rounds: int = 0
    trace: tuple[TraceEntry, ...] = ()

    @property
    def solved(self) -> bool:
        return not self.gamma

    def evolve(self, **changes) -> Triple:
        if "gamma" in changes:
            changes["gamma"] = tuple(dict.fromkeys(changes["gamma"]))
        return replace(self, **changes)

    def __str__(self) -> str:
        eqs = ", ".join(str(eq) for eq in self.gamma)
        depths = ", ".join(f"({x}, {d})" for x, d in sorted(self.delta.items()))
        return f"{{{eqs}}} || {{{depths}}} || {self.sigma}"


# ============================================
# RÉSULTATS D'UNE ÉTAPE
# ============================================

@dataclass(frozen=True)
class Progress:
    rule: str
    branches: tuple[Triple, ...]


@dataclass(frozen=True)
class Stuck:
    triple: Triple
    reason: str


@dataclass(frozen=True)
class Bottom:
    reason: BottomReason
    rule: str


StepResult = Progress | Stuck | Bottom


# ============================================
# MESURE
# ============================================

def _multiset_less(left: tuple[int, ...], right: tuple[int, ...]) -> bool:
    """Extension multiensemble de l'ordre sur les entiers."""
    m, n = Counter(left), Counter(right)
    if m == n:
        return False
    for x in m:
        if m[x] > n[x] and not any(y > x and n[y] > m[y] for y in n):
            return False
    return True


@dataclass(frozen=True)
class Measure:
    n: int
    sym: int
    p: int
    m: int
    size: int
    hbar: tuple[int, ...]

    def __lt__(self, other: Measure) -> bool:
        head = (self.n, self.sym, self.p, self.m, self.size)
        other_head = (other.n, other.sym, other.p, other.m, other.size)
        if head != other_head:
            return head < other_head
        return _multiset_less(self.hbar, other.hbar)

    def __str__(self) -> str:
        return f"({self.n}, {self.sym}, {self.p}, {self.m}, {self.size}, {list(self.hbar)})"


def _symbol_count(eq: FlatEquation) -> int:
    if isinstance(eq, VarVar):
        return 0
    if isinstance(eq, SumEq):
        return len(eq.args) - 1
    return 1


def measure(t: Triple, bound: int) -> Measure:
    gamma = t.gamma
    h_heads = {eq.lhs for eq in gamma if isinstance(eq, HEq)}
    n = sum(1 for eq in gamma if isinstance(eq, SumEq) and eq.lhs in h_heads)
    sym = sum(_symbol_count(eq) for eq in gamma)

    occurrences: Counter = Counter()
    for eq in gamma:
        occurrences[eq.lhs] += 1
        occurrences.update(eq.rhs_variables)
    lhs_names = {eq.lhs for eq in gamma}
    variables = equations_variables(gamma)
    solved = {x for x in variables if x in lhs_names and occurrences[x] == 1}
    p = len(variables) - len(solved)

    # Les équations plates ont toujours une variable à gauche
    m = 0

    hbar = tuple(sorted((max(bound + 1 - t.delta.get(x, 0), 0) for x in variables), reverse=True))
    return Measure(n, sym, p, m, len(gamma), hbar)
