"""
Équations aplaties et source de variables fraîches.

Quatre formes seulement, toutes avec une variable à gauche :
x ≐ y, x ≐ h(y), x ≐ y1 + … + yn, x ≐ f(y1, …, yn).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Mapping

from src.config.settings import settings
from src.core.exceptions import MalformedTermError
from src.terms.term import H_SYMBOL, PLUS_NAME, PLUS_SYMBOL, Symbol, SymbolKind, Term, h, plus, var


class FlatEquation(ABC):
    lhs: str

    @property
    @abstractmethod
    def rhs_variables(self) -> tuple[str, ...]:
        ...

    @property
    @abstractmethod
    def head(self) -> str:
        """Symbole de tête du membre droit ("=" pour x ≐ y)."""

    @property
    def head_symbol(self) -> Symbol | None:
        """Symbole complet (nom, sorte, arité) ; None pour x ≐ y."""
        return None

    @abstractmethod
    def rhs_term(self) -> Term:
        ...

    @abstractmethod
    def rename(self, mapping: Mapping[str, str]) -> FlatEquation:
        ...

    @property
    def variables(self) -> frozenset[str]:
        return frozenset((self.lhs, *self.rhs_variables))

    def as_pair(self) -> tuple[Term, Term]:
        return var(self.lhs), self.rhs_term()

    def __str__(self) -> str:
        return f"{self.lhs} ≐ {self.rhs_term()}"


def _r(mapping: Mapping[str, str], name: str) -> str:
    return mapping.get(name, name)


@dataclass(frozen=True)
class VarVar(FlatEquation):
    lhs: str
    rhs: str

    @property
    def rhs_variables(self) -> tuple[str, ...]:
        return (self.rhs,)

    @property
    def head(self) -> str:
        return "="

    def rhs_term(self) -> Term:
        return var(self.rhs)

    def rename(self, mapping: Mapping[str, str]) -> VarVar:
        return VarVar(_r(mapping, self.lhs), _r(mapping, self.rhs))


@dataclass(frozen=True)
class HEq(FlatEquation):
    lhs: str
    arg: str

    @property
    def rhs_variables(self) -> tuple[str, ...]:
        return (self.arg,)

    @property
    def head(self) -> str:
        return "h"

    @property
    def head_symbol(self) -> Symbol:
        return H_SYMBOL

    def rhs_term(self) -> Term:
        return h(var(self.arg))

    def rename(self, mapping: Mapping[str, str]) -> HEq:
        return HEq(_r(mapping, self.lhs), _r(mapping, self.arg))


@dataclass(frozen=True)
class SumEq(FlatEquation):
    """Le membre droit est un multiensemble, stocké trié."""

    lhs: str
    args: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise MalformedTermError(PLUS_NAME, ">= 2", len(self.args))
        object.__setattr__(self, "args", tuple(sorted(self.args)))

    @property
    def rhs_variables(self) -> tuple[str, ...]:
        return self.args

    @property
    def head(self) -> str:
        return PLUS_NAME

    @property
    def head_symbol(self) -> Symbol:
        return PLUS_SYMBOL

    def rhs_term(self) -> Term:
        return plus(*(var(a) for a in self.args))

    def rename(self, mapping: Mapping[str, str]) -> SumEq:
        return SumEq(_r(mapping, self.lhs), tuple(_r(mapping, a) for a in self.args))


@dataclass(frozen=True)
class FreeEq(FlatEquation):
    """Application libre ; une constante est un symbole d'arité 0."""

    lhs: str
    symbol: Symbol
    args: tuple[str, ...] = ()

    @property
    def rhs_variables(self) -> tuple[str, ...]:
        return self.args

    @property
    def head(self) -> str:
        return self.symbol.name

    @property
    def head_symbol(self) -> Symbol:
        return self.symbol

    def rhs_term(self) -> Term:
        return Term(self.symbol, tuple(var(a) for a in self.args))

    def rename(self, mapping: Mapping[str, str]) -> FreeEq:
        return FreeEq(_r(mapping, self.lhs), self.symbol, tuple(_r(mapping, a) for a in self.args))


def equation_from_binding(name: str, t: Term) -> FlatEquation:
    """x ≐ t pour un terme déjà plat (variable, h(variable), somme ou application de variables)."""
    if t.is_var:
        return VarVar(name, t.name)
    if any(not a.is_var for a in t.args):
        raise MalformedTermError(t.head.name, "variables", len(t.args))
    if t.is_h:
        return HEq(name, t.args[0].name)
    if t.is_sum:
        return SumEq(name, tuple(a.name for a in t.args))
    if t.head.kind in (SymbolKind.CONSTANT, SymbolKind.FREE):
        return FreeEq(name, t.head, tuple(a.name for a in t.args))
    raise MalformedTermError(t.head.name, "terme plat", len(t.args))


def equations_variables(gamma: tuple[FlatEquation, ...] | list[FlatEquation]) -> list[str]:
    """Variables de Γ dans l'ordre de première apparition."""
    seen: dict[str, None] = {}
    for eq in gamma:
        seen.setdefault(eq.lhs, None)
        for v in eq.rhs_variables:
            seen.setdefault(v, None)
    return list(seen)


# ============================================
# VARIABLES FRAÎCHES
# ============================================

@dataclass
class FreshVarSource:
    """
    Compteur local à une branche. `fork` dérive un préfixe propre à chaque
    branche fille, ce qui garde les noms uniques sans coordination.
    """

    prefix: str = field(default_factory=lambda: settings.FRESH_PREFIX)
    counter: int = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"{self.prefix}{self.counter}"

    def copy(self) -> FreshVarSource:
        return FreshVarSource(self.prefix, self.counter)

    def fork(self, branch: int) -> FreshVarSource:
        return FreshVarSource(f"{self.prefix}{self.counter}_{branch}_", 0)

    @property
    def root_prefix(self) -> str:
        return settings.FRESH_PREFIX

    def is_fresh(self, name: str) -> bool:
        return name.startswith(self.root_prefix)
