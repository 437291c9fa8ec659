"""
Algèbre de termes en forme canonique AC.

Les sommes sont stockées n-aires (sémantique de multiensemble), jamais
imbriquées, avec des enfants triés selon un ordre total fixe : sorte du
symbole de tête, puis nom, puis arguments récursivement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
from typing import Iterable, Iterator

from src.core.exceptions import MalformedTermError, SignatureError


class SymbolKind(StrEnum):
    VARIABLE = "variable"
    CONSTANT = "constant"
    FREE = "free"
    H = "h"
    PLUS = "plus"


_KIND_RANK = {
    SymbolKind.VARIABLE: 0,
    SymbolKind.CONSTANT: 1,
    SymbolKind.FREE: 2,
    SymbolKind.H: 3,
    SymbolKind.PLUS: 4,
}

H_NAME = "h"
PLUS_NAME = "+"


@dataclass(frozen=True)
class Symbol:
    """Symbole de la signature ; `arity` n'a de sens que pour les symboles libres."""

    name: str
    kind: SymbolKind
    arity: int = 0

    def __str__(self) -> str:
        return self.name


H_SYMBOL = Symbol(H_NAME, SymbolKind.H, 1)
PLUS_SYMBOL = Symbol(PLUS_NAME, SymbolKind.PLUS, 0)


@dataclass(frozen=True)
class Term:
    """Terme immuable : symbole de tête et liste ordonnée d'arguments."""

    head: Symbol
    args: tuple[Term, ...] = ()

    @cached_property
    def sort_key(self) -> tuple:
        return (_KIND_RANK[self.head.kind], self.head.name, tuple(a.sort_key for a in self.args))

    @cached_property
    def _hash(self) -> int:
        return hash((self.head, self.args))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def variables(self) -> frozenset[str]:
        if self.head.kind is SymbolKind.VARIABLE:
            return frozenset((self.head.name,))
        found: set[str] = set()
        for arg in self.args:
            found |= arg.variables
        return frozenset(found)

    @property
    def name(self) -> str:
        return self.head.name

    @property
    def is_var(self) -> bool:
        return self.head.kind is SymbolKind.VARIABLE

    @property
    def is_sum(self) -> bool:
        return self.head.kind is SymbolKind.PLUS

    @property
    def is_h(self) -> bool:
        return self.head.kind is SymbolKind.H

    @property
    def is_ground(self) -> bool:
        return not self.variables

    def subterms(self) -> Iterator[Term]:
        """Parcours préfixe de tous les sous-termes."""
        yield self
        for arg in self.args:
            yield from arg.subterms()

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return f"Term({format_term(self)})"


# ============================================
# CONSTRUCTEURS
# ============================================

def var(name: str) -> Term:
    return Term(Symbol(name, SymbolKind.VARIABLE))


def const(name: str) -> Term:
    return Term(Symbol(name, SymbolKind.CONSTANT))


def app(name: str, *args: Term) -> Term:
    """Application d'un symbole libre ; l'arité est celle de l'appel."""
    if not args:
        raise MalformedTermError(name, ">= 1", 0)
    return Term(Symbol(name, SymbolKind.FREE, len(args)), tuple(args))


def h(arg: Term) -> Term:
    return Term(H_SYMBOL, (arg,))


def plus(*terms: Term) -> Term:
    """
    Somme canonique : aplatit les sommes enfants et trie.

    Une somme d'un seul terme est ce terme lui-même.
    """
    if not terms:
        raise MalformedTermError(PLUS_NAME, ">= 1", 0)
    children: list[Term] = []
    for t in terms:
        if t.is_sum:
            children.extend(t.args)
        else:
            children.append(t)
    if len(children) == 1:
        return children[0]
    children.sort(key=lambda t: t.sort_key)
    return Term(PLUS_SYMBOL, tuple(children))


def raw_plus(left: Term, right: Term) -> Term:
    """Nœud binaire non canonique, tel que produit par un analyseur naïf."""
    return Term(PLUS_SYMBOL, (left, right))


def summands(t: Term) -> tuple[Term, ...]:
    """Arguments d'une somme, ou le terme seul."""
    return t.args if t.is_sum else (t,)


# ============================================
# CANONISATION
# ============================================

def _check_arity(t: Term) -> None:
    kind = t.head.kind
    n = len(t.args)
    if kind in (SymbolKind.VARIABLE, SymbolKind.CONSTANT) and n != 0:
        raise MalformedTermError(t.head.name, "0", n)
    if kind is SymbolKind.FREE and (n != t.head.arity or n == 0):
        raise MalformedTermError(t.head.name, str(t.head.arity), n)
    if kind is SymbolKind.H and n != 1:
        raise MalformedTermError(H_NAME, "1", n)
    if kind is SymbolKind.PLUS and n < 2:
        raise MalformedTermError(PLUS_NAME, ">= 2", n)


def canonicalize(t: Term) -> Term:
    """Forme canonique AC unique d'un arbre brut ; idempotente."""
    _check_arity(t)
    if not t.args:
        return t
    args = tuple(canonicalize(a) for a in t.args)
    if t.is_sum:
        return plus(*args)
    return Term(t.head, args)


# ============================================
# SIGNATURE
# ============================================

class Signature:
    """Associe chaque nom à une seule sorte et, pour les symboles libres, une seule arité."""

    def __init__(self) -> None:
        self._symbols: dict[str, Symbol] = {}

    def declare(self, symbol: Symbol) -> Symbol:
        if symbol.kind in (SymbolKind.H, SymbolKind.PLUS):
            return symbol
        known = self._symbols.get(symbol.name)
        if known is None:
            self._symbols[symbol.name] = symbol
            return symbol
        if known != symbol:
            raise SignatureError(
                symbol.name,
                f"{known.kind}/{known.arity}",
                f"{symbol.kind}/{symbol.arity}"
            )
        return known

    def add_term(self, t: Term) -> None:
        for sub in t.subterms():
            self.declare(sub.head)

    @classmethod
    def of(cls, terms: Iterable[Term]) -> Signature:
        signature = cls()
        for t in terms:
            signature.add_term(t)
        return signature

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def __getitem__(self, name: str) -> Symbol:
        return self._symbols[name]

    @property
    def free_symbols(self) -> dict[str, int]:
        return {
            s.name: s.arity
            for s in self._symbols.values()
            if s.kind is SymbolKind.FREE
        }


# ============================================
# AFFICHAGE
# ============================================

def format_term(t: Term) -> str:
    """`+` a la priorité la plus basse ; aucune autre construction n'a besoin de parenthèses."""
    kind = t.head.kind
    if kind in (SymbolKind.VARIABLE, SymbolKind.CONSTANT):
        return t.head.name
    if kind is SymbolKind.PLUS:
        return " + ".join(
            f"({format_term(a)})" if a.is_sum else format_term(a) for a in t.args
        )
    inner = ", ".join(format_term(a) for a in t.args)
    return f"{t.head.name}({inner})"


def term_variables(terms: Iterable[Term]) -> list[str]:
    """Variables dans l'ordre de première apparition (parcours préfixe)."""
    seen: dict[str, None] = {}
    for t in terms:
        for sub in t.subterms():
            if sub.is_var:
                seen.setdefault(sub.name, None)
    return list(seen)
