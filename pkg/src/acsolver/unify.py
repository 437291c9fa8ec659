"""
Unification AC élémentaire : sommes de variables seulement.

Une équation multiensemble est résolue par sa base diophantienne ; un
système d'équations `+` l'est équation par équation, en composant.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from src.acsolver.diophantine import dioph_minimal_basis
from src.config.settings import settings
from src.core.exceptions import ResourceLimitError
from src.problem.equations import FlatEquation, FreshVarSource, SumEq, equation_from_binding
from src.terms.substitution import Substitution, canonical_renaming
from src.terms.term import Term, plus, summands, var

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Deadline:
    """Échéance absolue sur l'horloge `time.perf_counter`."""

    at: float
    timeout_ms: int

    @classmethod
    def after(cls, timeout_ms: int | None, started: float | None = None) -> Deadline | None:
        if timeout_ms is None:
            return None
        origin = time.perf_counter() if started is None else started
        return cls(origin + timeout_ms / 1000, timeout_ms)

    @property
    def expired(self) -> bool:
        return time.perf_counter() > self.at

    def check(self) -> None:
        if self.expired:
            raise ResourceLimitError("timeout_ms", self.timeout_ms)


def _check(deadline: Deadline | None) -> None:
    if deadline is not None:
        deadline.check()


@dataclass(frozen=True)
class MultisetEquation:
    """Σ aᵢxᵢ ≐ Σ bⱼyⱼ ; chaque côté est une liste triée (variable, multiplicité)."""

    left: tuple[tuple[str, int], ...]
    right: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, left: Iterable[str], right: Iterable[str]) -> MultisetEquation:
        return cls(tuple(sorted(Counter(left).items())), tuple(sorted(Counter(right).items())))

    @classmethod
    def from_terms(cls, s: Term, t: Term) -> MultisetEquation:
        return cls.of((a.name for a in summands(s)), (a.name for a in summands(t)))

    def cancel(self) -> MultisetEquation:
        """Retire les variables communes (le semi-groupe libre est simplifiable)."""
        left, right = Counter(dict(self.left)), Counter(dict(self.right))
        common = left & right
        return MultisetEquation(
            tuple(sorted((left - common).items())),
            tuple(sorted((right - common).items())),
        )

    def __str__(self) -> str:
        def side(pairs: tuple[tuple[str, int], ...]) -> str:
            return " + ".join(x for x, n in pairs for _ in range(n)) or "0"
        return f"{side(self.left)} ≐ {side(self.right)}"


@dataclass(frozen=True)
class AcUnifierSet:
    unifiers: tuple[Substitution, ...]

    def __len__(self) -> int:
        return len(self.unifiers)

    def __iter__(self):
        return iter(self.unifiers)


def _expand(pairs: tuple[tuple[str, int], ...]) -> Term:
    return plus(*(var(x) for x, n in pairs for _ in range(n)))


def dedupe(
    unifiers: Iterable[Substitution],
    fresh_prefix: str | None = None,
    deadline: Deadline | None = None,
) -> tuple[Substitution, ...]:
    """Élimine les doublons à renommage des variables fraîches près (le premier reste)."""
    prefix = fresh_prefix or settings.FRESH_PREFIX
    seen: set[tuple] = set()
    kept: list[Substitution] = []
    for sigma in unifiers:
        _check(deadline)
        key = canonical_renaming(sigma, lambda v: v.startswith(prefix), prefix).sort_key()
        if key not in seen:
            seen.add(key)
            kept.append(sigma)
    return tuple(kept)


# ============================================
# UNE ÉQUATION
# ============================================

def unify_multiset_eq(
    eq: MultisetEquation,
    fresh: FreshVarSource,
    max_subsets: int | None = None,
    max_candidates: int | None = None,
    deadline: Deadline | None = None,
) -> AcUnifierSet:
    """
    Ensemble complet d'unificateurs AC de `eq`.

    Args:
        eq: équation multiensemble (une variable peut figurer des deux côtés)
        fresh: source de noms, avancée en place
        max_subsets: garde sur l'énumération des sous-ensembles de la base
        max_candidates: nombre maximal d'unificateurs produits
        deadline: échéance vérifiée pendant l'énumération

    Raises:
        ResourceLimitError: sous-ensembles, candidats ou temps épuisés
    """
    max_subsets = settings.MAX_AC_SUBSETS if max_subsets is None else max_subsets
    max_candidates = settings.MAX_AC_CANDIDATES if max_candidates is None else max_candidates
    reduced = eq.cancel()

    if not reduced.left and not reduced.right:
        return AcUnifierSet((Substitution(),))
    if not reduced.left or not reduced.right:
        return AcUnifierSet(())
    if len(reduced.left) == 1 and reduced.left[0][1] == 1:
        return AcUnifierSet((Substitution({reduced.left[0][0]: _expand(reduced.right)}),))
    if len(reduced.right) == 1 and reduced.right[0][1] == 1:
        return AcUnifierSet((Substitution({reduced.right[0][0]: _expand(reduced.left)}),))

    columns = [x for x, _ in reduced.left] + [y for y, _ in reduced.right]
    basis = dioph_minimal_basis([n for _, n in reduced.left], [n for _, n in reduced.right])
    if 2 ** len(basis) > max_subsets:
        raise ResourceLimitError("ac_subsets", max_subsets)
    names = [fresh.fresh() for _ in basis]
    logger.debug("AC: %s, base de %d élément(s)", reduced, len(basis))

    unifiers: list[Substitution] = []
    for size in range(1, len(basis) + 1):
        for chosen in itertools.combinations(range(len(basis)), size):
            _check(deadline)
            totals = [sum(basis[i].assignment[c] for i in chosen) for c in range(len(columns))]
            if not all(totals):
                continue
            bindings = {
                column: plus(*(
                    var(names[i])
                    for i in chosen
                    for _ in range(basis[i].assignment[c])
                ))
                for c, column in enumerate(columns)
            }
            unifiers.append(Substitution(bindings))
            if len(unifiers) > max_candidates:
                raise ResourceLimitError("ac_candidates", max_candidates)
    return AcUnifierSet(dedupe(unifiers, fresh.root_prefix, deadline))


# ============================================
# SYSTÈME D'ÉQUATIONS `+`
# ============================================

def _pending_equations(psi: Iterable[SumEq]) -> list[tuple[Term, Term]]:
    """Appaire les membres droits d'une même variable, puis lie la variable au premier."""
    grouped: dict[str, list[Term]] = {}
    for eq in psi:
        rhs = eq.rhs_term()
        bucket = grouped.setdefault(eq.lhs, [])
        if rhs not in bucket:
            bucket.append(rhs)
    pairs: list[tuple[Term, Term]] = []
    for rights in grouped.values():
        pairs.extend((rights[0], other) for other in rights[1:])
    pairs.extend((var(x), rights[0]) for x, rights in grouped.items())
    return pairs


def unify_system(
    psi: Iterable[SumEq],
    fresh: FreshVarSource,
    max_subsets: int | None = None,
    max_candidates: int | None = None,
    deadline: Deadline | None = None,
) -> AcUnifierSet:
    """
    Produit croisé des ensembles complets, une équation à la fois.

    Le produit partiel est borné par `max_candidates` et l'échéance est
    vérifiée à chaque composition.
    """
    max_candidates = settings.MAX_AC_CANDIDATES if max_candidates is None else max_candidates
    pending = _pending_equations(psi)
    partial: list[Substitution] = [Substitution()]
    for s, t in pending:
        extended: list[Substitution] = []
        for theta in partial:
            eq = MultisetEquation.from_terms(theta.apply(s), theta.apply(t))
            for delta in unify_multiset_eq(eq, fresh, max_subsets, max_candidates, deadline):
                _check(deadline)
                composed = theta
                for x, u in delta.items():
                    composed = composed.compose(x, u)
                extended.append(composed)
                if len(extended) > max_candidates:
                    raise ResourceLimitError("ac_candidates", max_candidates)
        partial = list(dedupe(extended, fresh.root_prefix, deadline))
        if not partial:
            break
    return AcUnifierSet(tuple(partial))


def get_eqs(theta: Substitution) -> list[FlatEquation]:
    return [equation_from_binding(x, t) for x, t in theta.items()]
