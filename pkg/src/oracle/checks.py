"""
Oracle indépendant : vérification, énumération des unificateurs clos et
test d'instance modulo ACh.

L'énumération filtre les contraintes dont un côté est devenu clos et,
à défaut, affecte une variable à chaque terme de l'univers. Une inconnue
seule en position de sommande est déduite par différence de multiensembles.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import Iterable, Sequence

from src.config.settings import settings
from src.core.exceptions import UniverseTooLargeError
from src.core.models import CompletenessReport, UniverseSpec
from src.oracle.universe import universe_terms
from src.terms.matching import is_more_general, iter_matches
from src.terms.rewriting import ac_equal, h_height, normalize_r1, strip_h
from src.terms.substitution import Substitution
from src.terms.term import SymbolKind, Term, canonicalize, plus, summands, term_variables

logger = logging.getLogger(__name__)

Equations = Sequence[tuple[Term, Term]]

_RIGID = (SymbolKind.CONSTANT, SymbolKind.FREE)


def verify_unifier(equations: Equations, sigma: Substitution, bound: int) -> bool:
    """Égalité ACh de chaque équation instanciée et h-hauteur des deux côtés au plus κ."""
    for s, t in equations:
        left = normalize_r1(sigma.apply(canonicalize(s)))
        right = normalize_r1(sigma.apply(canonicalize(t)))
        if not ac_equal(left, right):
            return False
        if h_height(left) > bound or h_height(right) > bound:
            return False
    return True


# ============================================
# PRÉTRAITEMENT
# ============================================

def _decompose(s: Term, t: Term) -> list[tuple[Term, Term]] | None:
    """Décompose les têtes rigides ; None si les têtes sont incompatibles."""
    if s.is_var or t.is_var:
        return [(s, t)]
    if s.is_h and t.is_h:
        return _decompose(s.args[0], t.args[0])
    s_rigid, t_rigid = s.head.kind in _RIGID, t.head.kind in _RIGID
    if s_rigid and t_rigid:
        if s.head != t.head:
            return None
        pairs: list[tuple[Term, Term]] = []
        for a, b in zip(s.args, t.args):
            sub = _decompose(a, b)
            if sub is None:
                return None
            pairs.extend(sub)
        return pairs
    if s_rigid or t_rigid:
        # Un atome rigide face à une tête h ou à une somme d'au moins deux termes
        return None
    return [(s, t)]


def _constraints(equations: Equations) -> list[tuple[Term, Term]] | None:
    found: list[tuple[Term, Term]] = []
    for s, t in equations:
        pairs = _decompose(normalize_r1(canonicalize(s)), normalize_r1(canonicalize(t)))
        if pairs is None:
            return None
        found.extend(pairs)
    return found


# ============================================
# PROPAGATION
# ============================================

class _NotDirect:
    pass


_NOT_DIRECT = _NotDirect()


def _solve_for(name: str, left: Term, right: Term) -> Term | None | _NotDirect:
    """Valeur de l'unique inconnue `name` si elle est sommande d'un côté clos."""
    if left.variables:
        left, right = right, left
    if left.variables:
        return _NOT_DIRECT
    occurrences = [a for a in summands(right) if strip_h(a)[1].is_var]
    if len(occurrences) != 1 or sum(1 for sub in right.subterms() if sub.is_var) != 1:
        return _NOT_DIRECT
    atom = occurrences[0]
    k, _ = strip_h(atom)
    remaining = Counter(summands(left))
    for other in summands(right):
        if other == atom:
            continue
        if remaining[other] == 0:
            return None
        remaining[other] -= 1
    part = list(remaining.elements())
    if not part or any(strip_h(a)[0] < k for a in part):
        return None
    stripped = []
    for a in part:
        for _ in range(k):
            a = a.args[0]
        stripped.append(a)
    return plus(*stripped)


def _propagate(
    constraints: list[tuple[Term, Term]],
    assignment: dict[str, Term],
    members: frozenset[Term],
) -> dict[str, Term] | None:
    assignment = dict(assignment)
    changed = True
    while changed:
        changed = False
        sigma = Substitution(assignment)
        for s, t in constraints:
            left, right = normalize_r1(sigma.apply(s)), normalize_r1(sigma.apply(t))
            unknown = left.variables | right.variables
            if not unknown:
                if left != right:
                    return None
                continue
            if len(unknown) != 1:
                continue
            (name,) = unknown
            value = _solve_for(name, left, right)
            if isinstance(value, _NotDirect):
                continue
            if value is None or value not in members:
                return None
            assignment[name] = value
            changed = True
            break
    return assignment


def _matchable(
    constraints: list[tuple[Term, Term]],
    assignment: dict[str, Term],
) -> tuple[Term, Term] | None:
    """Première contrainte dont un seul côté est clos : ses inconnues se filtrent sur l'autre."""
    sigma = Substitution(assignment)
    for s, t in constraints:
        left, right = normalize_r1(sigma.apply(s)), normalize_r1(sigma.apply(t))
        if left.variables and not right.variables:
            return left, right
        if right.variables and not left.variables:
            return right, left
    return None


def _next_variable(
    constraints: list[tuple[Term, Term]],
    assignment: dict[str, Term],
    pending: list[str],
) -> str:
    """Inconnue du côté de contrainte qui en compte le moins, pour le clore au plus tôt."""
    sigma = Substitution(assignment)
    best: frozenset[str] | None = None
    for s, t in constraints:
        for side in (s, t):
            unknown = sigma.apply(side).variables
            if unknown and (best is None or len(unknown) < len(best)):
                best = unknown
    if best is None:
        return pending[0]
    return next(v for v in pending if v in best)


def enumerate_ground_unifiers(
    equations: Equations,
    universe: UniverseSpec,
    bound: int,
    max_candidates: int | None = None,
) -> list[Substitution]:
    """
    Tous les unificateurs clos à valeurs dans l'univers, dans un ordre déterministe.

    Raises:
        UniverseTooLargeError: si la recherche visite plus de `max_candidates` nœuds
    """
    limit = max_candidates or settings.ORACLE_MAX_CANDIDATES
    terms = universe_terms(universe)
    members = frozenset(terms)
    variables = term_variables(t for pair in equations for t in pair)
    constraints = _constraints(equations)
    if constraints is None:
        return []

    frequency = Counter(v for s, t in constraints for v in (s.variables | t.variables))
    order = sorted(variables, key=lambda v: (-frequency[v], v))
    results: list[Substitution] = []
    visited = 0

    def search(assignment: dict[str, Term]) -> None:
        nonlocal visited
        visited += 1
        if visited > limit:
            raise UniverseTooLargeError(visited, limit)
        propagated = _propagate(constraints, assignment, members)
        if propagated is None:
            return
        pending = [v for v in order if v not in propagated]
        if not pending:
            theta = Substitution(dict(sorted(propagated.items())))
            if verify_unifier(equations, theta, bound):
                results.append(theta)
            return
        matchable = _matchable(constraints, propagated)
        if matchable is not None:
            pattern, target = matchable
            for eta in iter_matches([(pattern, target)], pattern.variables):
                if all(value in members for value in eta.values()):
                    search({**propagated, **eta})
            return
        name = _next_variable(constraints, propagated, pending)
        for value in terms:
            search({**propagated, name: value})

    search({})
    unique = {theta.sort_key(): theta for theta in results}
    results = list(unique.values())
    logger.debug("Oracle: %d unificateur(s) clos, %d nœud(s)", len(results), visited)
    return results


# ============================================
# INSTANCES ET COMPLÉTUDE
# ============================================

def is_instance(
    sigma: Substitution,
    theta: Substitution,
    variables: Iterable[str],
    max_candidates: int | None = None,
) -> bool:
    """Vrai s'il existe σ' avec xθ =_ACh xσσ' pour tout x des `variables`."""
    return is_more_general(sigma, theta, variables, max_candidates or settings.ORACLE_MAX_CANDIDATES)


def check_completeness(
    equations: Equations,
    unifiers: Sequence[Substitution],
    universe: UniverseSpec,
    bound: int,
    max_candidates: int | None = None,
) -> CompletenessReport:
    variables = term_variables(t for pair in equations for t in pair)
    ground = enumerate_ground_unifiers(equations, universe, bound, max_candidates)
    uncovered = [
        theta.as_strings()
        for theta in ground
        if not any(is_instance(sigma, theta, variables, max_candidates) for sigma in unifiers)
    ]
    if uncovered:
        logger.warning("Oracle: %d unificateur(s) clos non couvert(s)", len(uncovered))
    return CompletenessReport(
        ground_unifiers=len(ground),
        covered=len(ground) - len(uncovered),
        uncovered=uncovered,
    )
