"""
Règles d'inférence sur les triples et stratégie de priorité.

Ordre : OC, mise à jour de Δ (et BC), Trivial, VE1, Clash, Decomposition,
Splitting, unification AC, VE2. L'orientation est faite à l'aplatissement.
"""

from __future__ import annotations

import logging
from itertools import combinations

from src.acsolver.unify import Deadline, get_eqs, unify_system
from src.core.exceptions import ResourceLimitError
from src.problem.depth import BoundExceeded, propagate_depths
from src.problem.equations import FlatEquation, FreeEq, HEq, SumEq, VarVar
from src.engine.triple import Bottom, Progress, StepResult, Stuck, Triple
from src.terms.term import SymbolKind, var

logger = logging.getLogger(__name__)

OC = "OC"
BC = "BC"
UPDATE_DEPTH = "UpdateDepth"
TRIVIAL = "Trivial"
VE1 = "VE1"
CLASH = "Clash"
DECOMPOSITION = "Decomposition"
SPLITTING = "Splitting"
AC_UNIFICATION = "ACUnification"
VE2 = "VE2"

# Sortes compatibles sans décomposition
_SPLITTABLE = frozenset({SymbolKind.H, SymbolKind.PLUS})


def _definitions(gamma: tuple[FlatEquation, ...]) -> dict[str, list[FlatEquation]]:
    found: dict[str, list[FlatEquation]] = {}
    for eq in gamma:
        if not isinstance(eq, VarVar):
            found.setdefault(eq.lhs, []).append(eq)
    return found


def _without(gamma: tuple[FlatEquation, ...], *removed: FlatEquation) -> list[FlatEquation]:
    drop = set(removed)
    return [eq for eq in gamma if eq not in drop]


# ============================================
# RÈGLES
# ============================================

def occur_check(t: Triple) -> Bottom | None:
    for eq in t.gamma:
        if isinstance(eq, VarVar):
            continue
        if eq.lhs in t.sigma.apply(eq.rhs_term()).variables:
            return Bottom("occur", OC)
    return None


def update_depths(t: Triple, bound: int) -> StepResult | None:
    updated = propagate_depths(t.gamma, t.delta, bound)
    if isinstance(updated, BoundExceeded):
        return Bottom("bound", BC)
    if any(updated[v] != t.delta.get(v, 0) for v in updated):
        return Progress(UPDATE_DEPTH, (t.evolve(delta=updated),))
    return None


def trivial(t: Triple) -> Progress | None:
    for eq in t.gamma:
        if isinstance(eq, VarVar) and eq.lhs == eq.rhs:
            return Progress(TRIVIAL, (t.evolve(gamma=_without(t.gamma, eq)),))
    return None


def _eliminated(x: str, y: str, t: Triple) -> tuple[str, str]:
    """(variable éliminée, variable gardée) : la plus fraîche disparaît."""
    x_fresh, y_fresh = t.fresh.is_fresh(x), t.fresh.is_fresh(y)
    if x_fresh != y_fresh:
        return (x, y) if x_fresh else (y, x)
    return (x, y) if x < y else (y, x)


def variable_elimination(t: Triple) -> Progress | None:
    """VE1 : x ≐ y, x ≠ y."""
    for eq in t.gamma:
        if not isinstance(eq, VarVar) or eq.lhs == eq.rhs:
            continue
        gone, kept = _eliminated(eq.lhs, eq.rhs, t)
        gamma = [other.rename({gone: kept}) for other in _without(t.gamma, eq)]
        delta = dict(t.delta)
        delta[kept] = max(delta.get(gone, 0), delta.get(kept, 0))
        return Progress(VE1, (t.evolve(
            gamma=gamma,
            delta=delta,
            sigma=t.sigma.compose(gone, var(kept)),
        ),))
    return None


def clash(t: Triple) -> Bottom | None:
    for equations in _definitions(t.gamma).values():
        symbols = {eq.head_symbol for eq in equations}
        if len(symbols) > 1 and not {s.kind for s in symbols} <= _SPLITTABLE:
            return Bottom("clash", CLASH)
    return None


def decompose(t: Triple, first: FlatEquation, second: FlatEquation) -> Triple:
    """Garde `first`, remplace `second` par l'égalité de ses arguments avec ceux de `first`."""
    added = [
        VarVar(a, b)
        for a, b in zip(first.rhs_variables, second.rhs_variables, strict=True)
    ]
    return t.evolve(gamma=_without(t.gamma, second) + added)


def decomposition(t: Triple) -> Progress | None:
    for equations in _definitions(t.gamma).values():
        for first, second in combinations(equations, 2):
            if isinstance(first, SumEq) or first.head_symbol != second.head_symbol:
                continue
            return Progress(DECOMPOSITION, (decompose(t, first, second),))
    return None


def split(t: Triple, target: tuple[HEq, SumEq]) -> Triple:
    """x ≐ h(y), x ≐ x1 + … + xn  ⟶  x ≐ h(y), y ≐ v1 + … + vn, xi ≐ h(vi)."""
    h_eq, sum_eq = target
    fresh = t.fresh.copy()
    parts = [fresh.fresh() for _ in sum_eq.args]
    added: list[FlatEquation] = [SumEq(h_eq.arg, tuple(parts))]
    added.extend(HEq(xi, vi) for xi, vi in zip(sum_eq.args, parts))
    delta = dict(t.delta)
    delta.update({v: 0 for v in parts})
    return t.evolve(gamma=_without(t.gamma, sum_eq) + added, delta=delta, fresh=fresh)


def splitting(t: Triple) -> Progress | None:
    for x, equations in _definitions(t.gamma).items():
        h_eq = next((eq for eq in equations if isinstance(eq, HEq)), None)
        sum_eq = next((eq for eq in equations if isinstance(eq, SumEq)), None)
        if h_eq is None or sum_eq is None:
            continue
        if h_eq.arg == x or x in sum_eq.args:
            continue
        return Progress(SPLITTING, (split(t, (h_eq, sum_eq)),))
    return None


def ac_unification(
    t: Triple,
    max_rounds: int,
    max_subsets: int | None,
    max_candidates: int | None = None,
    deadline: Deadline | None = None,
) -> StepResult | None:
    """
    Ne s'applique que si une variable a au moins deux équations `+`.
    Une limite atteinte pendant l'appel AC (sous-ensembles, candidats,
    échéance) bloque la branche au lieu de la couper.
    """
    psi = [eq for eq in t.gamma if isinstance(eq, SumEq)]
    heads = [eq.lhs for eq in psi]
    if len(heads) == len(set(heads)):
        return None
    if t.ac_rounds >= max_rounds:
        return Stuck(t, "ac_rounds")

    fresh = t.fresh.copy()
    try:
        unifiers = unify_system(psi, fresh, max_subsets, max_candidates, deadline)
    except ResourceLimitError as exc:
        return Stuck(t, exc.kind)
    if not unifiers.unifiers:
        return Bottom("occur", AC_UNIFICATION)

    rest = [eq for eq in t.gamma if not isinstance(eq, SumEq)]
    branches = []
    for index, theta in enumerate(unifiers.unifiers, start=1):
        gamma = rest + get_eqs(theta)
        delta = dict(t.delta)
        for eq in gamma:
            for v in eq.variables:
                delta.setdefault(v, 0)
        branches.append(t.evolve(
            gamma=gamma,
            delta=delta,
            fresh=fresh.fork(index),
            ac_rounds=t.ac_rounds + 1,
        ))
    logger.info("Unification AC: %d équation(s) +, %d branche(s)", len(psi), len(branches))
    return Progress(AC_UNIFICATION, tuple(branches))


def eliminate_definition(t: Triple) -> StepResult | None:
    """
    VE2 sur une racine : x ≐ t où x n'apparaît dans aucun autre membre
    droit. Γ reste plat ; sans racine, les définitions forment un cycle.
    """
    if not t.gamma:
        return None
    used = {v for eq in t.gamma for v in eq.rhs_variables}
    for eq in t.gamma:
        if eq.lhs not in used:
            return Progress(VE2, (t.evolve(
                gamma=_without(t.gamma, eq),
                sigma=t.sigma.compose(eq.lhs, eq.rhs_term()),
            ),))
    return Bottom("occur", VE2)


# ============================================
# STRATÉGIE
# ============================================

def step(
    t: Triple,
    bound: int,
    max_ac_rounds: int = 4,
    max_ac_subsets: int | None = None,
    max_ac_candidates: int | None = None,
    deadline: Deadline | None = None,
) -> StepResult:
    """Applique exactement une règle, la première applicable dans l'ordre de priorité."""
    result = occur_check(t) or update_depths(t, bound) or trivial(t) or variable_elimination(t)
    if result is not None:
        return result
    result = clash(t) or decomposition(t) or splitting(t)
    if result is not None:
        return result
    result = (
        ac_unification(t, max_ac_rounds, max_ac_subsets, max_ac_candidates, deadline)
        or eliminate_definition(t)
    )
    if result is not None:
        return result
    return Stuck(t, "no_rule")
