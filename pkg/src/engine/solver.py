"""
Boucle principale : aplatit le problème puis épuise les branches.

Une branche finit avec Γ vide (σ est un unificateur), ⊥, ou bloquée par
une limite. Le résultat global est ⊥ seulement si toutes les branches
finissent en ⊥.
"""

from __future__ import annotations

import logging
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Literal, Sequence

from src.acsolver.minimize import minimize as minimize_unifiers
from src.acsolver.unify import Deadline
from src.config.settings import settings
from src.core.exceptions import InvalidBoundError, InvalidLimitError, ReservedIdentifierError
from src.engine.rules import AC_UNIFICATION, SPLITTING, VE1, VE2, step
from src.engine.triple import Bottom, Measure, Progress, Stuck, TraceEntry, Triple, measure
from src.problem.equations import FreshVarSource
from src.problem.flattening import flatten
from src.terms.substitution import Substitution, canonical_renaming
from src.terms.term import Signature, Term, term_variables

logger = logging.getLogger(__name__)

Status = Literal["unifiable", "no_solution", "resource_limit"]
Exploration = Literal["depth_first", "breadth_first"]

# Règles dont la mesure peut croître (branchement AC, élimination d'une racine)
MEASURE_EXEMPT_RULES = frozenset({AC_UNIFICATION, VE2})


def documented_increase(rule: str, before: Measure, after: Measure) -> bool:
    """
    Hausses connues de la mesure hors AC et VE2 : Splitting qui recrée une
    paire h / + (n inchangé, plus de symboles) et VE1 qui réunit sur une même
    variable une définition h et une définition +.
    """
    if rule == SPLITTING:
        return after.n == before.n and after.sym > before.sym
    if rule == VE1:
        return after.n > before.n
    return False


@dataclass
class SolveStatistics:
    rules: Counter = field(default_factory=Counter)
    bottoms: Counter = field(default_factory=Counter)
    non_decreasing: Counter = field(default_factory=Counter)
    branches: int = 1
    steps: int = 0
    elapsed_ms: int = 0


@dataclass(frozen=True)
class SolveOutcome:
    """
    Résultat d'une résolution.

    `traces` suit l'ordre des branches résolues ; `closed_traces` garde
    celles des branches finies en ⊥ ou bloquées, terminées par une entrée
    sans mesure d'arrivée.
    """

    status: Status
    bound: int
    variables: tuple[str, ...]
    unifiers: tuple[Substitution, ...]
    full_unifiers: tuple[Substitution, ...]
    traces: tuple[tuple[TraceEntry, ...], ...]
    statistics: SolveStatistics
    limit: str | None = None
    closed_traces: tuple[tuple[TraceEntry, ...], ...] = ()

    @property
    def is_bottom(self) -> bool:
        return self.status == "no_solution"

    @property
    def all_traces(self) -> tuple[tuple[TraceEntry, ...], ...]:
        return self.traces + self.closed_traces


def _limit(name: str, value: int | None, default: int | None) -> int | None:
    if value is None:
        return default
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InvalidLimitError(name, value)
    return value


class AchSolver:
    """Unification ACh bornée par κ, avec limites de ressources."""

    def __init__(
        self,
        bound: int | None = None,
        max_branches: int | None = None,
        max_steps: int | None = None,
        timeout_ms: int | None = None,
        max_ac_rounds: int | None = None,
        max_ac_subsets: int | None = None,
        max_ac_candidates: int | None = None,
        exploration: Exploration | None = None,
        record_trace: bool = False,
    ):
        """
        Args:
            bound: borne κ (utilise settings par défaut)
            max_branches: nombre maximal de branches vivantes
            max_steps: nombre maximal d'applications de règles
            timeout_ms: temps maximal, sans limite si None
            max_ac_rounds: appels à l'unification AC par lignée de branches
            max_ac_subsets: garde de l'énumération des sous-ensembles AC
            max_ac_candidates: garde du nombre d'unificateurs d'un appel AC
            exploration: parcours en profondeur ou en largeur
            record_trace: conserve la suite des règles de chaque branche

        Une limite explicite à 0 est respectée : la résolution s'arrête
        dès la première vérification avec le statut resource_limit.

        Raises:
            InvalidBoundError: borne négative ou non entière
            InvalidLimitError: limite négative ou non entière
        """
        self.bound = settings.DEFAULT_BOUND if bound is None else bound
        if not isinstance(self.bound, int) or isinstance(self.bound, bool) or self.bound < 0:
            raise InvalidBoundError(bound)
        self.max_branches = _limit("max_branches", max_branches, settings.MAX_BRANCHES)
        self.max_steps = _limit("max_steps", max_steps, settings.MAX_STEPS)
        self.timeout_ms = _limit("timeout_ms", timeout_ms, settings.TIMEOUT_MS)
        self.max_ac_rounds = _limit("max_ac_rounds", max_ac_rounds, settings.MAX_AC_ROUNDS)
        self.max_ac_subsets = _limit("max_ac_subsets", max_ac_subsets, settings.MAX_AC_SUBSETS)
        self.max_ac_candidates = _limit("max_ac_candidates", max_ac_candidates, settings.MAX_AC_CANDIDATES)
        self.exploration = exploration or settings.EXPLORATION
        self.record_trace = record_trace

    def solve(self, equations: Sequence[tuple[Term, Term]], minimize: bool = False) -> SolveOutcome:
        """
        Raises:
            SignatureError: un nom utilisé avec deux sortes ou deux arités
            ReservedIdentifierError: une variable du problème porte le préfixe frais
        """
        started = time.perf_counter()
        deadline = Deadline.after(self.timeout_ms, started)
        Signature.of(t for pair in equations for t in pair)
        variables = tuple(sorted(term_variables(t for pair in equations for t in pair)))
        fresh = FreshVarSource()
        for name in variables:
            if fresh.is_fresh(name):
                raise ReservedIdentifierError(name, 0, 0)

        stats = SolveStatistics()
        flat = flatten(equations, fresh)
        stats.rules.update(flat.rule_counts)

        worklist: deque[Triple] = deque([Triple(flat.equations, flat.depths, fresh=fresh)])
        solutions: list[Triple] = []
        closed: list[tuple[TraceEntry, ...]] = []
        limit: str | None = None

        while worklist:
            if stats.steps >= self.max_steps:
                limit = "max_steps"
                break
            if deadline is not None and deadline.expired:
                limit = "timeout_ms"
                break
            current = worklist.pop() if self.exploration == "depth_first" else worklist.popleft()
            if current.solved:
                solutions.append(current)
                continue

            result = step(
                current,
                self.bound,
                self.max_ac_rounds,
                self.max_ac_subsets,
                self.max_ac_candidates,
                deadline,
            )
            stats.steps += 1

            if isinstance(result, Bottom):
                stats.rules[result.rule] += 1
                stats.bottoms[result.reason] += 1
                logger.debug("⊥ (%s) par %s", result.reason, result.rule)
                self._close(closed, current, result.rule)
                continue
            if isinstance(result, Stuck):
                limit = limit or result.reason
                logger.warning("Branche bloquée: %s", result.reason)
                self._close(closed, current, result.reason)
                continue

            stats.rules[result.rule] += 1
            logger.debug("Étape %d: %s, %d branche(s)", stats.steps, result.rule, len(result.branches))
            branches = self._traced(current, result, stats)
            stats.branches += len(branches) - 1
            ordered = reversed(branches) if self.exploration == "depth_first" else branches
            worklist.extend(ordered)
            if len(worklist) > self.max_branches:
                limit = "max_branches"
                logger.warning("Limite de branches atteinte: %d", self.max_branches)
                break

        stats.elapsed_ms = int((time.perf_counter() - started) * 1000)
        return self._outcome(variables, solutions, closed, stats, limit, minimize)

    def _close(self, closed: list[tuple[TraceEntry, ...]], current: Triple, label: str) -> None:
        if self.record_trace:
            closed.append(current.trace + (TraceEntry(label, measure(current, self.bound), None),))

    def _traced(self, current: Triple, result: Progress, stats: SolveStatistics) -> tuple[Triple, ...]:
        if not self.record_trace:
            return result.branches
        before = measure(current, self.bound)
        traced = []
        for branch in result.branches:
            after = measure(branch, self.bound)
            if result.rule == VE2:
                logger.debug("VE2: mesure %s -> %s", before, after)
            elif result.rule not in MEASURE_EXEMPT_RULES and not after < before:
                stats.non_decreasing[result.rule] += 1
                documented = documented_increase(result.rule, before, after)
                level = logging.INFO if documented else logging.WARNING
                logger.log(level, "%s sans décroissance: %s -> %s", result.rule, before, after)
            entry = TraceEntry(result.rule, before, after)
            traced.append(branch.evolve(trace=branch.trace + (entry,)))
        return tuple(traced)

    def _outcome(
        self,
        variables: tuple[str, ...],
        solutions: list[Triple],
        closed: list[tuple[TraceEntry, ...]],
        stats: SolveStatistics,
        limit: str | None,
        minimize: bool,
    ) -> SolveOutcome:
        prefix = settings.FRESH_PREFIX
        presented = [
            canonical_renaming(t.sigma.restrict(variables), lambda v: v.startswith(prefix), prefix)
            for t in solutions
        ]
        unique = {sigma.sort_key(): sigma for sigma in presented}
        unifiers = tuple(unique[key] for key in sorted(unique))
        if minimize:
            unifiers = minimize_unifiers(unifiers, variables)

        if limit is not None:
            status: Status = "resource_limit"
        elif unifiers:
            status = "unifiable"
        else:
            status = "no_solution"
        logger.info(
            "Résolution: %s, %d unificateur(s), %d étape(s), %d branche(s)",
            status, len(unifiers), stats.steps, stats.branches
        )
        return SolveOutcome(
            status=status,
            bound=self.bound,
            variables=variables,
            unifiers=unifiers,
            full_unifiers=tuple(t.sigma for t in solutions),
            traces=tuple(t.trace for t in solutions),
            statistics=stats,
            limit=limit,
            closed_traces=tuple(closed),
        )


def solve(
    equations: Sequence[tuple[Term, Term]],
    bound: int | None = None,
    minimize: bool = False,
    **limits,
) -> SolveOutcome:
    """Raccourci : `AchSolver(bound, **limits).solve(equations, minimize)`."""
    return AchSolver(bound, **limits).solve(equations, minimize)
