"""
Exécution d'un problème, rendu texte/JSON et banc d'essai du corpus Table 1.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from src.acsolver.minimize import minimize as minimize_unifiers
from src.config.settings import settings
from src.core.exceptions import CorpusLoadError, InvalidCorpusFormatError, SoundnessError
from src.core.models import (
    BenchExpectation,
    BenchRow,
    ProblemFile,
    SolveOptions,
    SolveReport,
    SolveStats,
)
from src.cli.parser import parse_problem
from src.engine.solver import AchSolver, SolveOutcome
from src.oracle.checks import verify_unifier
from src.problem.depth import BoundExceeded, propagate_depths
from src.problem.equations import FreshVarSource
from src.problem.flattening import flatten

logger = logging.getLogger(__name__)

EXIT_CODES = {"unifiable": 0, "no_solution": 1, "resource_limit": 2}
INPUT_ERROR_EXIT = 3

# Statut publié -> statut du solveur
PUBLISHED_STATUS = {"bottom": "no_solution", "yes": "unifiable"}


def resolve_bound(problem: ProblemFile, options: SolveOptions) -> int:
    """`--bound` > en-tête `bound:` > DEFAULT_BOUND."""
    if options.bound is not None:
        return options.bound
    if problem.bound is not None:
        return problem.bound
    return settings.DEFAULT_BOUND


# ============================================
# RÉSOLUTION
# ============================================

@dataclass(frozen=True)
class SolveRun:
    report: SolveReport
    outcome: SolveOutcome


def execute(problem: ProblemFile, options: SolveOptions) -> SolveRun:
    """
    Résout le problème et construit le rapport.

    Raises:
        SoundnessError: si `check` est demandé et qu'un unificateur échoue
        à la vérification de l'oracle
    """
    bound = resolve_bound(problem, options)
    solver = AchSolver(
        bound=bound,
        max_branches=options.max_branches,
        timeout_ms=options.timeout_ms,
        record_trace=options.trace,
    )
    outcome = solver.solve(problem.equations, minimize=options.minimize)

    if options.check:
        for sigma in outcome.unifiers:
            if not verify_unifier(problem.equations, sigma, bound):
                logger.error("Unificateur non vérifié: %s", sigma)
                raise SoundnessError(sigma.as_strings())
        logger.info("Vérification: %d unificateur(s) validé(s)", len(outcome.unifiers))

    stats = SolveStats(
        rules=dict(outcome.statistics.rules),
        branches=outcome.statistics.branches,
        ms=outcome.statistics.elapsed_ms,
    )
    report = SolveReport(
        status=outcome.status,
        bound=bound,
        unifiers=[sigma.as_strings() for sigma in outcome.unifiers],
        stats=stats,
    )
    return SolveRun(report, outcome)


def run_solve(problem: ProblemFile, options: SolveOptions) -> SolveReport:
    return execute(problem, options).report


# ============================================
# RENDU
# ============================================

def render_json(report: SolveReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, ensure_ascii=False)


def render_text(run: SolveRun, trace: bool = False) -> str:
    report, outcome = run.report, run.outcome
    lines = [f"status: {report.status}", f"bound: {report.bound}"]
    if outcome.limit is not None:
        lines.append(f"limit: {outcome.limit}")
    lines.append(f"unifiers: {len(report.unifiers)}")
    for index, unifier in enumerate(report.unifiers, start=1):
        bindings = ", ".join(f"{x} ↦ {t}" for x, t in unifier.items())
        lines.append(f"  [{index}] {{{bindings}}}")
    rules = ", ".join(f"{name}={count}" for name, count in report.stats.rules.items())
    lines.append(f"rules: {rules or '-'}")
    lines.append(f"branches: {report.stats.branches}")
    lines.append(f"ms: {report.stats.ms}")
    if trace:
        labelled = [("trace", outcome.traces), ("trace closed", outcome.closed_traces)]
        for label, traces in labelled:
            for index, entries in enumerate(traces, start=1):
                lines.append(f"{label} [{index}]")
                for entry in entries:
                    after = entry.after if entry.after is not None else "-"
                    lines.append(f"  {entry.rule}: {entry.before} -> {after}")
    return "\n".join(lines)


def render_flattened(problem: ProblemFile, bound: int) -> str:
    """Problème aplati et Δ propagé, ou la variable qui dépasse κ."""
    flat = flatten(problem.equations, FreshVarSource())
    lines = [str(eq) for eq in flat.equations]
    depths = propagate_depths(flat.equations, flat.depths, bound)
    if isinstance(depths, BoundExceeded):
        lines.append(f"⊥ (bound): {depths.variable} atteint {depths.depth} > {depths.bound}")
    else:
        lines.append("Δ = {" + ", ".join(f"({x}, {d})" for x, d in sorted(depths.items())) + "}")
    return "\n".join(lines)


# ============================================
# BANC D'ESSAI
# ============================================

class Table1Bench:
    """Charge `expected.csv` et rejoue chaque problème du corpus"""

    REQUIRED_COLUMNS = ["file", "published_ms", "status", "count", "bound"]

    def __init__(self, corpus_dir: Path | None = None):
        """
        Args:
            corpus_dir: dossier du corpus (utilise settings par défaut)
        """
        self.corpus_dir = Path(corpus_dir) if corpus_dir else settings.bench_corpus_full_path
        self.expected_path = self.corpus_dir / "expected.csv"
        self._df: pd.DataFrame | None = None

    def load_expectations(self) -> list[BenchExpectation]:
        """
        Returns:
            Liste de BenchExpectation validées

        Raises:
            CorpusLoadError: si le fichier ne peut pas être chargé
            InvalidCorpusFormatError: si une colonne manque ou une ligne est invalide
        """
        try:
            if not self.expected_path.exists():
                raise FileNotFoundError(f"Fichier introuvable: {self.expected_path}")
            self._df = pd.read_csv(self.expected_path, sep=",", encoding="utf-8", dtype=str)
        except (FileNotFoundError, pd.errors.EmptyDataError, pd.errors.ParserError) as e:
            raise CorpusLoadError(str(self.expected_path), e)

        missing_columns = set(self.REQUIRED_COLUMNS) - set(self._df.columns)
        if missing_columns:
            raise InvalidCorpusFormatError(
                expected_format=f"Colonnes requises: {self.REQUIRED_COLUMNS}",
                received_format=f"Colonnes manquantes: {sorted(missing_columns)}",
            )

        expectations = []
        for index, row in self._df.fillna("").iterrows():
            try:
                expectations.append(BenchExpectation(**{c: str(row[c]).strip() for c in self.REQUIRED_COLUMNS}))
            except ValueError as e:
                raise InvalidCorpusFormatError(
                    expected_format="Ligne conforme au modèle BenchExpectation",
                    received_format=f"ligne {index + 2}: {e}",
                )
        logger.info("%d problème(s) chargé(s) depuis %s", len(expectations), self.expected_path)
        return expectations

    def run_row(self, expected: BenchExpectation) -> BenchRow:
        path = self.corpus_dir / expected.file
        try:
            problem = parse_problem(path.read_bytes())
        except OSError as e:
            raise CorpusLoadError(str(path), e)

        outcome = AchSolver(bound=expected.bound).solve(problem.equations)
        minimized = minimize_unifiers(outcome.unifiers, outcome.variables)
        status_match = outcome.status == PUBLISHED_STATUS[expected.status]
        if not status_match:
            logger.warning("%s: statut %s, attendu %s", expected.file, outcome.status, expected.status)
        return BenchRow(
            file=expected.file,
            bound=expected.bound,
            expected_status=expected.status,
            expected_count=expected.count,
            published_ms=expected.published_ms,
            status=outcome.status,
            status_match=status_match,
            raw_count=len(outcome.unifiers),
            minimized_count=len(minimized),
            ms=outcome.statistics.elapsed_ms,
        )

    def run(self) -> list[BenchRow]:
        return [self.run_row(expected) for expected in self.load_expectations()]


def bench_table1(corpus_dir: Path | None = None) -> list[BenchRow]:
    return Table1Bench(corpus_dir).run()


def render_bench(rows: list[BenchRow], output_format: str = "text") -> str:
    records = [row.model_dump(mode="json") for row in rows]
    if output_format == "json":
        return json.dumps(records, sort_keys=True, ensure_ascii=False)
    if not records:
        return "(corpus vide)"
    return pd.DataFrame.from_records(records).to_string(index=False)
