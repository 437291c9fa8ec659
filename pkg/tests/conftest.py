"""
Fixtures et générateurs partagés par la suite de tests.
"""

from pathlib import Path

import pytest
from hypothesis import strategies as st

from src.cli.parser import parse_problem, parse_term
from src.core.models import ProblemFile, UniverseSpec
from src.engine.solver import AchSolver, SolveOutcome
from src.problem.equations import FlatEquation, FreeEq, HEq, SumEq, VarVar
from src.terms.term import Symbol, SymbolKind, Term, app, const, h, plus, var

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "data" / "table1"

VARIABLES = ("x", "y", "z", "w", "u", "t")
CONSTANTS = ("a", "b")
FREE_SYMBOLS = {"f": 2, "g": 1}
FLAT_NAMES = ("x0", "x1", "x2", "x3", "x4", "x5")


# ============================================
# FIXTURES
# ============================================

@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def small_universe() -> UniverseSpec:
    return UniverseSpec(constants=["a", "b"], max_h_height=2, max_summands=3)


# ============================================
# CONSTRUCTION RAPIDE
# ============================================

def problem(text: str) -> ProblemFile:
    return parse_problem(text)


def t(text: str, variables: str = "x y z w v u s x1 x2 x3 x4 y1 y2", constants: str = "a b c") -> Term:
    """Terme lu avec la syntaxe des fichiers problème (variables fraîches admises)."""
    return parse_term(text, variables.split(), constants.split(), allow_reserved=True)


def solve_text(text: str, minimize: bool = False, **limits) -> SolveOutcome:
    parsed = parse_problem(text)
    bound = limits.pop("bound", parsed.bound)
    return AchSolver(bound=bound, **limits).solve(parsed.equations, minimize=minimize)


# ============================================
# GÉNÉRATEURS HYPOTHESIS
# ============================================

def term_strategy(
    variables: tuple[str, ...] = VARIABLES[:4],
    constants: tuple[str, ...] = CONSTANTS,
    free_symbols: dict[str, int] | None = None,
    max_leaves: int = 6,
) -> st.SearchStrategy[Term]:
    free_symbols = FREE_SYMBOLS if free_symbols is None else free_symbols
    leaves = st.sampled_from([var(v) for v in variables] + [const(c) for c in constants])

    def extend(children: st.SearchStrategy[Term]) -> st.SearchStrategy[Term]:
        options = [
            st.builds(h, children),
            st.lists(children, min_size=2, max_size=3).map(lambda ts: plus(*ts)),
        ]
        for name, arity in sorted(free_symbols.items()):
            options.append(st.tuples(*[children] * arity).map(lambda args, n=name: app(n, *args)))
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def equation_systems(
    draw,
    max_equations: int = 4,
    max_variables: int = 6,
    max_leaves: int = 4,
) -> list[tuple[Term, Term]]:
    """Petits problèmes : au plus `max_equations` équations et deux symboles libres."""
    n_vars = draw(st.integers(min_value=1, max_value=max_variables))
    symbols = draw(st.sampled_from([{}, {"f": 2}, {"g": 1}, FREE_SYMBOLS]))
    terms = term_strategy(VARIABLES[:n_vars], CONSTANTS, symbols, max_leaves)
    return draw(st.lists(st.tuples(terms, terms), min_size=1, max_size=max_equations))


@st.composite
def coefficient_vectors(draw, max_length: int = 4, max_entry: int = 3) -> tuple[list[int], list[int]]:
    entries = st.integers(min_value=1, max_value=max_entry)
    left = draw(st.lists(entries, min_size=1, max_size=max_length))
    right = draw(st.lists(entries, min_size=1, max_size=max_length))
    return left, right


@st.composite
def flat_systems(draw, acyclic: bool = False, max_equations: int = 8) -> list[FlatEquation]:
    """Γ plat sur FLAT_NAMES ; en mode acyclique, chaque arête va vers un nom d'indice plus grand."""
    g = Symbol("g", SymbolKind.FREE, 1)
    gamma: list[FlatEquation] = []
    for _ in range(draw(st.integers(min_value=1, max_value=max_equations))):
        i = draw(st.integers(min_value=0, max_value=len(FLAT_NAMES) - 2))
        lhs = FLAT_NAMES[i]
        targets = st.sampled_from(FLAT_NAMES[i + 1:] if acyclic else FLAT_NAMES)
        kind = draw(st.sampled_from(["=", "h", "+", "g"]))
        if kind == "=":
            gamma.append(VarVar(lhs, draw(targets)))
        elif kind == "h":
            gamma.append(HEq(lhs, draw(targets)))
        elif kind == "+":
            gamma.append(SumEq(lhs, tuple(draw(st.lists(targets, min_size=2, max_size=3)))))
        else:
            gamma.append(FreeEq(lhs, g, (draw(targets),)))
    return gamma
