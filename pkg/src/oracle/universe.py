"""
Univers fini de termes clos en forme normale R1.
"""

import itertools
from functools import lru_cache

from src.core.models import UniverseSpec
from src.terms.rewriting import h_height, wrap_h
from src.terms.term import Term, app, const, plus


def term_size(t: Term) -> int:
    return 1 + sum(term_size(a) for a in t.args)


def _multisets(atoms: list[Term], max_summands: int) -> list[Term]:
    terms: list[Term] = []
    for size in range(1, max_summands + 1):
        for chosen in itertools.combinations_with_replacement(atoms, size):
            terms.append(plus(*chosen))
    return terms


def _ordered(terms: list[Term]) -> tuple[Term, ...]:
    return tuple(sorted(set(terms), key=lambda t: (term_size(t), t.sort_key)))


@lru_cache(maxsize=32)
def _universe(
    constants: tuple[str, ...],
    max_h_height: int,
    max_summands: int,
    free_symbols: tuple[tuple[str, int], ...],
    max_term_size: int,
) -> tuple[Term, ...]:
    atoms = [wrap_h(k, const(c)) for c in constants for k in range(max_h_height + 1)]
    if free_symbols:
        arguments = [
            t for t in _multisets(atoms, max_summands)
            if term_size(t) < max_term_size
        ]
        for name, arity in free_symbols:
            for args in itertools.product(arguments, repeat=arity):
                core = app(name, *args)
                if term_size(core) > max_term_size:
                    continue
                for k in range(max_h_height + 1):
                    candidate = wrap_h(k, core)
                    if h_height(candidate) <= max_h_height:
                        atoms.append(candidate)
    atoms = list(_ordered(atoms))
    return _ordered(_multisets(atoms, max_summands))


def universe_terms(spec: UniverseSpec) -> tuple[Term, ...]:
    """
    Sommes d'au plus `max_summands` atomes `h^k(c)` (et `h^k(f(…))` si des
    symboles libres sont déclarés), triées par taille puis ordre canonique.
    """
    return _universe(
        tuple(spec.constants),
        spec.max_h_height,
        spec.max_summands,
        tuple(sorted(spec.free_symbols.items())),
        spec.max_term_size,
    )
