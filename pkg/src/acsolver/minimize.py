"""
Réduction d'un ensemble complet d'unificateurs à un ensemble minimal.
"""

import logging
from typing import Iterable, Sequence

from src.terms.matching import is_more_general
from src.terms.substitution import Substitution

logger = logging.getLogger(__name__)


def minimize(unifiers: Sequence[Substitution], variables: Iterable[str]) -> tuple[Substitution, ...]:
    """
    Retire tout unificateur instance (sur `variables`) d'un autre unificateur
    retenu. Entre deux unificateurs mutuellement plus généraux, le premier
    dans l'ordre d'entrée reste.
    """
    names = sorted(set(variables))
    kept: list[Substitution] = []
    for sigma in unifiers:
        if any(is_more_general(other, sigma, names) for other in kept):
            continue
        kept = [other for other in kept if not is_more_general(sigma, other, names)]
        kept.append(sigma)
    if len(kept) < len(unifiers):
        logger.info("Minimisation: %d -> %d unificateur(s)", len(unifiers), len(kept))
    return tuple(kept)
