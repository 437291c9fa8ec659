"""
Base minimale des solutions naturelles de Σ aᵢxᵢ = Σ bⱼyⱼ.

Énumération dans la boîte classique (xᵢ ≤ max b, yⱼ ≤ max a), puis
réduction aux éléments minimaux pour l'ordre composante par composante.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, order=True)
class DiophSolution:
    """Une composante par position : gauche puis droite."""

    assignment: tuple[int, ...]

    def left(self, n_left: int) -> tuple[int, ...]:
        return self.assignment[:n_left]

    def right(self, n_left: int) -> tuple[int, ...]:
        return self.assignment[n_left:]


def _box(coeffs_left: Sequence[int], coeffs_right: Sequence[int]) -> np.ndarray:
    """Tous les vecteurs non nuls de la boîte qui satisfont l'équation."""
    bound_left = max(coeffs_right)
    bound_right = max(coeffs_left)
    left = np.array(
        list(itertools.product(range(bound_left + 1), repeat=len(coeffs_left))), dtype=np.int64
    )
    right = np.array(
        list(itertools.product(range(bound_right + 1), repeat=len(coeffs_right))), dtype=np.int64
    )
    left_totals = left @ np.asarray(coeffs_left, dtype=np.int64)
    right_totals = right @ np.asarray(coeffs_right, dtype=np.int64)

    rows = []
    for total in np.unique(left_totals):
        if total == 0:
            continue
        lefts = left[left_totals == total]
        rights = right[right_totals == total]
        if not len(rights):
            continue
        li = np.repeat(lefts, len(rights), axis=0)
        ri = np.tile(rights, (len(lefts), 1))
        rows.append(np.hstack([li, ri]))
    if not rows:
        return np.zeros((0, len(coeffs_left) + len(coeffs_right)), dtype=np.int64)
    return np.vstack(rows)


def minimalize(solutions: np.ndarray) -> np.ndarray:
    """Garde les lignes minimales ; triées par somme, un élément plus petit passe toujours avant."""
    order = np.lexsort(solutions.T[::-1])
    ordered = solutions[order]
    ordered = ordered[np.argsort(ordered.sum(axis=1), kind="stable")]
    kept: list[np.ndarray] = []
    for row in ordered:
        if all(not np.all(row >= g) for g in kept):
            kept.append(row)
    if not kept:
        return np.zeros((0, solutions.shape[1]), dtype=np.int64)
    return np.array(kept)


def dioph_minimal_basis(coeffs_left: Sequence[int], coeffs_right: Sequence[int]) -> tuple[DiophSolution, ...]:
    """
    Args:
        coeffs_left: multiplicités aᵢ ≥ 1 du membre gauche
        coeffs_right: multiplicités bⱼ ≥ 1 du membre droit

    Returns:
        tuple: solutions minimales non nulles, par somme croissante puis
        ordre lexicographique
    """
    if not coeffs_left or not coeffs_right or min(*coeffs_left, *coeffs_right) < 1:
        raise ValueError("coefficients strictement positifs attendus des deux côtés")
    candidates = _box(coeffs_left, coeffs_right)
    if not len(candidates):
        return ()
    basis = minimalize(candidates)
    return tuple(DiophSolution(tuple(int(v) for v in row)) for row in basis)
