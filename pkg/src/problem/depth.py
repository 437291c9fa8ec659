"""
Graphe de dépendance des variables et ensemble des h-profondeurs Δ.

Δ est monotone : les valeurs ne font que croître, jusqu'au plus petit point
fixe des contraintes, ou jusqu'au dépassement de la borne κ.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from src.problem.equations import FlatEquation, HEq, VarVar, equations_variables

logger = logging.getLogger(__name__)

DepthMap = dict[str, int]

H_LABEL = "h"


@dataclass(frozen=True)
class Edge:
    source: str
    label: str
    target: str

    @property
    def weight(self) -> int:
        return 1 if self.label == H_LABEL else 0


@dataclass(frozen=True)
class DependencyGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def successors(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if e.source == vertex]

    def h_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.label == H_LABEL]


@dataclass(frozen=True)
class BoundExceeded:
    """La règle BC doit s'appliquer : une profondeur dépasse κ."""

    variable: str
    depth: int
    bound: int


def build_graph(gamma: Iterable[FlatEquation]) -> DependencyGraph:
    gamma = list(gamma)
    edges: list[Edge] = []
    for eq in gamma:
        if isinstance(eq, VarVar):
            continue
        label = H_LABEL if isinstance(eq, HEq) else eq.head
        edges.extend(Edge(eq.lhs, label, y) for y in eq.rhs_variables)
    return DependencyGraph(tuple(equations_variables(gamma)), tuple(edges))


def propagate_depths(
    gamma: Iterable[FlatEquation],
    delta: Mapping[str, int],
    bound: int,
) -> DepthMap | BoundExceeded:
    """
    Applique Uh (arête h, +1) et UL/UR (autres arêtes, +0) jusqu'au point fixe.

    Les arêtes des symboles libres propagent aussi la profondeur, comme
    celles de `+`. Le dépassement est testé à chaque mise à jour, ce qui
    garantit l'arrêt sur un graphe cyclique.
    """
    graph = build_graph(gamma)
    depths: DepthMap = dict(delta)
    for v in graph.vertices:
        depths.setdefault(v, 0)
    for v, d in depths.items():
        if d > bound:
            return BoundExceeded(v, d, bound)

    outgoing: dict[str, list[Edge]] = {}
    for edge in graph.edges:
        outgoing.setdefault(edge.source, []).append(edge)

    pending = deque(graph.vertices)
    queued = set(pending)
    while pending:
        source = pending.popleft()
        queued.discard(source)
        for edge in outgoing.get(source, ()):
            wanted = depths[source] + edge.weight
            if depths[edge.target] >= wanted:
                continue
            if wanted > bound:
                logger.debug("BC: %s atteint %d > %d", edge.target, wanted, bound)
                return BoundExceeded(edge.target, wanted, bound)
            depths[edge.target] = wanted
            if edge.target not in queued:
                pending.append(edge.target)
                queued.add(edge.target)
    return depths


def max_val(delta: Mapping[str, int]) -> int:
    return max(delta.values(), default=0)
