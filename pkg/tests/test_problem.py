"""
Tests de l'aplatissement, du graphe de dépendances et des h-profondeurs.
"""

import random
from functools import cache

import pytest
from hypothesis import given, settings, strategies as st

from src.core.exceptions import MalformedTermError
from src.problem.depth import BoundExceeded, build_graph, max_val, propagate_depths
from src.problem.equations import FreeEq, FreshVarSource, HEq, SumEq, VarVar, equation_from_binding
from src.problem.flattening import FBS, FU, ORIENT, flatten
from src.terms.substitution import Substitution
from src.terms.term import Symbol, SymbolKind, canonicalize, const
from tests.conftest import equation_systems, flat_systems, t


def _flatten(*pairs):
    return flatten([(t(s), t(u)) for s, u in pairs], FreshVarSource())


def _random_order_depths(gamma, bound: int, rnd: random.Random):
    """Mises à jour une arête à la fois, dans un ordre tiré au hasard ; None si κ est dépassé."""
    edges = list(build_graph(gamma).edges)
    depths = {v: 0 for eq in gamma for v in eq.variables}
    changed = True
    while changed:
        changed = False
        rnd.shuffle(edges)
        for edge in edges:
            wanted = depths[edge.source] + edge.weight
            if depths[edge.target] < wanted:
                if wanted > bound:
                    return None
                depths[edge.target] = wanted
                changed = True
    return depths


def _longest_h_paths(gamma) -> dict[str, int]:
    """Plus grand nombre d'arêtes h sur un chemin qui aboutit à chaque variable (graphe acyclique)."""
    incoming: dict[str, list[tuple[str, int]]] = {}
    for eq in gamma:
        if isinstance(eq, VarVar):
            continue
        weight = 1 if isinstance(eq, HEq) else 0
        for y in eq.rhs_variables:
            incoming.setdefault(y, []).append((eq.lhs, weight))

    @cache
    def depth(x: str) -> int:
        return max((depth(s) + w for s, w in incoming.get(x, ())), default=0)

    return {v: depth(v) for eq in gamma for v in eq.variables}


def _expand_back(equations) -> set[frozenset]:
    """Remplace les variables fraîches définies par leur terme et regroupe les équations."""
    fresh = FreshVarSource()
    used = {v for eq in equations for v in eq.rhs_variables}
    definitions = {eq.lhs: eq for eq in equations if fresh.is_fresh(eq.lhs) and eq.lhs in used}

    resolved: dict = {}

    def resolve(name: str):
        if name not in resolved:
            rhs = definitions[name].rhs_term()
            resolved[name] = Substitution({v: resolve(v) for v in rhs.variables if v in definitions}).apply(rhs)
        return resolved[name]

    def expand(term):
        return Substitution({v: resolve(v) for v in term.variables if v in definitions}).apply(term)

    pairs: set[frozenset] = set()
    roots: dict[str, list] = {}
    for eq in equations:
        if eq.lhs in definitions:
            continue
        if fresh.is_fresh(eq.lhs):
            roots.setdefault(eq.lhs, []).append(expand(eq.rhs_term()))
        else:
            pairs.add(frozenset((expand(eq.as_pair()[0]), expand(eq.rhs_term()))))
    for sides in roots.values():
        pairs.add(frozenset(sides))
    return pairs


# ============================================
# ÉQUATIONS PLATES
# ============================================

class TestFlatEquations:

    def test_sum_arguments_are_sorted(self):
        assert SumEq("x", ("z", "a1")).args == ("a1", "z")

    def test_sum_needs_two_arguments(self):
        with pytest.raises(MalformedTermError):
            SumEq("x", ("y",))

    def test_heads(self):
        f = Symbol("f", SymbolKind.FREE, 2)
        assert [eq.head for eq in (VarVar("x", "y"), HEq("x", "y"), SumEq("x", ("y", "z")), FreeEq("x", f, ("y", "z")))] \
            == ["=", "h", "+", "f"]

    def test_constant_is_free_equation_of_arity_zero(self):
        eq = equation_from_binding("x", const("a"))
        assert isinstance(eq, FreeEq)
        assert eq.args == ()
        assert eq.rhs_term() == const("a")

    def test_rename(self):
        assert SumEq("x", ("y", "z")).rename({"y": "w", "x": "u"}) == SumEq("u", ("w", "z"))


class TestFreshVarSource:

    def test_sequence(self):
        fresh = FreshVarSource()
        assert [fresh.fresh(), fresh.fresh()] == ["_v1", "_v2"]

    def test_copy_is_independent(self):
        fresh = FreshVarSource()
        fresh.fresh()
        other = fresh.copy()
        assert other.fresh() == "_v2"
        assert fresh.fresh() == "_v2"

    def test_forks_never_collide(self):
        fresh = FreshVarSource()
        fresh.fresh()
        names = set()
        for branch in (1, 2, 3):
            child = fresh.fork(branch)
            names.update(child.fresh() for _ in range(3))
        names.update(fresh.fresh() for _ in range(20))
        assert len(names) == 29
        assert all(fresh.is_fresh(name) for name in names)


# ============================================
# APLATISSEMENT
# ============================================

class TestFlatten:

    def test_already_flat(self):
        result = _flatten(("x", "y"))
        assert result.equations == (VarVar("x", "y"),)
        assert not result.rule_counts

    def test_both_sides_non_variable(self):
        result = _flatten(("h(h(x))", "(s + w) + (y + z)"))
        assert result.equations == (
            HEq("_v2", "x"),
            HEq("_v1", "_v2"),
            SumEq("_v1", ("s", "w", "y", "z")),
        )
        assert result.rule_counts[FBS] == 1
        assert result.rule_counts[FU] == 1

    def test_orient(self):
        result = _flatten(("h(y) + a", "x"))
        assert result.rule_counts[ORIENT] == 1
        assert all(eq.lhs != "a" for eq in result.equations)
        assert SumEq("x", ("_v1", "_v2")) in result.equations

    def test_nested_h(self):
        result = _flatten(("x", "h(h(h(y)))"))
        assert result.equations == (HEq("_v2", "y"), HEq("_v1", "_v2"), HEq("x", "_v1"))
        assert result.depths == {"_v2": 0, "y": 0, "_v1": 0, "x": 0}

    def test_duplicates_are_removed(self):
        result = _flatten(("x", "y"), ("x", "y"))
        assert result.equations == (VarVar("x", "y"),)

    @settings(max_examples=200, deadline=None)
    @given(equation_systems())
    def test_substituting_back_reconstructs_the_problem(self, equations):
        result = flatten(equations, FreshVarSource())
        original = {frozenset((canonicalize(s), canonicalize(u))) for s, u in equations}
        assert _expand_back(result.equations) == original


# ============================================
# GRAPHE ET PROFONDEURS
# ============================================

class TestDepths:

    def test_single_h_edge(self):
        graph = build_graph([HEq("x", "y")])
        assert [(e.source, e.label, e.target, e.weight) for e in graph.edges] == [("x", "h", "y", 1)]

    def test_three_h_edges(self):
        result = _flatten(("x", "h(h(h(y)))"))
        graph = build_graph(result.equations)
        assert len(graph.h_edges()) == 3
        depths = propagate_depths(result.equations, result.depths, 10)
        assert depths == {"x": 0, "_v1": 1, "_v2": 2, "y": 3}

    def test_sum_edges_propagate_depth(self):
        gamma = [SumEq("z", ("x", "y")), HEq("x1", "v"), HEq("v", "z")]
        graph = build_graph(gamma)
        assert sum(1 for e in graph.h_edges() if e.source in ("x1", "v")) == 2
        depths = propagate_depths(gamma, {}, 10)
        assert depths == {"z": 2, "x": 2, "y": 2, "x1": 0, "v": 1}

    def test_bound_exceeded(self):
        gamma = [HEq("x", "y"), HEq("y", "z")]
        exceeded = propagate_depths(gamma, {}, 1)
        assert isinstance(exceeded, BoundExceeded)
        assert (exceeded.variable, exceeded.depth) == ("z", 2)

    @pytest.mark.parametrize("bound", [0, 3, 20])
    def test_h_cycle_always_exceeds(self, bound):
        gamma = [HEq("x", "y"), HEq("y", "x")]
        assert isinstance(propagate_depths(gamma, {}, bound), BoundExceeded)

    def test_cycle_without_h_edge_terminates(self):
        gamma = [SumEq("x", ("y", "z")), SumEq("y", ("x", "w"))]
        assert propagate_depths(gamma, {"x": 1}, 5) == {"x": 1, "y": 1, "z": 1, "w": 1}

    def test_depths_never_decrease(self):
        depths = propagate_depths([HEq("x", "y")], {"y": 4, "x": 0}, 10)
        assert depths["y"] == 4

    def test_max_val(self):
        assert max_val({"x": 0, "y": 3}) == 3
        assert max_val({"x": 0, "y": 0}) == 0
        assert max_val({}) == 0

    def test_depths_after_two_splittings(self):
        gamma = [HEq("v", "v1"), SumEq("v1", ("v11", "v12")), HEq("y1", "v11"), HEq("y2", "v12"), HEq("v1", "x")]
        before = {"x": 2, "y1": 0, "y2": 0, "v": 0, "v1": 1, "v11": 0, "v12": 0}
        depths = propagate_depths(gamma, before, 10)
        assert (depths["v11"], depths["v12"], depths["x"]) == (1, 1, 2)

        gamma = [
            HEq("v", "v1"), HEq("y1", "v11"), HEq("y2", "v12"), HEq("v1", "x"),
            SumEq("x", ("v13", "v14")), HEq("v11", "v13"), HEq("v12", "v14"),
        ]
        depths = propagate_depths(gamma, {**depths, "v13": 0, "v14": 0}, 10)
        assert depths == {
            "x": 2, "y1": 0, "y2": 0, "v": 0, "v1": 1, "v11": 1, "v12": 1, "v13": 2, "v14": 2,
        }

    def test_second_splitting_exceeds_bound_two(self):
        gamma = [HEq("v", "y"), SumEq("y", ("v11", "v12")), HEq("y", "v11"), HEq("x", "v12")]
        depths = propagate_depths(gamma, {"x": 0, "y": 1, "v": 0, "v11": 0, "v12": 0}, 2)
        assert depths == {"x": 0, "y": 1, "v": 0, "v11": 2, "v12": 1}

        gamma = [
            HEq("v", "y"), SumEq("v11", ("v13", "v14")), HEq("v11", "v13"),
            HEq("v12", "v14"), HEq("y", "v11"), HEq("x", "v12"),
        ]
        exceeded = propagate_depths(gamma, {**depths, "v13": 0, "v14": 0}, 2)
        assert exceeded == BoundExceeded("v13", 3, 2)
        within = propagate_depths(gamma, {**depths, "v13": 0, "v14": 0}, 3)
        assert (within["v13"], within["v14"]) == (3, 2)

    @settings(max_examples=200, deadline=None)
    @given(flat_systems(), st.randoms(use_true_random=False))
    def test_update_order_does_not_change_the_fixpoint(self, gamma, rnd):
        expected = propagate_depths(gamma, {}, 4)
        shuffled = list(gamma)
        rnd.shuffle(shuffled)
        reordered = propagate_depths(shuffled, {}, 4)
        chaotic = _random_order_depths(gamma, 4, rnd)
        if isinstance(expected, BoundExceeded):
            assert isinstance(reordered, BoundExceeded)
            assert chaotic is None
        else:
            assert reordered == expected
            assert chaotic == expected

    @settings(max_examples=200, deadline=None)
    @given(flat_systems(acyclic=True))
    def test_acyclic_depths_are_longest_h_paths(self, gamma):
        assert propagate_depths(gamma, {}, 100) == _longest_h_paths(gamma)
