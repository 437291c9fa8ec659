"""
Filtrage modulo ACh sur formes normales R1.

Une forme normale est un multiensemble d'atomes `h^k(c)` où `c` est une
variable, une constante ou une application libre. Le filtrage choisit, pour
chaque atome du motif, les atomes de la cible qu'il couvre ; les variables
de la cible sont rigides.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Iterator

from src.core.exceptions import UniverseTooLargeError
from src.terms.rewriting import normalize_r1, strip_h, wrap_h
from src.terms.substitution import Substitution
from src.terms.term import Term, plus, summands, var

Binding = dict[str, Term]

PATTERN_PREFIX = "_m"


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.spent = 0

    def tick(self) -> None:
        self.spent += 1
        if self.limit is not None and self.spent > self.limit:
            raise UniverseTooLargeError(self.spent, self.limit)


def _sub_multisets(atoms: list[Term]) -> Iterator[list[Term]]:
    """Sous-multiensembles non vides distincts, par taille croissante."""
    counts = Counter(atoms)
    distinct = sorted(counts, key=lambda t: t.sort_key)
    choices = [range(counts[a] + 1) for a in distinct]
    picks = [p for p in itertools.product(*choices) if any(p)]
    picks.sort(key=lambda p: (sum(p), p))
    for pick in picks:
        yield [a for a, n in zip(distinct, pick) for _ in range(n)]


def _remove(target: list[Term], part: Iterable[Term]) -> list[Term] | None:
    remaining = Counter(target)
    for atom in part:
        if remaining[atom] == 0:
            return None
        remaining[atom] -= 1
    return sorted(remaining.elements(), key=lambda t: t.sort_key)


def _match_atoms(
    pattern: list[Term],
    target: list[Term],
    bindable: frozenset[str],
    eta: Binding,
    budget: _Budget,
) -> Iterator[Binding]:
    budget.tick()
    if not pattern:
        if not target:
            yield eta
        return
    if len(pattern) > len(target):
        return

    # Les atomes rigides d'abord : ils réduisent le plus l'espace de recherche
    rigid_index = None
    for i, atom in enumerate(pattern):
        _, core = strip_h(atom)
        if not (core.is_var and core.name in bindable and core.name not in eta):
            rigid_index = i
            break

    if rigid_index is not None:
        atom = pattern[rigid_index]
        rest = pattern[:rigid_index] + pattern[rigid_index + 1:]
        k, core = strip_h(atom)
        if core.is_var and core.name in eta:
            image = normalize_r1(wrap_h(k, eta[core.name]))
            remaining = _remove(target, summands(image))
            if remaining is not None:
                yield from _match_atoms(rest, remaining, bindable, eta, budget)
            return
        tried: set[Term] = set()
        for j, candidate in enumerate(target):
            if candidate in tried:
                continue
            tried.add(candidate)
            ck, ccore = strip_h(candidate)
            if ck != k or ccore.head != core.head:
                continue
            remaining = target[:j] + target[j + 1:]
            if not core.args:
                yield from _match_atoms(rest, remaining, bindable, eta, budget)
                continue
            for extended in _match_pairs(list(zip(core.args, ccore.args)), bindable, eta, budget):
                yield from _match_atoms(rest, remaining, bindable, extended, budget)
        return

    # Variable libre sous k symboles h : elle prend une sous-somme de la cible
    atom = pattern[0]
    k, core = strip_h(atom)
    eligible = [t for t in target if strip_h(t)[0] >= k]
    for part in _sub_multisets(eligible):
        value = plus(*(_strip(k, t) for t in part))
        remaining = _remove(target, part)
        extended = dict(eta)
        extended[core.name] = value
        yield from _match_atoms(pattern[1:], remaining, bindable, extended, budget)


def _strip(k: int, t: Term) -> Term:
    for _ in range(k):
        t = t.args[0]
    return t


def _match_pairs(
    pairs: list[tuple[Term, Term]],
    bindable: frozenset[str],
    eta: Binding,
    budget: _Budget,
) -> Iterator[Binding]:
    if not pairs:
        yield eta
        return
    (pattern, target), rest = pairs[0], pairs[1:]
    for extended in _match_atoms(list(summands(pattern)), list(summands(target)), bindable, eta, budget):
        yield from _match_pairs(rest, bindable, extended, budget)


def iter_matches(
    pairs: Iterable[tuple[Term, Term]],
    bindable: Iterable[str],
    limit: int | None = None,
) -> Iterator[Binding]:
    """Toutes les liaisons η telles que motif·η =_ACh cible, pour chaque paire."""
    normal = [(normalize_r1(p), normalize_r1(t)) for p, t in pairs]
    yield from _match_pairs(normal, frozenset(bindable), {}, _Budget(limit))


def is_more_general(
    general: Substitution,
    specific: Substitution,
    variables: Iterable[str],
    limit: int | None = None,
) -> bool:
    """
    Vrai si `specific` est une instance de `general` sur `variables`
    (il existe η tel que x·specific =_ACh x·general·η pour tout x).

    Les variables du motif sont renommées à part ; celles de la cible
    restent rigides.
    """
    names = sorted(set(variables))
    pattern_vars: list[str] = []
    for x in names:
        for v in sorted(general.image(x).variables):
            if v not in pattern_vars:
                pattern_vars.append(v)
    apart = {v: f"{PATTERN_PREFIX}{i}" for i, v in enumerate(pattern_vars, start=1)}
    renaming = Substitution({v: var(n) for v, n in apart.items()})
    pairs = [(renaming.apply(general.image(x)), specific.image(x)) for x in names]
    # Les paires les plus rigides réduisent le plus l'espace de recherche
    pairs.sort(key=lambda p: (len(p[0].variables), p[0].sort_key))
    return next(iter_matches(pairs, apart.values(), limit), None) is not None
