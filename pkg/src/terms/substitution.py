"""
Substitutions idempotentes et renommage canonique des variables fraîches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from src.core.exceptions import SubstitutionInvariantError
from src.terms.term import Term, format_term, plus, var

# Au-delà, les égalités de profils sont départagées sans recherche exhaustive
MAX_RENAMING_PERMUTATIONS = 5040


@dataclass(frozen=True)
class Substitution:
    """Application finie variable -> terme canonique."""

    bindings: Mapping[str, Term] = field(default_factory=dict)

    # ============================================
    # ACCÈS
    # ============================================

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.bindings)

    @property
    def range_variables(self) -> frozenset[str]:
        found: set[str] = set()
        for t in self.bindings.values():
            found |= t.variables
        return frozenset(found)

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def __getitem__(self, name: str) -> Term:
        return self.bindings[name]

    def __len__(self) -> int:
        return len(self.bindings)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.bindings))

    def items(self) -> list[tuple[str, Term]]:
        return [(x, self.bindings[x]) for x in sorted(self.bindings)]

    def image(self, name: str) -> Term:
        """Image d'une variable ; la variable elle-même hors du domaine."""
        return self.bindings.get(name) or var(name)

    # ============================================
    # OPÉRATIONS
    # ============================================

    def apply(self, t: Term) -> Term:
        if not self.bindings or t.variables.isdisjoint(self.bindings):
            return t
        if t.is_var:
            return self.bindings[t.name]
        args = tuple(self.apply(a) for a in t.args)
        if t.is_sum:
            return plus(*args)
        return Term(t.head, args)

    def compose(self, name: str, t: Term) -> Substitution:
        """σ{x ↦ t} ∪ {x ↦ t}."""
        if name in self.bindings:
            raise SubstitutionInvariantError(name)
        t = self.apply(t)
        if name in t.variables:
            raise SubstitutionInvariantError(name)
        single = Substitution({name: t})
        updated = {x: single.apply(s) for x, s in self.bindings.items()}
        updated[name] = t
        return Substitution(updated)

    def restrict(self, names: Iterable[str]) -> Substitution:
        keep = set(names)
        return Substitution({x: t for x, t in self.bindings.items() if x in keep})

    def rename(self, mapping: Mapping[str, str]) -> Substitution:
        """Renomme les variables du codomaine (le domaine est inchangé)."""
        renaming = Substitution({old: var(new) for old, new in mapping.items()})
        return Substitution({x: renaming.apply(t) for x, t in self.bindings.items()})

    def sort_key(self) -> tuple:
        return tuple((x, t.sort_key) for x, t in self.items())

    def as_strings(self) -> dict[str, str]:
        return {x: format_term(t) for x, t in self.items()}

    def __str__(self) -> str:
        inner = ", ".join(f"{x} ↦ {format_term(t)}" for x, t in self.items())
        return "{" + inner + "}"


def apply(sigma: Substitution, t: Term) -> Term:
    return sigma.apply(t)


def compose(sigma: Substitution, name: str, t: Term) -> Substitution:
    return sigma.compose(name, t)


# ============================================
# RENOMMAGE CANONIQUE
# ============================================

def _occurrence_profile(sigma: Substitution, name: str) -> tuple:
    """Positions d'une variable, indépendantes des noms des autres variables fraîches."""
    profile = []
    for x, t in sigma.items():
        paths: list[tuple] = []
        _collect_paths(t, name, (), paths)
        if paths:
            profile.append((x, tuple(sorted(paths))))
    return tuple(profile)


def _collect_paths(t: Term, name: str, prefix: tuple, out: list[tuple]) -> None:
    if t.is_var:
        if t.name == name:
            out.append(prefix)
        return
    for index, arg in enumerate(t.args):
        # Les enfants d'une somme ne sont pas ordonnés : pas d'indice
        step = (t.head.name,) if t.is_sum else (t.head.name, index)
        _collect_paths(arg, name, prefix + (step,), out)


def _masked(t: Term, is_fresh: Callable[[str], bool], labels: Mapping[str, str]) -> str:
    """Forme imprimée : variables fraîches rangées par leur rang, les autres en `?`."""
    if t.is_var:
        return labels.get(t.name, "?") if is_fresh(t.name) else t.name
    if not t.args:
        return t.name
    rendered = [_masked(a, is_fresh, labels) for a in t.args]
    if t.is_sum:
        rendered.sort()
    return f"{t.name}(" + ", ".join(rendered) + ")"


def _first_occurrence_order(
    sigma: Substitution,
    is_fresh: Callable[[str], bool],
    ordered: list[list[str]],
) -> list[str]:
    """
    Range les variables fraîches une à une, groupe par groupe : à chaque
    rang, le candidat dont la forme imprimée partielle est la plus petite.
    Le résultat ne dépend pas des noms frais d'origine.
    """
    labels: dict[str, str] = {}
    sequence: list[str] = []
    images = [image for _, image in sigma.items()]
    for group in ordered:
        remaining = list(group)
        while remaining:
            rank = str(len(sequence) + 1)

            def printed(candidate: str) -> tuple[str, ...]:
                trial = {**labels, candidate: rank}
                return tuple(_masked(image, is_fresh, trial) for image in images)

            chosen = min(remaining, key=printed)
            remaining.remove(chosen)
            labels[chosen] = rank
            sequence.append(chosen)
    return sequence


def canonical_renaming(sigma: Substitution, is_fresh: Callable[[str], bool], prefix: str) -> Substitution:
    """
    Renomme les variables fraîches du codomaine en `prefix1, prefix2, …`.

    Deux substitutions égales à un renommage bijectif près des variables
    fraîches reçoivent la même forme (départage exhaustif des profils égaux
    tant que le nombre de permutations reste raisonnable ; au-delà, par
    ordre de première apparition dans la forme imprimée).
    """
    fresh = sorted(v for v in sigma.range_variables if is_fresh(v))
    if not fresh:
        return sigma

    groups: dict[tuple, list[str]] = {}
    for v in fresh:
        groups.setdefault(_occurrence_profile(sigma, v), []).append(v)
    ordered = [groups[key] for key in sorted(groups)]

    combinations = 1
    for group in ordered:
        for k in range(2, len(group) + 1):
            combinations *= k
    if combinations > MAX_RENAMING_PERMUTATIONS:
        candidates = [[_first_occurrence_order(sigma, is_fresh, ordered)]]
    else:
        candidates = [
            [list(p) for p in perm]
            for perm in itertools.product(*(itertools.permutations(g) for g in ordered))
        ]

    best: Substitution | None = None
    best_key: tuple | None = None
    for arrangement in candidates:
        sequence = [v for group in arrangement for v in group]
        mapping = {old: f"{prefix}{i}" for i, old in enumerate(sequence, start=1)}
        renamed = sigma.rename(mapping)
        key = renamed.sort_key()
        if best_key is None or key < best_key:
            best, best_key = renamed, key
    return best
