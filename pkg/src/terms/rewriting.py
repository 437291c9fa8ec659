"""
Égalité modulo AC et modulo ACh.

La règle `h(x1 + x2) -> h(x1) + h(x2)` est convergente modulo AC :
comparer les formes normales décide l'égalité ACh.
"""

from functools import lru_cache

from src.terms.term import SymbolKind, Term, h, plus


def ac_equal(s: Term, t: Term) -> bool:
    """Sur des formes canoniques, l'égalité AC est l'égalité structurelle."""
    return s == t


@lru_cache(maxsize=65536)
def normalize_r1(t: Term) -> Term:
    """Pousse chaque `h` sous les sommes, récursivement, puis recanonise."""
    if not t.args:
        return t
    if t.is_h:
        inner = normalize_r1(t.args[0])
        if inner.is_sum:
            return plus(*(normalize_r1(h(a)) for a in inner.args))
        return h(inner)
    args = tuple(normalize_r1(a) for a in t.args)
    if t.is_sum:
        return plus(*args)
    return Term(t.head, args)


def ach_equal(s: Term, t: Term) -> bool:
    return ac_equal(normalize_r1(s), normalize_r1(t))


def h_height(t: Term) -> int:
    if not t.args:
        return 0
    below = max(h_height(a) for a in t.args)
    return below + 1 if t.head.kind is SymbolKind.H else below


def strip_h(t: Term) -> tuple[int, Term]:
    """Décompose un atome normal en (nombre de `h` en tête, cœur)."""
    k = 0
    while t.is_h:
        t = t.args[0]
        k += 1
    return k, t


def wrap_h(k: int, t: Term) -> Term:
    for _ in range(k):
        t = h(t)
    return t
