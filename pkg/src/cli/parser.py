"""
Lecture des fichiers problème.

En-tête de lignes `clé: valeur` (bound, vars, consts), puis `problem:` et
une équation `s =? t` par ligne. `#` commence un commentaire.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedEOF, UnexpectedInput

from src.config.settings import settings
from src.core.exceptions import (
    ArityMismatchError,
    ProblemSyntaxError,
    ReservedIdentifierError,
    UndeclaredIdentifierError,
)
from src.core.models import ProblemFile
from src.terms.term import H_NAME, Term, app, const, h, plus, var

GRAMMAR = r"""
    equation: sum "=?" sum
    sum: _atom ("+" _atom)*
    _atom: call | name | "(" sum ")"
    call: NAME "(" sum ("," sum)* ")"
    name: NAME

    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS_INLINE
    %ignore WS_INLINE
"""

IDENTIFIER = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")
HEADER_KEYS = ("bound", "vars", "consts")
PROBLEM_KEY = "problem"


@lru_cache(maxsize=1)
def _lark() -> Lark:
    return Lark(GRAMMAR, start=["equation", "sum"], parser="lalr")


class _TermBuilder:
    """Construit les termes d'une ligne en vérifiant les déclarations."""

    def __init__(
        self,
        line: int,
        variables: set[str],
        constants: set[str],
        free_symbols: dict[str, int],
        allow_reserved: bool,
    ):
        self.line = line
        self.variables = variables
        self.constants = constants
        self.free_symbols = free_symbols
        self.allow_reserved = allow_reserved

    def _check_name(self, token: Token) -> str:
        name = str(token)
        if name.startswith(settings.FRESH_PREFIX):
            if self.allow_reserved and name[len(settings.FRESH_PREFIX):]:
                return name
            raise ReservedIdentifierError(name, self.line, token.column)
        if not IDENTIFIER.fullmatch(name):
            raise ProblemSyntaxError(self.line, token.column, f"identifiant invalide: {name}")
        return name

    def build(self, tree: Tree) -> Term:
        if tree.data == "sum":
            return plus(*(self.build(child) for child in tree.children))
        if tree.data == "name":
            return self._leaf(tree.children[0])
        return self._call(tree.children[0], tree.children[1:])

    def _leaf(self, token: Token) -> Term:
        name = self._check_name(token)
        if name in self.variables or name.startswith(settings.FRESH_PREFIX):
            return var(name)
        if name in self.constants:
            return const(name)
        if name == H_NAME or name in self.free_symbols:
            expected = 1 if name == H_NAME else self.free_symbols[name]
            raise ArityMismatchError(name, expected, 0, self.line, token.column)
        raise UndeclaredIdentifierError(name, self.line, token.column)

    def _call(self, token: Token, arguments: list[Tree]) -> Term:
        name = self._check_name(token)
        args = [self.build(a) for a in arguments]
        if name == H_NAME:
            if len(args) != 1:
                raise ArityMismatchError(name, 1, len(args), self.line, token.column)
            return h(args[0])
        if name in self.variables or name in self.constants:
            raise ProblemSyntaxError(self.line, token.column, f"{name} est déclaré, pas un symbole de fonction")
        expected = self.free_symbols.setdefault(name, len(args))
        if expected != len(args):
            raise ArityMismatchError(name, expected, len(args), self.line, token.column)
        return app(name, *args)


def _syntax_error(exc: UnexpectedInput, line: int, text: str) -> ProblemSyntaxError:
    column = getattr(exc, "column", -1)
    if isinstance(exc, UnexpectedEOF) or column is None or column < 1:
        column = len(text) + 1
    return ProblemSyntaxError(line, column, "équation ou terme mal formé")


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _declared(names: str, line: int, offset: int, builder_check: set[str]) -> list[str]:
    declared: list[str] = []
    for match in re.finditer(r"\S+", names):
        name, column = match.group(), offset + match.start() + 1
        if name.startswith(settings.FRESH_PREFIX):
            raise ReservedIdentifierError(name, line, column)
        if not IDENTIFIER.fullmatch(name) or name == H_NAME:
            raise ProblemSyntaxError(line, column, f"identifiant invalide: {name}")
        if name in builder_check:
            raise ProblemSyntaxError(line, column, f"{name} déclaré deux fois")
        builder_check.add(name)
        declared.append(name)
    return declared


def parse_problem(text: bytes | str) -> ProblemFile:
    """
    Args:
        text: contenu du fichier, en UTF-8

    Returns:
        ProblemFile: déclarations, symboles libres inférés et équations canoniques

    Raises:
        InputError: identifiant non déclaré ou réservé, arité incohérente,
        erreur de syntaxe (chacune avec ligne et colonne)
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProblemSyntaxError(1, 1, f"UTF-8 invalide ({exc.reason})")

    bound: int | None = None
    variables: list[str] = []
    constants: list[str] = []
    seen: set[str] = set()
    free_symbols: dict[str, int] = {}
    equations: list[tuple[Term, Term]] = []
    in_problem = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        if in_problem:
            builder = _TermBuilder(line_no, set(variables), set(constants), free_symbols, False)
            try:
                tree = _lark().parse(content, start="equation")
            except UnexpectedInput as exc:
                raise _syntax_error(exc, line_no, content)
            left, right = tree.children
            equations.append((builder.build(left), builder.build(right)))
            continue

        key, sep, value = content.partition(":")
        key = key.strip()
        offset = len(content) - len(content.lstrip())
        if not sep or key not in (*HEADER_KEYS, PROBLEM_KEY):
            raise ProblemSyntaxError(line_no, offset + 1, f"en-tête inattendu: {content.strip()}")
        value_offset = content.index(":") + 1
        if key == PROBLEM_KEY:
            if value.strip():
                raise ProblemSyntaxError(line_no, value_offset + 1, "rien n'est attendu après problem:")
            in_problem = True
        elif key == "bound":
            if bound is not None:
                raise ProblemSyntaxError(line_no, offset + 1, "bound déjà déclaré")
            if not value.strip().isdigit():
                raise ProblemSyntaxError(line_no, value_offset + 1, "bound attend un entier naturel")
            bound = int(value.strip())
        elif key == "vars":
            variables.extend(_declared(value, line_no, value_offset, seen))
        else:
            constants.extend(_declared(value, line_no, value_offset, seen))

    if not in_problem:
        line_count = len(text.splitlines()) or 1
        raise ProblemSyntaxError(line_count, 1, "section problem: absente")

    return ProblemFile(
        bound=bound,
        variables=variables,
        constants=constants,
        free_symbols=free_symbols,
        equations=equations,
    )


def parse_term(
    text: str,
    variables: Iterable[str] = (),
    constants: Iterable[str] = (),
    free_symbols: dict[str, int] | None = None,
    allow_reserved: bool = False,
) -> Term:
    """Lit un terme isolé ; `allow_reserved` accepte les variables fraîches imprimées."""
    builder = _TermBuilder(1, set(variables), set(constants), dict(free_symbols or {}), allow_reserved)
    try:
        tree = _lark().parse(text, start="sum")
    except UnexpectedInput as exc:
        raise _syntax_error(exc, 1, text)
    return builder.build(tree)
