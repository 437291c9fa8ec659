"""
Exceptions personnalisées pour achunify.
Permet une gestion d'erreurs claire et structurée.

⊥ (absence de solution) n'est jamais une exception : c'est une valeur
retournée par le moteur.
"""


class AchUnifyError(Exception):
    """Exception de base pour toutes les erreurs de l'application"""

    def __init__(self, message: str, details: dict | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} - Détails: {self.details}"
        return self.message


# ============================================
# EXCEPTIONS D'ENTRÉE (fichier problème)
# ============================================

class InputError(AchUnifyError):
    """Erreur dans un fichier problème ou une option utilisateur"""
    pass


class ProblemSyntaxError(InputError):
    """Erreur de syntaxe localisée (ligne, colonne)"""

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(
            f"Erreur de syntaxe ligne {line}, colonne {column}: {reason}",
            {"line": line, "column": column, "reason": reason}
        )
        self.line = line
        self.column = column


class UndeclaredIdentifierError(InputError):
    """Identifiant utilisé comme variable ou constante sans déclaration"""

    def __init__(self, name: str, line: int, column: int):
        super().__init__(
            f"Identifiant non déclaré: {name}",
            {"identifier": name, "line": line, "column": column}
        )
        self.line = line
        self.column = column


class ArityMismatchError(InputError):
    """Symbole libre utilisé avec deux arités différentes"""

    def __init__(self, name: str, expected: int, received: int, line: int = 0, column: int = 0):
        super().__init__(
            f"Arité incohérente pour {name}: {received} au lieu de {expected}",
            {
                "symbol": name,
                "expected": expected,
                "received": received,
                "line": line,
                "column": column
            }
        )
        self.line = line
        self.column = column


class ReservedIdentifierError(InputError):
    """Identifiant utilisateur dans l'espace réservé aux variables fraîches"""

    def __init__(self, name: str, line: int, column: int):
        super().__init__(
            f"Identifiant réservé: {name}",
            {"identifier": name, "line": line, "column": column}
        )
        self.line = line
        self.column = column


class InvalidBoundError(InputError):
    """Borne κ négative ou non entière"""

    def __init__(self, received: object):
        super().__init__(
            f"Borne invalide: {received!r}",
            {"received": received, "expected": "entier naturel"}
        )


class InvalidLimitError(InputError):
    """Limite de ressources négative ou non entière"""

    def __init__(self, name: str, received: object):
        super().__init__(
            f"Limite invalide pour {name}: {received!r}",
            {"name": name, "received": received, "expected": "entier naturel"}
        )


# ============================================
# EXCEPTIONS SUR LES TERMES
# ============================================

class TermError(AchUnifyError):
    """Erreur de construction de terme"""
    pass


class MalformedTermError(TermError):
    """Terme dont l'arité ne correspond pas à son symbole de tête"""

    def __init__(self, symbol: str, expected: str, received: int):
        super().__init__(
            f"Terme mal formé: {symbol} attend {expected} argument(s), reçu {received}",
            {"symbol": symbol, "expected": expected, "received": received}
        )


class SignatureError(TermError):
    """Un même nom associé à deux sortes ou deux arités"""

    def __init__(self, name: str, first: str, second: str):
        super().__init__(
            f"Signature incohérente pour {name}",
            {"name": name, "first": first, "second": second}
        )


# ============================================
# EXCEPTIONS DU MOTEUR
# ============================================

class EngineError(AchUnifyError):
    """Erreur interne du moteur d'inférence"""
    pass


class SubstitutionInvariantError(EngineError):
    """Composition sur une variable déjà liée"""

    def __init__(self, variable: str):
        super().__init__(
            f"Variable déjà dans le domaine de la substitution: {variable}",
            {"variable": variable}
        )


class ResourceLimitError(EngineError):
    """Limite de branches, d'étapes, de temps ou de tours AC atteinte"""

    def __init__(self, kind: str, limit: int):
        super().__init__(
            f"Limite de ressources atteinte: {kind} > {limit}",
            {"kind": kind, "limit": limit}
        )
        self.kind = kind
        self.limit = limit


class SoundnessError(EngineError):
    """Un unificateur émis ne passe pas la vérification de l'oracle"""

    def __init__(self, unifier: dict[str, str]):
        super().__init__(
            "Unificateur non vérifié par l'oracle",
            {"unifier": unifier}
        )


# ============================================
# EXCEPTIONS DE L'ORACLE
# ============================================

class OracleError(AchUnifyError):
    """Erreur de l'oracle de vérification"""
    pass


class UniverseTooLargeError(OracleError):
    """Espace de recherche au-delà de la garde configurée"""

    def __init__(self, candidates: int, limit: int):
        super().__init__(
            f"Univers trop grand: plus de {limit} candidats",
            {"candidates": candidates, "limit": limit}
        )


# ============================================
# EXCEPTIONS DU CORPUS DE RÉFÉRENCE
# ============================================

class CorpusError(AchUnifyError):
    """Erreur liée au corpus de banc d'essai"""
    pass


class CorpusLoadError(CorpusError):
    """Erreur lors du chargement du fichier d'attentes"""

    def __init__(self, file_path: str, original_error: Exception):
        super().__init__(
            f"Impossible de charger le corpus: {file_path}",
            {
                "file_path": file_path,
                "error_type": type(original_error).__name__,
                "error_message": str(original_error)
            }
        )


class InvalidCorpusFormatError(CorpusError):
    """Format de fichier d'attentes invalide (colonnes manquantes, etc.)"""

    def __init__(self, expected_format: str, received_format: str):
        super().__init__(
            "Format de corpus invalide",
            {
                "expected": expected_format,
                "received": received_format
            }
        )


# ============================================
# HELPER FUNCTIONS
# ============================================

def handle_exception(exc: Exception) -> tuple[str, dict]:
    """
    Convertit une exception en message utilisateur.

    Returns:
        tuple: (message_utilisateur, détails_techniques)
    """
    if isinstance(exc, AchUnifyError):
        return exc.message, exc.details

    return (
        "Une erreur inattendue s'est produite.",
        {"error_type": type(exc).__name__, "message": str(exc)}
    )
