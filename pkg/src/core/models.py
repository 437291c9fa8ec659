"""
Modèles de données Pydantic pour validation et typage.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.terms.term import Term


# ============================================
# TYPES PERSONNALISÉS
# ============================================

StatusType = Literal["unifiable", "no_solution", "resource_limit"]
FormatType = Literal["text", "json"]
PublishedStatusType = Literal["bottom", "yes"]


# ============================================
# FICHIER PROBLÈME
# ============================================

class ProblemFile(BaseModel):
    """Problème d'unification lu depuis un fichier"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bound: Optional[int] = Field(None, ge=0, description="Borne κ déclarée dans l'en-tête")
    variables: list[str] = Field(default_factory=list, description="Variables déclarées")
    constants: list[str] = Field(default_factory=list, description="Constantes déclarées")
    free_symbols: dict[str, int] = Field(default_factory=dict, description="Symboles libres et arités, inférés")
    equations: list[tuple[Term, Term]] = Field(default_factory=list, description="Équations s =? t")


# ============================================
# OPTIONS ET RAPPORT DE RÉSOLUTION
# ============================================

class SolveOptions(BaseModel):
    """Options de la commande `solve`"""

    bound: Optional[int] = Field(None, ge=0, description="Borne κ, prioritaire sur l'en-tête")
    format: FormatType = Field("text", description="Format de sortie")
    check: bool = Field(False, description="Vérifie chaque unificateur avec l'oracle")
    minimize: bool = Field(False, description="Retire les unificateurs redondants")
    max_branches: Optional[int] = Field(None, ge=1, description="Branches vivantes au plus")
    timeout_ms: Optional[int] = Field(None, ge=1, description="Temps maximal en millisecondes")
    trace: bool = Field(False, description="Conserve la suite des règles appliquées")


class SolveStats(BaseModel):
    """Statistiques d'une résolution"""

    rules: dict[str, int] = Field(default_factory=dict, description="Applications par règle")
    branches: int = Field(..., ge=1, description="Branches créées")
    ms: int = Field(..., ge=0, description="Temps écoulé")

    @field_validator("rules")
    @classmethod
    def sort_rules(cls, v: dict[str, int]) -> dict[str, int]:
        return dict(sorted(v.items()))


class SolveReport(BaseModel):
    """Réponse de `solve`, sérialisée telle quelle en JSON"""

    status: StatusType = Field(..., description="Statut global")
    bound: int = Field(..., ge=0, description="Borne κ utilisée")
    unifiers: list[dict[str, str]] = Field(default_factory=list, description="Unificateurs imprimés")
    stats: SolveStats


# ============================================
# ORACLE
# ============================================

class UniverseSpec(BaseModel):
    """Univers fini de termes clos pour l'énumération de l'oracle"""

    constants: list[str] = Field(default_factory=lambda: ["a", "b"], min_length=1)
    max_h_height: int = Field(2, ge=0)
    max_summands: int = Field(3, ge=1)
    free_symbols: dict[str, int] = Field(default_factory=dict, description="Symboles libres et arités")
    max_term_size: int = Field(3, ge=1, description="Taille maximale d'un argument de symbole libre")

    @field_validator("free_symbols")
    @classmethod
    def validate_arities(cls, v: dict[str, int]) -> dict[str, int]:
        if any(arity < 1 for arity in v.values()):
            raise ValueError("Les symboles libres ont une arité >= 1")
        return v


class CompletenessReport(BaseModel):
    """Unificateurs clos non couverts par l'ensemble retourné"""

    ground_unifiers: int = Field(..., ge=0)
    covered: int = Field(..., ge=0)
    uncovered: list[dict[str, str]] = Field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.uncovered


# ============================================
# BANC D'ESSAI
# ============================================

class BenchExpectation(BaseModel):
    """Une ligne de `expected.csv`"""

    file: str = Field(..., min_length=1, description="Fichier problème du corpus")
    published_ms: int = Field(..., ge=0, description="Temps publié (informatif)")
    status: PublishedStatusType = Field(..., description="Statut publié")
    count: int = Field(..., ge=0, description="Nombre de solutions publié")
    bound: int = Field(..., ge=0, description="Borne κ publiée")

    @field_validator("file")
    @classmethod
    def validate_non_empty(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("Le champ ne peut pas être vide")
        return v.strip()


class BenchRow(BaseModel):
    """Résultat d'un problème du banc d'essai"""

    file: str
    bound: int
    expected_status: PublishedStatusType
    expected_count: int
    published_ms: int
    status: StatusType
    status_match: bool
    raw_count: int
    minimized_count: int
    ms: int
