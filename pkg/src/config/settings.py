"""
Configuration centralisée d'achunify.
Toutes les limites du moteur, de l'oracle et du banc d'essai sont gérées ici.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuration de l'application achunify"""

    BASE_DIR: Path = Path(__file__).resolve().parent.parent.parent
    BENCH_CORPUS_PATH: str = "data/table1"

    @property
    def bench_corpus_full_path(self) -> Path:
        """Chemin complet du corpus de référence"""
        return self.BASE_DIR / self.BENCH_CORPUS_PATH

    # ============================================
    # BORNE κ
    # ============================================
    DEFAULT_BOUND: int = 10

    # ============================================
    # LIMITES DU MOTEUR
    # ============================================
    MAX_BRANCHES: int = 100_000
    MAX_STEPS: int = 1_000_000
    TIMEOUT_MS: Optional[int] = None
    MAX_AC_ROUNDS: int = 4
    MAX_AC_SUBSETS: int = 1_000_000
    MAX_AC_CANDIDATES: int = 100_000
    EXPLORATION: Literal["depth_first", "breadth_first"] = "depth_first"

    # ============================================
    # VARIABLES FRAÎCHES
    # ============================================
    FRESH_PREFIX: str = "_v"

    # ============================================
    # ORACLE
    # ============================================
    ORACLE_MAX_CANDIDATES: int = 10_000_000

    # ============================================
    # LOGGING
    # ============================================
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    # Configuration Pydantic pour charger depuis .env
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="ACHUNIFY_",
        case_sensitive=True,
        extra="ignore",
    )

    def __repr__(self) -> str:
        return (
            f"Settings("
            f"bound={self.DEFAULT_BOUND}, "
            f"max_branches={self.MAX_BRANCHES}, "
            f"exploration={self.EXPLORATION})"
        )


# Instance globale singleton
settings = Settings()
