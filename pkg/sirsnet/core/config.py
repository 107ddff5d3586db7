"""
SirsNet - Configuration centralisée
Tolérances, plafonds et budgets numériques partagés par toutes les couches
"""

import json
import os
from typing import Any, Dict

from pydantic_settings import BaseSettings, SettingsConfigDict


class SirsNetSettings(BaseSettings):
    """Configuration principale de SirsNet (surchargée par les variables SIRSNET_*)"""

    model_config = SettingsConfigDict(env_prefix="SIRSNET_", env_file=".env", extra="ignore")

    # Chaîne exacte
    exact_max_nodes: int = 10
    prune_tol: float = 1e-15
    memory_budget_entries: int = 2 ** 26
    dense_switch_fraction: float = 1.0 / 3.0

    # Itération de la puissance
    spectral_tol: float = 1e-12
    spectral_max_iter: int = 100000

    # Point fixe endémique
    fixed_point_tol: float = 1e-12
    fixed_point_max_iter: int = 200000
    cycle_window: int = 64
    cycle_match_tol: float = 1e-9
    damping_min: float = 1.0 / 16.0
    damping_window: int = 4

    # Seuil et mélange
    regime_tol: float = 1e-9
    mixing_max_steps: int = 10000

    # Ajustement du taux de décroissance
    decay_fit_start: int = 10
    decay_fit_stop: int = 100

    log_level: str = "INFO"

    @classmethod
    def from_file(cls, config_path: str) -> "SirsNetSettings":
        """Charge la configuration depuis un fichier JSON"""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
            return cls(**data)
        except FileNotFoundError:
            return cls()

    def save_to_file(self, config_path: str) -> None:
        """Sauvegarde la configuration dans un fichier JSON"""
        directory = os.path.dirname(config_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(self.model_dump(), f, indent=2, ensure_ascii=False)

    def overridden(self, **changes: Any) -> "SirsNetSettings":
        """Copie avec certaines valeurs remplacées (les None sont ignorés)"""
        updates: Dict[str, Any] = {k: v for k, v in changes.items() if v is not None}
        return self.model_copy(update=updates)

    def get_display_summary(self) -> str:
        """Résumé lisible de la configuration"""
        return f"""
🔧 SirsNet - configuration
🧮 Plafond mode exact: {self.exact_max_nodes} nœuds (3^{self.exact_max_nodes} états)
✂️  Seuil d'élagage: {self.prune_tol:g}
💾 Budget mémoire: {self.memory_budget_entries} entrées
📐 Itération de la puissance: tol={self.spectral_tol:g}, max={self.spectral_max_iter}
🎯 Point fixe: tol={self.fixed_point_tol:g}, max={self.fixed_point_max_iter}, fenêtre={self.cycle_window}
⏱️  Budget de mélange: {self.mixing_max_steps} pas
        """.strip()


# Configuration globale par défaut
config = SirsNetSettings()
