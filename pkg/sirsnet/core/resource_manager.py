"""
SirsNet - Resource Manager
Détecte les ressources système et borne le parallélisme et la mémoire
"""

import logging
import platform
from typing import Dict, Optional

import psutil

# float64 + int64 par entrée de support
BYTES_PER_ENTRY = 16


class ResourceManager:
    """Gestionnaire des ressources système"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._system_info = self._detect_system()

    def _detect_system(self) -> Dict:
        """Détecte les spécifications du système"""
        try:
            return {
                'platform': platform.system(),
                'machine': platform.machine(),
                'ram_gb': round(psutil.virtual_memory().total / (1024 ** 3), 1),
                'cpu_cores': psutil.cpu_count(logical=True) or 1,
                'cpu_cores_physical': psutil.cpu_count(logical=False) or 1,
            }
        except Exception as e:
            self.logger.error(f"Erreur détection système: {e}")
            return self._get_fallback_config()

    @property
    def cpu_cores(self) -> int:
        return int(self._system_info['cpu_cores'])

    def default_jobs(self) -> int:
        """Nombre de workers par défaut : cœurs disponibles"""
        return max(1, self.cpu_cores)

    def clamp_jobs(self, requested: Optional[int]) -> int:
        """Borne un nombre de workers demandé à [1, cœurs]"""
        if requested is None or requested <= 0:
            return self.default_jobs()
        if requested > self.cpu_cores:
            self.logger.warning(f"--jobs={requested} réduit à {self.cpu_cores} (cœurs disponibles)")
            return self.cpu_cores
        return requested

    def memory_budget_entries(self, configured: int) -> int:
        """Budget de support effectif : la valeur configurée, réduite si la RAM libre ne suffit pas"""
        try:
            available = psutil.virtual_memory().available
        except Exception as e:
            self.logger.debug(f"Mémoire disponible inconnue: {e}")
            return configured
        # on garde de la marge pour les tableaux temporaires de l'expansion
        affordable = int(available // (4 * BYTES_PER_ENTRY))
        if affordable < configured:
            self.logger.info(f"Budget mémoire réduit à {affordable} entrées (RAM libre)")
            return max(1, affordable)
        return configured

    def get_system_summary(self) -> str:
        """Retourne un résumé lisible de la configuration"""
        info = self._system_info
        return f"""
🖥️  Système détecté: {info['platform']} ({info['machine']})
💾 RAM: {info['ram_gb']} GB
🔧 CPU: {info['cpu_cores']} cœurs ({info['cpu_cores_physical']} physiques)
👥 Workers par défaut: {self.default_jobs()}
        """.strip()

    def _get_fallback_config(self) -> Dict:
        """Configuration de sécurité si la détection échoue"""
        return {
            'platform': 'Unknown',
            'machine': 'Unknown',
            'ram_gb': 8.0,
            'cpu_cores': 1,
            'cpu_cores_physical': 1,
        }


# Instance globale
resource_manager = ResourceManager()
