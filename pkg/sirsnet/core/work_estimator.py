"""
SirsNet - Estimateur de travail
Estime le coût de calcul d'une commande avant de le dépenser
"""

import logging
from dataclasses import dataclass
from enum import Enum

from .config import config
from .resource_manager import BYTES_PER_ENTRY

# plafond "bureau" pour horizon x arêtes en Monte Carlo
DESK_SCALE_EDGE_VISITS = 10 ** 9


class WorkMode(Enum):
    """Couches de calcul estimées"""
    EXACT = "exact"
    MONTECARLO = "montecarlo"


@dataclass
class WorkEstimate:
    """Estimation détaillée du travail"""
    mode: WorkMode
    units: int              # états (exact) ou visites d'arêtes (Monte Carlo)
    per_step: int           # transitions par pas (exact) ou visites par pas
    estimated_bytes: int
    within_cap: bool
    within_budget: bool
    reasoning: str

    @property
    def feasible(self) -> bool:
        return self.within_cap and self.within_budget


class WorkEstimator:
    """Estimateur du travail des couches exacte et Monte Carlo"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def estimate_exact(self, n: int, vaccination: bool = False,
                       max_nodes: int = None, budget: int = None) -> WorkEstimate:
        """Travail d'un pas de la chaîne exacte sur 3^n états"""
        max_nodes = config.exact_max_nodes if max_nodes is None else max_nodes
        budget = config.memory_budget_entries if budget is None else budget
        states = 3 ** n
        # un nœud S a 3 successeurs possibles en SIV, 2 sinon ; I et R en ont 2
        row_width = 3 ** n if vaccination else 2 ** n
        per_step = states * row_width
        resident = min(states, budget)
        estimate = WorkEstimate(
            mode=WorkMode.EXACT,
            units=states,
            per_step=per_step,
            estimated_bytes=resident * BYTES_PER_ENTRY,
            within_cap=n <= max_nodes,
            within_budget=states <= budget,
            reasoning=f"3^{n} états, lignes d'au plus {row_width} entrées",
        )
        self.logger.debug(f"Estimation exacte n={n}: {states} états, {per_step} transitions/pas au pire")
        return estimate

    def estimate_montecarlo(self, n: int, edge_count: int, horizon: int, runs: int = 1) -> WorkEstimate:
        """Travail d'un ensemble Monte Carlo : horizon x arêtes x répliques"""
        per_step = 2 * edge_count + n
        units = per_step * horizon * runs
        return WorkEstimate(
            mode=WorkMode.MONTECARLO,
            units=units,
            per_step=per_step,
            estimated_bytes=(n * 8 + (2 * edge_count + n + 1) * 8),
            within_cap=True,
            within_budget=units <= DESK_SCALE_EDGE_VISITS,
            reasoning=f"{runs} réplique(s) x {horizon} pas x {per_step} visites",
        )

    def get_breakdown_display(self, estimate: WorkEstimate) -> str:
        """Affichage lisible d'une estimation"""
        display = "\n🧮 ESTIMATION DU TRAVAIL\n"
        display += "=" * 40 + "\n"
        display += f"📦 Mode: {estimate.mode.value}\n"
        display += f"🔢 Unités: {estimate.units:,}\n"
        display += f"⚙️  Par pas: {estimate.per_step:,}\n"
        display += f"💾 Mémoire estimée: {estimate.estimated_bytes / 1024 ** 2:.1f} MiB\n"
        display += f"💭 {estimate.reasoning}\n"
        display += f"{'✅ Faisable' if estimate.feasible else '⚠️  Hors budget'}\n"
        return display


# Instance globale
work_estimator = WorkEstimator()
