"""
SirsNet - Erreurs du domaine
Hiérarchie d'exceptions levées par les couches de modèles
"""

from typing import Optional


class SirsNetError(Exception):
    """Erreur de domaine de base (code de sortie 1 en CLI)"""


class ParameterError(SirsNetError):
    """Paramètres épidémiques invalides ou préconditions non satisfaites"""


class GraphError(SirsNetError):
    """Graphe invalide : n = 0, ligne illisible, boucle propre"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self._raw = message
        if line_number is not None:
            message = f"ligne {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number

    def __reduce__(self):
        return (type(self), (self._raw, self.line_number))


class ExactModeCapError(SirsNetError):
    """Nombre de nœuds au-delà du plafond du mode exact"""

    def __init__(self, n: int, cap: int):
        super().__init__(
            f"n={n} dépasse le plafond du mode exact ({cap} nœuds, 3^{cap} états) ; "
            f"utilisez le mode Monte Carlo (sirsnet mc run)"
        )
        self.n = n
        self.cap = cap

    def __reduce__(self):
        return (type(self), (self.n, self.cap))


class SupportExplosionError(SirsNetError):
    """Le support de la distribution dépasse le budget mémoire"""

    def __init__(self, step: int, support: int, budget: int):
        super().__init__(
            f"support de {support} états au pas {step} au-delà du budget mémoire ({budget} entrées)"
        )
        self.step = step
        self.support = support
        self.budget = budget

    def __reduce__(self):
        return (type(self), (self.step, self.support, self.budget))


class ConvergenceError(SirsNetError):
    """Itération non convergée ; porte la meilleure estimation atteinte"""

    def __init__(self, message: str, best_estimate: float, iterations: int):
        self._raw = message
        super().__init__(f"{message} (meilleure estimation {best_estimate:.12g} après {iterations} itérations)")
        self.best_estimate = best_estimate
        self.iterations = iterations

    def __reduce__(self):
        return (type(self), (self._raw, self.best_estimate, self.iterations))


class SlowMixingError(SirsNetError):
    """Budget de pas épuisé avant d'atteindre epsilon : mélange lent suspecté"""

    def __init__(self, steps: int, last_tv: float, epsilon: float):
        super().__init__(
            f"mélange lent suspecté : TV={last_tv:.3e} > eps={epsilon} après {steps} pas"
        )
        self.steps = steps
        self.last_tv = last_tv
        self.epsilon = epsilon

    def __reduce__(self):
        return (type(self), (self.steps, self.last_tv, self.epsilon))


class DomainError(SirsNetError):
    """Point hors du domaine de définition (singularité de omega, régime incompatible)"""


class InvariantViolation(SirsNetError):
    """Invariant numérique violé à l'exécution"""
