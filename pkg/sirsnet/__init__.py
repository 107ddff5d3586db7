"""
SirsNet - Épidémies SIRS et SIV sur graphes
Chaîne de Markov exacte, champ moyen, modèles linéaires et simulation Monte Carlo
"""

__version__ = "1.0.0"
__author__ = "SirsNet Team"

from .core.config import config
from .core.resource_manager import resource_manager
from .core.work_estimator import work_estimator
from .graph import Graph, generate, load_edge_list, spectral_radius
from .models import EpidemicParams, Variant

__all__ = [
    'config', 'resource_manager', 'work_estimator',
    'Graph', 'generate', 'load_edge_list', 'spectral_radius',
    'EpidemicParams', 'Variant',
]
