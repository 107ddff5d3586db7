"""
SirsNet Core - Composants fondamentaux
"""

from .config import config, SirsNetSettings
from .resource_manager import resource_manager, ResourceManager
from .work_estimator import work_estimator, WorkEstimate, WorkEstimator, WorkMode
from .errors import (
    SirsNetError, ParameterError, GraphError, ExactModeCapError, SupportExplosionError,
    ConvergenceError, SlowMixingError, DomainError, InvariantViolation,
)

__all__ = [
    'config', 'SirsNetSettings',
    'resource_manager', 'ResourceManager',
    'work_estimator', 'WorkEstimate', 'WorkEstimator', 'WorkMode',
    'SirsNetError', 'ParameterError', 'GraphError', 'ExactModeCapError',
    'SupportExplosionError', 'ConvergenceError', 'SlowMixingError', 'DomainError',
    'InvariantViolation',
]
