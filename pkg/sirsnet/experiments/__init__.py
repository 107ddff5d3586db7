"""
SirsNet Experiments - Reproductions à l'échelle du poste de travail
"""

from .spec import ExperimentSpec, ParamGrid, GridPoint
from .base_experiment import BaseExperiment, ExperimentResult, ExperimentStatus
from .threshold_sweep import ThresholdSweep, fit_decay_rate
from .layer_comparison import LayerComparison
from .mixing_scaling import MixingScaling
from .runner import ExperimentRunner, runner


def run_threshold_sweep(spec: ExperimentSpec, **kwargs) -> ExperimentResult:
    return ThresholdSweep().start(spec, **kwargs)


def run_layer_comparison(spec: ExperimentSpec, **kwargs) -> ExperimentResult:
    return LayerComparison().start(spec, **kwargs)


def run_mixing_scaling(spec: ExperimentSpec, **kwargs) -> ExperimentResult:
    return MixingScaling().start(spec, **kwargs)


__all__ = [
    'ExperimentSpec', 'ParamGrid', 'GridPoint',
    'BaseExperiment', 'ExperimentResult', 'ExperimentStatus',
    'ThresholdSweep', 'LayerComparison', 'MixingScaling', 'fit_decay_rate',
    'ExperimentRunner', 'runner',
    'run_threshold_sweep', 'run_layer_comparison', 'run_mixing_scaling',
]
