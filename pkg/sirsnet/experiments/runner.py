"""
SirsNet - Lanceur d'expériences
Registre des expériences disponibles et exécution d'une description JSON
"""

import logging
from typing import Dict, Optional, Type

from ..core.errors import ParameterError
from .base_experiment import BaseExperiment, ExperimentResult
from .layer_comparison import LayerComparison
from .mixing_scaling import MixingScaling
from .spec import ExperimentSpec
from .threshold_sweep import ThresholdSweep


class ExperimentRunner:
    """Orchestre les expériences à partir de leur type"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.registry: Dict[str, Type[BaseExperiment]] = {}
        self.history = []
        self._setup_default_experiments()

    def _setup_default_experiments(self):
        for cls in (ThresholdSweep, LayerComparison, MixingScaling):
            self.register(cls)

    def register(self, experiment_cls: Type[BaseExperiment]):
        """Enregistre un type d'expérience"""
        self.registry[experiment_cls.name] = experiment_cls
        self.logger.debug(f"Expérience {experiment_cls.name} enregistrée")

    def run(self, spec: ExperimentSpec, output_dir: Optional[str] = None,
            jobs: Optional[int] = None) -> ExperimentResult:
        if spec.kind not in self.registry:
            raise ParameterError(f"type d'expérience '{spec.kind}' inconnu "
                                 f"(disponibles: {', '.join(sorted(self.registry))})")
        experiment = self.registry[spec.kind]()
        result = experiment.start(spec, output_dir=output_dir, jobs=jobs)
        self.history.append({'name': spec.name, 'kind': spec.kind, 'success': result.success,
                             'wall_time': result.wall_time})
        return result

    def run_file(self, path: str, output_dir: Optional[str] = None,
                 jobs: Optional[int] = None) -> ExperimentResult:
        return self.run(ExperimentSpec.from_file(path), output_dir=output_dir, jobs=jobs)


# Instance globale
runner = ExperimentRunner()
