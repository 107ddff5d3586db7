"""
SirsNet - Croissance du temps de mélange
t_mix mesuré sur la chaîne exacte contre la borne issue du modèle linéaire
"""

import math
from pathlib import Path
from typing import Any, Dict, List

from ..core.errors import ParameterError, SlowMixingError
from ..graph.graph_core import spectral_radius
from ..models.exact_chain import check_exact_cap, mixing_time
from ..models.meanfield import mixing_time_bound, threshold_report
from .base_experiment import BaseExperiment, ExperimentResult, load_graph
from .plotting import line_plot
from .spec import ExperimentSpec, GridPoint

SLOW_MIXING = "slow-mixing suspected"


class MixingScaling(BaseExperiment):
    """Mesure t_mix(ε) pour n croissant ; le budget épuisé est signalé, jamais extrapolé"""

    name = "mixing_scaling"
    description = "temps de mélange exact et borne par taille de graphe"

    @property
    def columns(self) -> List[str]:
        return ["n", "epsilon", "lambda_max", "ratio", "regime", "t_mix", "bound", "within_bound", "status"]

    def prepare(self, spec: ExperimentSpec) -> Dict[str, Any]:
        if spec.grid.beta is None:
            raise ParameterError("mixing_scaling demande des valeurs de beta explicites")
        graphs = {}
        for n in spec.sizes:
            graph = load_graph(spec, n)
            check_exact_cap(graph)
            graphs[n] = (graph, spectral_radius(graph))
        return {'graphs': graphs, 'points': spec.expand(lambda_max=None)}

    def run_point(self, spec: ExperimentSpec, context: Dict[str, Any], point: GridPoint) -> List[Dict[str, Any]]:
        rows = []
        params = point.params
        for n, (g, spectral) in context['graphs'].items():
            report = threshold_report(g, params, spectral)
            for eps in spec.epsilons:
                bound = mixing_time_bound(g, params, eps)
                try:
                    t_mix = mixing_time(g, params, eps)
                    status = "ok"
                except SlowMixingError as e:
                    self.logger.warning(f"n={n}, ε={eps}: {e}")
                    t_mix, status = None, SLOW_MIXING
                rows.append({
                    **point.echo(),
                    'n': g.n,
                    'epsilon': eps,
                    'lambda_max': spectral.lambda_max,
                    'ratio': report.ratio_global,
                    'regime': report.regime.value,
                    't_mix': t_mix,
                    'bound': bound,
                    'within_bound': None if t_mix is None else t_mix <= bound,
                    'status': status,
                })
        return rows

    def plot(self, spec: ExperimentSpec, result: ExperimentResult, out_dir: Path) -> Dict[str, str]:
        series: Dict[str, tuple] = {}
        for row in result.rows:
            if row.get('t_mix') is None:
                continue
            key = f"β={row['beta']:.3g} ε={row['epsilon']:g}"
            xs, ys = series.setdefault(f"t_mix {key}", ([], []))
            xs.append(row['n'])
            ys.append(row['t_mix'])
            if math.isfinite(row['bound']):
                bx, by = series.setdefault(f"borne {key}", ([], []))
                bx.append(row['n'])
                by.append(row['bound'])
        if not series:
            return {}
        path = line_plot(out_dir / f"{spec.name}.svg", series, "n", "pas", title=spec.name)
        return {'plot': str(path)}
