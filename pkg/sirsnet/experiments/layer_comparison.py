"""
SirsNet - Comparaison des couches
Écart par pas entre marginales exactes, champ moyen et modèle linéaire
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..graph.graph_core import spectral_radius
from ..models.exact_chain import (
    ChainDistribution, TransitionOperator, check_exact_cap, encode_state, evolve, marginals,
)
from ..models.meanfield import NodeProbs, build_linear_model, step_linear, step_nonlinear
from ..models.montecarlo import InitialCondition
from .base_experiment import BaseExperiment, ExperimentResult, load_graph
from .plotting import line_plot
from .spec import ExperimentSpec, GridPoint


class LayerComparison(BaseExperiment):
    """Quantifie l'approximation de champ moyen sur de petits graphes"""

    name = "layer_comparison"
    description = "écart max sur les nœuds entre marginales exactes et champ moyen"

    @property
    def columns(self) -> List[str]:
        return ["t", "discrepancy_meanfield", "discrepancy_meanfield_r", "discrepancy_linear"]

    def prepare(self, spec: ExperimentSpec) -> Dict[str, Any]:
        graph = load_graph(spec)
        check_exact_cap(graph)
        spectral = spectral_radius(graph)
        rng = np.random.default_rng(spec.seed)
        start = InitialCondition.parse(spec.init).sample(graph.n, rng)
        return {'graph': graph, 'spectral': spectral, 'start_code': encode_state(start),
                'points': spec.expand(spectral.lambda_max)}

    def run_point(self, spec: ExperimentSpec, context: Dict[str, Any], point: GridPoint) -> List[Dict[str, Any]]:
        g, params = context['graph'], point.params
        operator = TransitionOperator(g, params)
        mu = ChainDistribution.point_mass(g.n, context['start_code'])
        exact = marginals(mu, g.n)
        mf = NodeProbs(exact.p_r.copy(), exact.p_i.copy())
        use_linear = "linear" in spec.layers
        model = build_linear_model(g, params, context['spectral']) if use_linear else None
        lin = NodeProbs(exact.p_r.copy(), exact.p_i.copy())

        rows = []
        for t in range(spec.horizon + 1):
            row = {
                **point.echo(),
                't': t,
                'discrepancy_meanfield': float(np.max(np.abs(exact.p_i - mf.p_i))),
                'discrepancy_meanfield_r': float(np.max(np.abs(exact.p_r - mf.p_r))),
            }
            if use_linear:
                row['discrepancy_linear'] = float(np.max(np.abs(exact.p_i - lin.p_i)))
            rows.append(row)
            if t == spec.horizon:
                break
            mu = evolve(g, params, mu, 1, operator=operator)
            exact = marginals(mu, g.n)
            mf = step_nonlinear(g, params, mf)
            if use_linear:
                lin = step_linear(model, lin)
        return rows

    def plot(self, spec: ExperimentSpec, result: ExperimentResult, out_dir: Path) -> Dict[str, str]:
        series: Dict[str, tuple] = {}
        for row in result.rows:
            if 't' not in row:
                continue
            label = f"{row['variant']} β={row['beta']:.3g} θ={row['theta']:g}"
            xs, ys = series.setdefault(label, ([], []))
            xs.append(row['t'])
            ys.append(row['discrepancy_meanfield'])
        if not series:
            return {}
        path = line_plot(out_dir / f"{spec.name}.svg", series, "t", "écart max |exact - champ moyen|",
                         title=spec.name)
        return {'plot': str(path)}
