"""
SirsNet - Balayage du seuil
Décroissance en champ moyen, niveau endémique et survie Monte Carlo par point de grille
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..core.config import config
from ..graph.graph_core import spectral_radius
from ..models.meanfield import (
    NodeProbs, Regime, build_linear_model, endemic_fixed_point, iterate_nonlinear, threshold_report,
)
from ..models.montecarlo import InitialCondition, InitKind, ensemble
from ..models.params import EpidemicParams, Variant
from .base_experiment import BaseExperiment, ExperimentResult, load_graph
from .plotting import line_plot
from .spec import ExperimentSpec, GridPoint


def fit_decay_rate(total_p_i: np.ndarray, start: int, stop: int) -> float:
    """Pente de la régression de log(ΣP_I) sur les pas [start, stop]"""
    t = np.arange(start, min(stop, total_p_i.size - 1) + 1)
    y = total_p_i[t]
    keep = y > 0.0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(t[keep], np.log(y[keep]), 1)[0])


def meanfield_start(params: EpidemicParams, init: InitialCondition, n: int) -> NodeProbs:
    """Départ uniforme dont la masse infectée correspond à la condition initiale Monte Carlo"""
    if init.kind is InitKind.ALL_INFECTED:
        p_i = 1.0
    elif init.kind is InitKind.FRACTION:
        p_i = round(init.fraction * n) / n
    else:
        p_i = 1.0 / n
    return NodeProbs.uniform(n, params.p_r_star * (1.0 - p_i), p_i)


class ThresholdSweep(BaseExperiment):
    """Reproduit la séparation sous-critique / surcritique autour du seuil spectral"""

    name = "threshold_sweep"
    description = "décroissance, niveau endémique et survie de part et d'autre du seuil"

    @property
    def columns(self) -> List[str]:
        return ["lambda_max", "ratio", "ratio_local", "regime", "decay_rate_fit", "log_norm_M",
                "endemic_level_mf", "mf_outcome", "mc_survival_fraction", "mc_mean_infected_late"]

    def prepare(self, spec: ExperimentSpec) -> Dict[str, Any]:
        graph = load_graph(spec)
        spectral = spectral_radius(graph)
        self.logger.info(f"Graphe n={graph.n}, arêtes={graph.edge_count}, λ_max={spectral.lambda_max:.6g}")
        return {'graph': graph, 'spectral': spectral, 'points': spec.expand(spectral.lambda_max)}

    def run_point(self, spec: ExperimentSpec, context: Dict[str, Any], point: GridPoint) -> List[Dict[str, Any]]:
        g, spectral, params = context['graph'], context['spectral'], point.params
        report = threshold_report(g, params, spectral)
        init = InitialCondition.parse(spec.init)
        row: Dict[str, Any] = {
            **point.echo(),
            'lambda_max': spectral.lambda_max,
            'ratio': report.ratio_global,
            'ratio_local': report.ratio_local,
            'regime': report.regime.value,
        }

        if "meanfield" in spec.layers or "linear" in spec.layers:
            steps = max(spec.mf_steps, config.decay_fit_stop)
            traj = iterate_nonlinear(g, params, meanfield_start(params, init, g.n), steps)
            row['decay_rate_fit'] = fit_decay_rate(traj.total_p_i, config.decay_fit_start, config.decay_fit_stop)
            norm = build_linear_model(g, params, spectral).operator_norm()
            row['log_norm_M'] = float(np.log(norm)) if norm > 0 else float("-inf")
            supercritical = (report.regime if params.variant is Variant.SIRS else report.regime_local)
            if supercritical is Regime.SUPERCRITICAL and params.gamma > 0:
                fp = endemic_fixed_point(g, params, spectral=spectral)
                # niveau non défini tant que l'itération n'a pas convergé
                row['endemic_level_mf'] = float(fp.p_i_star.mean()) if fp.converged else float("nan")
                row['mf_outcome'] = fp.outcome.value
            else:
                row['endemic_level_mf'] = 0.0
                row['mf_outcome'] = "disease_free"
            row['_mf_curve'] = traj.mean_p_i.tolist()

        if "montecarlo" in spec.layers:
            ens = ensemble(g, params, spec.replicas, spec.horizon, spec.seed, init)
            row['mc_survival_fraction'] = 1.0 - ens.extinction_fraction(spec.horizon)
            late = [tr.time_average_infected(spec.horizon // 4, spec.horizon) for tr in ens.trajectories]
            row['mc_mean_infected_late'] = float(np.mean(late))
            row['_mc_curve'] = ens.mean_curve().tolist()

        self.logger.info(f"Point {point.index}: ratio={report.ratio_global:.4g} ({report.regime.value})")
        return [row]

    def plot(self, spec: ExperimentSpec, result: ExperimentResult, out_dir: Path) -> Dict[str, str]:
        series = {}
        for row in result.rows:
            curve = row.get('_mc_curve') or row.get('_mf_curve')
            if curve is None:
                continue
            label = f"{row['variant']} ratio={row['ratio']:.3g} θ={row['theta']:g}"
            series[label] = (range(len(curve)), curve)
        if not series:
            return {}
        path = line_plot(out_dir / f"{spec.name}.svg", series, "t", "fraction infectée",
                         title=spec.name)
        return {'plot': str(path)}
