"""
Commande MEANFIELD - Application de champ moyen, modèle linéaire et point fixe endémique
"""

from pathlib import Path
from typing import Optional

import numpy as np
import typer

from ...models.meanfield import (
    Damping, NodeProbs, build_linear_model, endemic_fixed_point, iterate_linear, iterate_nonlinear,
    check_uniqueness,
)
from .common import (
    BetaOpt, ConfigOpt, DeltaOpt, EdgeListOpt, GammaOpt, GraphOpt, GraphSeedOpt, JobsOpt, OutputOpt,
    SeedOpt, ThetaOpt, VariantOpt, build_config, console, domain_errors, key_value_table, write_json,
    write_output,
)

app = typer.Typer(help="📈 Couches champ moyen et linéaire", no_args_is_help=True)


@app.command("run")
def run(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    steps: Optional[int] = typer.Option(None, "--steps", "-t", help="Nombre de pas (défaut: mf_steps)"),
    p_i: float = typer.Option(0.1, "--p-i", help="P_I initial uniforme"),
    p_r: Optional[float] = typer.Option(None, "--p-r", help="P_R initial uniforme (défaut: part R sans maladie)"),
    linear: bool = typer.Option(False, "--linear", help="Itérer le modèle linéaire au lieu de l'application non linéaire"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    📈 Itérer l'application de champ moyen (ou le modèle linéaire) et écrire t,mean_P_R,mean_P_I
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant, mf_steps=steps)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        start_r = params.p_r_star * (1.0 - p_i) if p_r is None else p_r
        s0 = NodeProbs.uniform(g.n, start_r, p_i)
        s0.check()
        if linear:
            traj = iterate_linear(build_linear_model(g, params), s0, cfg.mf_steps)
        else:
            traj = iterate_nonlinear(g, params, s0, cfg.mf_steps)

    console.print(key_value_table("Champ moyen" + (" (linéaire)" if linear else ""), [
        ("pas", cfg.mf_steps),
        ("P_I moyen initial", float(traj.mean_p_i[0])),
        ("P_I moyen final", float(traj.mean_p_i[-1])),
        ("P_R moyen final", float(traj.mean_p_r[-1])),
    ]))
    write_output(output, traj.to_csv(), "Trajectoire")


@app.command("fixed-point")
def fixed_point(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    damping: Damping = typer.Option(Damping.ADAPTIVE, "--damping", help="adaptive ou none"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Tolérance ‖x_{k+1} - x_k‖∞"),
    max_iter: Optional[int] = typer.Option(None, "--max-iter", help="Itérations maximales"),
    starts: int = typer.Option(0, "--starts", help="Nombre de départs aléatoires pour sonder l'unicité"),
    seed: SeedOpt = None,
    jobs: JobsOpt = None,
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    🎯 Résoudre le point fixe endémique (régime surcritique)
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant,
                       seed=seed, jobs=jobs)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        result = endemic_fixed_point(g, params, tol=tol, max_iter=max_iter, damping=damping)
        uniqueness = None
        if starts > 0:
            uniqueness = check_uniqueness(g, params, starts=starts, seed=cfg.seed,
                                          jobs=cfg.resolved_jobs(), tol=tol, max_iter=max_iter)

    rows = [
        ("issue", result.outcome.value),
        ("itérations", result.iterations),
        ("résidu", result.residual),
        ("α final", result.alpha),
        ("P_I* moyen", float(np.mean(result.p_i_star))),
        ("P_R* moyen", float(np.mean(result.p_r_star))),
    ]
    if result.period is not None:
        rows.append(("période", result.period))
    if result.relation_error is not None:
        rows.append(("écart P_R* - (δ/γ)P_I*", result.relation_error))
    if uniqueness is not None:
        rows += [("départs convergés", f"{sum(r.converged for r in uniqueness.results)}/{starts}"),
                 ("écart max entre départs", uniqueness.max_deviation),
                 ("accord", uniqueness.agree)]
    console.print(key_value_table("Point fixe endémique", rows))
    if not result.converged:
        console.print(f"[yellow]⚠️  Non convergé ({result.outcome.value})[/yellow]")
    payload = result.to_dict()
    if uniqueness is not None:
        payload['uniqueness'] = uniqueness.to_dict()
    write_json(output, payload, "Point fixe")
