"""
Commande MC - Simulation Monte Carlo seedée
"""

from pathlib import Path
from typing import Optional

import numpy as np
import typer

from ...core.work_estimator import work_estimator
from ...models.montecarlo import ensemble as run_ensemble
from ...models.montecarlo import run as run_replica
from .common import (
    BetaOpt, ConfigOpt, DeltaOpt, EdgeListOpt, GammaOpt, GraphOpt, GraphSeedOpt, JobsOpt, OutputOpt,
    SeedOpt, ThetaOpt, VariantOpt, build_config, console, domain_errors, key_value_table, write_output,
)

app = typer.Typer(help="🎰 Simulation Monte Carlo", no_args_is_help=True)

HorizonOpt = typer.Option(None, "--horizon", "-t", help="Nombre de pas simulés")
InitOpt = typer.Option(None, "--init", help="one_random_infected, all_infected ou fraction:q")


def _warn_if_large(n: int, edge_count: int, horizon: int, runs: int) -> None:
    estimate = work_estimator.estimate_montecarlo(n, edge_count, horizon, runs)
    if not estimate.within_budget:
        console.print(f"[yellow]⚠️  Au-delà de l'échelle bureau: {estimate.reasoning}[/yellow]")


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
    horizon: Optional[int] = HorizonOpt,
    init: Optional[str] = InitOpt,
    seed: SeedOpt = None,
    keep_going: bool = typer.Option(False, "--keep-going", help="Continuer après l'extinction"),
    snapshot_every: Optional[int] = typer.Option(None, "--snapshot-every", help="Instantanés des nœuds infectés tous les k pas"),
    snapshots_output: Optional[Path] = typer.Option(None, "--snapshots-output", help="CSV t,infected_nodes"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    🎰 Simuler une réplique et écrire t,num_S,num_I,num_R
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant,
                       horizon=horizon, init=init, seed=seed)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        _warn_if_large(g.n, g.edge_count, cfg.horizon, 1)
        traj = run_replica(g, params, cfg.init, cfg.horizon, cfg.seed,
                           stop_at_extinction=not keep_going, snapshot_every=snapshot_every)

    console.print(key_value_table("Réplique Monte Carlo", [
        ("graine", cfg.seed),
        ("pas simulés", traj.counts.shape[0] - 1),
        ("extinction", traj.extinction_step if traj.extinction_step is not None else "non"),
        ("I final", int(traj.num_i[-1])),
    ]))
    write_output(output, traj.to_csv(), "Trajectoire")
    if snapshots_output is not None and traj.snapshots:
        lines = ["t,infected_nodes"]
        for t, mask in sorted(traj.snapshots.items()):
            lines.append(f"{t}," + " ".join(map(str, np.flatnonzero(mask).tolist())))
        write_output(snapshots_output, "\n".join(lines) + "\n", "Instantanés")


@app.command("ensemble")
def ensemble(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    runs: Optional[int] = typer.Option(None, "--runs", "-r", help="Nombre de répliques"),
    horizon: Optional[int] = HorizonOpt,
    init: Optional[str] = InitOpt,
    seed: SeedOpt = None,
    jobs: JobsOpt = None,
    replicas_output: Optional[Path] = typer.Option(None, "--replicas-output", help="CSV long par réplique"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    📦 Lancer des répliques de graines seed+k et écrire les agrégats par pas
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant,
                       replicas=runs, horizon=horizon, init=init, seed=seed, jobs=jobs)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        _warn_if_large(g.n, g.edge_count, cfg.horizon, cfg.replicas)
        result = run_ensemble(g, params, cfg.replicas, cfg.horizon, cfg.seed, cfg.init,
                              jobs=cfg.resolved_jobs())

    mean = result.mean_curve()
    console.print(key_value_table("Ensemble Monte Carlo", [
        ("répliques", result.runs),
        ("horizon", result.horizon),
        ("fraction éteinte à l'horizon", result.extinction_fraction()),
        ("I/n moyen final", float(mean[-1])),
    ]))
    write_output(output, result.to_csv(), "Agrégats")
    write_output(replicas_output, result.replicas_csv(), "Répliques")
