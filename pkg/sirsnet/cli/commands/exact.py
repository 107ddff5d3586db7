"""
Commande EXACT - Chaîne de Markov exacte sur 3^n états
"""

import logging
from typing import Optional

import typer

from ...core.errors import ExactModeCapError, ParameterError
from ...core.config import config
from ...core.work_estimator import work_estimator
from ...graph.graph_core import Graph
from ...models.exact_chain import (
    ChainDistribution, all_infected_code, evolve, marginals, mixing_time, stationary_distribution,
    verify_linear_domination,
)
from ...models.meanfield import mixing_time_bound
from ...models.params import EpidemicParams
from .common import (
    BetaOpt, ConfigOpt, DeltaOpt, EdgeListOpt, GammaOpt, GraphOpt, GraphSeedOpt, OutputOpt, ThetaOpt,
    VariantOpt, build_config, console, domain_errors, key_value_table, write_json, write_output,
)

app = typer.Typer(help="🎲 Chaîne de Markov exacte (petits graphes)", no_args_is_help=True)
logger = logging.getLogger(__name__)

StartOpt = typer.Option(None, "--start-code", help="Code ternaire de l'état initial (défaut: tout infecté)")


def _prepare(g: Graph, params: EpidemicParams) -> None:
    """Refuse le mode exact au-delà du plafond ; détaille l'estimation en mode verbeux"""
    estimate = work_estimator.estimate_exact(g.n, vaccination=params.variant.is_siv)
    if logger.isEnabledFor(logging.DEBUG):
        console.print(work_estimator.get_breakdown_display(estimate))
    if not estimate.within_cap:
        raise ExactModeCapError(g.n, config.exact_max_nodes)


def _start(g: Graph, start_code: Optional[int]) -> ChainDistribution:
    code = all_infected_code(g.n) if start_code is None else start_code
    if not 0 <= code < 3 ** g.n:
        raise ParameterError(f"code d'état {code} hors de [0, 3^{g.n})")
    return ChainDistribution.point_mass(g.n, code)


def _marginal_rows(mu: ChainDistribution, n: int):
    marg = marginals(mu, n)
    return [(f"nœud {i}", f"P_S={marg.p_s[i]:.6g}  P_I={marg.p_i[i]:.6g}  P_R={marg.p_r[i]:.6g}")
            for i in range(n)]


@app.command("evolve")
def evolve_cmd(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    steps: int = typer.Option(10, "--steps", "-t", help="Nombre de pas"),
    start_code: Optional[int] = StartOpt,
    prune_tol: Optional[float] = typer.Option(None, "--prune-tol", help="Seuil d'élagage des masses"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    ⏩ Calculer μ S^t et écrire la distribution (state_code,probability)
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        _prepare(g, params)
        mu = evolve(g, params, _start(g, start_code), steps, prune_tol=prune_tol)

    rows = [("pas", steps), ("support", mu.support), ("masse élaguée", float(sum(mu.pruned_mass)))]
    console.print(key_value_table("Évolution exacte", rows + _marginal_rows(mu, g.n)))
    write_output(output, mu.to_csv(), "Distribution")


@app.command("mixing-time")
def mixing_time_cmd(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    eps: float = typer.Option(0.25, "--eps", help="Seuil ε de distance en variation totale"),
    max_steps: Optional[int] = typer.Option(None, "--max-steps", help="Budget de pas"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    ⏱️ Temps de mélange t_mix(ε) depuis l'état tout infecté

    Exemple:
    sirsnet exact mixing-time --graph path:3 --beta 0.05 --delta 0.9 --gamma 0.5 --eps 0.25
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        _prepare(g, params)
        t_mix = mixing_time(g, params, eps, max_steps=max_steps)
        bound = mixing_time_bound(g, params, eps)

    console.print(key_value_table("Temps de mélange", [("ε", eps), ("t_mix", t_mix), ("borne", bound)]))
    console.print(f"t_mix = {t_mix}")
    write_json(output, {'epsilon': eps, 't_mix': t_mix, 'bound': bound})


@app.command("stationary")
def stationary_cmd(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    ⚖️ Loi stationnaire sous forme close (tout-S en SIRS, produit en SIV)
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        pi = stationary_distribution(g, params)

    console.print(key_value_table("Loi stationnaire", [("support", pi.support)] + _marginal_rows(pi, g.n)))
    write_output(output, pi.to_csv(), "Distribution")


@app.command("verify-domination")
def verify_domination_cmd(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    steps: int = typer.Option(50, "--steps", "-t", help="Nombre de pas vérifiés"),
    start_code: Optional[int] = StartOpt,
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    🛡️ Vérifier p_I(t+1) ≤ borne linéaire(p(t)) nœud par nœud
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        _prepare(g, params)
        report = verify_linear_domination(g, params, _start(g, start_code), steps)

    console.print(key_value_table("Domination linéaire", [
        ("pas", steps), ("marge minimale", report.min_slack), ("validée", report.passed)]))
    write_json(output, report.to_dict())
    if not report.passed:
        console.print(f"[red]❌ Violations aux pas {report.violations}[/red]")
        raise typer.Exit(code=1)
