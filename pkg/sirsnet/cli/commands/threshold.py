"""
Commande THRESHOLD - Quantités de seuil et régime
"""

import typer

from ...models.meanfield import mixing_time_bound, threshold_report
from .common import (
    BetaOpt, ConfigOpt, DeltaOpt, EdgeListOpt, GammaOpt, GraphOpt, GraphSeedOpt, OutputOpt,
    ThetaOpt, VariantOpt, build_config, console, domain_errors, key_value_table, write_json,
)


def threshold(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    beta: BetaOpt = None,
    delta: DeltaOpt = None,
    gamma: GammaOpt = None,
    theta: ThetaOpt = None,
    variant: VariantOpt = None,
    eps: float = typer.Option(0.25, "--eps", help="ε de la borne de mélange affichée"),
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    📐 Calculer βλ_max/δ (et ses versions locale et globale) et classer le régime

    Exemple:
    sirsnet threshold --graph complete:10 --beta 0.2 --delta 0.5 --gamma 0.5
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed,
                       beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    with domain_errors():
        g = cfg.load_graph()
        params = cfg.params()
        report = threshold_report(g, params)
        bound = mixing_time_bound(g, params, eps)

    rows = [
        ("variante", params.variant.value),
        ("λ_max", report.lambda_max),
        ("ratio global", report.ratio_global),
        ("ratio local", report.ratio_local),
        ("régime", report.regime.value),
        ("régime local", report.regime_local.value),
        (f"borne t_mix({eps:g})", bound),
    ]
    console.print(key_value_table("Seuil épidémique", rows))
    console.print(f"ratio = {report.ratio_global:.6g} ; régime : {report.regime.value}")
    if report.disconnected:
        console.print("[yellow]⚠️  Graphe non connexe[/yellow]")
    write_json(output, {**report.to_dict(), 'mixing_bound': bound, 'epsilon': eps})
