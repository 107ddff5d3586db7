"""
Commande GRAPH - Génération et description de graphes
"""

from pathlib import Path
from typing import Optional

import typer

from ...graph.graph_core import graph_summary, parse_graph_spec, spectral_radius
from .common import (
    ConfigOpt, EdgeListOpt, GraphOpt, GraphSeedOpt, OutputOpt, build_config, console,
    domain_errors, key_value_table, write_json, write_output,
)

app = typer.Typer(help="🕸️ Générer et inspecter des graphes", no_args_is_help=True)


@app.command("gen")
def gen(
    spec: str = typer.Argument(..., help="Générateur 'kind:n[:p]', ex. er:500:0.02"),
    seed: int = typer.Option(0, "--seed", "-s", help="Graine du générateur"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Liste d'arêtes produite"),
):
    """
    🕸️ Générer un graphe et écrire sa liste d'arêtes

    Exemples:
    sirsnet graph gen er:500:0.02 --seed 3 -o er500.txt
    sirsnet graph gen complete:10
    """
    with domain_errors():
        g = parse_graph_spec(spec, seed=seed)
        text = g.to_edge_list()
        if output is None:
            typer.echo(text, nl=False)
            return
        write_output(output, text, "Liste d'arêtes")
        console.print(f"[dim]n={g.n}, arêtes={g.edge_count}[/dim]")


@app.command("info")
def info(
    graph: GraphOpt = None,
    edge_list: EdgeListOpt = None,
    graph_seed: GraphSeedOpt = None,
    config_file: ConfigOpt = None,
    output: OutputOpt = None,
):
    """
    📊 Décrire un graphe : degrés, connexité, λ_max
    """
    cfg = build_config(config_file, graph=graph, edge_list=edge_list, graph_seed=graph_seed)
    with domain_errors():
        g = cfg.load_graph()
        report = spectral_radius(g)
        summary = graph_summary(g, report)
    console.print(key_value_table("Graphe", list(summary.items()) + [
        ("itérations", report.iterations), ("résidu", report.residual)]))
    if report.disconnected:
        console.print("[yellow]⚠️  Graphe non connexe : λ_max est le maximum sur les composantes[/yellow]")
    write_json(output, {**summary, 'spectral': report.to_dict()})
