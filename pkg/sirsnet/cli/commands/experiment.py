"""
Commande EXPERIMENT - Exécution d'une expérience décrite en JSON
"""

from pathlib import Path
from typing import Optional

import click
import typer
from pydantic import ValidationError
from rich.table import Table

from ...core.resource_manager import resource_manager
from ...experiments.runner import runner
from ...experiments.spec import ExperimentSpec
from .common import JobsOpt, console, domain_errors


def experiment(
    spec_file: Path = typer.Argument(..., help="Description JSON de l'expérience"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o", help="Dossier de sortie"),
    jobs: JobsOpt = None,
):
    """
    🧪 Lancer une expérience (threshold_sweep, layer_comparison, mixing_scaling)
    """
    if not spec_file.exists():
        raise click.UsageError(f"fichier introuvable: {spec_file}")
    with domain_errors():
        try:
            spec = ExperimentSpec.from_file(str(spec_file))
        except (ValidationError, ValueError) as e:
            raise click.UsageError(f"description d'expérience invalide: {e}")
        workers = resource_manager.clamp_jobs(jobs if jobs is not None else spec.jobs)
        result = runner.run(spec, output_dir=str(output_dir) if output_dir else None, jobs=workers)

    table = Table(title=f"Expérience {spec.name}")
    table.add_column("Élément", style="cyan")
    table.add_column("Valeur", style="green")
    table.add_row("type", spec.kind)
    table.add_row("lignes", str(len(result.rows)))
    table.add_row("points en échec", str(result.failed_points))
    table.add_row("durée", f"{result.wall_time:.2f}s")
    for label, path in result.files.items():
        table.add_row(label, path)
    console.print(table)
    if not result.success:
        console.print("[yellow]⚠️  Certains points ont échoué (colonne 'error' de la table)[/yellow]")
