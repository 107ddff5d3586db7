"""
Commande CONFIG - Réglages numériques (tolérances, plafonds, budgets)
"""

from pathlib import Path
from typing import Optional

import typer
from rich.panel import Panel

from ...core.config import SirsNetSettings, config
from .common import console


def config_cmd(
    load: Optional[Path] = typer.Option(None, "--file", "-f", help="Afficher les réglages lus dans ce fichier JSON"),
    save: Optional[Path] = typer.Option(None, "--save", help="Écrire les réglages courants dans ce fichier JSON"),
):
    """
    ⚙️ Afficher ou sauvegarder la configuration SirsNet

    Les valeurs courantes viennent des défauts, du fichier .env et des variables SIRSNET_*.

    Exemples:
    sirsnet config
    sirsnet config --save reglages.json
    sirsnet config --file reglages.json
    """
    settings = SirsNetSettings.from_file(str(load)) if load is not None else config
    console.print(Panel(settings.get_display_summary(), title="[bold blue]Configuration[/bold blue]",
                        border_style="blue"))
    if save is not None:
        settings.save_to_file(str(save))
        console.print(f"[green]✅ Configuration écrite:[/green] {save}")
