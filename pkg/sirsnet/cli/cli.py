#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SirsNet - Interface CLI
Un binaire unique exposant graphes, seuils, champ moyen, chaîne exacte, Monte Carlo et expériences
"""

import logging
import sys
from typing import List, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from .. import __version__
from ..core.config import config
from ..core.resource_manager import resource_manager
from .commands import exact, graph, mc, meanfield
from .commands.experiment import experiment
from .commands.settings import config_cmd
from .commands.threshold import threshold

console = Console()
app = typer.Typer(
    name="sirsnet",
    help="🦠 SirsNet - Épidémies SIRS/SIV sur graphes : seuils, champ moyen, chaîne exacte, Monte Carlo",
    rich_markup_mode="rich",
    no_args_is_help=True,
)
app.add_typer(graph.app, name="graph")
app.add_typer(meanfield.app, name="meanfield")
app.add_typer(exact.app, name="exact")
app.add_typer(mc.app, name="mc")
app.command("threshold")(threshold)
app.command("experiment")(experiment)
app.command("config")(config_cmd)


def setup_logging(verbose: bool, quiet: bool) -> None:
    """Journalisation Rich sur stderr ; -v -> DEBUG, -q -> ERROR"""
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.ERROR
    else:
        level = getattr(logging, config.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=verbose)],
        force=True,
    )


def show_version() -> None:
    console.print(Panel(
        f"[bold cyan]🦠 SirsNet[/bold cyan]\n"
        f"[white]Version:[/white] [green]{__version__}[/green]\n"
        f"[dim]{resource_manager.get_system_summary()}[/dim]",
        title="[bold blue]Informations Version[/bold blue]",
        border_style="blue",
    ))


def version_callback(value: bool):
    if value:
        show_version()
        raise typer.Exit()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Mode verbeux pour débogage"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Mode silencieux (erreurs uniquement)"),
    version_info: bool = typer.Option(False, "--version", help="Afficher la version",
                                      callback=version_callback, is_eager=True),
):
    """
    🦠 SirsNet - Épidémies SIRS et SIV sur graphes

    Sorties machine dans des fichiers (UTF-8), résumés lisibles sur la console.
    Codes de sortie : 0 succès, 1 erreur de domaine, 2 erreur d'usage.
    """
    setup_logging(verbose, quiet)


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Exécute la CLI et retourne le code de sortie au lieu de quitter"""
    command = typer.main.get_command(app)
    try:
        command.main(args=argv, prog_name="sirsnet", standalone_mode=True)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


def cli_main():
    """Point d'entrée principal pour la CLI"""
    try:
        code = dispatch(sys.argv[1:])
    except KeyboardInterrupt:
        console.print("\n[yellow]⚠️  Opération interrompue par l'utilisateur[/yellow]")
        sys.exit(1)
    except Exception as e:
        console.print(f"[red]❌ Erreur inattendue: {str(e)}[/red]")
        if "--verbose" in sys.argv or "-v" in sys.argv:
            import traceback
            console.print("[dim]Trace complète:[/dim]")
            console.print(traceback.format_exc())
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    cli_main()
