"""
SirsNet CLI - Options partagées
Source de graphe, taux, fichier de configuration et traduction des erreurs en codes de sortie
"""

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional

import click
import typer
from pydantic import BaseModel, ConfigDict, ValidationError
from rich.console import Console
from rich.table import Table

from ...core.errors import SirsNetError
from ...core.resource_manager import resource_manager
from ...graph.graph_core import Graph, load_edge_list, parse_graph_spec
from ...models.params import EpidemicParams

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

GraphOpt = Annotated[Optional[str], typer.Option(
    "--graph", "-g", help="Générateur 'kind:n[:p]' (er, complete, path, star, cycle)")]
EdgeListOpt = Annotated[Optional[Path], typer.Option(
    "--edge-list", "-e", help="Fichier de paires 'i j' indexées à partir de 0")]
GraphSeedOpt = Annotated[Optional[int], typer.Option("--graph-seed", help="Graine du générateur de graphe")]
BetaOpt = Annotated[Optional[float], typer.Option("--beta", "-b", help="Probabilité d'infection par voisin infecté")]
DeltaOpt = Annotated[Optional[float], typer.Option("--delta", "-d", help="Probabilité de guérison")]
GammaOpt = Annotated[Optional[float], typer.Option("--gamma", help="Probabilité de perte d'immunité")]
ThetaOpt = Annotated[Optional[float], typer.Option("--theta", help="Probabilité de vaccination (variantes SIV)")]
VariantOpt = Annotated[Optional[str], typer.Option(
    "--variant", help="sirs, infection_dominant ou vaccination_dominant")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", "-s", help="Graine aléatoire")]
JobsOpt = Annotated[Optional[int], typer.Option("--jobs", "-j", help="Workers (défaut: cœurs disponibles)")]
ConfigOpt = Annotated[Optional[Path], typer.Option(
    "--config", "-c", help="Fichier JSON aux champs d'ExperimentSpec ; les options l'emportent")]
OutputOpt = Annotated[Optional[Path], typer.Option("--output", "-o", help="Fichier de sortie")]

RATE_KEYS = ("beta", "delta", "gamma", "theta")


class CliConfig(BaseModel):
    """Configuration résolue d'une commande (fichier puis options)"""

    model_config = ConfigDict(extra="ignore")

    graph: Optional[str] = None
    edge_list: Optional[str] = None
    graph_seed: int = 0
    beta: Optional[float] = None
    delta: Optional[float] = None
    gamma: Optional[float] = None
    theta: float = 0.0
    variant: str = "sirs"
    seed: int = 0
    horizon: int = 100
    mf_steps: int = 200
    replicas: int = 20
    init: str = "one_random_infected"
    epsilons: List[float] = [0.25]
    output_dir: str = "results"
    jobs: Optional[int] = None

    def load_graph(self) -> Graph:
        """Charge l'unique source de graphe"""
        if (self.graph is None) == (self.edge_list is None):
            raise click.UsageError("donner exactement une source de graphe: --graph ou --edge-list")
        if self.edge_list is not None:
            path = Path(self.edge_list)
            if not path.exists():
                raise click.UsageError(f"fichier introuvable: {path}")
            g = load_edge_list(path.read_bytes())
        else:
            g = parse_graph_spec(self.graph, seed=self.graph_seed)
        logger.info(f"Graphe chargé: n={g.n}, arêtes={g.edge_count}")
        return g

    def params(self) -> EpidemicParams:
        missing = [k for k in ("beta", "delta", "gamma") if getattr(self, k) is None]
        if missing:
            raise click.UsageError(f"taux manquant(s): {', '.join('--' + k for k in missing)}")
        return EpidemicParams.build(beta=self.beta, delta=self.delta, gamma=self.gamma,
                                    theta=self.theta, variant=self.variant)

    def resolved_jobs(self) -> int:
        return resource_manager.clamp_jobs(self.jobs)


def read_config_file(path: Path) -> Dict[str, Any]:
    """Lit un JSON d'expérience ; une grille à une valeur fournit les taux"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise click.UsageError(f"fichier de configuration introuvable: {path}")
    except json.JSONDecodeError as e:
        raise click.UsageError(f"configuration JSON invalide ({path}): {e}")
    if not isinstance(data, dict):
        raise click.UsageError("la configuration doit être un objet JSON")
    grid = data.pop("grid", None) or {}
    for key in RATE_KEYS:
        values = grid.get(key)
        if values and key not in data:
            data[key] = values[0]
    if grid.get("variants") and "variant" not in data:
        data["variant"] = grid["variants"][0]
    return data


def build_config(config_path: Optional[Path] = None, **flags: Any) -> CliConfig:
    """Fusionne le fichier de configuration et les options explicites"""
    data = read_config_file(config_path) if config_path else {}
    for key, value in flags.items():
        if value is None:
            continue
        data[key] = str(value) if isinstance(value, Path) else value
    try:
        return CliConfig.model_validate(data)
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise click.UsageError(f"configuration invalide: {details}")


@contextmanager
def domain_errors():
    """Erreur de domaine -> message sur stderr et code de sortie 1"""
    try:
        yield
    except SirsNetError as e:
        err_console.print(f"[red]❌ {type(e).__name__}: {e}[/red]")
        raise typer.Exit(code=1)


def write_output(path: Optional[Path], text: str, label: str = "Sortie") -> None:
    """Écrit une sortie machine en UTF-8"""
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    console.print(f"[green]✅ {label} écrite:[/green] {path}")


def write_json(path: Optional[Path], payload: Dict[str, Any], label: str = "Rapport") -> None:
    if path is not None:
        write_output(path, json.dumps(payload, indent=2, ensure_ascii=False) + "\n", label)


def key_value_table(title: str, rows: List[tuple]) -> Table:
    table = Table(title=title)
    table.add_column("Quantité", style="cyan")
    table.add_column("Valeur", style="green")
    for key, value in rows:
        table.add_row(key, fmt(value))
    return table


def fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
