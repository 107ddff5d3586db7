"""
SirsNet - Tracés SVG
Courbes simples (temps ou n en abscisse) avec sortie SVG reproductible
"""

import logging
from pathlib import Path
from typing import Dict, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

# identifiants SVG stables d'une exécution à l'autre
matplotlib.rcParams["svg.hashsalt"] = "sirsnet"
matplotlib.rcParams["svg.fonttype"] = "none"


def line_plot(path: Path, series: Dict[str, Tuple[Sequence[float], Sequence[float]]],
              xlabel: str, ylabel: str, title: str = "", logy: bool = False) -> Path:
    """Écrit un tracé multi-courbes en SVG"""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for label, (xs, ys) in series.items():
            ax.plot(list(xs), list(ys), label=label, linewidth=1.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if logy:
            ax.set_yscale("log")
        if len(series) > 1:
            ax.legend(fontsize="small")
        ax.grid(alpha=0.3)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.debug(f"Tracé écrit: {path}")
    return path
