"""
SirsNet - Expérience de base
Classe abstraite des expériences : grille, exécution par point, tables et métadonnées
"""

import csv
import io
import json
import logging
import math
import platform
import time
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.config import config
from ..core.errors import SirsNetError
from ..graph.graph_core import Graph, load_edge_list, parse_graph_spec
from .spec import ExperimentSpec, GridPoint


class ExperimentStatus(Enum):
    """États possibles d'une expérience"""
    IDLE = "idle"
    RUNNING = "running"
    ERROR = "error"
    COMPLETED = "completed"


@dataclass
class ExperimentResult:
    """Table produite, fichiers écrits et bilan d'exécution"""
    name: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    files: Dict[str, str] = field(default_factory=dict)
    failed_points: int = 0
    wall_time: float = 0.0

    @property
    def success(self) -> bool:
        return self.failed_points == 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: format_cell(row.get(k)) for k in self.columns})
        return buf.getvalue()


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def load_graph(spec: ExperimentSpec, n: Optional[int] = None) -> Graph:
    if spec.edge_list:
        with open(spec.edge_list, "rb") as f:
            return load_edge_list(f.read())
    return parse_graph_spec(spec.graph_spec(n), seed=spec.graph_seed)


def _execute(task) -> List[Dict[str, Any]]:
    experiment_cls, spec, context, point = task
    return experiment_cls().run_point(spec, context, point)


class BaseExperiment(ABC):
    """
    Classe de base des expériences

    `start` gère la préparation, le minutage, la capture des erreurs par point
    (une erreur n'interrompt pas le balayage) et l'écriture des sorties.
    """

    name: str = "base"
    description: str = ""
    param_columns = ["variant", "beta", "delta", "gamma", "theta", "target_ratio"]

    def __init__(self):
        self.status = ExperimentStatus.IDLE
        self.logger = logging.getLogger(f"sirsnet.experiments.{self.name}")
        self.total_points = 0
        self.failed_points = 0

    @property
    @abstractmethod
    def columns(self) -> List[str]:
        """Colonnes propres à l'expérience (après les paramètres)"""

    @abstractmethod
    def prepare(self, spec: ExperimentSpec) -> Dict[str, Any]:
        """Construit le contexte partagé (graphe, spectre, points de grille)"""

    @abstractmethod
    def run_point(self, spec: ExperimentSpec, context: Dict[str, Any], point: GridPoint) -> List[Dict[str, Any]]:
        """Calcule les lignes d'un point de grille"""

    def plot(self, spec: ExperimentSpec, result: ExperimentResult, out_dir: Path) -> Dict[str, str]:
        return {}

    def start(self, spec: ExperimentSpec, output_dir: Optional[str] = None, jobs: Optional[int] = None) -> ExperimentResult:
        """Point d'entrée principal : exécute toute la grille et écrit les sorties"""
        started = time.time()
        self.status = ExperimentStatus.RUNNING
        out_dir = Path(output_dir or spec.output_dir)
        jobs = spec.jobs if jobs is None else jobs
        self.logger.info(f"Début expérience '{spec.name}' ({self.name})")

        context = self.prepare(spec)
        points: List[GridPoint] = context["points"]
        self.total_points = len(points)

        rows: List[Dict[str, Any]] = []
        tasks = [(type(self), spec, context, p) for p in points]
        if jobs > 1 and len(points) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_execute, t) for t in tasks]
                outcomes = [self._collect(f.result, p) for f, p in zip(futures, points)]
        else:
            outcomes = [self._collect(lambda t=t: _execute(t), t[3]) for t in tasks]
        for point_rows in outcomes:
            rows.extend(point_rows)

        columns = [c for c in self.param_columns if c != "target_ratio" or any("target_ratio" in r for r in rows)]
        columns += self.columns + ["error"]
        result = ExperimentResult(spec.name, columns, rows, failed_points=self.failed_points)

        out_dir.mkdir(parents=True, exist_ok=True)
        table = out_dir / f"{spec.name}.csv"
        table.write_text(result.to_csv(), encoding="utf-8")
        result.files["table"] = str(table)
        if spec.plots and rows:
            result.files.update(self.plot(spec, result, out_dir))

        result.wall_time = time.time() - started
        meta = out_dir / f"{spec.name}.meta.json"
        meta.write_text(json.dumps(self.metadata(spec, result), indent=2, ensure_ascii=False), encoding="utf-8")
        result.files["metadata"] = str(meta)

        self.status = ExperimentStatus.ERROR if self.failed_points else ExperimentStatus.COMPLETED
        self.logger.info(f"Expérience terminée en {result.wall_time:.2f}s - "
                         f"{self.total_points - self.failed_points}/{self.total_points} points réussis")
        return result

    def _collect(self, compute, point: GridPoint) -> List[Dict[str, Any]]:
        t0 = time.time()
        try:
            rows = compute()
            self.logger.debug(f"Point {point.index} terminé en {time.time() - t0:.2f}s")
            return rows
        except SirsNetError as e:
            self.failed_points += 1
            self.logger.error(f"Point {point.index} ({point.params.label()}) en échec: {e}")
            return [{**point.echo(), 'error': str(e)}]

    def metadata(self, spec: ExperimentSpec, result: ExperimentResult) -> Dict[str, Any]:
        from .. import __version__
        import matplotlib
        import networkx
        import numpy
        import pydantic
        import scipy

        return {
            'name': spec.name,
            'kind': spec.kind,
            'spec_sha256': spec.sha256(),
            'versions': {
                'sirsnet': __version__,
                'python': platform.python_version(),
                'numpy': numpy.__version__,
                'scipy': scipy.__version__,
                'networkx': networkx.__version__,
                'matplotlib': matplotlib.__version__,
                'pydantic': pydantic.__version__,
            },
            'wall_time_s': result.wall_time,
            'decay_fit_window': [config.decay_fit_start, config.decay_fit_stop],
            'points': self.total_points,
            'failed_points': self.failed_points,
            'files': dict(result.files),
        }
