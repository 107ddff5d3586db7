"""
SirsNet - Description d'expérience
Schéma JSON des expériences et expansion de la grille de paramètres
"""

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.errors import ParameterError
from ..models.params import EpidemicParams, Variant

Layer = Literal["exact", "meanfield", "linear", "montecarlo"]
ExperimentKind = Literal["threshold_sweep", "layer_comparison", "mixing_scaling"]


class ParamGrid(BaseModel):
    """Produit cartésien des taux ; β donné directement ou via un ratio cible βλ_max/δ"""
    beta: Optional[List[float]] = None
    target_ratio: Optional[List[float]] = None
    delta: List[float] = Field(default_factory=lambda: [0.5])
    gamma: List[float] = Field(default_factory=lambda: [0.5])
    theta: List[float] = Field(default_factory=lambda: [0.0])
    variants: List[Variant] = Field(default_factory=lambda: [Variant.SIRS])

    @field_validator("variants", mode="before")
    @classmethod
    def _parse_variants(cls, value):
        return [Variant.parse(v) for v in value]

    @model_validator(mode="after")
    def _one_beta_source(self) -> "ParamGrid":
        if (self.beta is None) == (self.target_ratio is None):
            raise ValueError("donner exactement un de 'beta' ou 'target_ratio'")
        return self


@dataclass(frozen=True)
class GridPoint:
    """Point de grille résolu"""
    index: int
    params: EpidemicParams
    target_ratio: Optional[float] = None

    def echo(self) -> dict:
        """Colonnes de paramètres répétées dans chaque ligne de sortie"""
        row = {
            'variant': self.params.variant.value,
            'beta': self.params.beta,
            'delta': self.params.delta,
            'gamma': self.params.gamma,
            'theta': self.params.theta,
        }
        if self.target_ratio is not None:
            row['target_ratio'] = self.target_ratio
        return row


class ExperimentSpec(BaseModel):
    """Expérience reproductible décrite en JSON"""
    name: str
    kind: ExperimentKind
    graph: str = "er:500:0.02"
    edge_list: Optional[str] = None
    graph_seed: int = 0
    sizes: Optional[List[int]] = None
    grid: ParamGrid
    layers: List[Layer] = Field(default_factory=lambda: ["meanfield", "montecarlo"])
    horizon: int = Field(default=2000, ge=1)
    mf_steps: int = Field(default=200, ge=1)
    replicas: int = Field(default=20, ge=1)
    seed: int = 0
    init: str = "one_random_infected"
    epsilons: List[float] = Field(default_factory=lambda: [0.25])
    output_dir: str = "results"
    plots: bool = True
    jobs: int = 1

    @model_validator(mode="after")
    def _check(self) -> "ExperimentSpec":
        if self.kind == "mixing_scaling" and not self.sizes:
            raise ValueError("mixing_scaling demande une liste 'sizes'")
        if self.sizes and "{n}" not in self.graph:
            raise ValueError("avec 'sizes', le graphe doit contenir '{n}' (ex. 'path:{n}')")
        # chaque point à β explicite doit être valide
        if self.grid.beta is not None:
            for _ in self.expand(lambda_max=None):
                pass
        return self

    @classmethod
    def from_file(cls, path: str) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as f:
            return cls.model_validate(json.load(f))

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, ensure_ascii=False)

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def graph_spec(self, n: Optional[int] = None) -> str:
        return self.graph.format(n=n) if n is not None else self.graph

    def expand(self, lambda_max: Optional[float]) -> List[GridPoint]:
        """Points de la grille ; SIRS ne prend que theta = 0"""
        g = self.grid
        sources = [("beta", b) for b in g.beta] if g.beta is not None else [("ratio", r) for r in g.target_ratio]
        points: List[GridPoint] = []
        for variant, delta, gamma, theta, (source, value) in itertools.product(
                g.variants, g.delta, g.gamma, g.theta, sources):
            if variant is Variant.SIRS and theta != 0.0:
                continue
            ratio = None
            if source == "beta":
                beta = value
            else:
                ratio = value
                if lambda_max is None:
                    continue
                beta = value * delta / lambda_max if lambda_max > 0 else 0.0
                if beta > 1.0:
                    raise ParameterError(f"ratio cible {value} impose beta={beta:.4g} > 1")
            params = EpidemicParams.build(beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
            points.append(GridPoint(len(points), params, ratio))
        return points
