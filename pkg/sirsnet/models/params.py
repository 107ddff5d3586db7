"""
SirsNet - Paramètres épidémiques
Taux du modèle, variantes SIRS/SIV et noyau de transition d'un nœud
"""

from enum import Enum
from typing import Any, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.errors import ParameterError

# états d'un nœud
S, I, R = 0, 1, 2
STATE_LABELS = ("S", "I", "R")


class Variant(Enum):
    """Variantes du modèle"""
    SIRS = "sirs"
    SIV_INFECTION_DOMINANT = "infection_dominant"
    SIV_VACCINATION_DOMINANT = "vaccination_dominant"

    @property
    def is_siv(self) -> bool:
        return self is not Variant.SIRS

    @classmethod
    def parse(cls, value: Union[str, "Variant"]) -> "Variant":
        if isinstance(value, Variant):
            return value
        key = value.strip().lower().replace("-", "_")
        aliases = {
            'sirs': cls.SIRS,
            'infection_dominant': cls.SIV_INFECTION_DOMINANT,
            'siv_infection_dominant': cls.SIV_INFECTION_DOMINANT,
            'siv_id': cls.SIV_INFECTION_DOMINANT,
            'vaccination_dominant': cls.SIV_VACCINATION_DOMINANT,
            'siv_vaccination_dominant': cls.SIV_VACCINATION_DOMINANT,
            'siv_vd': cls.SIV_VACCINATION_DOMINANT,
        }
        if key not in aliases:
            raise ParameterError(f"variante inconnue '{value}' (choix: sirs, infection_dominant, vaccination_dominant)")
        return aliases[key]


class EpidemicParams(BaseModel):
    """Taux β (infection par lien), δ (guérison), γ (perte d'immunité), θ (vaccination)"""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(ge=0.0, le=1.0)
    delta: float = Field(ge=0.0, le=1.0)
    gamma: float = Field(ge=0.0, le=1.0)
    theta: float = Field(default=0.0, ge=0.0, le=1.0)
    variant: Variant = Variant.SIRS

    @model_validator(mode="after")
    def _check_variant(self) -> "EpidemicParams":
        if self.variant is Variant.SIRS and self.theta != 0.0:
            raise ValueError("la variante SIRS impose theta = 0")
        if self.variant.is_siv and self.gamma == 1.0 and self.theta == 1.0:
            # la chaîne S<->R d'un nœud est alors périodique
            raise ValueError("gamma = 1 et theta = 1 rendent la chaîne périodique")
        return self

    @classmethod
    def build(cls, **fields: Any) -> "EpidemicParams":
        """Construit en convertissant les erreurs de validation en ParameterError"""
        if isinstance(fields.get("variant"), str):
            fields["variant"] = Variant.parse(fields["variant"])
        try:
            return cls(**fields)
        except ValidationError as e:
            details = "; ".join(err["msg"] for err in e.errors())
            raise ParameterError(f"paramètres invalides: {details}") from e

    def replace(self, **changes: Any) -> "EpidemicParams":
        """Copie validée avec certains champs remplacés"""
        return EpidemicParams.build(**{**self.model_dump(), **changes})

    @property
    def p_s_star(self) -> float:
        """Masse S du point sans maladie : γ/(γ+θ), 1 pour SIRS"""
        if self.theta == 0.0:
            return 1.0
        return self.gamma / (self.gamma + self.theta)

    @property
    def p_r_star(self) -> float:
        """Masse R du point sans maladie : θ/(γ+θ), 0 pour SIRS"""
        if self.theta == 0.0:
            return 0.0
        return self.theta / (self.gamma + self.theta)

    def label(self) -> str:
        return (f"{self.variant.value} β={self.beta:g} δ={self.delta:g} "
                f"γ={self.gamma:g} θ={self.theta:g}")


def kernel_rows(params: EpidemicParams, states: np.ndarray, m: np.ndarray) -> np.ndarray:
    """
    Noyaux de transition vectorisés : ligne k = loi du prochain état du nœud
    d'état states[k] ayant m[k] voisins infectés. Retourne un tableau (k, 3).
    """
    states = np.asarray(states)
    q = (1.0 - params.beta) ** np.asarray(m, dtype=np.float64)
    rows = np.zeros(states.shape + (3,), dtype=np.float64)
    theta = params.theta

    on_s = states == S
    qs = q[on_s] if q.shape == states.shape else np.broadcast_to(q, states.shape)[on_s]
    if params.variant is Variant.SIRS:
        rows[on_s, S] = qs
        rows[on_s, I] = 1.0 - qs
    elif params.variant is Variant.SIV_INFECTION_DOMINANT:
        rows[on_s, S] = qs * (1.0 - theta)
        rows[on_s, I] = 1.0 - qs
        rows[on_s, R] = qs * theta
    else:
        rows[on_s, S] = qs * (1.0 - theta)
        rows[on_s, I] = (1.0 - qs) * (1.0 - theta)
        rows[on_s, R] = theta

    on_i = states == I
    rows[on_i, I] = 1.0 - params.delta
    rows[on_i, R] = params.delta

    on_r = states == R
    rows[on_r, S] = params.gamma
    rows[on_r, R] = 1.0 - params.gamma
    return rows


def node_kernel(params: EpidemicParams, x: int, m: int) -> np.ndarray:
    """Loi (P[S], P[I], P[R]) du prochain état d'un nœud dans l'état x avec m voisins infectés"""
    if m < 0:
        raise ParameterError(f"nombre de voisins infectés négatif: {m}")
    if x not in (S, I, R):
        raise ParameterError(f"état de nœud inconnu: {x}")
    return kernel_rows(params, np.array([x]), np.array([m]))[0]
