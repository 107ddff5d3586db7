"""
SirsNet - Champ moyen
Application non linéaire à 2n états, modèles linéarisés, seuils,
point fixe endémique et propriétés des fonctions Ξ, ω, Ψ
"""

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import svds

from ..core.config import config
from ..core.errors import DomainError, InvariantViolation, ParameterError
from ..graph.graph_core import Graph, SpectralReport, spectral_radius
from .params import EpidemicParams, Variant

logger = logging.getLogger(__name__)

NODE_TOL = 1e-12
# au-delà de cette dimension, la norme 2 passe par svds au lieu d'une SVD dense
DENSE_NORM_LIMIT = 4000


# ----------------------------------------------------------------------
# États

@dataclass
class NodeProbs:
    """Probabilités approchées P_R et P_I par nœud (P_S implicite)"""
    p_r: np.ndarray
    p_i: np.ndarray

    def __post_init__(self):
        self.p_r = np.asarray(self.p_r, dtype=np.float64)
        self.p_i = np.asarray(self.p_i, dtype=np.float64)

    @property
    def n(self) -> int:
        return int(self.p_i.size)

    @property
    def p_s(self) -> np.ndarray:
        return 1.0 - self.p_r - self.p_i

    @classmethod
    def uniform(cls, n: int, p_r: float, p_i: float) -> "NodeProbs":
        return cls(np.full(n, p_r), np.full(n, p_i))

    @classmethod
    def disease_free(cls, params: EpidemicParams, n: int) -> "NodeProbs":
        return cls.uniform(n, params.p_r_star, 0.0)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "NodeProbs":
        n = vec.size // 2
        return cls(vec[:n].copy(), vec[n:].copy())

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.p_r, self.p_i])

    def check(self, tol: float = NODE_TOL) -> None:
        if (np.any(self.p_r < -tol) or np.any(self.p_i < -tol)
                or np.any(self.p_r + self.p_i > 1.0 + tol)):
            raise InvariantViolation("probabilités de nœud hors du simplexe")

    def max_distance(self, other: "NodeProbs") -> float:
        return float(max(np.abs(self.p_r - other.p_r).max(), np.abs(self.p_i - other.p_i).max()))


# ----------------------------------------------------------------------
# Application non linéaire

def neighbor_product(g: Graph, values: np.ndarray) -> np.ndarray:
    """∏_{j∈N_i} values_j pour chaque nœud (1 pour un nœud isolé)"""
    out = np.ones(g.n, dtype=np.float64)
    if g.indices.size == 0:
        return out
    gathered = values[g.indices]
    starts = g.indptr[:-1]
    nonempty = g.degrees > 0
    out[nonempty] = np.multiply.reduceat(gathered, starts[nonempty])
    return out


def xi(g: Graph, beta: float, p_i: np.ndarray) -> np.ndarray:
    """Ξ_i(P_I) = 1 - ∏_{j∈N_i}(1 - βP_{I,j})"""
    return 1.0 - neighbor_product(g, 1.0 - beta * np.asarray(p_i, dtype=np.float64))


def omega(delta: float, p_r, p_i):
    """ω(P_R, P_I) = δP_I / (1 - P_R - P_I)"""
    return delta * np.asarray(p_i) / (1.0 - np.asarray(p_r) - np.asarray(p_i))


def step_nonlinear(g: Graph, params: EpidemicParams, s: NodeProbs, check: bool = True) -> NodeProbs:
    """Un pas de l'application de champ moyen de la variante"""
    p_r, p_i = s.p_r, s.p_i
    susceptible = 1.0 - p_r - p_i
    escape = neighbor_product(g, 1.0 - params.beta * p_i)
    theta = params.theta

    next_r = (1.0 - params.gamma) * p_r + params.delta * p_i
    if params.variant is Variant.SIRS:
        next_i = (1.0 - params.delta) * p_i + (1.0 - escape) * susceptible
    elif params.variant is Variant.SIV_INFECTION_DOMINANT:
        next_r = next_r + escape * theta * susceptible
        next_i = (1.0 - params.delta) * p_i + (1.0 - escape) * susceptible
    else:
        next_r = next_r + theta * susceptible
        next_i = (1.0 - params.delta) * p_i + (1.0 - theta) * (1.0 - escape) * susceptible

    out = NodeProbs(next_r, next_i)
    if check:
        out.check()
    return out


@dataclass
class MeanFieldTrajectory:
    """Moyennes par pas de P_R et P_I (et états complets si demandés)"""
    mean_p_r: np.ndarray
    mean_p_i: np.ndarray
    final: NodeProbs
    states: List[NodeProbs] = field(default_factory=list)

    @property
    def total_p_i(self) -> np.ndarray:
        return self.mean_p_i * self.final.n

    def to_csv(self) -> str:
        lines = ["t,mean_P_R,mean_P_I"]
        for t, (r, i) in enumerate(zip(self.mean_p_r.tolist(), self.mean_p_i.tolist())):
            lines.append(f"{t},{r!r},{i!r}")
        return "\n".join(lines) + "\n"


def _iterate(step: Callable[[NodeProbs], NodeProbs], s0: NodeProbs, steps: int,
             record_states: bool) -> MeanFieldTrajectory:
    mean_r = np.empty(steps + 1)
    mean_i = np.empty(steps + 1)
    s = s0
    states = [s0] if record_states else []
    mean_r[0], mean_i[0] = s.p_r.mean(), s.p_i.mean()
    for t in range(1, steps + 1):
        s = step(s)
        mean_r[t], mean_i[t] = s.p_r.mean(), s.p_i.mean()
        if record_states:
            states.append(s)
    return MeanFieldTrajectory(mean_r, mean_i, s, states)


def iterate_nonlinear(g: Graph, params: EpidemicParams, s0: NodeProbs, steps: int,
                      record_states: bool = False) -> MeanFieldTrajectory:
    return _iterate(lambda s: step_nonlinear(g, params, s), s0, steps, record_states)


# ----------------------------------------------------------------------
# Modèles linéaires M, M', M''

def _norm2(matrix: sparse.spmatrix) -> float:
    """Plus grande valeur singulière"""
    if matrix.shape[0] <= DENSE_NORM_LIMIT:
        return float(np.linalg.norm(matrix.toarray(), 2))
    return float(svds(matrix.tocsc(), k=1, return_singular_vectors=False)[0])


@dataclass
class LinearModel:
    """
    Matrice par blocs [[a·I, b·I + b_adj·A], [0, c·I + c_adj·A]] et décalage (P_R*·1, 0)

    SIRS : M ; infection-dominante : M' ; vaccination-dominante : M''.
    """
    variant: Variant
    adjacency: sparse.csr_matrix
    a: float
    b: float
    b_adj: float
    c: float
    c_adj: float
    offset: np.ndarray
    lambda_max: float

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def spectral_norm_upper(self) -> float:
        """max(|a|, module max des valeurs propres du bloc inférieur droit) avec λ ∈ [-λ_max, λ_max]"""
        return max(abs(self.a),
                   abs(self.c + self.c_adj * self.lambda_max),
                   abs(self.c - self.c_adj * self.lambda_max))

    def to_sparse(self) -> sparse.csr_matrix:
        eye = sparse.identity(self.n, format="csr")
        A = self.adjacency
        return sparse.bmat([
            [self.a * eye, self.b * eye + self.b_adj * A],
            [None, self.c * eye + self.c_adj * A],
        ], format="csr")

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def operator_norm(self) -> float:
        """‖M‖₂"""
        return _norm2(self.to_sparse())

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """offset + M (vec - offset)"""
        d = vec - self.offset
        n = self.n
        d_r, d_i = d[:n], d[n:]
        A_di = self.adjacency @ d_i
        top = self.a * d_r + self.b * d_i + self.b_adj * A_di
        bottom = self.c * d_i + self.c_adj * A_di
        return self.offset + np.concatenate([top, bottom])


def build_linear_model(g: Graph, params: EpidemicParams,
                       spectral: Optional[SpectralReport] = None) -> LinearModel:
    """Linéarisation autour du point sans maladie, blocs issus des formes closes"""
    spectral = spectral or spectral_radius(g)
    beta, delta, gamma, theta = params.beta, params.delta, params.gamma, params.theta
    n = g.n
    if params.variant is Variant.SIRS:
        return LinearModel(params.variant, g.adjacency, 1.0 - gamma, delta, 0.0,
                           1.0 - delta, beta, np.zeros(2 * n), spectral.lambda_max)
    p_s, p_r = params.p_s_star, params.p_r_star
    c_adj = p_s * beta
    if params.variant is Variant.SIV_VACCINATION_DOMINANT:
        c_adj = (1.0 - theta) * p_s * beta
    offset = np.concatenate([np.full(n, p_r), np.zeros(n)])
    return LinearModel(params.variant, g.adjacency, 1.0 - gamma - theta, delta - theta,
                       -theta * p_s * beta, 1.0 - delta, c_adj, offset, spectral.lambda_max)


def step_linear(model: LinearModel, s: NodeProbs) -> NodeProbs:
    """Un pas du modèle linéaire affine"""
    return NodeProbs.from_vector(model.apply(s.to_vector()))


def iterate_linear(model: LinearModel, s0: NodeProbs, steps: int,
                   record_states: bool = False) -> MeanFieldTrajectory:
    return _iterate(lambda s: step_linear(model, s), s0, steps, record_states)


# ----------------------------------------------------------------------
# Seuils

class Regime(Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


def classify(ratio: float, tol: Optional[float] = None) -> Regime:
    tol = config.regime_tol if tol is None else tol
    if abs(ratio - 1.0) <= tol:
        return Regime.CRITICAL
    return Regime.SUBCRITICAL if ratio < 1.0 else Regime.SUPERCRITICAL


@dataclass
class ThresholdReport:
    """Quantités de seuil locale et globale ; le régime suit la quantité globale"""
    variant: Variant
    beta: float
    delta: float
    gamma: float
    theta: float
    lambda_max: float
    factor_local: float
    factor_global: float
    ratio_local: float
    ratio_global: float
    regime: Regime
    regime_local: Regime
    disconnected: bool = False

    @property
    def ratio(self) -> float:
        return self.ratio_global

    def to_dict(self) -> dict:
        return {
            'variant': self.variant.value,
            'beta': self.beta,
            'delta': self.delta,
            'gamma': self.gamma,
            'theta': self.theta,
            'lambda_max': self.lambda_max,
            'factor_local': self.factor_local,
            'factor_global': self.factor_global,
            'ratio_local': self.ratio_local,
            'ratio_global': self.ratio_global,
            'regime': self.regime.value,
            'regime_local': self.regime_local.value,
            'disconnected': self.disconnected,
        }


def base_ratio(beta: float, delta: float, lambda_max: float) -> float:
    """βλ_max/δ (infini si δ = 0 avec une pression d'infection non nulle)"""
    pressure = beta * lambda_max
    if delta == 0.0:
        return float("inf") if pressure > 0.0 else 0.0
    return pressure / delta


def threshold_report(g: Graph, params: EpidemicParams,
                     spectral: Optional[SpectralReport] = None) -> ThresholdReport:
    spectral = spectral or spectral_radius(g)
    base = base_ratio(params.beta, params.delta, spectral.lambda_max)
    if params.variant is Variant.SIRS:
        f_local, f_global = 1.0, 1.0
    elif params.variant is Variant.SIV_INFECTION_DOMINANT:
        f_local, f_global = params.p_s_star, 1.0
    else:
        f_local = (1.0 - params.theta) * params.p_s_star
        f_global = 1.0 - params.theta
    # 0·inf non défini : un facteur nul annule la quantité
    ratio_local = f_local * base if f_local > 0.0 else 0.0
    ratio_global = f_global * base if f_global > 0.0 else 0.0
    return ThresholdReport(
        variant=params.variant, beta=params.beta, delta=params.delta,
        gamma=params.gamma, theta=params.theta, lambda_max=spectral.lambda_max,
        factor_local=f_local, factor_global=f_global,
        ratio_local=ratio_local, ratio_global=ratio_global,
        regime=classify(ratio_global), regime_local=classify(ratio_local),
        disconnected=spectral.disconnected,
    )


def mixing_time_bound(g: Graph, params: EpidemicParams, epsilon: float,
                      model: Optional[LinearModel] = None) -> float:
    """
    Borne supérieure du temps de mélange de la chaîne exacte (infinie si la norme ≥ 1)

    SIRS : log(2n/ε)/(-log‖M‖₂). SIV : log(n/ε)/(-log‖(1-δ)I + c·βA‖₂),
    c = 1 en infection-dominante, 1-θ en vaccination-dominante.
    """
    if not 0.0 < epsilon:
        raise ParameterError("epsilon doit être > 0")
    n = g.n
    if params.variant is Variant.SIRS:
        norm = (model or build_linear_model(g, params)).operator_norm()
        numerator = np.log(2 * n / epsilon)
    else:
        factor = 1.0 - params.theta if params.variant is Variant.SIV_VACCINATION_DOMINANT else 1.0
        block = (1.0 - params.delta) * sparse.identity(n, format="csr") + factor * params.beta * g.adjacency
        norm = _norm2(block)
        numerator = np.log(n / epsilon)
    if norm >= 1.0:
        return float("inf")
    if norm == 0.0:
        return 1.0 if numerator > 0 else 0.0
    return float(max(0.0, numerator / (-np.log(norm))))


# ----------------------------------------------------------------------
# Ψ = Ξ - ω

def psi(g: Graph, params: EpidemicParams, p_r: np.ndarray, p_i: np.ndarray) -> np.ndarray:
    """Ψ_i = Ξ_i(P_I) - ω(P_{R,i}, P_{I,i}) ; ses zéros sont les points fixes SIRS"""
    p_r = np.asarray(p_r, dtype=np.float64)
    p_i = np.asarray(p_i, dtype=np.float64)
    if np.any(p_r + p_i >= 1.0):
        bad = int(np.flatnonzero(p_r + p_i >= 1.0)[0])
        raise DomainError(f"P_R + P_I ≥ 1 au nœud {bad} : ω non défini")
    return xi(g, params.beta, p_i) - omega(params.delta, p_r, p_i)


def psi_jacobian(g: Graph, params: EpidemicParams, point: Optional[NodeProbs] = None,
                 h: float = 1e-7) -> np.ndarray:
    """Jacobienne n x 2n de Ψ par différences centrées (colonnes P_R puis P_I)"""
    n = g.n
    base = (point or NodeProbs.uniform(n, 0.0, 0.0)).to_vector()
    jac = np.empty((n, 2 * n))
    for k in range(2 * n):
        up, down = base.copy(), base.copy()
        up[k] += h
        down[k] -= h
        f_up = psi(g, params, up[:n], up[n:])
        f_down = psi(g, params, down[:n], down[n:])
        jac[:, k] = (f_up - f_down) / (2.0 * h)
    return jac


# ----------------------------------------------------------------------
# Itération de point fixe amortie avec détection de cycles

class FixedPointOutcome(Enum):
    CONVERGED = "converged"
    CYCLE_DETECTED = "cycle_detected"
    DIVERGED = "diverged"


class Damping(Enum):
    ADAPTIVE = "adaptive"
    NONE = "none"


@dataclass
class IterationResult:
    x: np.ndarray
    iterations: int
    step_residual: float
    outcome: FixedPointOutcome
    period: Optional[int] = None
    alpha: float = 1.0


def iterate_fixed_point(F: Callable[[np.ndarray], np.ndarray], x0: np.ndarray, *,
                        tol: Optional[float] = None, max_iter: Optional[int] = None,
                        damping: Damping = Damping.ADAPTIVE, cycle_window: Optional[int] = None,
                        match_tol: Optional[float] = None, damping_min: Optional[float] = None,
                        damping_window: Optional[int] = None,
                        monitor: Optional[Callable[[np.ndarray, np.ndarray], float]] = None) -> IterationResult:
    """
    x ← (1-α)x + αF(x), α = 1 au départ

    En mode adaptatif, α est divisé par deux (jusqu'à damping_min) lorsque le
    signe du moniteur alterne sur damping_window pas ou qu'un cycle apparaît.
    Un cycle est signalé s'il persiste sans amortissement ou à α minimal.
    """
    tol = config.fixed_point_tol if tol is None else tol
    max_iter = config.fixed_point_max_iter if max_iter is None else max_iter
    cycle_window = config.cycle_window if cycle_window is None else cycle_window
    match_tol = config.cycle_match_tol if match_tol is None else match_tol
    damping_min = config.damping_min if damping_min is None else damping_min
    damping_window = config.damping_window if damping_window is None else damping_window
    monitor = monitor or (lambda x, fx: float(np.sum(fx - x)))

    x = np.asarray(x0, dtype=np.float64).copy()
    alpha = 1.0
    history: deque = deque(maxlen=cycle_window)
    signs: deque = deque(maxlen=damping_window)
    residual = np.inf

    for it in range(1, max_iter + 1):
        fx = F(x)
        if not np.all(np.isfinite(fx)):
            return IterationResult(x, it, float("nan"), FixedPointOutcome.DIVERGED, alpha=alpha)
        residual = float(np.max(np.abs(fx - x)))
        if residual <= tol:
            return IterationResult(fx, it, residual, FixedPointOutcome.CONVERGED, alpha=alpha)

        history.append(x)
        adaptive = damping is Damping.ADAPTIVE and alpha > damping_min
        signs.append(np.sign(monitor(x, fx)))
        if adaptive and len(signs) == damping_window and all(
                signs[k] * signs[k + 1] < 0 for k in range(damping_window - 1)):
            alpha = max(damping_min, alpha / 2.0)
            signs.clear()
            history.clear()
            logger.debug(f"Itération {it}: oscillation, amortissement α={alpha}")

        x_next = (1.0 - alpha) * x + alpha * fx

        # période ≥ 2 seulement : une période 1 est une convergence lente
        if residual > 10.0 * match_tol:
            for period, past in enumerate(reversed(history), start=1):
                if period >= 2 and np.max(np.abs(x_next - past)) <= match_tol:
                    if damping is Damping.ADAPTIVE and alpha > damping_min:
                        alpha = max(damping_min, alpha / 2.0)
                        history.clear()
                        signs.clear()
                        logger.debug(f"Itération {it}: cycle de période {period}, α={alpha}")
                        x_next = (1.0 - alpha) * x + alpha * fx
                        break
                    logger.info(f"Cycle de période {period} détecté à l'itération {it}")
                    return IterationResult(x_next, it, residual, FixedPointOutcome.CYCLE_DETECTED,
                                           period=period, alpha=alpha)
        x = x_next

    return IterationResult(x, max_iter, residual, FixedPointOutcome.DIVERGED, alpha=alpha)


@dataclass
class FixedPointResult:
    """Point fixe endémique : P_I*, P_R*, résidu et issue"""
    p_i_star: np.ndarray
    p_r_star: np.ndarray
    residual: float
    outcome: FixedPointOutcome
    period: Optional[int] = None
    iterations: int = 0
    alpha: float = 1.0
    relation_error: Optional[float] = None

    @property
    def converged(self) -> bool:
        return self.outcome is FixedPointOutcome.CONVERGED

    def as_node_probs(self) -> NodeProbs:
        return NodeProbs(self.p_r_star, self.p_i_star)

    def to_dict(self) -> dict:
        return {
            'p_i_star': self.p_i_star.tolist(),
            'p_r_star': self.p_r_star.tolist(),
            'residual': self.residual,
            'outcome': self.outcome.value,
            'period': self.period,
            'iterations': self.iterations,
            'alpha': self.alpha,
            'relation_error': self.relation_error,
        }


def starting_scale(params: EpidemicParams) -> float:
    """c = min(0.5, 0.9/(1+δ/γ)) garde P_R + P_I ≤ 0.9"""
    return min(0.5, 0.9 / (1.0 + params.delta / params.gamma))


def endemic_fixed_point(g: Graph, params: EpidemicParams, tol: Optional[float] = None,
                        max_iter: Optional[int] = None, damping: Damping = Damping.ADAPTIVE,
                        cycle_window: Optional[int] = None, start: Optional[NodeProbs] = None,
                        spectral: Optional[SpectralReport] = None) -> FixedPointResult:
    """
    Point fixe non trivial de l'application de champ moyen

    SIRS : régime global surcritique requis ; résidu = ‖Ψ‖∞.
    SIV : quantité locale > 1 requise ; résidu = ‖F(x) - x‖∞.
    """
    if params.gamma <= 0.0:
        raise ParameterError("le point fixe endémique demande gamma > 0")
    report = threshold_report(g, params, spectral)
    regime = report.regime if params.variant is Variant.SIRS else report.regime_local
    if regime is not Regime.SUPERCRITICAL:
        raise DomainError(
            f"régime {regime.value} (ratio {report.ratio_global:.6g}, local {report.ratio_local:.6g}) : "
            f"seul le point fixe trivial existe"
        )
    if report.disconnected:
        logger.warning("Graphe non connexe : aucune garantie d'unicité du point fixe")

    n = g.n
    if start is None:
        c = starting_scale(params)
        start = NodeProbs.uniform(n, params.delta / params.gamma * c, c)

    def F(vec: np.ndarray) -> np.ndarray:
        return step_nonlinear(g, params, NodeProbs.from_vector(vec), check=False).to_vector()

    result = iterate_fixed_point(
        F, start.to_vector(), tol=tol, max_iter=max_iter, damping=damping,
        cycle_window=cycle_window, monitor=lambda x, fx: float(np.sum(fx[n:] - x[n:])),
    )
    point = NodeProbs.from_vector(result.x)

    relation_error = None
    if params.variant is Variant.SIRS:
        try:
            residual = float(np.max(np.abs(psi(g, params, point.p_r, point.p_i))))
        except DomainError:
            residual = float("inf")
        relation_error = float(np.max(np.abs(point.p_r - params.delta / params.gamma * point.p_i)))
    else:
        residual = float(np.max(np.abs(F(result.x) - result.x)))

    if result.outcome is FixedPointOutcome.CONVERGED:
        logger.info(f"Point fixe atteint en {result.iterations} itérations (résidu {residual:.2e})")
        if np.any(point.p_i <= 0.0):
            logger.warning("Point fixe avec des composantes P_I nulles")
    else:
        logger.warning(f"Point fixe non atteint: {result.outcome.value} après {result.iterations} itérations")

    return FixedPointResult(point.p_i, point.p_r, residual, result.outcome, result.period,
                            result.iterations, result.alpha, relation_error)


@dataclass
class UniquenessReport:
    """Accord multi-départs : indice, pas preuve, de l'unicité"""
    results: List[FixedPointResult]
    consensus: Optional[FixedPointResult]
    max_deviation: float
    agree_tol: float

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.results)

    @property
    def agree(self) -> bool:
        return self.all_converged and self.max_deviation <= self.agree_tol

    def to_dict(self) -> dict:
        return {
            'starts': len(self.results),
            'converged': sum(r.converged for r in self.results),
            'max_deviation': self.max_deviation,
            'agree': self.agree,
            'consensus': self.consensus.to_dict() if self.consensus else None,
        }


def random_interior_starts(n: int, count: int, seed: int = 0) -> List[NodeProbs]:
    """Départs aléatoires avec P_R + P_I ∈ [0.05, 0.9]"""
    rng = np.random.default_rng(seed)
    starts = []
    for _ in range(count):
        total = rng.uniform(0.05, 0.9, size=n)
        share = rng.uniform(0.1, 0.9, size=n)
        starts.append(NodeProbs(total * (1.0 - share), total * share))
    return starts


def _solve_from(args) -> FixedPointResult:
    g, params, start, tol, max_iter = args
    return endemic_fixed_point(g, params, tol=tol, max_iter=max_iter, start=start)


def check_uniqueness(g: Graph, params: EpidemicParams, starts: int = 20, seed: int = 0,
                     agree_tol: float = 1e-7, jobs: int = 1, tol: Optional[float] = None,
                     max_iter: Optional[int] = None) -> UniquenessReport:
    """Résout depuis plusieurs départs et mesure l'écart au point de plus petit résidu"""
    spectral = spectral_radius(g)
    # vérification du régime avant de lancer les workers
    threshold_report(g, params, spectral)
    initial = random_interior_starts(g.n, starts, seed)
    tasks = [(g, params, s, tol, max_iter) for s in initial]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_from, tasks))
    else:
        results = [_solve_from(t) for t in tasks]

    converged = [r for r in results if r.converged]
    if not converged:
        return UniquenessReport(results, None, float("inf"), agree_tol)
    consensus = min(converged, key=lambda r: r.residual)
    deviation = max(consensus.as_node_probs().max_distance(r.as_node_probs()) for r in converged)
    logger.info(f"Sondage d'unicité: {len(converged)}/{starts} convergés, écart max {deviation:.2e}")
    return UniquenessReport(results, consensus, deviation, agree_tol)


# ----------------------------------------------------------------------
# Propriétés de Ξ et ω

@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst: float
    samples: int
    note: str = ""


@dataclass
class PropertySuiteReport:
    results: Dict[str, PropertyResult]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_dict(self) -> dict:
        return {name: {'passed': r.passed, 'worst': r.worst, 'samples': r.samples, 'note': r.note}
                for name, r in self.results.items()}


def xi_omega_property_suite(g: Graph, params: EpidemicParams, samples: int = 200,
                            seed: int = 0, fd_tol: float = 1e-6,
                            second_diff_tol: float = 1e-10) -> PropertySuiteReport:
    """Vérifie numériquement les propriétés (a) à (f) sur des points tirés au hasard"""
    rng = np.random.default_rng(seed)
    n, beta, delta = g.n, params.beta, params.delta
    A = g.adjacency.toarray() if n <= 2000 else None
    results: Dict[str, PropertyResult] = {}

    def adj(i: int, j: int) -> float:
        return float(A[i, j]) if A is not None else float(j in set(g.neighbors(i).tolist()))

    def pick_pair():
        i = int(rng.integers(n))
        nb = g.neighbors(i)
        if nb.size and rng.random() < 0.5:
            return i, int(rng.choice(nb))
        return i, int(rng.integers(n))

    def basis(j: int, h: float) -> np.ndarray:
        e = np.zeros(n)
        e[j] = h
        return e

    # (a) Ξ(0) = 0 et gradient en 0 = βA
    h = 1e-6
    zero = np.zeros(n)
    worst = float(np.max(np.abs(xi(g, beta, zero))))
    for _ in range(samples):
        i, j = pick_pair()
        grad = (xi(g, beta, basis(j, h))[i] - xi(g, beta, basis(j, -h))[i]) / (2 * h)
        worst = max(worst, abs(grad - beta * adj(i, j)))
    results['a'] = PropertyResult('a', worst <= fd_tol, worst, samples)

    # (b) signe des dérivées partielles selon l'adjacence
    worst, ok = 0.0, True
    for _ in range(samples):
        u = rng.uniform(0.0, 0.9, size=n)
        i, j = pick_pair()
        grad = (xi(g, beta, u + basis(j, h))[i] - xi(g, beta, u - basis(j, h))[i]) / (2 * h)
        if adj(i, j):
            if beta > 0.0 and grad <= 0.0:
                ok = False
                worst = min(worst, grad)
        elif abs(grad) > fd_tol:
            ok = False
            worst = max(worst, abs(grad))
    results['b'] = PropertyResult('b', ok, worst, samples,
                                  "" if beta > 0 else "beta = 0 : positivité non testable")

    # (c) différences secondes croisées ≤ 0
    h2 = 1e-3
    worst = -np.inf
    for _ in range(samples):
        u = rng.uniform(0.0, 0.9, size=n)
        i = int(rng.integers(n))
        j, k = pick_pair()[1], pick_pair()[1]
        ej, ek = basis(j, h2), basis(k, h2)
        diff = (xi(g, beta, u + ej + ek)[i] - xi(g, beta, u + ej)[i]
                - xi(g, beta, u + ek)[i] + xi(g, beta, u)[i])
        worst = max(worst, diff)
    results['c'] = PropertyResult('c', worst <= second_diff_tol, float(worst), samples)

    # (d) ω(0,0) = 0 et ∂ω/∂P_I en (0,0) = δ
    slope = (omega(delta, 0.0, h) - omega(delta, 0.0, -h)) / (2 * h)
    worst = max(abs(float(omega(delta, 0.0, 0.0))), abs(float(slope) - delta))
    results['d'] = PropertyResult('d', worst <= fd_tol, worst, 1)

    # (e) ω strictement croissante en P_I
    worst, ok = np.inf, True
    for _ in range(samples):
        p_r = rng.uniform(0.0, 0.8)
        p_i = rng.uniform(1e-3, 0.95 - p_r)
        step = 1e-4 * (1.0 - p_r - p_i)
        incr = float(omega(delta, p_r, p_i + step) - omega(delta, p_r, p_i))
        worst = min(worst, incr)
        if delta > 0.0 and incr <= 0.0:
            ok = False
    results['e'] = PropertyResult('e', ok, float(worst), samples,
                                  "" if delta > 0 else "delta = 0 : ω identiquement nulle")

    # (f) ω(r,p)/p croissante en r et en p : paires (r1,p1) < (r2,p2)
    worst, ok = np.inf, True
    for _ in range(samples):
        r1, p1 = rng.uniform(0.0, 0.45), rng.uniform(1e-3, 0.45)
        r2 = r1 + rng.uniform(1e-3, 0.49 - r1)
        p2 = p1 + rng.uniform(1e-3, 0.49 - p1)
        gap = float(omega(delta, r2, p2) / p2 - omega(delta, r1, p1) / p1)
        worst = min(worst, gap)
        if delta > 0.0 and gap <= 0.0:
            ok = False
    results['f'] = PropertyResult('f', ok, float(worst), samples,
                                  "ordre des arguments : ω(P_R, P_I)/P_I")

    # Jacobienne de Ψ à l'origine = [0 | βA - δI]
    jac = psi_jacobian(g, params)
    expected = np.hstack([np.zeros((n, n)), beta * g.adjacency.toarray() - delta * np.eye(n)])
    worst = float(np.max(np.abs(jac - expected)))
    results['psi_jacobian'] = PropertyResult('psi_jacobian', worst <= fd_tol, worst, 1)

    failed = [name for name, r in results.items() if not r.passed]
    if failed:
        logger.error(f"Propriétés en échec: {', '.join(failed)}")
    return PropertySuiteReport(results)
