"""
SirsNet - Chaîne de Markov exacte
Chaîne à 3^n états : lignes de transition, évolution, marginales,
distributions stationnaires, distance en variation totale et temps de mélange
"""

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy import sparse

from ..core.config import config
from ..core.errors import (
    ExactModeCapError, InvariantViolation, ParameterError, SlowMixingError, SupportExplosionError,
)
from ..core.resource_manager import resource_manager
from ..graph.graph_core import Graph
from .params import I, R, S, EpidemicParams, Variant, kernel_rows

logger = logging.getLogger(__name__)

# taille maximale d'un bloc d'expansion (entrées successeur simultanées)
EXPANSION_CHUNK = 1 << 21
MASS_TOL = 1e-12
DOMINATION_TOL = 1e-10


# ----------------------------------------------------------------------
# Codage des états

def _powers(n: int) -> np.ndarray:
    return 3 ** np.arange(n, dtype=np.int64)


def encode_state(digits) -> int:
    """Code base 3, chiffre i = état du nœud i (nœud 0 = chiffre de poids faible)"""
    digits = np.asarray(digits, dtype=np.int64)
    if np.any((digits < 0) | (digits > 2)):
        raise ParameterError("un état de nœud doit valoir 0 (S), 1 (I) ou 2 (R)")
    return int(digits @ _powers(digits.size))


def decode_state(code: int, n: int) -> np.ndarray:
    return decode_states(np.array([code], dtype=np.int64), n)[0]


def decode_states(codes: np.ndarray, n: int) -> np.ndarray:
    """Chiffres base 3 de chaque code : tableau (k, n) en int8"""
    codes = np.asarray(codes, dtype=np.int64)
    return ((codes[:, None] // _powers(n)) % 3).astype(np.int8)


def all_infected_code(n: int) -> int:
    return (3 ** n - 1) // 2


def check_exact_cap(g: Graph, max_nodes: Optional[int] = None) -> None:
    cap = config.exact_max_nodes if max_nodes is None else max_nodes
    if g.n > cap:
        raise ExactModeCapError(g.n, cap)


# ----------------------------------------------------------------------
# Distributions

@dataclass
class MarginalVector:
    """Marginales exactes p_R et p_I par nœud (p_S = 1 - p_R - p_I)"""
    p_r: np.ndarray
    p_i: np.ndarray

    @property
    def p_s(self) -> np.ndarray:
        return 1.0 - self.p_r - self.p_i

    def check(self, tol: float = MASS_TOL) -> None:
        if np.any(self.p_r < -tol) or np.any(self.p_i < -tol) or np.any(self.p_r + self.p_i > 1.0 + tol):
            raise InvariantViolation("marginales hors du simplexe")


class ChainDistribution:
    """
    Vecteur de probabilité creux sur {0,1,2}^n

    Codes triés et uniques, masses strictement positives, somme 1.
    `pruned_mass` garde la masse élaguée à chaque pas d'évolution.
    """

    def __init__(self, n: int, codes: np.ndarray, probs: np.ndarray,
                 pruned_mass: Optional[List[float]] = None, validate: bool = True):
        self.n = n
        self.codes = np.asarray(codes, dtype=np.int64)
        self.probs = np.asarray(probs, dtype=np.float64)
        self.pruned_mass: List[float] = list(pruned_mass or [])
        if validate:
            self.check()

    # Constructeurs

    @classmethod
    def point_mass(cls, n: int, code: int) -> "ChainDistribution":
        if not 0 <= code < 3 ** n:
            raise ParameterError(f"code d'état {code} hors de [0, 3^{n})")
        return cls(n, np.array([code]), np.array([1.0]))

    @classmethod
    def from_mapping(cls, n: int, mass: Mapping[int, float]) -> "ChainDistribution":
        items = sorted((int(c), float(p)) for c, p in mass.items() if p > 0.0)
        codes = np.array([c for c, _ in items], dtype=np.int64)
        probs = np.array([p for _, p in items], dtype=np.float64)
        return cls(n, codes, probs)

    @classmethod
    def from_dense(cls, vec: np.ndarray, n: int, prune_tol: float = 0.0) -> "ChainDistribution":
        keep = vec > prune_tol
        pruned = float(vec[~keep & (vec > 0)].sum())
        codes = np.flatnonzero(keep)
        probs = vec[codes]
        total = probs.sum()
        return cls(n, codes, probs / total, [pruned])

    @classmethod
    def product(cls, node_dists: np.ndarray) -> "ChainDistribution":
        """Loi produit à partir de lois par nœud (tableau (n, 3) des masses S, I, R)"""
        node_dists = np.asarray(node_dists, dtype=np.float64)
        n = node_dists.shape[0]
        codes = np.zeros(1, dtype=np.int64)
        probs = np.ones(1, dtype=np.float64)
        powers = _powers(n)
        for i in range(n):
            states = np.flatnonzero(node_dists[i] > 0.0)
            codes = (codes[:, None] + states[None, :] * powers[i]).ravel()
            probs = (probs[:, None] * node_dists[i, states][None, :]).ravel()
        order = np.argsort(codes, kind="stable")
        probs = probs[order]
        return cls(n, codes[order], probs / probs.sum())

    # Accès

    @property
    def support(self) -> int:
        return int(self.codes.size)

    def total(self) -> float:
        return float(self.probs.sum())

    def prob(self, code: int) -> float:
        idx = np.searchsorted(self.codes, code)
        if idx < self.codes.size and self.codes[idx] == code:
            return float(self.probs[idx])
        return 0.0

    def to_dense(self) -> np.ndarray:
        vec = np.zeros(3 ** self.n, dtype=np.float64)
        vec[self.codes] = self.probs
        return vec

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(self.codes.tolist(), self.probs.tolist()))

    def check(self) -> None:
        if self.codes.size and np.any(np.diff(self.codes) <= 0):
            raise InvariantViolation("codes d'état non triés ou dupliqués")
        if np.any(self.probs <= 0.0):
            raise InvariantViolation("masse nulle ou négative dans la distribution")
        if abs(self.probs.sum() - 1.0) > MASS_TOL * max(1, self.codes.size):
            raise InvariantViolation(f"masse totale {self.probs.sum()!r} différente de 1")

    # Sérialisation

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("state_code,probability\n")
        for c, p in zip(self.codes.tolist(), self.probs.tolist()):
            buf.write(f"{c},{p!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, n: int) -> "ChainDistribution":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0].strip() != "state_code,probability":
            raise ParameterError("en-tête CSV attendu: state_code,probability")
        mass = {}
        for ln in lines[1:]:
            c, p = ln.split(",")
            mass[int(c)] = float(p)
        return cls.from_mapping(n, mass)

    def __repr__(self) -> str:
        return f"ChainDistribution(n={self.n}, support={self.support})"


# ----------------------------------------------------------------------
# Opérateur de transition

class TransitionOperator:
    """
    Générateur des lignes de S pour un graphe et des paramètres fixés

    Les lignes sont produites à la demande par expansion vectorisée du noyau
    produit. Dès que le support dépasse la fraction configurée de 3^n et que
    la matrice complète tient dans le budget, elle est construite une fois en
    CSR puis réutilisée.
    """

    def __init__(self, g: Graph, params: EpidemicParams, max_nodes: Optional[int] = None,
                 memory_budget: Optional[int] = None, dense_switch_fraction: Optional[float] = None):
        check_exact_cap(g, max_nodes)
        self.g = g
        self.params = params
        self.n = g.n
        self.size = 3 ** g.n
        if memory_budget is None:
            memory_budget = resource_manager.memory_budget_entries(config.memory_budget_entries)
        self.memory_budget = memory_budget
        self.dense_switch_fraction = (config.dense_switch_fraction
                                      if dense_switch_fraction is None else dense_switch_fraction)
        self._powers = _powers(g.n)
        self._matrix: Optional[sparse.csr_matrix] = None
        self._matrix_refused = False

    def _node_kernels(self, codes: np.ndarray) -> np.ndarray:
        """Noyaux par nœud pour chaque état source : tableau (k, n, 3)"""
        digits = decode_states(codes, self.n)
        infected = (digits == I).astype(np.float64)
        m = np.rint((self.g.adjacency @ infected.T).T).astype(np.int64)
        return kernel_rows(self.params, digits, m)

    def row_widths(self, codes: np.ndarray) -> np.ndarray:
        """Nombre d'entrées non nulles de chaque ligne"""
        kernels = self._node_kernels(codes)
        return np.prod((kernels > 0.0).sum(axis=2), axis=1, dtype=np.int64)

    def _expand(self, kernels: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Produit des noyaux nœud par nœud : (index source, code successeur, masse)"""
        src = np.arange(kernels.shape[0], dtype=np.int64)
        codes = np.zeros(src.size, dtype=np.int64)
        mass = np.asarray(weights, dtype=np.float64).copy()
        for i in range(self.n):
            probs = kernels[src, i, :]
            rows, states = np.nonzero(probs > 0.0)
            src = src[rows]
            codes = codes[rows] + states.astype(np.int64) * self._powers[i]
            mass = mass[rows] * probs[rows, states]
        return src, codes, mass

    def _chunks(self, widths: np.ndarray):
        bounds = np.cumsum(widths)
        start = 0
        while start < widths.size:
            limit = (bounds[start - 1] if start else 0) + EXPANSION_CHUNK
            stop = max(start + 1, int(np.searchsorted(bounds, limit, side="right")))
            yield start, stop
            start = stop

    def row(self, code: int) -> ChainDistribution:
        kernels = self._node_kernels(np.array([code], dtype=np.int64))
        _, codes, mass = self._expand(kernels, np.ones(1))
        order = np.argsort(codes)
        return ChainDistribution(self.n, codes[order], mass[order])

    def matrix(self) -> sparse.csr_matrix:
        """Matrice de transition complète (3^n x 3^n, CSR)"""
        if self._matrix is None:
            all_codes = np.arange(self.size, dtype=np.int64)
            widths = self.row_widths(all_codes)
            nnz = int(widths.sum())
            if nnz > self.memory_budget:
                raise SupportExplosionError(0, nnz, self.memory_budget)
            rows, cols, vals = [], [], []
            for start, stop in self._chunks(widths):
                kernels = self._node_kernels(all_codes[start:stop])
                src, codes, mass = self._expand(kernels, np.ones(stop - start))
                rows.append(src + start)
                cols.append(codes)
                vals.append(mass)
            self._matrix = sparse.csr_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(self.size, self.size),
            )
            logger.debug(f"Matrice de transition construite: {self.size} états, {nnz} entrées")
        return self._matrix

    def _use_matrix(self, support: int) -> bool:
        if self._matrix is not None:
            return True
        if self._matrix_refused or support <= self.dense_switch_fraction * self.size:
            return False
        nnz = int(self.row_widths(np.arange(self.size, dtype=np.int64)).sum())
        if nnz > self.memory_budget:
            self._matrix_refused = True
            logger.info(f"Matrice complète ({nnz} entrées) hors budget : expansion à la volée")
            return False
        return True

    def step_dense(self, mu: ChainDistribution) -> np.ndarray:
        """Un pas exact, résultat en vecteur dense de taille 3^n (sans élagage)"""
        if self._use_matrix(mu.support):
            return self.matrix().T @ mu.to_dense()
        widths = self.row_widths(mu.codes)
        out = np.zeros(self.size, dtype=np.float64)
        for start, stop in self._chunks(widths):
            kernels = self._node_kernels(mu.codes[start:stop])
            _, codes, mass = self._expand(kernels, mu.probs[start:stop])
            out += np.bincount(codes, weights=mass, minlength=self.size)
        return out


# ----------------------------------------------------------------------
# Opérations

def transition_row(g: Graph, params: EpidemicParams, code: int,
                   max_nodes: Optional[int] = None) -> ChainDistribution:
    """Ligne S_{X,·} : produit des noyaux des nœuds depuis l'état X"""
    return TransitionOperator(g, params, max_nodes=max_nodes).row(code)


def evolve(g: Graph, params: EpidemicParams, mu: ChainDistribution, steps: int,
           prune_tol: Optional[float] = None, operator: Optional[TransitionOperator] = None,
           memory_budget: Optional[int] = None) -> ChainDistribution:
    """μ S^steps avec élagage des masses sous prune_tol et renormalisation à chaque pas"""
    prune_tol = config.prune_tol if prune_tol is None else prune_tol
    operator = operator or TransitionOperator(g, params, memory_budget=memory_budget)
    budget = operator.memory_budget if memory_budget is None else memory_budget
    if mu.n != g.n:
        raise ParameterError(f"distribution sur {mu.n} nœuds, graphe à {g.n} nœuds")

    pruned = list(mu.pruned_mass)
    current = mu
    for step in range(1, steps + 1):
        vec = operator.step_dense(current)
        defect = abs(vec.sum() - 1.0)
        if defect > MASS_TOL * 10:
            logger.warning(f"Pas {step}: défaut de masse {defect:.2e} avant élagage")
        support = int(np.count_nonzero(vec > prune_tol))
        if support > budget:
            raise SupportExplosionError(step, support, budget)
        current = ChainDistribution.from_dense(vec, g.n, prune_tol)
        pruned.append(current.pruned_mass[0])
        logger.debug(f"Pas {step}: support {current.support}, masse élaguée {pruned[-1]:.2e}")
    current.pruned_mass = pruned
    return current


def marginals(mu: ChainDistribution, n: Optional[int] = None) -> MarginalVector:
    """p_{R,i} = Σ_{X_i=2} μ_X et p_{I,i} = Σ_{X_i=1} μ_X"""
    n = mu.n if n is None else n
    digits = decode_states(mu.codes, n)
    return MarginalVector(p_r=mu.probs @ (digits == R), p_i=mu.probs @ (digits == I))


def stationary_distribution(g: Graph, params: EpidemicParams) -> ChainDistribution:
    """SIRS : masse ponctuelle sur tout-S ; SIV : loi produit (γ/(γ+θ) sur S, θ/(γ+θ) sur R)"""
    check_exact_cap(g)
    if params.variant is Variant.SIRS:
        if params.gamma <= 0.0:
            raise ParameterError("la loi stationnaire SIRS demande gamma > 0")
        return ChainDistribution.point_mass(g.n, 0)
    if params.theta <= 0.0:
        raise ParameterError("la loi stationnaire SIV demande theta > 0")
    node = np.array([params.p_s_star, 0.0, params.p_r_star])
    return ChainDistribution.product(np.tile(node, (g.n, 1)))


def tv_distance(a: ChainDistribution, b: ChainDistribution) -> float:
    """½ Σ_X |a_X - b_X| sur l'union des supports"""
    codes = np.concatenate([a.codes, b.codes])
    diffs = np.concatenate([a.probs, -b.probs])
    _, inverse = np.unique(codes, return_inverse=True)
    net = np.bincount(inverse, weights=diffs)
    return float(min(1.0, max(0.0, 0.5 * np.abs(net).sum())))


def mixing_time(g: Graph, params: EpidemicParams, epsilon: float,
                max_steps: Optional[int] = None, prune_tol: Optional[float] = None,
                start: Optional[ChainDistribution] = None) -> int:
    """
    Plus petit t tel que TV(δ_{tout-I} S^t, π) ≤ ε

    Le départ tout-infecté remplace le sup sur les départs.
    """
    if epsilon <= 0.0:
        raise ParameterError("epsilon doit être > 0")
    if epsilon >= 1.0:
        return 0
    max_steps = config.mixing_max_steps if max_steps is None else max_steps
    operator = TransitionOperator(g, params)
    pi = stationary_distribution(g, params)
    mu = start or ChainDistribution.point_mass(g.n, all_infected_code(g.n))

    tv = tv_distance(mu, pi)
    for t in range(max_steps + 1):
        if tv <= epsilon:
            logger.info(f"Temps de mélange t_mix({epsilon}) = {t}")
            return t
        if t == max_steps:
            break
        mu = evolve(g, params, mu, 1, prune_tol=prune_tol, operator=operator)
        tv = tv_distance(mu, pi)
    raise SlowMixingError(max_steps, tv, epsilon)


@dataclass
class DominationReport:
    """Marges par pas entre la borne linéaire et les marginales exactes suivantes"""
    min_slack_per_step: List[float] = field(default_factory=list)
    min_slack_r_per_step: List[float] = field(default_factory=list)

    @property
    def min_slack(self) -> float:
        return min(self.min_slack_per_step) if self.min_slack_per_step else 0.0

    @property
    def violations(self) -> List[int]:
        return [t for t, s in enumerate(self.min_slack_per_step) if s < -DOMINATION_TOL]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            'min_slack': self.min_slack,
            'passed': self.passed,
            'violations': self.violations,
            'min_slack_per_step': self.min_slack_per_step,
            'min_slack_r_per_step': self.min_slack_r_per_step,
        }


def linear_infection_bound(g: Graph, params: EpidemicParams, p_i: np.ndarray) -> np.ndarray:
    """(1-δ)p_I + c·βA p_I avec c = 1-θ en vaccination-dominante, 1 sinon"""
    factor = 1.0 - params.theta if params.variant is Variant.SIV_VACCINATION_DOMINANT else 1.0
    return (1.0 - params.delta) * p_i + factor * params.beta * (g.adjacency @ p_i)


def verify_linear_domination(g: Graph, params: EpidemicParams, mu0: ChainDistribution,
                             steps: int, prune_tol: Optional[float] = None) -> DominationReport:
    """Vérifie p_I(t+1) ≤ borne linéaire(p(t)) composante par composante, pas à pas"""
    check_exact_cap(g)
    operator = TransitionOperator(g, params)
    report = DominationReport()
    mu = mu0
    current = marginals(mu, g.n)
    for _ in range(steps):
        mu = evolve(g, params, mu, 1, prune_tol=prune_tol, operator=operator)
        nxt = marginals(mu, g.n)
        slack = linear_infection_bound(g, params, current.p_i) - nxt.p_i
        report.min_slack_per_step.append(float(slack.min()))
        if params.variant is Variant.SIRS:
            # la marginale R suit exactement (1-γ)p_R + δ p_I
            bound_r = (1.0 - params.gamma) * current.p_r + params.delta * current.p_i
            report.min_slack_r_per_step.append(float((bound_r - nxt.p_r).min()))
        current = nxt
    if not report.passed:
        logger.error(f"Domination linéaire violée aux pas {report.violations}")
    return report
