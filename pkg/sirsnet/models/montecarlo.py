"""
SirsNet - Simulation Monte Carlo
Simulation stochastique synchrone du noyau exact, trajectoires et ensembles reproductibles
"""

import io
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np

from ..core.errors import ParameterError
from ..graph.graph_core import Graph
from .exact_chain import ChainDistribution, check_exact_cap, decode_state
from .params import I, R, S, EpidemicParams, Variant

logger = logging.getLogger(__name__)


@dataclass
class SimState:
    """États des nœuds, compteur de pas et générateur (porteur de l'état aléatoire)"""
    states: np.ndarray
    t: int
    rng: np.random.Generator

    @property
    def n(self) -> int:
        return int(self.states.size)

    def counts(self) -> np.ndarray:
        return np.bincount(self.states, minlength=3)


def sample_next(params: EpidemicParams, states: np.ndarray, m: np.ndarray, u: np.ndarray) -> np.ndarray:
    """
    Tire le prochain état de chaque nœud à partir de deux uniformes par nœud

    u[..., 0] décide l'infection, u[..., 1] la vaccination, la guérison ou la
    perte d'immunité. Fonctionne sur des tableaux (..., n).
    """
    u_inf, u_other = u[..., 0], u[..., 1]
    p_inf = 1.0 - (1.0 - params.beta) ** m
    nxt = states.copy()

    on_s = states == S
    infected = u_inf < p_inf
    if params.variant is Variant.SIRS:
        nxt[on_s & infected] = I
    elif params.variant is Variant.SIV_INFECTION_DOMINANT:
        nxt[on_s & infected] = I
        nxt[on_s & ~infected & (u_other < params.theta)] = R
    else:
        vaccinated = u_other < params.theta
        nxt[on_s & vaccinated] = R
        nxt[on_s & ~vaccinated & infected] = I

    nxt[(states == I) & (u_other < params.delta)] = R
    nxt[(states == R) & (u_other < params.gamma)] = S
    return nxt


def infected_neighbors(g: Graph, states: np.ndarray) -> np.ndarray:
    """m_i pour chaque nœud (ou chaque ligne d'un lot (k, n))"""
    infected = (states == I).astype(np.float64)
    if states.ndim == 1:
        return np.rint(g.adjacency @ infected).astype(np.int64)
    return np.rint((g.adjacency @ infected.T).T).astype(np.int64)


def mc_step(g: Graph, params: EpidemicParams, s: SimState) -> SimState:
    """Mise à jour synchrone : m_i sur l'état courant, puis deux tirages par nœud dans l'ordre des nœuds"""
    m = infected_neighbors(g, s.states)
    u = s.rng.random((s.n, 2))
    return SimState(sample_next(params, s.states, m, u), s.t + 1, s.rng)


# ----------------------------------------------------------------------
# Conditions initiales

class InitKind(Enum):
    ONE_RANDOM_INFECTED = "one_random_infected"
    ALL_INFECTED = "all_infected"
    FRACTION = "fraction"


@dataclass(frozen=True)
class InitialCondition:
    kind: InitKind
    fraction: float = 0.0

    @classmethod
    def parse(cls, text: Union[str, "InitialCondition"]) -> "InitialCondition":
        """'one_random_infected', 'all_infected', 'fraction:0.1' ou 'fraction(0.1)'"""
        if isinstance(text, InitialCondition):
            return text
        key = text.strip().lower()
        match = re.fullmatch(r"fraction[:(]\s*([0-9.eE+-]+)\s*\)?", key)
        if match:
            q = float(match.group(1))
            if not 0.0 <= q <= 1.0:
                raise ParameterError(f"fraction initiale {q} hors de [0, 1]")
            return cls(InitKind.FRACTION, q)
        try:
            return cls(InitKind(key))
        except ValueError:
            raise ParameterError(
                f"condition initiale inconnue '{text}' (one_random_infected, all_infected, fraction:q)")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        states = np.zeros(n, dtype=np.int8)
        if self.kind is InitKind.ALL_INFECTED:
            states[:] = I
        elif self.kind is InitKind.ONE_RANDOM_INFECTED:
            states[int(rng.integers(n))] = I
        else:
            k = int(round(self.fraction * n))
            states[rng.choice(n, size=k, replace=False)] = I
        return states

    def label(self) -> str:
        return f"fraction:{self.fraction:g}" if self.kind is InitKind.FRACTION else self.kind.value


# ----------------------------------------------------------------------
# Trajectoires

@dataclass
class Trajectory:
    """Effectifs (S, I, R) par pas ; extinction_step = premier t avec num_I = 0"""
    n: int
    counts: np.ndarray
    horizon: int
    extinction_step: Optional[int] = None
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def num_s(self) -> np.ndarray:
        return self.counts[:, S]

    @property
    def num_i(self) -> np.ndarray:
        return self.counts[:, I]

    @property
    def num_r(self) -> np.ndarray:
        return self.counts[:, R]

    def infected_fraction(self, horizon: Optional[int] = None) -> np.ndarray:
        """num_I/n sur [0, horizon], complété par 0 après un arrêt à l'extinction"""
        horizon = self.horizon if horizon is None else horizon
        out = np.zeros(horizon + 1)
        k = min(horizon + 1, self.counts.shape[0])
        out[:k] = self.num_i[:k] / self.n
        return out

    def alive_at(self, t: int) -> bool:
        return self.extinction_step is None or t < self.extinction_step

    def time_average_infected(self, start: int, stop: int) -> float:
        return float(self.infected_fraction(max(stop, self.horizon))[start:stop + 1].mean())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,num_S,num_I,num_R\n")
        for t, (s, i, r) in enumerate(self.counts.tolist()):
            buf.write(f"{t},{s},{i},{r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, horizon: Optional[int] = None) -> "Trajectory":
        lines = text.strip().splitlines()
        if lines[0].strip() != "t,num_S,num_I,num_R":
            raise ParameterError("en-tête CSV attendu: t,num_S,num_I,num_R")
        counts = np.array([[int(v) for v in ln.split(",")[1:]] for ln in lines[1:]], dtype=np.int64)
        zero = np.flatnonzero(counts[:, I] == 0)
        return cls(int(counts[0].sum()), counts, horizon if horizon is not None else counts.shape[0] - 1,
                   int(zero[0]) if zero.size else None)


def run(g: Graph, params: EpidemicParams, init: Union[str, InitialCondition], horizon: int,
        seed: int, stop_at_extinction: bool = True, snapshot_every: Optional[int] = None) -> Trajectory:
    """Simule une réplique jusqu'à l'horizon (ou l'extinction si demandé)"""
    if horizon < 1:
        raise ParameterError("l'horizon doit être ≥ 1")
    init = InitialCondition.parse(init)
    rng = np.random.default_rng(seed)
    state = SimState(init.sample(g.n, rng), 0, rng)

    counts = np.zeros((horizon + 1, 3), dtype=np.int64)
    counts[0] = state.counts()
    snapshots: Dict[int, np.ndarray] = {}
    extinction = 0 if counts[0, I] == 0 else None
    last = 0
    if snapshot_every:
        snapshots[0] = (state.states == I).copy()

    if not (stop_at_extinction and extinction is not None):
        for t in range(1, horizon + 1):
            state = mc_step(g, params, state)
            counts[t] = state.counts()
            last = t
            if snapshot_every and t % snapshot_every == 0:
                snapshots[t] = (state.states == I).copy()
            if extinction is None and counts[t, I] == 0:
                extinction = t
                if stop_at_extinction:
                    break

    return Trajectory(g.n, counts[:last + 1], horizon, extinction, snapshots)


# ----------------------------------------------------------------------
# Ensembles

@dataclass
class EnsembleResult:
    """Agrégats sur les répliques, indépendants de l'ordre d'exécution"""
    trajectories: List[Trajectory]
    horizon: int
    base_seed: int

    @property
    def runs(self) -> int:
        return len(self.trajectories)

    def fractions(self) -> np.ndarray:
        """num_I/n par réplique et par pas : tableau (runs, horizon+1)"""
        return np.vstack([tr.infected_fraction(self.horizon) for tr in self.trajectories])

    def mean_curve(self) -> np.ndarray:
        return self.fractions().mean(axis=0)

    def quantile_curves(self, qs=(0.1, 0.5, 0.9)) -> np.ndarray:
        return np.quantile(self.fractions(), qs, axis=0)

    def alive_fraction(self) -> np.ndarray:
        return (self.fractions() > 0).mean(axis=0)

    def extinction_fraction(self, t: Optional[int] = None) -> float:
        t = self.horizon if t is None else t
        return float(np.mean([not tr.alive_at(t) for tr in self.trajectories]))

    def to_csv(self) -> str:
        mean = self.mean_curve()
        q10, q50, q90 = self.quantile_curves()
        alive = self.alive_fraction()
        buf = io.StringIO()
        buf.write("t,mean_I,q10_I,q50_I,q90_I,alive_fraction\n")
        for t in range(self.horizon + 1):
            buf.write(f"{t},{mean[t]!r},{q10[t]!r},{q50[t]!r},{q90[t]!r},{alive[t]!r}\n")
        return buf.getvalue()

    def replicas_csv(self) -> str:
        buf = io.StringIO()
        buf.write("replica,t,num_S,num_I,num_R\n")
        for k, tr in enumerate(self.trajectories):
            for t, (s, i, r) in enumerate(tr.counts.tolist()):
                buf.write(f"{k},{t},{s},{i},{r}\n")
        return buf.getvalue()


def _run_replica(args) -> Trajectory:
    g, params, init, horizon, seed, stop = args
    return run(g, params, init, horizon, seed, stop_at_extinction=stop)


def ensemble(g: Graph, params: EpidemicParams, runs: int, horizon: int, base_seed: int,
             init: Union[str, InitialCondition] = "one_random_infected", jobs: int = 1,
             stop_at_extinction: bool = True) -> EnsembleResult:
    """Répliques de graines base_seed + k, résultats rangés par indice de réplique"""
    if runs < 1:
        raise ParameterError("il faut au moins une réplique")
    init = InitialCondition.parse(init)
    tasks = [(g, params, init, horizon, base_seed + k, stop_at_extinction) for k in range(runs)]
    logger.info(f"Ensemble de {runs} répliques, horizon {horizon}, {jobs} worker(s)")
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trajectories = list(pool.map(_run_replica, tasks))
    else:
        trajectories = [_run_replica(t) for t in tasks]
    return EnsembleResult(trajectories, horizon, base_seed)


def empirical_distribution(g: Graph, params: EpidemicParams, start_code: int, steps: int,
                           replicas: int, seed: int = 0) -> ChainDistribution:
    """Loi empirique de l'état au pas `steps` sur un lot de répliques (flux aléatoire unique)"""
    check_exact_cap(g)
    rng = np.random.default_rng(seed)
    states = np.tile(decode_state(start_code, g.n), (replicas, 1))
    for _ in range(steps):
        m = infected_neighbors(g, states)
        u = rng.random((replicas, g.n, 2))
        states = sample_next(params, states, m, u)
    codes = states.astype(np.int64) @ (3 ** np.arange(g.n, dtype=np.int64))
    freq = np.bincount(codes, minlength=3 ** g.n) / replicas
    support = np.flatnonzero(freq)
    return ChainDistribution(g.n, support, freq[support] / freq[support].sum())
