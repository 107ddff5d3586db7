"""
Configuration des tests
Graphes de référence, fabrique de paramètres et oracles indépendants
"""

import itertools

import numpy as np
import pytest

from sirsnet.graph import Graph, generate
from sirsnet.models import EpidemicParams, Variant


@pytest.fixture
def complete4() -> Graph:
    return generate("complete", 4)


@pytest.fixture
def complete10() -> Graph:
    return generate("complete", 10)


@pytest.fixture
def path3() -> Graph:
    return generate("path", 3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def make_params():
    """Fabrique de paramètres validés"""
    def _make(beta=0.2, delta=0.5, gamma=0.5, theta=0.0, variant=Variant.SIRS):
        return EpidemicParams.build(beta=beta, delta=delta, gamma=gamma, theta=theta, variant=variant)
    return _make


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    """Graphe aléatoire connexe ou non, construit sans networkx"""
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, pairs)


def random_params(rng: np.random.Generator, variant: Variant) -> EpidemicParams:
    theta = 0.0 if variant is Variant.SIRS else float(rng.uniform(0.05, 0.9))
    return EpidemicParams.build(beta=float(rng.uniform(0.0, 1.0)), delta=float(rng.uniform(0.0, 1.0)),
                                gamma=float(rng.uniform(0.05, 0.95)), theta=theta, variant=variant)


# ----------------------------------------------------------------------
# Oracles

def oracle_node_kernel(params: EpidemicParams, x: int, m: int) -> np.ndarray:
    """Loi du prochain état d'un nœud, écrite cas par cas"""
    b, d, g, t = params.beta, params.delta, params.gamma, params.theta
    q = (1.0 - b) ** m
    if x == 1:
        return np.array([0.0, 1.0 - d, d])
    if x == 2:
        return np.array([g, 0.0, 1.0 - g])
    if params.variant is Variant.SIRS:
        return np.array([q, 1.0 - q, 0.0])
    if params.variant is Variant.SIV_INFECTION_DOMINANT:
        return np.array([q * (1.0 - t), 1.0 - q, q * t])
    return np.array([q * (1.0 - t), (1.0 - q) * (1.0 - t), t])


def dense_oracle_matrix(g: Graph, params: EpidemicParams) -> np.ndarray:
    """Matrice de transition 3^n x 3^n par boucles explicites"""
    n = g.n
    states = list(itertools.product(range(3), repeat=n))
    size = 3 ** n
    P = np.zeros((size, size))
    neighbors = [set(g.neighbors(i).tolist()) for i in range(n)]
    for src in range(size):
        x = [(src // 3 ** i) % 3 for i in range(n)]
        kernels = [oracle_node_kernel(params, x[i], sum(1 for j in neighbors[i] if x[j] == 1))
                   for i in range(n)]
        for y in states:
            prob = 1.0
            for i in range(n):
                prob *= kernels[i][y[i]]
                if prob == 0.0:
                    break
            if prob:
                dst = sum(y[i] * 3 ** i for i in range(n))
                P[src, dst] += prob
    return P


def symmetric_endemic_oracle(beta: float, delta: float, gamma: float, degree: int,
                             tol: float = 1e-15) -> float:
    """P_I* d'un graphe régulier par bisection sur δx = (1-(1-βx)^k)(1-(1+δ/γ)x)"""
    ratio = delta / gamma

    def f(x: float) -> float:
        return (1.0 - (1.0 - beta * x) ** degree) * (1.0 - (1.0 + ratio) * x) - delta * x

    lo, hi = 1e-12, 1.0 / (1.0 + ratio)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_mixing_time(g: Graph, params: EpidemicParams, epsilon: float, max_steps: int = 10000) -> int:
    """t_mix depuis tout-I par produits vecteur-matrice denses"""
    from sirsnet.models import all_infected_code, stationary_distribution

    P = dense_oracle_matrix(g, params)
    pi = stationary_distribution(g, params).to_dense()
    mu = np.zeros(3 ** g.n)
    mu[all_infected_code(g.n)] = 1.0
    for t in range(max_steps):
        if 0.5 * np.abs(mu - pi).sum() <= epsilon:
            return t
        mu = mu @ P
    raise AssertionError("oracle non convergé")
