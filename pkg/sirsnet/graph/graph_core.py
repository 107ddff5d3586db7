"""
SirsNet - Graphes
Représentation immuable des graphes non orientés, générateurs et analyse spectrale
"""

import io
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from ..core.config import config
from ..core.errors import ConvergenceError, GraphError

logger = logging.getLogger(__name__)

# en-tête optionnel "# nodes: N" écrit par Graph.to_edge_list
NODES_HEADER = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")


class GraphKind(Enum):
    """Familles de graphes générables"""
    ERDOS_RENYI = "erdos_renyi"
    COMPLETE = "complete"
    PATH = "path"
    STAR = "star"
    CYCLE = "cycle"


KIND_ALIASES = {
    'er': GraphKind.ERDOS_RENYI,
    'erdos_renyi': GraphKind.ERDOS_RENYI,
    'gnp': GraphKind.ERDOS_RENYI,
    'complete': GraphKind.COMPLETE,
    'k': GraphKind.COMPLETE,
    'path': GraphKind.PATH,
    'star': GraphKind.STAR,
    'cycle': GraphKind.CYCLE,
}


class Graph:
    """
    Graphe non orienté immuable, stocké en CSR (indptr, indices)

    Les listes de voisins sont triées, symétriques, sans doublon ni boucle.
    Les tableaux sont en lecture seule : un Graph se partage sans copie entre threads.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        if n < 1:
            raise GraphError("un graphe doit avoir au moins un nœud (n = 0 refusé)")
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
            raise GraphError("structure CSR incohérente")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self._n = n
        self._indptr = indptr
        self._indices = indices

    # ------------------------------------------------------------------
    # Construction

    @classmethod
    def from_edges(cls, n: int, edges: Union[np.ndarray, Iterable[Tuple[int, int]]]) -> "Graph":
        """Construit le graphe symétrisé et dédoublonné à partir d'une liste d'arêtes"""
        if n < 1:
            raise GraphError("un graphe doit avoir au moins un nœud (n = 0 refusé)")
        pairs = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if pairs.size == 0:
            return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))
        pairs = pairs.reshape(-1, 2)
        if pairs.min() < 0 or pairs.max() >= n:
            raise GraphError(f"identifiant de nœud hors de [0, {n})")
        loops = pairs[:, 0] == pairs[:, 1]
        if loops.any():
            raise GraphError(f"boucle propre sur le nœud {int(pairs[loops][0, 0])}")
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        keys = np.unique(rows * n + cols)
        rows, cols = keys // n, keys % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols)

    @classmethod
    def from_networkx(cls, G: nx.Graph) -> "Graph":
        """Convertit un graphe networkx dont les nœuds sont 0..n-1"""
        if G.is_directed():
            raise GraphError("seuls les graphes non orientés sont supportés")
        n = G.number_of_nodes()
        edges = np.array(list(G.edges()), dtype=np.int64).reshape(-1, 2)
        return cls.from_edges(n, edges)

    # ------------------------------------------------------------------
    # Accès

    @property
    def n(self) -> int:
        return self._n

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def edge_count(self) -> int:
        return int(self._indices.size // 2)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self._indptr)
        deg.setflags(write=False)
        return deg

    def neighbors(self, i: int) -> np.ndarray:
        """Voisins triés du nœud i"""
        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Matrice d'adjacence A (CSR, float64)"""
        data = np.ones(self._indices.size, dtype=np.float64)
        return sparse.csr_matrix((data, self._indices, self._indptr), shape=(self._n, self._n))

    def edges(self) -> np.ndarray:
        """Arêtes (i, j) avec i < j, triées"""
        rows = np.repeat(np.arange(self._n, dtype=np.int64), self.degrees)
        mask = rows < self._indices
        return np.column_stack([rows[mask], self._indices[mask]])

    def components(self) -> Tuple[int, np.ndarray]:
        """Nombre de composantes connexes et étiquette de chaque nœud"""
        count, labels = connected_components(self.adjacency, directed=False)
        return int(count), labels

    def is_connected(self) -> bool:
        return self.components()[0] == 1

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self._n))
        G.add_edges_from(map(tuple, self.edges().tolist()))
        return G

    def to_edge_list(self) -> str:
        """Sérialise au format accepté par load_edge_list"""
        # l'en-tête conserve les nœuds isolés de fin de numérotation
        lines = [f"# nodes: {self._n}"]
        lines.extend(f"{i} {j}" for i, j in self.edges().tolist())
        return "\n".join(lines) + "\n"

    def check_invariants(self) -> None:
        """Vérifie symétrie, tri et absence de boucles par balayage direct"""
        for i in range(self._n):
            nb = self.neighbors(i)
            if nb.size and (np.any(np.diff(nb) <= 0)):
                raise GraphError(f"voisins du nœud {i} non triés ou dupliqués")
            if np.any(nb == i):
                raise GraphError(f"boucle propre sur le nœud {i}")
        if (self.adjacency != self.adjacency.T).nnz:
            raise GraphError("adjacence non symétrique")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._n == other._n and np.array_equal(self._indptr, other._indptr)
                and np.array_equal(self._indices, other._indices))

    def __hash__(self) -> int:
        return hash((self._n, self._indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.edge_count})"


# ----------------------------------------------------------------------
# Génération et chargement

def generate(kind: Union[GraphKind, str], n: int, p: Optional[float] = None, seed: int = 0) -> Graph:
    """Génère un graphe d'une famille donnée (ER déterministe pour une graine fixée)"""
    if isinstance(kind, str):
        kind = KIND_ALIASES.get(kind.lower()) or GraphKind(kind.lower())
    if n < 1:
        raise GraphError("un graphe doit avoir au moins un nœud (n = 0 refusé)")

    if kind is GraphKind.ERDOS_RENYI:
        if p is None or not 0.0 <= p <= 1.0:
            raise GraphError(f"probabilité d'arête p={p} hors de [0, 1]")
        G = nx.fast_gnp_random_graph(n, p, seed=seed)
    elif kind is GraphKind.COMPLETE:
        G = nx.complete_graph(n)
    elif kind is GraphKind.PATH:
        G = nx.path_graph(n)
    elif kind is GraphKind.STAR:
        # star(n) : un centre et n-1 feuilles
        G = nx.star_graph(n - 1)
    elif kind is GraphKind.CYCLE:
        if n < 3:
            raise GraphError("un cycle demande au moins 3 nœuds")
        G = nx.cycle_graph(n)
    else:
        raise GraphError(f"famille de graphe inconnue: {kind}")

    graph = Graph.from_networkx(G)
    logger.debug(f"Graphe {kind.value} généré: n={graph.n}, arêtes={graph.edge_count}")
    return graph


def parse_graph_spec(text: str, seed: int = 0) -> Graph:
    """Interprète 'famille:n[:p]', par exemple 'er:500:0.02' ou 'complete:10'"""
    parts = text.strip().split(":")
    if len(parts) < 2:
        raise GraphError(f"spécification de graphe invalide '{text}' (attendu famille:n[:p])")
    name = parts[0].lower()
    if name not in KIND_ALIASES:
        raise GraphError(f"famille de graphe inconnue '{parts[0]}' (choix: {', '.join(sorted(KIND_ALIASES))})")
    try:
        n = int(parts[1])
        p = float(parts[2]) if len(parts) > 2 else None
    except ValueError:
        raise GraphError(f"spécification de graphe invalide '{text}'")
    return generate(KIND_ALIASES[name], n, p, seed=seed)


def load_edge_list(data: Union[bytes, str, io.IOBase]) -> Graph:
    """Charge une liste d'arêtes 'i j' (une par ligne, lignes '#' ignorées)"""
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    edges: List[Tuple[int, int]] = []
    max_id = -1
    declared_n = 0
    for line_number, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = NODES_HEADER.match(line)
            if header:
                declared_n = int(header.group(1))
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphError(f"attendu deux identifiants, trouvé '{raw}'", line_number)
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"identifiant non entier dans '{raw}'", line_number)
        if i < 0 or j < 0:
            raise GraphError(f"identifiant négatif dans '{raw}'", line_number)
        if i == j:
            raise GraphError(f"boucle propre sur le nœud {i}", line_number)
        edges.append((i, j))
        max_id = max(max_id, i, j)

    n = max(max_id + 1, declared_n)
    if n < 1:
        raise GraphError("liste d'arêtes vide (n = 0 refusé)")
    return Graph.from_edges(n, edges)


# ----------------------------------------------------------------------
# Analyse spectrale

@dataclass
class SpectralReport:
    """Résultat de l'itération de la puissance"""
    lambda_max: float
    iterations: int
    residual: float
    disconnected: bool = False
    components: int = 1
    history: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'lambda_max': self.lambda_max,
            'iterations': self.iterations,
            'residual': self.residual,
            'disconnected': self.disconnected,
            'components': self.components,
        }


def _power_iteration(A: sparse.csr_matrix, tol: float, max_iter: int,
                     keep_history: bool) -> Tuple[float, int, float, List[float]]:
    """Itération de la puissance sur A + d_max I (semi-définie positive) depuis le vecteur tout-un"""
    size = A.shape[0]
    shift = float(np.max(np.diff(A.indptr))) if size else 0.0
    x = np.full(size, 1.0 / np.sqrt(size))
    history: List[float] = []
    estimate, residual = 0.0, np.inf

    for it in range(1, max_iter + 1):
        Ax = A @ x
        estimate = float(x @ Ax)
        residual = float(np.linalg.norm(Ax - estimate * x))
        if keep_history:
            history.append(estimate)
        if residual <= tol:
            return estimate, it, residual, history
        y = Ax + shift * x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, it, 0.0, history
        x = y / norm

    raise ConvergenceError(f"itération de la puissance non convergée (résidu {residual:.3e})",
                           best_estimate=estimate, iterations=max_iter)


def spectral_radius(g: Graph, tol: Optional[float] = None, max_iter: Optional[int] = None,
                    keep_history: bool = False) -> SpectralReport:
    """
    Plus grande valeur propre de l'adjacence par itération de la puissance

    Sur un graphe non connexe, le calcul est fait par composante et le maximum
    est retourné avec l'indicateur `disconnected`.
    """
    tol = config.spectral_tol if tol is None else tol
    max_iter = config.spectral_max_iter if max_iter is None else max_iter

    count, labels = g.components()
    A = g.adjacency
    if count == 1:
        lam, its, res, hist = _power_iteration(A, tol, max_iter, keep_history)
        logger.debug(f"λ_max={lam:.12g} en {its} itérations (résidu {res:.2e})")
        return SpectralReport(lam, its, res, False, 1, hist)

    logger.warning(f"Graphe non connexe ({count} composantes) : λ_max calculé par composante")
    best = SpectralReport(0.0, 0, 0.0, True, count)
    total_iterations = 0
    for c in range(count):
        nodes = np.flatnonzero(labels == c)
        if nodes.size < 2:
            continue
        sub = A[nodes][:, nodes].tocsr()
        lam, its, res, hist = _power_iteration(sub, tol, max_iter, keep_history)
        total_iterations += its
        if lam > best.lambda_max:
            best = SpectralReport(lam, its, res, True, count, hist)
    best.iterations = total_iterations
    return best


def graph_summary(g: Graph, report: Optional[SpectralReport] = None) -> dict:
    """Statistiques descriptives d'un graphe"""
    report = report or spectral_radius(g)
    deg = g.degrees
    return {
        'n': g.n,
        'edges': g.edge_count,
        'degree_min': int(deg.min()),
        'degree_mean': float(deg.mean()),
        'degree_max': int(deg.max()),
        'components': report.components,
        'connected': not report.disconnected,
        'lambda_max': report.lambda_max,
    }
