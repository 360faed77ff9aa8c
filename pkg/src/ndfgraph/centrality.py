"""Parametric centralities, the two-hop tree test, and exact targets.

Closeness and PageRank here follow the conventions of common graph
toolkits: reachability-scaled closeness and PageRank with uniform teleport
and uniform redistribution of dangling mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, bfs_layer_blocks, circle_size_table, circle_sizes, circles
from .ndf import vndf


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"pagerank did not converge in {iterations} iterations (l1 residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class ParameterSequence:
    """Weights ``lambda_0 .. lambda_K``; every later weight is zero."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))

    @property
    def radius(self) -> int:
        """Index of the last non-zero weight (0 for an all-zero sequence)."""
        nz = [k for k, lam in enumerate(self.lambdas) if lam != 0.0]
        return nz[-1] if nz else 0

    @classmethod
    def geometric(cls, p: float, max_radius: int) -> "ParameterSequence":
        """``lambda_0 = 0`` and ``lambda_k = p**(k-1)`` up to ``max_radius``."""
        return cls((0.0,) + tuple(p ** (k - 1) for k in range(1, max_radius + 1)))


def _as_params(lambdas) -> ParameterSequence:
    return lambdas if isinstance(lambdas, ParameterSequence) else ParameterSequence(tuple(lambdas))


def parametric_centrality(g: Graph, v: int, lambdas) -> float:
    """``sum_k lambda_k * s_k(v)`` with BFS cut at the last non-zero weight."""
    params = _as_params(lambdas)
    sizes = circle_sizes(g, v, params.radius)
    return float(sum(lam * s for lam, s in zip(params.lambdas, sizes)))


def parametric_centrality_all(g: Graph, lambdas) -> np.ndarray:
    params = _as_params(lambdas)
    K = params.radius
    sizes = circle_size_table(g, K)
    return sizes.astype(np.float64) @ np.asarray(params.lambdas[: K + 1])


def p_centrality(g: Graph, v: int, p: float, max_radius: int, scale: float = 1.0) -> float:
    _check_p(p)
    if scale <= 0:
        raise ValueError("scale must be positive")
    return parametric_centrality(g, v, ParameterSequence.geometric(p, max_radius)) / scale


def p_centrality_all(g: Graph, p: float, max_radius: int, scale: float = 1.0) -> np.ndarray:
    _check_p(p)
    if scale <= 0:
        raise ValueError("scale must be positive")
    return parametric_centrality_all(g, ParameterSequence.geometric(p, max_radius)) / scale


def _check_p(p: float) -> None:
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")


# -- two-hop trees ---------------------------------------------------------------


def s_hat(g: Graph, v: int) -> int:
    """``sum_i (i - 1) * vndf(v)_i``: the number of two-hop walks leaving ``v``
    that do not return to it, an upper bound for ``s_2(v)``."""
    return sum(i * c for i, c in enumerate(vndf(g, v).values))


@dataclass(frozen=True)
class TreeCondition:
    equality: bool
    s2: int
    s_hat: int
    e2_prime_is_tree: bool


def e2_prime_edges(g: Graph, v: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Nodes of the radius-2 ego graph and its edges, minus edges inside ``C_2(v)``."""
    dec = circles(g, v, 2)
    nodes = dec.disk(2)
    inner = set(dec.circles[0]) | set(dec.circles[1])
    disk = set(nodes)
    edges = []
    for u in sorted(inner):
        for w in g.adjacency[u]:
            if w in disk and (w not in inner or u < w):
                edges.append((u, w))
    return nodes, edges


def _is_tree(nodes: Sequence[int], edges: Sequence[tuple[int, int]]) -> bool:
    parent = {u: u for u in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = len(parent)
    for u, w in edges:
        ru, rw = find(u), find(w)
        if ru == rw:
            return False
        parent[ru] = rw
        components -= 1
    return components == 1


def tree_condition(g: Graph, v: int) -> TreeCondition:
    """Compare ``s_2(v)`` with its bound and test whether ``E_2'(v)`` is a tree.

    The two verdicts must agree; a disagreement raises ``AssertionError``.
    """
    if g.directed:
        raise ValueError("tree_condition expects an undirected graph")
    nodes, edges = e2_prime_edges(g, v)
    s2 = circle_sizes(g, v, 2)[2]
    bound = s_hat(g, v)
    tree = _is_tree(nodes, edges)
    assert (s2 == bound) == tree, f"node {v}: s2={s2}, s_hat={bound}, tree={tree}"
    return TreeCondition(s2 == bound, s2, bound, tree)


@dataclass(frozen=True)
class TreeApprox:
    root: int
    children: tuple[tuple[int, int], ...]


def tree_approximation(g: Graph, v: int) -> TreeApprox:
    """Height-2 tree: one child per neighbour ``u``, carrying ``deg(u) - 1`` leaves."""
    return TreeApprox(v, tuple((u, g.degree(u) - 1) for u in g.adjacency[v]))


# -- exact targets ------------------------------------------------------------------


def distance_profile(g: Graph, direction: str = "undirected") -> tuple[np.ndarray, np.ndarray]:
    """Per source: number of reachable nodes (excluding itself) and the sum of
    their distances."""
    n = g.n_nodes
    reach = np.zeros(n, dtype=np.int64)
    total = np.zeros(n, dtype=np.int64)
    for block, layers in bfs_layer_blocks(g, direction):
        for k, mask in enumerate(layers):
            if k == 0:
                continue
            counts = mask.sum(axis=0, dtype=np.float64).astype(np.int64)
            reach[block] += counts
            total[block] += k * counts
    return reach, total


def closeness(g: Graph) -> np.ndarray:
    """``(r / (n - 1)) * (r / sum_d)`` with ``r`` the reachable count; 0 if isolated."""
    if g.directed:
        raise ValueError("closeness expects an undirected graph")
    n = g.n_nodes
    reach, total = distance_profile(g)
    out = np.zeros(n, dtype=np.float64)
    ok = total > 0
    if n > 1:
        out[ok] = (reach[ok] / (n - 1)) * (reach[ok] / total[ok])
    return out


def pagerank(
    g: Graph, damping: float = 0.85, tol: float = 1e-6, max_iter: int = 100
) -> np.ndarray:
    """Power iteration from the uniform vector.

    Dangling nodes spread their mass uniformly; iteration stops when the l1
    change drops below ``tol * n``.  Undirected graphs act as bidirected.
    """
    n = g.n_nodes
    if n == 0:
        return np.zeros(0)
    out_deg = g.out_degrees.astype(np.float64)
    dangling = out_deg == 0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, out_deg))
    # R[w, u] = 1 for every arc u -> w, so R @ (x / deg_out) pushes mass along arcs.
    R = g.reverse_matrix.astype(np.float64)
    x = np.full(n, 1.0 / n)
    err = np.inf
    for _ in range(max_iter):
        prev = x
        x = damping * (R @ (prev * inv) + prev[dangling].sum() / n) + (1.0 - damping) / n
        err = np.abs(x - prev).sum()
        if err < n * tol:
            return x
    raise ConvergenceError(max_iter, float(err))

