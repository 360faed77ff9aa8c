"""Immutable simple graphs, BFS circles and the dual Barabasi-Albert generator.

Nodes are always the contiguous integers ``0..n_nodes-1``; the original
labels of a loaded edge list survive in :attr:`Graph.labels`.  Adjacency
lists are sorted ascending so every traversal below is deterministic.
"""

from __future__ import annotations

import io
import logging
import os
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

DIRECTIONS = ("undirected", "inward", "outward")

BUNDLED_GRAPHS = ("karate", "florentine", "lesmis")


class EdgeListError(ValueError):
    """Raised for a malformed edge-list line."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


def check_direction(g: "Graph", direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")
    if g.directed and direction == "undirected":
        raise ValueError("a directed graph needs direction 'inward' or 'outward'")
    return direction


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple graph with sorted adjacency tuples.

    For undirected graphs ``reverse_adjacency`` is the same object as
    ``adjacency``.  Build instances with :meth:`from_edges`, which enforces
    the simple-graph invariants.
    """

    n_nodes: int
    directed: bool
    adjacency: tuple[tuple[int, ...], ...]
    reverse_adjacency: tuple[tuple[int, ...], ...]
    labels: tuple = field(default=())

    @classmethod
    def from_edges(
        cls,
        n_nodes: int,
        edges: Iterable[tuple[int, int]],
        directed: bool = False,
        labels: Sequence | None = None,
    ) -> "Graph":
        """Build a graph, silently dropping self-loops and repeated edges."""
        out: list[set[int]] = [set() for _ in range(n_nodes)]
        inn: list[set[int]] = out if not directed else [set() for _ in range(n_nodes)]
        for u, v in edges:
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n_nodes - 1}")
            if u == v:
                continue
            out[u].add(v)
            inn[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in out)
        reverse = adjacency if not directed else tuple(tuple(sorted(s)) for s in inn)
        if labels is None:
            labels = tuple(range(n_nodes))
        elif len(labels) != n_nodes:
            raise ValueError("labels must have one entry per node")
        return cls(n_nodes, directed, adjacency, reverse, tuple(labels))

    # -- degrees -----------------------------------------------------------

    def neighbors(self, v: int, direction: str = "undirected") -> tuple[int, ...]:
        """Out-neighbours for ``outward``/``undirected``, in-neighbours for ``inward``."""
        if direction == "inward":
            return self.reverse_adjacency[v]
        return self.adjacency[v]

    def degree(self, v: int, direction: str = "undirected") -> int:
        return len(self.neighbors(v, direction))

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n_nodes)

    @cached_property
    def in_degrees(self) -> np.ndarray:
        if not self.directed:
            return self.out_degrees
        return np.fromiter(
            (len(a) for a in self.reverse_adjacency), dtype=np.int64, count=self.n_nodes
        )

    def degrees(self, direction: str = "undirected") -> np.ndarray:
        return self.in_degrees if direction == "inward" else self.out_degrees

    def max_degree(self, direction: str = "undirected") -> int:
        return int(self.degrees(direction).max()) if self.n_nodes else 0

    @property
    def n_edges(self) -> int:
        total = int(self.out_degrees.sum())
        return total if self.directed else total // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once as ``(u, v)`` with ``u < v``; directed arcs as stored."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if self.directed or u < v:
                    yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        i = bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    # -- sparse views ------------------------------------------------------

    def _csr(self, rows: tuple[tuple[int, ...], ...]) -> sp.csr_matrix:
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        indices = np.fromiter((w for r in rows for w in r), dtype=np.int64, count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=np.float32)
        return sp.csr_matrix((data, indices, indptr), shape=(self.n_nodes, self.n_nodes))

    @cached_property
    def adjacency_matrix(self) -> sp.csr_matrix:
        """``A[u, w] = 1`` iff there is an edge (arc) ``u -> w``."""
        return self._csr(self.adjacency)

    @cached_property
    def reverse_matrix(self) -> sp.csr_matrix:
        """``R[w, u] = 1`` iff there is an arc ``u -> w``; equals ``A`` when undirected."""
        if not self.directed:
            return self.adjacency_matrix
        return self._csr(self.reverse_adjacency)

    def traversal_matrix(self, direction: str) -> sp.csr_matrix:
        """Row ``w`` lists the nodes one BFS step away from which ``w`` is reached."""
        # outward BFS reaches w from its in-neighbours; inward BFS from its out-neighbours.
        return self.reverse_matrix if direction == "outward" else self.adjacency_matrix

    def is_connected(self) -> bool:
        """Weak connectivity for directed graphs."""
        if self.n_nodes == 0:
            return True
        seen = bytearray(self.n_nodes)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for nbrs in (self.adjacency[u], self.reverse_adjacency[u]):
                for w in nbrs:
                    if not seen[w]:
                        seen[w] = 1
                        count += 1
                        stack.append(w)
        return count == self.n_nodes

    def relabeled(self, perm: Sequence[int]) -> "Graph":
        """Isomorphic copy where node ``v`` becomes ``perm[v]``."""
        labels = [None] * self.n_nodes
        for v, p in enumerate(perm):
            labels[p] = self.labels[v]
        return Graph.from_edges(
            self.n_nodes,
            ((perm[u], perm[v]) for u, v in self.edges()),
            directed=self.directed,
            labels=labels,
        )

    def as_bidirected(self) -> "Graph":
        """The directed graph carrying both orientations of every edge."""
        if self.directed:
            raise ValueError("graph is already directed")
        arcs = [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs]
        return Graph.from_edges(self.n_nodes, arcs, directed=True, labels=self.labels)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n_nodes={self.n_nodes}, n_edges={self.n_edges})"


# -- edge lists -------------------------------------------------------------


@dataclass(frozen=True)
class LoadReport:
    edges_read: int
    duplicates: int
    self_loops: int


def load_edge_list(source, directed: bool = False) -> tuple[Graph, LoadReport]:
    """Parse ``u v`` lines into a :class:`Graph`.

    ``source`` may be text, bytes, a binary/text stream or a path.  Lines
    that are blank or start with ``#`` are skipped; further tokens after the
    first two are ignored.  Labels are compacted to ``0..n-1`` in order of
    first appearance.
    """
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, os.PathLike):
        with open(source, encoding="utf-8") as fh:
            return load_edge_list(fh.read(), directed)
    if isinstance(source, str):
        stream = io.StringIO(source)
    else:
        stream = source

    label_ids: dict[int, int] = {}
    labels: list[int] = []
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    duplicates = self_loops = read = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise EdgeListError(lineno, line, "expected two node tokens")
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(lineno, line, "non-integer node token") from None
        read += 1
        for lab in (a, b):
            if lab not in label_ids:
                label_ids[lab] = len(labels)
                labels.append(lab)
        u, v = label_ids[a], label_ids[b]
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if directed or u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)

    report = LoadReport(read, duplicates, self_loops)
    if duplicates or self_loops:
        logger.info("dropped %d duplicate edges and %d self-loops", duplicates, self_loops)
    return Graph.from_edges(len(labels), edges, directed=directed, labels=labels), report


def read_graph(path: str | os.PathLike, directed: bool = False) -> Graph:
    """Load an edge-list file, or one of :data:`BUNDLED_GRAPHS` by name."""
    path_str = os.fspath(path)
    if not os.path.exists(path_str) and path_str in BUNDLED_GRAPHS:
        return bundled_graph(path_str)
    with open(path_str, encoding="utf-8") as fh:
        g, _ = load_edge_list(fh, directed)
    return g


def bundled_graph(name: str) -> Graph:
    """Karate club, Florentine families or Les Miserables (unweighted)."""
    if name not in BUNDLED_GRAPHS:
        raise KeyError(f"no bundled graph {name!r}; choose from {BUNDLED_GRAPHS}")
    text = resources.files("ndfgraph.data").joinpath(f"{name}.txt").read_text("utf-8")
    g, _ = load_edge_list(text)
    return g


def write_edge_list(g: Graph, path: str | os.PathLike, use_labels: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            if use_labels:
                u, v = g.labels[u], g.labels[v]
            fh.write(f"{u} {v}\n")


# -- small constructors used throughout tests and examples ------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """Node 0 joined to nodes ``1..leaves``."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def disjoint_union(*graphs: Graph) -> Graph:
    if len({g.directed for g in graphs}) > 1:
        raise ValueError("cannot mix directed and undirected graphs")
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n_nodes
    return Graph.from_edges(offset, edges, directed=graphs[0].directed if graphs else False)


# -- circles ---------------------------------------------------------------


@dataclass(frozen=True)
class CircleDecomposition:
    center: int
    circles: tuple[tuple[int, ...], ...]
    direction: str

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.circles]

    def disk(self, radius: int) -> list[int]:
        return sorted(u for c in self.circles[: radius + 1] for u in c)


def circles(g: Graph, v: int, r: int, direction: str = "undirected") -> CircleDecomposition:
    """BFS layers ``C_0(v) .. C_r(v)``; layers past the reachable set are empty.

    ``inward`` collects nodes with a shortest directed path *to* ``v``.
    """
    if not 0 <= v < g.n_nodes:
        raise IndexError(f"node {v} not in graph")
    if r < 0:
        raise ValueError("radius must be non-negative")
    check_direction(g, direction)
    nbrs = g.reverse_adjacency if direction == "inward" else g.adjacency
    dist = {v: 0}
    layers: list[list[int]] = [[v]]
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in nbrs[u]:
                if w not in dist:
                    dist[w] = len(layers)
                    nxt.append(w)
        nxt.sort()
        layers.append(nxt)
        frontier = nxt
    return CircleDecomposition(v, tuple(tuple(c) for c in layers), direction)


def circle_sizes(g: Graph, v: int, r: int, direction: str = "undirected") -> list[int]:
    """``[s_0(v), ..., s_r(v)]``."""
    return circles(g, v, r, direction).sizes


def ego_subgraph(g: Graph, v: int, r: int) -> tuple[Graph, list[int]]:
    """Induced subgraph on the disk ``D_r(v)``.

    Returns the subgraph and ``nodes``, where subgraph node ``i`` is
    ``nodes[i]`` in ``g`` (ascending ids).
    """
    if g.directed:
        raise ValueError("ego_subgraph expects an undirected graph")
    nodes = circles(g, v, r).disk(r)
    index = {u: i for i, u in enumerate(nodes)}
    edges = [
        (index[u], index[w]) for u in nodes for w in g.adjacency[u] if w in index and u < w
    ]
    return Graph.from_edges(len(nodes), edges, labels=[g.labels[u] for u in nodes]), nodes


def bfs_layer_blocks(
    g: Graph,
    direction: str = "undirected",
    radius: int | None = None,
    sources: Sequence[int] | None = None,
    block_size: int | None = None,
) -> Iterator[tuple[np.ndarray, Iterator[np.ndarray]]]:
    """Multi-source BFS by sparse frontier products.

    Yields ``(block_sources, layers)`` per block of sources; ``layers``
    yields float32 ``(n_nodes, len(block_sources))`` 0/1 masks of
    ``C_0, C_1, ...`` (column ``j`` belongs to ``block_sources[j]``), stopping
    after ``radius`` or once every frontier is empty when ``radius`` is None.
    """
    check_direction(g, direction)
    n = g.n_nodes
    src = np.arange(n) if sources is None else np.asarray(sources, dtype=np.int64)
    if block_size is None:
        block_size = max(1, min(len(src) or 1, (1 << 23) // max(n, 1)))
    step = g.traversal_matrix(direction)

    def layers(block: np.ndarray) -> Iterator[np.ndarray]:
        frontier = np.zeros((n, len(block)), dtype=np.float32)
        frontier[block, np.arange(len(block))] = 1.0
        visited = frontier.astype(bool)
        yield frontier
        k = 0
        while radius is None or k < radius:
            k += 1
            reached = (step @ frontier) > 0
            reached &= ~visited
            if radius is None and not reached.any():
                return
            visited |= reached
            frontier = reached.astype(np.float32)
            yield frontier

    for start in range(0, len(src), block_size):
        block = src[start : start + block_size]
        yield block, layers(block)


def circle_sums(
    g: Graph,
    features: np.ndarray,
    radius: int,
    direction: str = "undirected",
    sources: Sequence[int] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-source sums of node features over each circle.

    ``features`` is ``(n_nodes, f)``.  Returns ``sums`` of shape
    ``(n_sources, radius + 1, f)`` with ``sums[i, k] = sum of features[u]
    for u in C_k(source_i)``, and circle ``sizes`` of shape
    ``(n_sources, radius + 1)``.
    """
    features = np.asarray(features, dtype=np.float64)
    src = np.arange(g.n_nodes) if sources is None else np.asarray(sources, dtype=np.int64)
    sums = np.zeros((len(src), radius + 1, features.shape[1]))
    sizes = np.zeros((len(src), radius + 1), dtype=np.int64)
    ft = features.T.copy()
    pos = 0
    for block, layers in bfs_layer_blocks(g, direction, radius, src):
        cols = slice(pos, pos + len(block))
        for k, mask in enumerate(layers):
            sizes[cols, k] = mask.sum(axis=0, dtype=np.float64).astype(np.int64)
            sums[cols, k, :] = (ft @ mask).T
        pos += len(block)
    return sums, sizes


def circle_size_table(
    g: Graph, radius: int, direction: str = "undirected", sources: Sequence[int] | None = None
) -> np.ndarray:
    """``(n_sources, radius + 1)`` array of circle sizes."""
    _, sizes = circle_sums(g, np.zeros((g.n_nodes, 0)), radius, direction, sources)
    return sizes


# -- generators ------------------------------------------------------------


def dual_barabasi_albert(n: int, p: float, m1: int, m2: int, seed: int | None = None) -> Graph:
    """Preferential attachment where each new node brings ``m1`` edges with
    probability ``p`` and ``m2`` edges otherwise.

    Growth starts from a star on ``max(m1, m2) + 1`` nodes.  Targets are drawn
    from an urn holding every edge endpoint (so proportional to degree),
    redrawing until the required number of distinct targets is found.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be at least 1")
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    m0 = max(m1, m2)
    if n <= m0:
        raise ValueError(f"n must exceed max(m1, m2) = {m0}")
    rng = np.random.default_rng(seed)

    edges: list[tuple[int, int]] = [(0, i) for i in range(1, m0 + 1)]
    urn = np.empty(2 * (m0 + m0 * (n - m0 - 1)), dtype=np.int64)
    size = 0
    for u, v in edges:
        urn[size : size + 2] = (u, v)
        size += 2
    for source in range(m0 + 1, n):
        m = m1 if rng.random() < p else m2
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(int(urn[rng.integers(size)]))
        for t in sorted(targets):
            edges.append((t, source))
            urn[size] = t
            urn[size + 1] = source
            size += 2
    return Graph.from_edges(n, edges)


def perturb_edges(g: Graph, k: int, seed: int | None = None, max_tries: int = 100) -> Graph:
    """Remove ``k`` random edges and add ``k`` random non-edges, keeping the
    graph connected.

    Works as ``k`` sequential swaps.  Each swap drops an original edge and
    adds a pair that is not an original edge; a swap that would disconnect
    the graph is redrawn, at most ``max_tries`` times.  The input should be
    connected.
    """
    if g.directed:
        raise ValueError("perturb_edges expects an undirected graph")
    n = g.n_nodes
    original = list(g.edges())
    if k > len(original):
        raise ValueError("cannot remove more edges than the graph has")
    if k > n * (n - 1) // 2 - len(original):
        raise ValueError("not enough non-edges to add")
    rng = np.random.default_rng(seed)
    original_set = set(original)
    removable = list(original)
    added: set[tuple[int, int]] = set()
    nbrs = [set(a) for a in g.adjacency]
    for step in range(k):
        for _ in range(max_tries):
            i = int(rng.integers(len(removable)))
            a, b = removable[i]
            while True:
                u, v = (int(x) for x in rng.integers(n, size=2))
                e = (min(u, v), max(u, v))
                if u != v and e not in original_set and e not in added:
                    break
            nbrs[a].discard(b)
            nbrs[b].discard(a)
            nbrs[u].add(v)
            nbrs[v].add(u)
            if _still_joined(nbrs, a, b):
                removable[i] = removable[-1]
                removable.pop()
                added.add(e)
                break
            nbrs[u].discard(v)
            nbrs[v].discard(u)
            nbrs[a].add(b)
            nbrs[b].add(a)
        else:
            raise RuntimeError(f"swap {step + 1} of {k}: no connected choice in {max_tries} tries")
    edges = [(u, v) for u in range(n) for v in nbrs[u] if u < v]
    return Graph.from_edges(n, edges, labels=g.labels)


def _still_joined(nbrs: list[set[int]], a: int, b: int) -> bool:
    """Bidirectional BFS; stops as soon as the smaller side is exhausted."""
    seen = ({a}, {b})
    fronts = ([a], [b])
    while fronts[0] and fronts[1]:
        side = 0 if len(fronts[0]) <= len(fronts[1]) else 1
        nxt = []
        for x in fronts[side]:
            for y in nbrs[x]:
                if y in seen[1 - side]:
                    return True
                if y not in seen[side]:
                    seen[side].add(y)
                    nxt.append(y)
        fronts = (nxt, fronts[1]) if side == 0 else (fronts[0], nxt)
    return False


def bfs_distances(g: Graph, v: int, direction: str = "undirected") -> dict[int, int]:
    """Exact hop distances from ``v`` to every reachable node."""
    nbrs = g.reverse_adjacency if direction == "inward" else g.adjacency
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist
