"""Node partitions induced by NDF vectors, RNDFC matrices and colour refinement.

Every verdict compares exact integer signatures, so "not equivalent" is a
proof of non-isomorphism and "equivalent" is only a necessary condition.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .graph import Graph, bfs_layer_blocks, disjoint_union
from .intervals import IntervalsList, vanilla_intervals
from .matrix import ndfc_table
from .ndf import dndf_table


@dataclass(frozen=True)
class NodePartition:
    labels: tuple[int, ...]
    signatures: dict[int, Hashable]
    method: str

    @property
    def n_classes(self) -> int:
        return len(self.signatures)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_classes)]
        for v, c in enumerate(self.labels):
            out[c].append(v)
        return out

    def class_sizes(self) -> Counter:
        """Multiplicity of each signature."""
        counts = Counter(self.labels)
        return Counter({self.signatures[c]: k for c, k in counts.items()})

    def refines(self, other: "NodePartition") -> bool:
        """True when every class of ``self`` lies inside one class of ``other``."""
        seen: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if seen.setdefault(a, b) != b:
                return False
        return True


def partition_by(signatures: Sequence[Hashable], method: str) -> NodePartition:
    """Class ids numbered by first appearance in node order."""
    ids: dict[Hashable, int] = {}
    labels = []
    for sig in signatures:
        if sig not in ids:
            ids[sig] = len(ids)
        labels.append(ids[sig])
    return NodePartition(tuple(labels), {c: s for s, c in ids.items()}, method)


def _require_undirected(*graphs: Graph) -> None:
    if any(g.directed for g in graphs):
        raise ValueError("equivalence tests expect undirected graphs")


def _max_degree(g: Graph) -> int:
    return g.max_degree() if g.n_nodes else 0


def _vanilla(g: Graph, d: int) -> IntervalsList:
    return IntervalsList(tuple(range(1, d + 1))) if d >= 1 else vanilla_intervals(g)


# below this size plain Python beats building sparse matrices
SMALL_GRAPH = 256


def _ndf_rows_py(g: Graph, d: int) -> list[list[int]]:
    rows = []
    for v in range(g.n_nodes):
        row = [0] * d
        for u in g.adjacency[v]:
            row[len(g.adjacency[u]) - 1] += 1
        rows.append(row)
    return rows


def ndf_signatures(g: Graph) -> list[tuple[int, ...]]:
    d = _max_degree(g)
    if d == 0:
        return [()] * g.n_nodes
    if g.n_nodes <= SMALL_GRAPH:
        return [tuple(row) for row in _ndf_rows_py(g, d)]
    table = dndf_table(g, _vanilla(g, d))
    return [tuple(row) for row in table.tolist()]


def ndf_partition(g: Graph) -> NodePartition:
    """Group nodes with identical vanilla NDF vectors."""
    _require_undirected(g)
    return partition_by(ndf_signatures(g), "NDF")


def _graphs_equivalent(sigs1, sigs2) -> bool:
    return Counter(sigs1) == Counter(sigs2)


def graphs_ndf_equivalent(g1: Graph, g2: Graph) -> bool:
    """Same maximum degree and the same multiset of vanilla NDF vectors."""
    _require_undirected(g1, g2)
    if _max_degree(g1) != _max_degree(g2):
        return False
    return _graphs_equivalent(ndf_signatures(g1), ndf_signatures(g2))


def _rndfc_py(g: Graph, r: int, d: int) -> list[tuple[tuple[int, ...], ...]]:
    ndf = _ndf_rows_py(g, d)
    out = []
    for v in range(g.n_nodes):
        seen = {v}
        layer = [v]
        rows = []
        for k in range(r + 1):
            acc = [0] * d
            for u in layer:
                for j, c in enumerate(ndf[u]):
                    acc[j] += c
            rows.append(tuple(acc))
            nxt = []
            for u in layer:
                for w in g.adjacency[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            layer = nxt
        out.append(tuple(rows))
    return out


def rndfc_signatures(g: Graph, r: int) -> list[tuple[tuple[int, ...], ...]]:
    d = _max_degree(g)
    if d == 0:
        return [((),) * (r + 1)] * g.n_nodes
    if g.n_nodes <= SMALL_GRAPH:
        return _rndfc_py(g, r, d)
    table = ndfc_table(g, r, _vanilla(g, d), raw=True)
    return [tuple(map(tuple, mat)) for mat in table.tolist()]


def rndfc_partition(g: Graph, r: int) -> NodePartition:
    """Group nodes with identical order-``r`` vanilla RNDFC matrices."""
    _require_undirected(g)
    if r < 1:
        raise ValueError("order must be at least 1")
    return partition_by(rndfc_signatures(g, r), f"RNDFC({r})")


def diameter(g: Graph) -> int:
    """Largest finite eccentricity over all components."""
    ecc = 0
    for _, layers in bfs_layer_blocks(g):
        for k, mask in enumerate(layers):
            if mask.any():
                ecc = max(ecc, k)
    return ecc


def graphs_rndfc_equivalent(g1: Graph, g2: Graph, r: int | None = None) -> bool:
    """RNDFC-equivalence at order ``r`` (default: the larger diameter, at least 1)."""
    _require_undirected(g1, g2)
    if _max_degree(g1) != _max_degree(g2):
        return False
    if r is None:
        r = max(1, diameter(g1), diameter(g2))
    return _graphs_equivalent(rndfc_signatures(g1, r), rndfc_signatures(g2, r))


# -- colour refinement ----------------------------------------------------------


def _refine(g: Graph, max_rounds: int) -> tuple[list[int], list[Hashable], int]:
    colors = [0] * g.n_nodes
    sigs: list[Hashable] = [()] * g.n_nodes
    n_colors = 1 if g.n_nodes else 0
    rounds = 0
    for _ in range(max_rounds):
        new_sigs = [
            (colors[v], tuple(sorted(colors[u] for u in g.adjacency[v])))
            for v in range(g.n_nodes)
        ]
        # ids from sorted signatures, so the same signature gets the same colour
        # in every graph refined together in one union
        palette = {s: i for i, s in enumerate(sorted(set(new_sigs)))}
        new_colors = [palette[s] for s in new_sigs]
        if len(palette) == n_colors:
            break
        colors, sigs, n_colors = new_colors, new_sigs, len(palette)
        rounds += 1
    return colors, sigs, rounds


def color_refinement(g: Graph, max_rounds: int | None = None) -> tuple[NodePartition, int]:
    """1-dimensional Weisfeiler-Leman refinement from a uniform colouring.

    Returns the partition after at most ``max_rounds`` rounds together with
    the number of rounds that actually split a class.  Class signatures are
    ``(previous colour, sorted neighbour colours)`` of the last split.
    """
    _require_undirected(g)
    if max_rounds is None:
        max_rounds = max(g.n_nodes, 1)
    colors, sigs, rounds = _refine(g, max_rounds)
    part = partition_by(colors, "WL")
    signatures = {c: sigs[part.classes()[c][0]] for c in part.signatures}
    return NodePartition(part.labels, signatures, "WL"), rounds


def graphs_wl_equivalent(g1: Graph, g2: Graph, max_rounds: int | None = None) -> bool:
    """Refine the disjoint union and compare the colour histograms of both halves."""
    _require_undirected(g1, g2)
    if g1.n_nodes != g2.n_nodes:
        return False
    union = disjoint_union(g1, g2)
    if max_rounds is None:
        max_rounds = max(union.n_nodes, 1)
    colors, _, _ = _refine(union, max_rounds)
    return Counter(colors[: g1.n_nodes]) == Counter(colors[g1.n_nodes :])


def class_counts(part: NodePartition) -> list[int]:
    return sorted(Counter(part.labels).values(), reverse=True)


def signature_array(sig) -> np.ndarray:
    return np.asarray(sig, dtype=np.int64)
