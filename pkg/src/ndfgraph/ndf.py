"""Neighbors degree frequency (NDF) vectors.

``dndf(v)[j]`` counts the neighbours of ``v`` whose degree falls in interval
``j``.  On directed graphs the neighbour set and the degree measured share a
direction: in-neighbours counted by in-degree, out-neighbours by out-degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, check_direction
from .intervals import IntervalsList, minimal_intervals, vanilla_intervals


@dataclass(frozen=True)
class NdfVector:
    values: tuple[int, ...]
    intervals: IntervalsList
    direction: str = "undirected"

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)


@dataclass(frozen=True)
class DegreeVector:
    values: tuple[int, ...]
    intervals: IntervalsList


def _check_compatible(g: Graph, intervals: IntervalsList, direction: str) -> None:
    check_direction(g, direction)
    if g.directed and not intervals.zero_based:
        raise ValueError("directed graphs need a zero-based intervals list")


def dndf(g: Graph, v: int, intervals: IntervalsList, direction: str = "undirected") -> NdfVector:
    """Dynamic NDF vector of ``v`` with respect to ``intervals``."""
    _check_compatible(g, intervals, direction)
    counts = [0] * len(intervals)
    for u in g.neighbors(v, direction):
        counts[intervals.bucket(g.degree(u, direction))] += 1
    return NdfVector(tuple(counts), intervals, direction)


def vndf(g: Graph, v: int) -> NdfVector:
    return dndf(g, v, vanilla_intervals(g))


def mndf(g: Graph, v: int) -> NdfVector:
    return dndf(g, v, minimal_intervals(g))


def degree_vector(
    g: Graph, v: int, intervals: IntervalsList, direction: str = "undirected"
) -> DegreeVector:
    """One-hot vector marking the interval of ``deg(v)``."""
    _check_compatible(g, intervals, direction)
    values = [0] * len(intervals)
    values[intervals.bucket(g.degree(v, direction))] = 1
    return DegreeVector(tuple(values), intervals)


def dndf_table(g: Graph, intervals: IntervalsList, direction: str = "undirected") -> np.ndarray:
    """``(n_nodes, m)`` int64 array whose row ``v`` is ``dndf(v)``."""
    _check_compatible(g, intervals, direction)
    onehot = degree_onehot_table(g, intervals, direction, strict=False)
    # row v of the matrix marks neighbors(v, direction)
    step = g.reverse_matrix if direction == "inward" else g.adjacency_matrix
    out = step @ onehot.astype(np.float64)
    return np.rint(out).astype(np.int64)


def degree_onehot_table(
    g: Graph, intervals: IntervalsList, direction: str = "undirected", strict: bool = True
) -> np.ndarray:
    """``(n_nodes, m)`` int64 array of degree vectors.

    With ``strict=False`` nodes whose degree lies below the first starting
    point (isolated nodes of an undirected graph) get a zero row instead of
    raising; such nodes are never a neighbour nor in a circle of radius >= 1.
    """
    degrees = g.degrees(direction)
    table = np.zeros((g.n_nodes, len(intervals)), dtype=np.int64)
    keep = np.arange(g.n_nodes)
    if not strict:
        keep = keep[degrees >= intervals.starting_points[0]]
    table[keep, intervals.buckets(degrees[keep])] = 1
    return table
