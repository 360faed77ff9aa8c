"""Feature/target datasets for the PageRank and closeness experiments."""

from __future__ import annotations

import numpy as np

from ..aggregate import p_aggregation
from ..centrality import closeness, pagerank
from ..graph import Graph
from ..intervals import IntervalsList
from ..matrix import cdf_table, ndfc_discounted_table, ndfc_table
from .training import Dataset, make_split


def pagerank_features(
    g: Graph,
    intervals: IntervalsList,
    r: int,
    discounted: bool = False,
    direction: str | None = None,
) -> np.ndarray:
    """Flattened order-``r`` NDFC (or discounted NDFC) matrices, ``(n, (r+1)*m)``."""
    if direction is None:
        direction = "inward" if g.directed else "undirected"
    if discounted:
        table = ndfc_discounted_table(g, r, intervals, direction)
    else:
        table = ndfc_table(g, r, intervals, direction)
    return table.reshape(g.n_nodes, -1)


def closeness_features(g: Graph, intervals: IntervalsList, r: int, p: float) -> np.ndarray:
    """p-aggregated order-``r`` RCDF matrices, ``(n, m)``."""
    return p_aggregation(cdf_table(g, r, intervals, raw=True), p)


def build_pagerank_dataset(
    g: Graph,
    intervals: IntervalsList,
    r: int,
    discounted: bool = False,
    direction: str | None = None,
    scale: float = 1.0,
    split_seed: int = 0,
    train_count: int | None = None,
    targets: np.ndarray | None = None,
) -> Dataset:
    """Targets are ``pagerank(g) * scale`` unless precomputed ``targets`` are passed."""
    X = pagerank_features(g, intervals, r, discounted, direction)
    y = pagerank(g) if targets is None else np.asarray(targets, dtype=np.float64)
    train_idx, test_idx = make_split(g.n_nodes, train_count, split_seed)
    return Dataset(
        X,
        y * scale,
        _labels(g),
        train_idx,
        test_idx,
        target_scale=scale,
        meta={
            "target": "pagerank",
            "kind": "NDFC_DISCOUNTED" if discounted else "NDFC",
            "order": r,
            "intervals": str(intervals),
            "split_seed": split_seed,
        },
    )


def build_closeness_dataset(
    g: Graph,
    intervals: IntervalsList,
    r: int,
    p: float,
    split_seed: int = 0,
    train_count: int | None = None,
    targets: np.ndarray | None = None,
) -> Dataset:
    """Targets are raw closeness values (no scaling)."""
    X = closeness_features(g, intervals, r, p)
    y = closeness(g) if targets is None else np.asarray(targets, dtype=np.float64)
    train_idx, test_idx = make_split(g.n_nodes, train_count, split_seed)
    return Dataset(
        X,
        y,
        _labels(g),
        train_idx,
        test_idx,
        meta={
            "target": "closeness",
            "kind": "RCDF",
            "order": r,
            "p": p,
            "intervals": str(intervals),
            "split_seed": split_seed,
        },
    )


def _labels(g: Graph) -> np.ndarray:
    if g.labels is not None:
        return np.asarray([str(x) for x in g.labels])
    return np.arange(g.n_nodes)
