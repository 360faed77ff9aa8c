"""Higher order NDF matrices of nodes.

Row ``k`` (0-based) of an NDFC matrix aggregates the NDF vectors of the
circle ``C_k(v)``; row ``i`` of a CDF matrix is the degree histogram of
``C_{i+1}(v)`` itself.  Raw variants (RNDFC, RCDF) keep integer sums,
normalized variants divide each row by the circle size.  Empty circles give
zero rows.

Each kind comes in two forms: a per-node function built on a plain BFS
(:func:`ndfc`, :func:`cdf`, ...) and a whole-graph table built on sparse
multi-source BFS (:func:`ndfc_table`, :func:`cdf_table`, ...).  The tables are
what the learning pipelines use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, circle_sums, circles
from .intervals import IntervalsList
from .ndf import _check_compatible, degree_onehot_table, degree_vector, dndf, dndf_table

KINDS = ("NDFC", "RNDFC", "CDF", "RCDF", "VNDFC", "NDFC_DISCOUNTED")


@dataclass(frozen=True, eq=False)
class NdfMatrix:
    values: np.ndarray
    kind: str
    order: int
    intervals: IntervalsList
    direction: str
    center: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def flatten(M: NdfMatrix | np.ndarray) -> np.ndarray:
    """Row-major concatenation of the rows."""
    values = M.values if isinstance(M, NdfMatrix) else np.asarray(M)
    return values.reshape(-1).copy()


def _normalize_rows(raw: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    out = np.zeros(raw.shape, dtype=np.float64)
    nz = sizes > 0
    out[nz] = raw[nz] / sizes[nz][:, None]
    return out


def _check_discount(g: Graph, direction: str) -> None:
    if g.directed and direction != "inward":
        raise ValueError("discounted NDFC on directed graphs is defined for direction 'inward'")


def _discount_degrees(g: Graph) -> np.ndarray:
    # outward degree measures how a node's mass is split; equals deg when undirected
    return g.out_degrees


# -- per node ---------------------------------------------------------------


def ndfc(
    g: Graph,
    v: int,
    r: int,
    intervals: IntervalsList,
    direction: str = "undirected",
    raw: bool = False,
) -> NdfMatrix:
    """Order ``r`` NDFC (or RNDFC when ``raw``) matrix, shape ``(r + 1, m)``."""
    _check_compatible(g, intervals, direction)
    dec = circles(g, v, r, direction)
    m = len(intervals)
    sums = np.zeros((r + 1, m), dtype=np.int64)
    for k, layer in enumerate(dec.circles):
        for u in layer:
            sums[k] += dndf(g, u, intervals, direction).values
    if raw:
        return NdfMatrix(sums, "RNDFC", r, intervals, direction, v)
    sizes = np.asarray(dec.sizes, dtype=np.int64)
    return NdfMatrix(_normalize_rows(sums, sizes), "NDFC", r, intervals, direction, v)


def rndfc(g: Graph, v: int, r: int, intervals: IntervalsList, direction: str = "undirected"):
    return ndfc(g, v, r, intervals, direction, raw=True)


def cdf(
    g: Graph,
    v: int,
    r: int,
    intervals: IntervalsList,
    direction: str = "undirected",
    raw: bool = False,
) -> NdfMatrix:
    """Order ``r`` CDF (or RCDF) matrix, shape ``(r, m)``: row ``i`` bins ``C_{i+1}(v)``."""
    _check_compatible(g, intervals, direction)
    dec = circles(g, v, r, direction)
    counts = np.zeros((r, len(intervals)), dtype=np.int64)
    for i, layer in enumerate(dec.circles[1:]):
        for u in layer:
            counts[i, intervals.bucket(g.degree(u, direction))] += 1
    if raw:
        return NdfMatrix(counts, "RCDF", r, intervals, direction, v)
    sizes = np.asarray(dec.sizes[1:], dtype=np.int64)
    return NdfMatrix(_normalize_rows(counts, sizes), "CDF", r, intervals, direction, v)


def rcdf(g: Graph, v: int, r: int, intervals: IntervalsList, direction: str = "undirected"):
    return cdf(g, v, r, intervals, direction, raw=True)


def vndfc(g: Graph, v: int, r: int, intervals: IntervalsList) -> NdfMatrix:
    """Degree vector stacked on top of the normalized NDFC matrix, ``(r + 2, m)``."""
    if g.directed:
        raise ValueError("vndfc expects an undirected graph")
    head = np.asarray(degree_vector(g, v, intervals).values, dtype=np.float64)
    body = ndfc(g, v, r, intervals).values
    return NdfMatrix(np.vstack([head, body]), "VNDFC", r, intervals, "undirected", v)


def ndfc_discounted(
    g: Graph, v: int, r: int, intervals: IntervalsList, direction: str | None = None
) -> NdfMatrix:
    """Discounted NDFC: deeper rows weight each NDF vector by ``1/deg_out``.

    Row 0 is ``dndf(v)``; row ``k >= 1`` is the mean over ``u`` in
    ``C_k(v)`` of ``dndf(u) / deg_out(u)``.  Directed graphs use the inward
    circles and inward NDF vectors.
    """
    if direction is None:
        direction = "inward" if g.directed else "undirected"
    _check_discount(g, direction)
    _check_compatible(g, intervals, direction)
    dec = circles(g, v, r, direction)
    m = len(intervals)
    out = np.zeros((r + 1, m), dtype=np.float64)
    out[0] = dndf(g, v, intervals, direction).values
    for k, layer in enumerate(dec.circles[1:], start=1):
        if not layer:
            continue
        acc = np.zeros(m)
        for u in layer:
            d_out = g.degree(u, "outward")
            assert d_out >= 1, "every node reached inward has an out-arc"
            acc += np.asarray(dndf(g, u, intervals, direction).values) / d_out
        out[k] = acc / len(layer)
    return NdfMatrix(out, "NDFC_DISCOUNTED", r, intervals, direction, v)


# -- whole graph tables ---------------------------------------------------------


def _circle_tables(g, r, intervals, direction, features, nodes):
    _check_compatible(g, intervals, direction)
    return circle_sums(g, features, r, direction, nodes)


def ndfc_table(
    g: Graph,
    r: int,
    intervals: IntervalsList,
    direction: str = "undirected",
    raw: bool = False,
    nodes=None,
) -> np.ndarray:
    """``(n, r + 1, m)`` NDFC matrices (int64 when ``raw``) for ``nodes`` (default all)."""
    table = dndf_table(g, intervals, direction)
    sums, sizes = _circle_tables(g, r, intervals, direction, table, nodes)
    raw_rows = np.rint(sums).astype(np.int64)
    if raw:
        return raw_rows
    return _normalize_rows(raw_rows, sizes)


def cdf_table(
    g: Graph,
    r: int,
    intervals: IntervalsList,
    direction: str = "undirected",
    raw: bool = False,
    nodes=None,
) -> np.ndarray:
    """``(n, r, m)`` CDF matrices (int64 when ``raw``)."""
    onehot = degree_onehot_table(g, intervals, direction, strict=False)
    sums, sizes = _circle_tables(g, r, intervals, direction, onehot, nodes)
    raw_rows = np.rint(sums[:, 1:, :]).astype(np.int64)
    if raw:
        return raw_rows
    return _normalize_rows(raw_rows, sizes[:, 1:])


def vndfc_table(g: Graph, r: int, intervals: IntervalsList, nodes=None) -> np.ndarray:
    """``(n, r + 2, m)`` VNDFC matrices."""
    if g.directed:
        raise ValueError("vndfc expects an undirected graph")
    onehot = degree_onehot_table(g, intervals)
    if nodes is not None:
        onehot = onehot[np.asarray(nodes)]
    body = ndfc_table(g, r, intervals, nodes=nodes)
    return np.concatenate([onehot[:, None, :].astype(np.float64), body], axis=1)


def ndfc_discounted_table(
    g: Graph,
    r: int,
    intervals: IntervalsList,
    direction: str | None = None,
    nodes=None,
) -> np.ndarray:
    """``(n, r + 1, m)`` discounted NDFC matrices."""
    if direction is None:
        direction = "inward" if g.directed else "undirected"
    _check_discount(g, direction)
    table = dndf_table(g, intervals, direction)
    d_out = _discount_degrees(g).astype(np.float64)
    # nodes with no out-arc are never reached by an inward BFS past radius 0
    scaled = table / np.where(d_out > 0, d_out, 1.0)[:, None]
    sums, sizes = _circle_tables(g, r, intervals, direction, scaled, nodes)
    out = _normalize_rows(sums, sizes)
    idx = np.arange(g.n_nodes) if nodes is None else np.asarray(nodes)
    out[:, 0, :] = table[idx]
    return out


def matrix_table(
    g: Graph,
    kind: str,
    r: int,
    intervals: IntervalsList,
    direction: str = "undirected",
    nodes=None,
) -> np.ndarray:
    """Dispatch on ``kind`` (one of :data:`KINDS`)."""
    kind = kind.upper()
    if kind == "NDFC":
        return ndfc_table(g, r, intervals, direction, nodes=nodes)
    if kind == "RNDFC":
        return ndfc_table(g, r, intervals, direction, raw=True, nodes=nodes)
    if kind == "CDF":
        return cdf_table(g, r, intervals, direction, nodes=nodes)
    if kind == "RCDF":
        return cdf_table(g, r, intervals, direction, raw=True, nodes=nodes)
    if kind == "VNDFC":
        return vndfc_table(g, r, intervals, nodes=nodes)
    if kind == "NDFC_DISCOUNTED":
        return ndfc_discounted_table(g, r, intervals, direction, nodes=nodes)
    raise ValueError(f"unknown matrix kind {kind!r}; expected one of {KINDS}")
