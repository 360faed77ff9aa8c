"""Neighbors degree frequency embeddings, centralities and the learning pipelines built on them.

Top-level names are resolved lazily so that ``ndfgraph.cli`` can configure
BLAS threading before numpy is first imported.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "graph": ("Graph", "bundled_graph", "load_edge_list", "read_graph", "dual_barabasi_albert"),
    "intervals": (
        "IntervalsList",
        "increasing_starting_points",
        "minimal_intervals",
        "uniform_starting_points",
        "vanilla_intervals",
    ),
    "ndf": ("dndf", "mndf", "vndf"),
    "matrix": ("NdfMatrix", "cdf", "ndfc", "ndfc_discounted", "rcdf", "rndfc", "vndfc"),
    "centrality": ("closeness", "p_centrality", "pagerank"),
    "aggregate": ("AggregationSpec", "p_aggregation", "parametric_aggregation"),
}
_WHERE = {name: mod for mod, names in _EXPORTS.items() for name in names}

__all__ = sorted(_WHERE)


def __getattr__(name):
    if name in _WHERE:
        return getattr(import_module(f".{_WHERE[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
