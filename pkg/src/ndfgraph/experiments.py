"""Manifest-driven experiment runs (train / predict / evaluate).

A manifest is a JSON file; relative paths inside it resolve against the
manifest's own directory.  Example::

    {
      "graph": {"generator": "dual_ba", "n": 20000, "p": 0.5, "m1": 3, "m2": 1, "seed": 1},
      "intervals": {"points": [1, 2, 3, 4, 5, 7, 9]},
      "representation": {"kind": "NDFC", "order": 5},
      "target": {"name": "pagerank", "scale": 1000},
      "model": "pagerank",
      "train": {"epochs": 2000, "batches_per_epoch": 25, "learning_rate": 0.001},
      "seeds": {"init": 0, "split": 0, "train": 0},
      "train_count": 10000,
      "outputs": {"model": "model.json", "losses": "losses.csv", "report": "report.json"}
    }
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .aggregate import p_aggregation
from .centrality import closeness, pagerank
from .graph import Graph, dual_barabasi_albert, read_graph
from .intervals import (
    IntervalsList,
    concat_starting_points,
    increasing_starting_points,
    minimal_intervals,
    uniform_starting_points,
    vanilla_intervals,
)
from .learn import (
    ARCHITECTURES,
    Dataset,
    TrainConfig,
    evaluate,
    load_model,
    make_split,
    mean_relative_error,
    mlp_init,
    predict,
    save_model,
    train,
)
from .learn.io import write_losses
from .matrix import matrix_table
from .ndf import dndf_table
from .persistence import write_values

log = logging.getLogger(__name__)

TARGETS = ("pagerank", "closeness")


# -- intervals specs -------------------------------------------------------------


def parse_intervals_spec(text: str) -> dict:
    """CLI shorthand to a manifest intervals dict.

    ``vanilla``, ``minimal``, ``uniform:m=3``, ``increasing:m=35,s=1,r=1.5``
    or an explicit ``1,2,4,7``.
    """
    text = text.strip()
    if text in ("vanilla", "minimal"):
        return {"algorithm": text}
    if ":" in text:
        name, _, rest = text.partition(":")
        params = {}
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value in intervals spec, got {item!r}")
            params[key.strip()] = float(val) if key.strip() == "r" else int(val)
        return {"algorithm": name.strip(), **params}
    return {"points": [int(x) for x in text.split(",") if x.strip()]}


def build_intervals(spec: dict, g: Graph, direction: str | None = None) -> IntervalsList:
    """Materialise a manifest intervals dict for ``g``; ``d`` defaults to the max degree."""
    spec = dict(spec)
    comp = spec.pop("complementary", None)
    if "points" in spec:
        pts = spec["points"]
        intervals = IntervalsList(tuple(pts), zero_based=bool(pts) and pts[0] == 0)
    else:
        algo = spec.get("algorithm")
        dir_ = direction if g.directed else None
        if algo == "vanilla":
            intervals = vanilla_intervals(g, dir_)
        elif algo == "minimal":
            intervals = minimal_intervals(g, dir_)
        elif algo in ("uniform", "increasing"):
            d = int(spec.get("d", g.max_degree(direction or "undirected")))
            if algo == "uniform":
                intervals = uniform_starting_points(d, int(spec["m"]))
            else:
                intervals = increasing_starting_points(
                    d, int(spec["m"]), int(spec.get("s", 1)), float(spec["r"])
                )
        else:
            raise ValueError(f"unknown intervals algorithm {algo!r}")
    if comp:
        intervals = concat_starting_points(intervals, comp)
    return intervals


# -- graphs ------------------------------------------------------------------------


def load_graph_source(spec, base: Path | None = None, directed: bool = False) -> Graph:
    """A path / bundled name, or ``{"generator": "dual_ba", ...}``."""
    if isinstance(spec, str):
        spec = {"path": spec}
    if "generator" in spec:
        if spec["generator"] != "dual_ba":
            raise ValueError(f"unknown generator {spec['generator']!r}")
        return dual_barabasi_albert(
            int(spec["n"]), float(spec["p"]), int(spec["m1"]), int(spec["m2"]), spec.get("seed")
        )
    path = Path(spec["path"])
    if base is not None and not path.is_absolute() and (base / path).exists():
        path = base / path
    return read_graph(path, spec.get("directed", directed))


# -- manifest ----------------------------------------------------------------------


@dataclass
class ExperimentManifest:
    graph: dict | str
    intervals: dict
    representation: dict
    target: dict
    model: str
    train: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    train_count: int | None = None
    directed: bool = False
    outputs: dict = field(default_factory=dict)
    base_dir: Path = field(default=Path("."), repr=False)

    def __post_init__(self):
        if self.target.get("name") not in TARGETS:
            raise ValueError(f"target name must be one of {TARGETS}")
        if self.model not in ARCHITECTURES:
            raise ValueError(f"model must be one of {sorted(ARCHITECTURES)}")
        if "kind" not in self.representation or "order" not in self.representation:
            raise ValueError("representation needs 'kind' and 'order'")
        if float(self.target.get("scale", 1.0)) <= 0:
            raise ValueError("target scale must be positive")

    @classmethod
    def load(cls, path) -> "ExperimentManifest":
        path = Path(path)
        data = json.loads(path.read_text())
        known = {f for f in cls.__dataclass_fields__ if f != "base_dir"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown manifest keys: {sorted(unknown)}")
        return cls(**data, base_dir=path.parent)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("base_dir")
        return d

    def output(self, key: str, default: str | None = None) -> Path | None:
        name = self.outputs.get(key, default)
        if name is None:
            return None
        p = Path(name)
        return p if p.is_absolute() else self.base_dir / p

    def train_config(self) -> TrainConfig:
        cfg = dict(self.train)
        if "adam_betas" in cfg:
            cfg["adam_betas"] = tuple(cfg["adam_betas"])
        if "batch_size" in cfg and "batches_per_epoch" not in cfg:
            cfg["batches_per_epoch"] = None
        cfg.setdefault("seed", int(self.seeds.get("train", 0)))
        cfg.setdefault("target_scale", float(self.target.get("scale", 1.0)))
        return TrainConfig(**cfg)


def manifest_features(m: ExperimentManifest, g: Graph, intervals: IntervalsList) -> np.ndarray:
    rep = m.representation
    kind = rep["kind"].upper()
    direction = rep.get("direction") or ("inward" if g.directed else "undirected")
    if rep.get("discounted") and kind == "NDFC":
        kind = "NDFC_DISCOUNTED"
    if kind == "NDF":
        return dndf_table(g, intervals, direction).astype(np.float64)
    table = matrix_table(g, kind, int(rep["order"]), intervals, direction)
    if rep.get("p") is not None:
        return p_aggregation(table, float(rep["p"]))
    return table.reshape(g.n_nodes, -1).astype(np.float64)


def manifest_targets(m: ExperimentManifest, g: Graph) -> np.ndarray:
    if m.target["name"] == "pagerank":
        return pagerank(g, float(m.target.get("damping", 0.85)))
    return closeness(g)


def build_dataset(m: ExperimentManifest, g: Graph | None = None, all_test: bool = False) -> Dataset:
    """Features, scaled targets and split for ``g`` (default: the manifest graph).

    ``all_test`` puts every node in the test split, for applying a trained
    model to a different graph.
    """
    g = g if g is not None else load_graph_source(m.graph, m.base_dir, m.directed)
    intervals = build_intervals(m.intervals, g, m.representation.get("direction"))
    X = manifest_features(m, g, intervals)
    scale = float(m.target.get("scale", 1.0))
    y = manifest_targets(m, g) * scale
    split_seed = int(m.seeds.get("split", 0))
    if all_test:
        train_idx, test_idx = np.zeros(0, dtype=np.int64), np.arange(g.n_nodes)
    else:
        train_idx, test_idx = make_split(g.n_nodes, m.train_count, split_seed)
    labels = np.asarray([str(x) for x in g.labels]) if g.labels is not None else np.arange(g.n_nodes)
    meta = {"intervals": str(intervals), "n_nodes": g.n_nodes, "n_edges": g.n_edges}
    return Dataset(X, y, labels, train_idx, test_idx, target_scale=scale, meta=meta)


def run_train(m: ExperimentManifest, on_epoch=None) -> dict:
    data = build_dataset(m)
    cfg = m.train_config()
    init_seed = int(m.seeds.get("init", 0))
    model = mlp_init(ARCHITECTURES[m.model](data.n_features), init_seed)
    result = train(model, data, cfg, on_epoch)
    report = {
        "manifest": m.to_dict(),
        "seeds": {"init": init_seed, "split": int(m.seeds.get("split", 0)), "train": cfg.seed},
        "dataset": data.meta,
        "final_loss": result.losses[-1] if result.losses else None,
        "train_error": evaluate(model, data, "train"),
        "test_error": evaluate(model, data, "test") if data.test_idx.size else None,
    }
    model_path = m.output("model", "model.json")
    save_model(model, model_path, {"manifest": m.to_dict(), "train": cfg.to_dict(), "seeds": report["seeds"]})
    losses_path = m.output("losses")
    if losses_path is not None:
        write_losses(result.losses, losses_path)
    report_path = m.output("report")
    if report_path is not None:
        report_path.write_text(json.dumps(report, indent=2))
    return report


def _trained(m: ExperimentManifest, graph_override):
    model, _ = load_model(m.output("model", "model.json"))
    if graph_override is None:
        return model, build_dataset(m), "test"
    g = load_graph_source(graph_override, None, m.directed)
    return model, build_dataset(m, g, all_test=True), "all"


def run_predict(m: ExperimentManifest, out, graph_override=None) -> np.ndarray:
    """Unscaled predictions for every node, written as a values CSV."""
    model, data, _ = _trained(m, graph_override)
    pred = predict(model, data.features) / data.target_scale
    write_values(out, pred, data.node_labels.tolist(), m.target["name"])
    return pred


def run_evaluate(m: ExperimentManifest, graph_override=None) -> dict:
    model, data, which = _trained(m, graph_override)
    idx = data.test_idx
    err = mean_relative_error(predict(model, data.features[idx]), data.targets[idx])
    return {
        "mean_relative_error": err,
        "split": which,
        "n_samples": int(idx.size),
        "seeds": dict(m.seeds),
        "manifest": m.to_dict(),
    }
