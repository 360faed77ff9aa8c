"""JSON model files and loss-history CSVs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .mlp import MlpArchitecture, MlpModel


def model_to_dict(model: MlpModel, config: dict | None = None) -> dict:
    return {
        "format": "ndfgraph-mlp/1",
        "architecture": model.arch.to_dict(),
        # float() -> repr in json, which round-trips float64 exactly
        "weights": [[float(x) for x in w.reshape(-1)] for w in model.weights],
        "biases": [[float(x) for x in b] for b in model.biases],
        "config": config or {},
    }


def model_from_dict(d: dict) -> MlpModel:
    arch = MlpArchitecture.from_dict(d["architecture"])
    shapes = list(zip(arch.layer_sizes, arch.layer_sizes[1:]))
    if len(d["weights"]) != len(shapes) or len(d["biases"]) != len(shapes):
        raise ValueError("model file has the wrong number of layers")
    weights = [np.asarray(w, dtype=np.float64).reshape(s) for w, s in zip(d["weights"], shapes)]
    biases = [np.asarray(b, dtype=np.float64).reshape(s[1]) for b, s in zip(d["biases"], shapes)]
    return MlpModel(arch, weights, biases)


def save_model(model: MlpModel, path, config: dict | None = None) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model, config)))


def load_model(path) -> tuple[MlpModel, dict]:
    d = json.loads(Path(path).read_text())
    return model_from_dict(d), d.get("config", {})


def write_losses(losses, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["epoch", "loss"])
        for i, loss in enumerate(losses):
            w.writerow([i, repr(float(loss))])


def read_losses(path) -> list[float]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [float(r["loss"]) for r in rows]
