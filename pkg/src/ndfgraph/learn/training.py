"""Datasets, mini-batch training and evaluation."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .mlp import Adam, MlpModel, _check_input, _forward, loss_and_grads

log = logging.getLogger(__name__)


class TrainingDivergedError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 2000
    batches_per_epoch: int | None = 25
    batch_size: int | None = None
    target_scale: float = 1.0
    seed: int = 0
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.target_scale <= 0:
            raise ValueError("target_scale must be positive")
        if (self.batches_per_epoch is None) == (self.batch_size is None):
            raise ValueError("give exactly one of batches_per_epoch and batch_size")
        k = self.batches_per_epoch if self.batches_per_epoch is not None else self.batch_size
        if k < 1:
            raise ValueError("batch counts must be positive")

    def n_batches(self, n_train: int) -> int:
        if self.batches_per_epoch is not None:
            k = self.batches_per_epoch
        else:
            k = n_train // self.batch_size
        return max(1, min(k, n_train))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["adam_betas"] = list(self.adam_betas)
        return d


@dataclass(eq=False)
class Dataset:
    features: np.ndarray
    targets: np.ndarray
    node_labels: np.ndarray
    train_idx: np.ndarray
    test_idx: np.ndarray
    target_scale: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.float64).reshape(-1)
        self.node_labels = np.asarray(self.node_labels)
        self.train_idx = np.asarray(self.train_idx, dtype=np.int64)
        self.test_idx = np.asarray(self.test_idx, dtype=np.int64)
        n = self.features.shape[0]
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D array")
        if self.targets.shape[0] != n or self.node_labels.shape[0] != n:
            raise ValueError("features, targets and node_labels differ in length")
        both = np.concatenate([self.train_idx, self.test_idx])
        if both.size != n or not np.array_equal(np.sort(both), np.arange(n)):
            raise ValueError("train/test split must be disjoint and cover every sample")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def make_split(n: int, train_count: int | None, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle, first ``train_count`` to train (all when None)."""
    if train_count is None:
        train_count = n
    if not 0 <= train_count <= n:
        raise ValueError(f"train_count {train_count} outside [0, {n}]")
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[:train_count]), np.sort(perm[train_count:])


def batch_slices(n: int, k: int) -> list[slice]:
    """``k`` equal batches, the remainder folded into the last one."""
    size = n // k
    bounds = [i * size for i in range(k)] + [n]
    return [slice(a, b) for a, b in zip(bounds, bounds[1:])]


@dataclass
class TrainResult:
    model: MlpModel
    losses: list[float]


def train(
    model: MlpModel,
    data: Dataset,
    cfg: TrainConfig,
    on_epoch: Callable[[int, float], None] | None = None,
) -> TrainResult:
    """Mini-batch Adam on the training split; returns epoch-mean MSE losses.

    One generator seeded from ``cfg.seed`` drives both the per-epoch shuffles
    and the dropout masks, so a run is reproducible bit for bit.  ``model`` is
    updated in place.
    """
    if data.train_idx.size == 0:
        raise ValueError("dataset has an empty training split")
    X = _check_input(model, data.features)[data.train_idx]
    y = data.targets[data.train_idx]
    rng = np.random.default_rng(cfg.seed)
    opt = Adam(model.parameters(), cfg.learning_rate, cfg.adam_betas, cfg.adam_eps)
    slices = batch_slices(len(y), cfg.n_batches(len(y)))
    losses: list[float] = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(y))
        total = 0.0
        for sl in slices:
            idx = order[sl]
            loss, gw, gb = loss_and_grads(model, X[idx], y[idx], rng)
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss {loss} at epoch {epoch}, batch {sl.start}:{sl.stop}; "
                    f"lr={cfg.learning_rate}, last epoch loss "
                    f"{losses[-1] if losses else float('nan'):.6g}"
                )
            opt.step([*gw, *gb])
            total += loss * (sl.stop - sl.start)
        losses.append(total / len(y))
        if on_epoch is not None:
            on_epoch(epoch, losses[-1])
    return TrainResult(model, losses)


def predict(model: MlpModel, X, chunk: int = 4096) -> np.ndarray:
    """Eval-mode predictions, computed in chunks."""
    X = _check_input(model, X)
    parts = [_forward(model, X[i : i + chunk], None)[0] for i in range(0, X.shape[0], chunk)]
    return np.concatenate(parts) if parts else np.zeros(0)


def mean_relative_error(predictions, targets) -> float:
    """Mean of ``100 * |prediction - target| / target``, in percent."""
    pred = np.asarray(predictions, dtype=np.float64).reshape(-1)
    targ = np.asarray(targets, dtype=np.float64).reshape(-1)
    if pred.shape != targ.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {targ.shape}")
    if targ.size == 0:
        raise ValueError("no samples")
    if np.any(targ <= 0):
        raise ValueError("targets must be strictly positive for a relative error")
    return float(np.mean(100.0 * np.abs(pred - targ) / targ))


def evaluate(model: MlpModel, data: Dataset, which: str = "test") -> float:
    """Mean relative error on the chosen split (``train``, ``test`` or ``all``)."""
    idx = {"train": data.train_idx, "test": data.test_idx, "all": np.arange(len(data))}[which]
    return mean_relative_error(predict(model, data.features[idx]), data.targets[idx])
