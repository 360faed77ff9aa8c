"""From-scratch regression networks and the centrality-learning harness."""

from .datasets import (
    build_closeness_dataset,
    build_pagerank_dataset,
    closeness_features,
    pagerank_features,
)
from .io import load_model, save_model
from .mlp import (
    ARCHITECTURES,
    Adam,
    MlpArchitecture,
    MlpModel,
    closeness_architecture,
    forward,
    loss_and_grads,
    mlp_init,
    pagerank_architecture,
)
from .training import (
    Dataset,
    TrainConfig,
    TrainingDivergedError,
    TrainResult,
    evaluate,
    make_split,
    mean_relative_error,
    predict,
    train,
)

__all__ = [
    "build_closeness_dataset",
    "build_pagerank_dataset",
    "closeness_features",
    "pagerank_features",
    "load_model",
    "save_model",
    "ARCHITECTURES",
    "Adam",
    "MlpArchitecture",
    "MlpModel",
    "closeness_architecture",
    "forward",
    "loss_and_grads",
    "mlp_init",
    "pagerank_architecture",
    "Dataset",
    "TrainConfig",
    "TrainingDivergedError",
    "TrainResult",
    "evaluate",
    "make_split",
    "mean_relative_error",
    "predict",
    "train",
]
