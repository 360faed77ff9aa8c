"""A small fully connected regression network with manual backpropagation.

Layer order:

    linear -> activation -> (dropout)   for each hidden layer
    linear                               for the scalar output

Everything runs in float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ACTIVATIONS = ("tanh", "relu")


@dataclass(frozen=True)
class MlpArchitecture:
    layer_sizes: tuple[int, ...]
    activations: tuple[str, ...]
    dropout_after: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(w) for w in self.layer_sizes))
        object.__setattr__(self, "activations", tuple(self.activations))
        object.__setattr__(
            self, "dropout_after", {int(k): float(v) for k, v in self.dropout_after.items()}
        )
        sizes = self.layer_sizes
        if len(sizes) < 2 or any(w < 1 for w in sizes):
            raise ValueError(f"need at least input and output widths >= 1, got {sizes}")
        if sizes[-1] != 1:
            raise ValueError("output width must be 1 (scalar regression)")
        if len(self.activations) != self.n_hidden:
            raise ValueError(
                f"{self.n_hidden} hidden layers but {len(self.activations)} activations"
            )
        bad = [a for a in self.activations if a not in ACTIVATIONS]
        if bad:
            raise ValueError(f"unknown activations {bad}; expected {ACTIVATIONS}")
        for k, p in self.dropout_after.items():
            if not 0 <= k < self.n_hidden:
                raise ValueError(f"dropout after hidden layer {k}, which does not exist")
            if not 0 <= p < 1:
                raise ValueError(f"dropout probability must lie in [0, 1), got {p}")

    @property
    def n_hidden(self) -> int:
        return len(self.layer_sizes) - 2

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    def to_dict(self) -> dict:
        return {
            "layer_sizes": list(self.layer_sizes),
            "activations": list(self.activations),
            "dropout_after": {str(k): v for k, v in sorted(self.dropout_after.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MlpArchitecture":
        return cls(
            tuple(d["layer_sizes"]),
            tuple(d["activations"]),
            {int(k): v for k, v in d.get("dropout_after", {}).items()},
        )


def pagerank_architecture(n_inputs: int) -> MlpArchitecture:
    """Six linear layers; dropout after the 2nd, 3rd and 4th hidden activations."""
    return MlpArchitecture(
        (n_inputs, 400, 800, 200, 64, 8, 1),
        ("tanh", "relu", "relu", "relu", "tanh"),
        {1: 0.4, 2: 0.5, 3: 0.3},
    )


def closeness_architecture(n_inputs: int) -> MlpArchitecture:
    return MlpArchitecture((n_inputs, 64, 8, 1), ("tanh", "relu"), {0: 0.3})


ARCHITECTURES = {"pagerank": pagerank_architecture, "closeness": closeness_architecture}


@dataclass(eq=False)
class MlpModel:
    arch: MlpArchitecture
    weights: list[np.ndarray]  # weights[k] has shape (fan_in, fan_out)
    biases: list[np.ndarray]

    def parameters(self) -> list[np.ndarray]:
        return [*self.weights, *self.biases]

    def n_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def copy(self) -> "MlpModel":
        return MlpModel(self.arch, [w.copy() for w in self.weights], [b.copy() for b in self.biases])


def mlp_init(arch: MlpArchitecture, seed: int = 0, zero: bool = False) -> MlpModel:
    """Uniform fan-in initialisation; ``zero=True`` gives an all-zero model."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(arch.layer_sizes, arch.layer_sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        if zero:
            weights.append(np.zeros((fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        else:
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpModel(arch, weights, biases)


def _check_input(model: MlpModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.arch.n_inputs:
        raise ValueError(
            f"input of shape {X.shape} does not match {model.arch.n_inputs} input features"
        )
    return X


def _activate(kind: str, z: np.ndarray) -> np.ndarray:
    if kind == "tanh":
        return np.tanh(z, out=z)
    return np.maximum(z, 0.0, out=z)


@dataclass
class _Cache:
    inputs: list[np.ndarray]  # input to each linear layer
    activations: list[np.ndarray]  # post-activation, pre-dropout, per hidden layer
    masks: list[np.ndarray | None]  # scaled keep masks


def _forward(model: MlpModel, X: np.ndarray, rng: np.random.Generator | None) -> tuple[np.ndarray, _Cache]:
    arch = model.arch
    cache = _Cache([], [], [])
    h = X
    for k in range(arch.n_hidden):
        cache.inputs.append(h)
        a = _activate(arch.activations[k], h @ model.weights[k] + model.biases[k])
        cache.activations.append(a)
        p = arch.dropout_after.get(k, 0.0)
        if rng is not None and p > 0:
            mask = (rng.random(a.shape) >= p) * (1.0 / (1.0 - p))
            cache.masks.append(mask)
            h = a * mask
        else:
            cache.masks.append(None)
            h = a
    cache.inputs.append(h)
    out = h @ model.weights[-1] + model.biases[-1]
    return out[:, 0], cache


def forward(
    model: MlpModel,
    X,
    train_mode: bool = False,
    dropout_seed: int | np.random.Generator | None = None,
) -> np.ndarray:
    """Predictions of shape ``(batch,)``.

    ``train_mode`` applies inverted dropout drawn from ``dropout_seed`` (an
    int or a Generator); eval mode applies none.
    """
    X = _check_input(model, X)
    rng = np.random.default_rng(dropout_seed) if train_mode else None
    return _forward(model, X, rng)[0]


def loss_and_grads(
    model: MlpModel, X, y, rng: np.random.Generator | None = None
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """MSE loss and its gradients; dropout is active iff ``rng`` is given."""
    X = _check_input(model, X)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"{X.shape[0]} inputs but {y.shape[0]} targets")
    pred, cache = _forward(model, X, rng)
    resid = pred - y
    loss = float(np.mean(resid * resid))
    arch = model.arch
    n_layers = len(model.weights)
    gw: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    gb: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    delta = (2.0 / y.shape[0]) * resid[:, None]
    for k in range(n_layers - 1, -1, -1):
        gw[k] = cache.inputs[k].T @ delta
        gb[k] = delta.sum(axis=0)
        if k == 0:
            break
        dh = delta @ model.weights[k].T
        j = k - 1  # hidden layer feeding linear layer k
        if cache.masks[j] is not None:
            dh *= cache.masks[j]
        a = cache.activations[j]
        if arch.activations[j] == "tanh":
            dh *= 1.0 - a * a
        else:
            dh *= a > 0
        delta = dh
    return loss, gw, gb


class Adam:
    """Adam with bias-corrected first and second moments."""

    def __init__(self, params: list[np.ndarray], lr=1e-3, betas=(0.9, 0.999), eps=1e-8):
        if lr < 0:
            raise ValueError("learning rate must be non-negative")
        self.params = params
        self.lr = float(lr)
        self.beta1, self.beta2 = (float(b) for b in betas)
        self.eps = float(eps)
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * (g * g)
            # p -= lr * m_hat / (sqrt(v_hat) + eps)
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def numeric_grads(model: MlpModel, X, y, eps: float = 1e-5) -> list[np.ndarray]:
    """Central finite differences of the eval-mode MSE, in ``parameters()`` order."""
    out = []
    for p in model.parameters():
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + eps
            up = loss_and_grads(model, X, y)[0]
            flat[i] = old - eps
            down = loss_and_grads(model, X, y)[0]
            flat[i] = old
            gflat[i] = (up - down) / (2 * eps)
        out.append(g)
    return out


def max_relative_error(analytic: list[np.ndarray], numeric: list[np.ndarray], floor: float = 1e-6) -> float:
    """``max |a - n| / max(|a|, |n|, floor)`` over all entries."""
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst
