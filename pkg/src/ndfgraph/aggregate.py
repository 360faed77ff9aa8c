"""Column-wise weighted row sums of node matrices.

Works on a single :class:`~ndfgraph.matrix.NdfMatrix`, a bare ``(rows, m)``
array, or a stacked ``(n, rows, m)`` table, returning ``(m,)`` or ``(n, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import NdfMatrix


@dataclass(frozen=True)
class AggregationSpec:
    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        if not self.lambdas:
            raise ValueError("an aggregation needs at least one weight")

    def __len__(self) -> int:
        return len(self.lambdas)

    @classmethod
    def geometric(cls, p: float, rows: int) -> "AggregationSpec":
        """Weights ``1, p, p**2, ...``."""
        if not 0 < p < 1:
            raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
        return cls(tuple(p**i for i in range(rows)))


def _values(M) -> np.ndarray:
    values = M.values if isinstance(M, NdfMatrix) else np.asarray(M)
    if values.ndim not in (2, 3):
        raise ValueError(f"expected a matrix or a stack of matrices, got ndim={values.ndim}")
    return values


def parametric_aggregation(M, spec: AggregationSpec) -> np.ndarray:
    """``out_j = sum_i lambda_i * M[i, j]``."""
    values = _values(M)
    rows = values.shape[-2]
    if len(spec) != rows:
        raise ValueError(f"{len(spec)} weights for a matrix with {rows} rows")
    return np.einsum("i,...ij->...j", np.asarray(spec.lambdas), values.astype(np.float64))


def p_aggregation(M, p: float) -> np.ndarray:
    return parametric_aggregation(M, AggregationSpec.geometric(p, _values(M).shape[-2]))


def weighted_contraction(M, row_weights=None, col_weights=None) -> np.ndarray:
    """Contract rows and/or columns against weight vectors.

    Rows only gives a column vector of length ``m``, columns only gives one
    value per row, both gives a scalar per matrix.
    """
    out = _values(M).astype(np.float64)
    if col_weights is not None:
        out = out @ np.asarray(col_weights, dtype=np.float64)
        if row_weights is not None:
            out = out @ np.asarray(row_weights, dtype=np.float64)
        return out
    if row_weights is not None:
        return np.einsum("i,...ij->...j", np.asarray(row_weights, dtype=np.float64), out)
    return out
