"""Small dense linear algebra shared by the policies.

Everything here works on :class:`numpy.ndarray` values and is a pure
function of its inputs. Symmetric positive-definite systems are handled
through a lower Cholesky factor rather than explicit inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
from numpy.typing import ArrayLike, NDArray

SYMMETRY_RTOL = 1e-10

FloatArray = NDArray[np.float64]


class LinalgError(ValueError):
    """Base class for linear algebra failures."""


class NotPositiveDefinite(LinalgError):
    """Raised when a Cholesky pivot is not strictly positive."""


class NotSymmetric(LinalgError):
    """Raised when a matrix is outside the symmetry tolerance."""


class DimensionMismatch(LinalgError):
    """Raised when operand shapes do not line up."""


def as_matrix(data: ArrayLike) -> FloatArray:
    """Return ``data`` as a finite 2-D float array."""

    matrix = np.array(data, dtype=np.float64)
    if matrix.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got {matrix.ndim}-D")
    if not np.all(np.isfinite(matrix)):
        raise LinalgError("matrix has non-finite entries")
    return matrix


def as_vector(data: ArrayLike, length: int | None = None) -> FloatArray:
    vector = np.asarray(data, dtype=np.float64)
    if vector.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got {vector.ndim}-D")
    if length is not None and vector.shape[0] != length:
        raise DimensionMismatch(
            f"expected length {length}, got {vector.shape[0]}"
        )
    return vector


@dataclass(frozen=True)
class SpdFactorization:
    """Lower-triangular ``L`` with ``L @ L.T`` equal to the factored matrix."""

    lower: FloatArray

    @property
    def dimension(self) -> int:
        return int(self.lower.shape[0])

    def reconstruct(self) -> FloatArray:
        return self.lower @ self.lower.T


def spd_factor(matrix: ArrayLike) -> SpdFactorization:
    """Factor a symmetric positive-definite matrix.

    The input is symmetrized as ``(M + M.T) / 2`` after checking that its
    asymmetry is within ``SYMMETRY_RTOL`` relative to its norm.
    """

    m = as_matrix(matrix)
    rows, cols = m.shape
    if rows != cols:
        raise DimensionMismatch(f"matrix is {rows}x{cols}, not square")

    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > SYMMETRY_RTOL * scale:
        raise NotSymmetric("matrix is not symmetric")
    m = (m + m.T) / 2.0

    try:
        lower = la.cholesky(m, lower=True, check_finite=False)
    except la.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if not np.all(np.diag(lower) > 0.0):
        raise NotPositiveDefinite("non-positive pivot in factorization")
    return SpdFactorization(lower=lower)


def spd_solve(factor: SpdFactorization, rhs: ArrayLike) -> FloatArray:
    """Solve ``M x = b`` for one vector or for the columns of a matrix."""

    b = np.asarray(rhs, dtype=np.float64)
    if b.shape[0] != factor.dimension:
        raise DimensionMismatch(
            f"right-hand side has {b.shape[0]} rows, "
            f"factor has dimension {factor.dimension}"
        )
    return la.cho_solve((factor.lower, True), b, check_finite=False)


def log_det(factor: SpdFactorization) -> float:
    """``ln det(M) = 2 * sum(ln L_ii)``."""

    return float(2.0 * np.log(np.diag(factor.lower)).sum())


def weighted_norm(factor: SpdFactorization, x: ArrayLike) -> float:
    """``sqrt(x.T @ M @ x)`` computed as ``||L.T x||``."""

    v = as_vector(x, factor.dimension)
    return float(np.linalg.norm(factor.lower.T @ v))


def inverse_weighted_norm(
    factor: SpdFactorization, x: ArrayLike
) -> FloatArray | float:
    """``sqrt(x.T @ inv(M) @ x)``, i.e. ``||M^{-1/2} x||``.

    ``x`` may be a vector or a ``(dimension, count)`` matrix, in which case
    one norm per column is returned.
    """

    b = np.asarray(x, dtype=np.float64)
    if b.shape[0] != factor.dimension:
        raise DimensionMismatch(
            f"operand has {b.shape[0]} rows, "
            f"factor has dimension {factor.dimension}"
        )
    w = la.solve_triangular(factor.lower, b, lower=True, check_finite=False)
    if w.ndim == 1:
        return float(np.linalg.norm(w))
    return np.linalg.norm(w, axis=0)


def ridge_solve(
    design: ArrayLike,
    targets: ArrayLike,
    penalty: float,
    prior: ArrayLike | None = None,
) -> FloatArray:
    """Ridge solution ``(D.T D + penalty I)^-1 (D.T y + penalty p)``.

    ``prior`` defaults to the zero vector, which gives the plain ridge
    solution. An empty design returns the prior.
    """

    if penalty <= 0:
        raise NotPositiveDefinite(f"ridge penalty must be > 0, got {penalty}")
    d = np.asarray(design, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if d.ndim != 2 or y.ndim != 1 or d.shape[0] != y.shape[0]:
        raise DimensionMismatch(
            f"design {d.shape} does not match targets {y.shape}"
        )
    k = d.shape[1]
    p = np.zeros(k) if prior is None else as_vector(prior, k)

    gram = d.T @ d + penalty * np.eye(k)
    rhs = d.T @ y + penalty * p
    return spd_solve(spd_factor(gram), rhs)
