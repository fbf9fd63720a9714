"""
Dense symmetric linear algebra helpers.

Covariance matrices of sign-quantized signals can be numerically singular
when many comparators observe strongly correlated inputs. Every solve in the
package goes through solve_symmetric so the retry policy lives in one place.
"""

from typing import Type

import numpy as np
from loguru import logger
from numpy.linalg import LinAlgError
from scipy.linalg import cho_factor, cho_solve

from comparator_mimo.config import JITTER_SCALE
from comparator_mimo.exceptions import SingularCovarianceError


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    """Return (M + M^T) / 2."""
    return 0.5 * (matrix + matrix.T)


def solve_symmetric(
    matrix: np.ndarray,
    rhs: np.ndarray,
    error_cls: Type[SingularCovarianceError] = SingularCovarianceError,
) -> np.ndarray:
    """
    Solve ``matrix @ x = rhs`` for a symmetric positive definite matrix.

    A Cholesky factorization is tried first. If it fails, a diagonal jitter
    of ``JITTER_SCALE * mean(diag)`` is added once and the factorization is
    retried.

    Args:
        matrix: Symmetric (n, n) matrix
        rhs: Right-hand side of shape (n,) or (n, k)
        error_cls: Exception type raised when the retry also fails

    Returns:
        Solution with the shape of ``rhs``

    Raises:
        SingularCovarianceError: (or ``error_cls``) if the matrix stays singular
    """
    if matrix.shape[0] == 0:
        return np.zeros_like(rhs, dtype=float)
    try:
        factor = cho_factor(matrix, lower=True, check_finite=False)
    except LinAlgError:
        jitter = JITTER_SCALE * float(np.mean(np.diag(matrix)))
        logger.debug(f"Cholesky failed, retrying with diagonal jitter {jitter:.3e}")
        try:
            factor = cho_factor(
                matrix + jitter * np.eye(matrix.shape[0]),
                lower=True,
                check_finite=False,
            )
        except LinAlgError as e:
            raise error_cls(
                f"Covariance matrix of size {matrix.shape[0]} is singular "
                f"after jitter {jitter:.3e}"
            ) from e
    return cho_solve(factor, rhs, check_finite=False)
