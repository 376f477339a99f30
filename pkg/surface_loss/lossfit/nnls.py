from logging import getLogger

import numpy as np

from surface_loss.constants import LOGGER_NAME
from surface_loss.exception import FitError

"""

nnls.py

This script holds the active set nonnegative least squares solver of Lawson and Hanson used by the loss fit, the
singular value solve for the passive set and the Karush-Kuhn-Tucker check of a solution.

This script holds the following function(s):
svd_solve(a, b, need_covariance=False)
nnls(a, b, tolerance=None, maximum_iterations=None)
kkt_violation(a, b, x)

"""

# Singular values below this fraction of the largest one are treated as zero
SINGULAR_VALUE_CUTOFF = 1e-13


def svd_solve(a, b, need_covariance=False):
    """
    Solves a * x = b in the least squares sense.  When need_covariance is set the unscaled covariance (a^T a)^-1 is
    returned as well, with rank deficient directions dropped.
    """
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    keep = s > SINGULAR_VALUE_CUTOFF * (s[0] if s.size else 0.0)
    inverse = np.zeros_like(s)
    inverse[keep] = 1.0 / s[keep]

    x = vh.T @ (inverse * (u.T @ b))

    if need_covariance:
        covariance = (vh.T * inverse**2) @ vh
        return x, covariance
    return x


def nnls(a, b, tolerance=None, maximum_iterations=None):
    """
    Minimizes ||a x - b|| subject to x >= 0 and returns the solution with the mask of the passive (free) set.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rows, columns = a.shape
    maximum_iterations = maximum_iterations or max(3 * columns, 10)
    if tolerance is None:
        tolerance = 10.0 * np.finfo(float).eps * max(rows, columns) * np.linalg.norm(a, 1) * np.linalg.norm(b)

    x = np.zeros(columns)
    index = np.arange(columns)

    # Z holds the indices held at zero, the passive set is its complement
    zero = np.ones(columns, dtype=bool)

    iterations = 0
    while True:
        # Negative gradient
        w = a.T @ (b - a @ x)

        if not zero.any() or np.max(w[zero]) <= tolerance:
            return x, ~zero

        iterations += 1
        if iterations > maximum_iterations:
            log_message = f"Nonnegative least squares did not converge within {maximum_iterations} iterations."
            getLogger(LOGGER_NAME).error(log_message)
            raise FitError(log_message)

        entering = index[zero][np.argmax(w[zero])]
        zero[entering] = False

        first_pass = True
        while True:
            z = np.zeros(columns)
            z[~zero] = svd_solve(a[:, ~zero], b)

            if np.min(z[~zero]) > 0.0:
                x = z
                break

            if first_pass and z[entering] <= 0.0:
                # Round-off made the entering gradient look positive
                zero[entering] = True
                return x, ~zero
            first_pass = False

            blocking = ~zero & (z <= 0.0)
            alpha = np.min(x[blocking] / (x[blocking] - z[blocking]))
            x = x + alpha * (z - x)

            zero[~zero] |= x[~zero] <= 0.0
            x[zero] = 0.0


def kkt_violation(a, b, x):
    """
    Returns the largest violation of the optimality conditions of x for the nonnegative least squares problem with
    the columns of a normalized and the right hand side scaled to unit norm:  free parameters need a zero gradient and
    parameters at the bound a nonnegative one.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)

    norms = np.linalg.norm(a, axis=0)
    norms[norms == 0.0] = 1.0
    scale = np.linalg.norm(b) or 1.0

    gradient = (a / norms).T @ ((a @ x) - b) / scale
    if np.any(x < 0.0):
        return float(np.max(-x[x < 0.0] * norms[x < 0.0] / scale))
    violation = np.where(x > 0.0, np.abs(gradient), np.maximum(0.0, -gradient))
    return float(np.max(violation)) if violation.size else 0.0
