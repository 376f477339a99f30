from collections import Counter
from logging import getLogger

import numpy as np

from surface_loss.constants import LOGGER_NAME
from surface_loss.exception import FitError
from surface_loss.lossfit.identifiability import _identifiability
from surface_loss.lossfit.model import LossParameters, Observation
from surface_loss.lossfit.nnls import kkt_violation, nnls, svd_solve

"""

fit.py

This script holds the weighted nonnegative least squares fit of measured inverse quality factors to a loss model.

The fit minimizes sum_j w_j (1/Q_j - sum_i r_ij x_i - b)^2 subject to every parameter being nonnegative.  Rows are
scaled by sqrt(w_j) and the columns are normalized before the active set solve so that loss products in meters and the
dimensionless bulk term are treated alike.  The covariance is the unconstrained least squares covariance restricted
to the parameters that are free at the solution.

This script holds the following object(s):
LossFit(object)

This script holds the following function(s):
wafer_weights(observations)
fit(observations, model, wafer_weighting=False)

"""


class LossFit:
    def __init__(
        self,
        model,
        parameters,
        observations,
        residuals,
        covariance,
        free,
        degrees_of_freedom,
        residual_norm,
        kkt_violation,
        identifiability,
        wafer_weighting=False,
    ):
        self.model = model
        self.parameters = parameters
        self.observations = observations

        # Per device residual of the inverse quality factor:  1/Q - predicted loss
        self.residuals = residuals

        # Parameter covariance over model.parameters, NaN on rows and columns of parameters held at zero
        self.covariance = covariance

        self.free = free
        self.degrees_of_freedom = degrees_of_freedom
        self.residual_norm = residual_norm
        self.kkt_violation = kkt_violation
        self.identifiability = identifiability
        self.wafer_weighting = wafer_weighting

        self.bootstrap = None

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def values(self):
        return self.parameters.values

    @property
    def standard_errors(self):
        return {
            name: float(np.sqrt(self.covariance[index, index])) if self.free[name] else None
            for index, name in enumerate(self.model.parameters)
        }

    def stringify(self, padding=""):
        string = padding + "Model: {}\n" + padding + "Devices: {}\n" + padding + "Residual Norm: {}"
        string = string.format(str(self.model), len(self.observations), self.residual_norm)
        for name, value in self.values.items():
            string += "\n" + padding + "{}: {}{}".format(name, value, "" if self.free[name] else " (at bound)")
        return string


def wafer_weights(observations):
    """
    Rescales the weights so that each wafer carries the same total share:  w = Q^2 * n / (wafers * devices on wafer).
    Devices without a wafer label form one group.
    """
    counts = Counter(observation.wafer or "" for observation in observations)
    total = len(observations)
    return [
        Observation(
            observation.sensitivity,
            observation.q,
            observation.q**2 * total / (len(counts) * counts[observation.wafer or ""]),
            observation.qubit_id,
            observation.wafer,
            observation.substrate,
            observation.process,
        )
        for observation in observations
    ]


def _check_problem(model, matrix):
    rows, columns = matrix.shape
    if rows < columns:
        log_message = f"Underdetermined loss fit: {rows} measurement(s) for {columns} free parameter(s)."
        getLogger(LOGGER_NAME).error(log_message)
        raise FitError(log_message)
    zero_columns = [name for name, column in zip(model.parameters, matrix.T) if not np.any(column)]
    if zero_columns:
        log_message = f"All-zero sensitivity column(s) for parameter(s): {', '.join(zero_columns)}."
        getLogger(LOGGER_NAME).error(log_message)
        raise FitError(log_message)


def _solve(matrix, target, weights):
    """
    Returns the parameter vector, the free mask and the normalized weighted system for the fit.
    """
    root_weights = np.sqrt(weights)
    weighted = matrix * root_weights[:, None]
    weighted_target = target * root_weights

    scale = np.linalg.norm(weighted, axis=0)
    normalized = weighted / scale

    normalized_values, free = nnls(normalized, weighted_target)
    return normalized_values / scale, free, normalized, weighted_target, normalized_values, scale


def fit(observations, model, wafer_weighting=False):
    observations = list(observations)
    if wafer_weighting:
        observations = wafer_weights(observations)

    matrix = model.design_matrix([observation.sensitivity for observation in observations])
    _check_problem(model, matrix)

    target = np.array([1.0 / observation.q for observation in observations])
    weights = np.array([observation.weight for observation in observations])
    if np.any(weights <= 0.0) or not np.all(np.isfinite(weights)):
        log_message = "Fit weights must be finite and positive."
        getLogger(LOGGER_NAME).error(log_message)
        raise FitError(log_message)

    values, free, normalized, weighted_target, normalized_values, scale = _solve(matrix, target, weights)
    values = np.maximum(values, 0.0)

    residuals = target - matrix @ values
    weighted_square_sum = float(np.sum(weights * residuals**2))
    degrees_of_freedom = len(observations) - int(np.count_nonzero(free))
    variance = weighted_square_sum / degrees_of_freedom if degrees_of_freedom > 0 else float("nan")

    covariance = np.full((model.parameter_count, model.parameter_count), np.nan)
    if np.any(free):
        _, unscaled = svd_solve(normalized[:, free], weighted_target, need_covariance=True)
        free_scale = scale[free]
        covariance[np.ix_(free, free)] = variance * unscaled / np.outer(free_scale, free_scale)

    violation = kkt_violation(normalized, weighted_target, normalized_values)
    getLogger(LOGGER_NAME).debug(f"Loss fit KKT violation: {violation}.")

    parameters = LossParameters(model, dict(zip(model.parameters, values.tolist())))
    report = _identifiability([observation.sensitivity for observation in observations], model, weights)

    return LossFit(
        model,
        parameters,
        observations,
        residuals,
        covariance,
        dict(zip(model.parameters, (bool(value) for value in free))),
        degrees_of_freedom,
        float(np.sqrt(weighted_square_sum)),
        violation,
        report,
        wafer_weighting,
    )
