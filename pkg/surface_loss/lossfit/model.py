from logging import getLogger
from math import inf, isfinite, pi

import numpy as np

from surface_loss.constants import (
    BULK_PARAMETER,
    COMBINED_CHANNEL,
    INTERFACE,
    INTERFACE_ORDER,
    LOGGER_NAME,
)
from surface_loss.exception import FitError, UsageError

"""

model.py

This script holds the multi-channel loss model 1/Q = sum_i r_i * x_i + b, where x_i = t_i * tan(delta_i) is the loss
product of interface i in meters and b = 1 / Q_bulk, together with parameter sets, observations and predictions.

This script holds the following object(s):
LossModel(object)
LossParameters(object)
Observation(object)
Prediction(object)

This script holds the following function(s):
predict(fit, sensitivity, omega)
angular_frequency(frequency)

"""


class LossModel:
    def __init__(self, channels, include_bulk=True, merge_channels=False):
        channels = tuple(channels)
        for channel in channels:
            if channel not in INTERFACE:
                log_message = f"Invalid loss channel: {channel}, expected one of: {list(INTERFACE)}."
                getLogger(LOGGER_NAME).error(log_message)
                raise UsageError(log_message)
        if len(set(channels)) != len(channels):
            log_message = f"Duplicate loss channels in: {channels}."
            getLogger(LOGGER_NAME).error(log_message)
            raise UsageError(log_message)
        if not channels and not include_bulk:
            log_message = "A loss model needs at least one channel or the bulk term."
            getLogger(LOGGER_NAME).error(log_message)
            raise UsageError(log_message)

        self.channels = tuple(channel for channel in INTERFACE_ORDER if channel in channels)
        self.include_bulk = include_bulk
        self.merge_channels = merge_channels and len(self.channels) > 1

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, LossModel):
            return NotImplemented
        return (self.channels, self.include_bulk, self.merge_channels) == (
            other.channels,
            other.include_bulk,
            other.merge_channels,
        )

    @property
    def channel_parameters(self):
        if self.merge_channels:
            return [COMBINED_CHANNEL]
        return list(self.channels)

    @property
    def parameters(self):
        return self.channel_parameters + ([BULK_PARAMETER] if self.include_bulk else [])

    @property
    def parameter_count(self):
        return len(self.parameters)

    def row(self, sensitivity):
        values = [sensitivity.r[channel] for channel in self.channels]
        row = [sum(values)] if self.merge_channels else values
        if self.include_bulk:
            row.append(1.0)
        return row

    def design_matrix(self, sensitivities):
        return np.array([self.row(sensitivity) for sensitivity in sensitivities], dtype=float).reshape(
            len(sensitivities), self.parameter_count
        )

    def to_dict(self):
        return {
            "channels": list(self.channels),
            "include_bulk": self.include_bulk,
            "merge_channels": self.merge_channels,
            "parameters": self.parameters,
        }

    def stringify(self, padding=""):
        string = padding + "Channels: {}\n" + padding + "Include Bulk: {}\n" + padding + "Merge Channels: {}"
        return string.format(", ".join(self.channels) or "none", self.include_bulk, self.merge_channels)


class LossParameters:
    """
    Parameter values of a loss model keyed by parameter name:  loss products in meters and the bulk inverse Q.
    """

    def __init__(self, model, values):
        self.model = model
        self.values = {name: float(values.get(name, 0.0)) for name in model.parameters}
        for name, value in self.values.items():
            if not (isfinite(value) and value >= 0):
                log_message = f"Invalid loss parameter: {name} = {value}; loss parameters are finite and nonnegative."
                getLogger(LOGGER_NAME).error(log_message)
                raise FitError(log_message)

    def __repr__(self):
        return f"LossParameters({self.values!r})"

    @property
    def vector(self):
        return np.array([self.values[name] for name in self.model.parameters])

    @property
    def bulk(self):
        return self.values.get(BULK_PARAMETER, 0.0)

    @property
    def q_bulk(self):
        return inf if self.bulk == 0 else 1.0 / self.bulk

    def loss(self, sensitivity):
        return float(np.dot(self.model.row(sensitivity), self.vector))


class Observation:
    """
    One measured device entering a fit.  The weight defaults to Q^2 so that residuals in 1/Q approximate relative Q
    errors.
    """

    def __init__(self, sensitivity, q, weight=None, qubit_id=None, wafer=None, substrate=None, process=None):
        if not (isfinite(q) and q > 0):
            log_message = f"Invalid quality factor: {q} for device: {qubit_id}."
            getLogger(LOGGER_NAME).error(log_message)
            raise FitError(log_message)
        self.sensitivity = sensitivity
        self.q = float(q)
        self.weight = self.q**2 if weight is None else float(weight)
        self.qubit_id = qubit_id
        self.wafer = wafer
        self.substrate = substrate
        self.process = process

    def __repr__(self):
        return f"Observation(design={self.sensitivity.design!r}, q={self.q!r}, qubit_id={self.qubit_id!r})"

    @property
    def design(self):
        return self.sensitivity.design


class Prediction:
    def __init__(self, q, t1, unbounded=False):
        self.q = q
        self.t1 = t1
        self.unbounded = unbounded

    def __repr__(self):
        return f"Prediction(q={self.q!r}, t1={self.t1!r}, unbounded={self.unbounded!r})"


def predict(fit, sensitivity, omega):
    """
    Predicts Q = 1 / (sum r_i x_i + b) and T1 = Q / omega for a design.  fit may be a LossFit or LossParameters.  A
    design without any loss is reported as unbounded with infinite Q and T1.
    """
    if not (isfinite(omega) and omega > 0):
        log_message = f"Invalid angular frequency: {omega} rad/s."
        getLogger(LOGGER_NAME).error(log_message)
        raise FitError(log_message)

    parameters = getattr(fit, "parameters", fit)
    loss = parameters.loss(sensitivity)
    if loss <= 0.0:
        return Prediction(inf, inf, True)
    q = 1.0 / loss
    return Prediction(q, q / omega)


def angular_frequency(frequency):
    return 2.0 * pi * frequency
