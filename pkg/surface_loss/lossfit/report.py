import json
from collections import OrderedDict
from logging import getLogger
from math import inf

import numpy as np

from surface_loss._version import __version__
from surface_loss.constants import (
    BULK_PARAMETER,
    COMBINED_CHANNEL,
    LOGGER_NAME,
    PLOT_INVERSE_SENSITIVITY_RANGE,
    PLOT_POINTS,
    UTF_8,
)
from surface_loss.exception import ReportError

"""

report.py

This script holds the fit report document written by the fit command and read back by the report command, together
with the rows of the Q versus inverse sensitivity plot data.

The report is a JSON object holding the model, the loss products in meters, the bulk inverse quality factor, the
bootstrap intervals, the identifiability diagnostics and the per-device residuals.

This script holds the following function(s):
channel_sensitivity(sensitivity, channel)
build_fit_report(fit, provenance=None)
load_fit_report(file_path)
plot_curve(parameters, channel=None)
points_rows(fit, channel=None)

"""

REPORT_FORMAT = "surface_loss.fit_report"
REQUIRED_REPORT_KEYS = ["format", "model", "x_m", "b", "Q_bulk", "confidence_intervals", "identifiability", "devices"]


def channel_sensitivity(sensitivity, channel):
    if channel == COMBINED_CHANNEL:
        return sum(sensitivity.r.values())
    return sensitivity.r[channel]


def _plot_channel(model, channel):
    channel = channel or (model.channel_parameters[0] if model.channel_parameters else None)
    if channel is not None and channel not in model.channel_parameters:
        log_message = f"Plot channel: {channel} is not fitted by the model with parameters: {model.parameters}."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)
    return channel


def _inverse(value):
    return inf if value == 0 else 1.0 / value


def build_fit_report(fit, provenance=None):
    model = fit.model
    values = fit.values
    standard_errors = fit.standard_errors
    bulk = values.get(BULK_PARAMETER, 0.0)

    intervals = fit.bootstrap.intervals if fit.bootstrap is not None else {}

    devices = []
    for observation, residual in zip(fit.observations, fit.residuals):
        predicted_loss = fit.parameters.loss(observation.sensitivity)
        devices.append(
            OrderedDict(
                [
                    ("qubit_id", observation.qubit_id),
                    ("design", observation.design),
                    ("wafer", observation.wafer),
                    ("Q_measured", observation.q),
                    ("Q_predicted", _inverse(predicted_loss)),
                    ("residual_inverse_Q", float(residual)),
                    ("weight", observation.weight),
                ]
            )
        )

    designs = OrderedDict()
    for observation in fit.observations:
        designs.setdefault(observation.design, {"observation": observation, "q": []})["q"].append(observation.q)
    design_rows = [
        OrderedDict(
            [
                ("design", design),
                ("devices", len(entry["q"])),
                ("Q_measured_mean", float(np.mean(entry["q"]))),
                ("Q_predicted", _inverse(fit.parameters.loss(entry["observation"].sensitivity))),
            ]
        )
        for design, entry in designs.items()
    ]

    return OrderedDict(
        [
            ("format", REPORT_FORMAT),
            ("version", __version__),
            ("model", model.to_dict()),
            ("x_m", OrderedDict((name, values[name]) for name in model.channel_parameters)),
            ("x_standard_error_m", OrderedDict((name, standard_errors[name]) for name in model.channel_parameters)),
            ("b", bulk if model.include_bulk else None),
            ("b_standard_error", standard_errors.get(BULK_PARAMETER)),
            ("Q_bulk", _inverse(bulk) if model.include_bulk else None),
            ("tan_delta_bulk", bulk if model.include_bulk else None),
            ("free", fit.free),
            ("confidence", fit.bootstrap.confidence if fit.bootstrap is not None else None),
            ("bootstrap", fit.bootstrap.to_dict() if fit.bootstrap is not None else None),
            ("confidence_intervals", OrderedDict((name, list(interval)) for name, interval in intervals.items())),
            (
                "covariance",
                OrderedDict([("parameters", model.parameters), ("matrix", fit.covariance.tolist())]),
            ),
            ("residual_norm", fit.residual_norm),
            ("degrees_of_freedom", fit.degrees_of_freedom),
            ("kkt_violation", fit.kkt_violation),
            ("wafer_weighting", fit.wafer_weighting),
            ("identifiability", fit.identifiability.to_dict()),
            ("designs", design_rows),
            ("devices", devices),
            ("provenance", provenance or {}),
        ]
    )


def load_fit_report(file_path):
    try:
        with open(file_path, "r", encoding=UTF_8) as report_file:
            text = report_file.read()
    except OSError as e:
        log_message = f"Unable to read fit report: {file_path} with error: {e}."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    try:
        report = json.loads(text)
    except json.JSONDecodeError as e:
        log_message = (
            f"Malformed fit report: {file_path} at line {e.lineno} column {e.colno} (position {e.pos}): {e.msg}."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    if not isinstance(report, dict):
        log_message = f"Malformed fit report: {file_path} does not hold a JSON object."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    missing = [key for key in REQUIRED_REPORT_KEYS if key not in report]
    if missing:
        log_message = f"Malformed fit report: {file_path} is missing key(s): {', '.join(missing)}."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    if report["format"] != REPORT_FORMAT:
        log_message = f"Unexpected report format: {report['format']!r} in: {file_path}."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    return report


def plot_curve(parameters, channel=None):
    """
    Returns rows of (1/r in meters, Q of the full model, Q of the surface channel alone, Q of the background alone)
    over a logarithmic grid of the inverse sensitivity.
    """
    channel = _plot_channel(parameters.model, channel)
    loss_product = parameters.values.get(channel, 0.0) if channel is not None else 0.0
    bulk = parameters.bulk

    low, high = PLOT_INVERSE_SENSITIVITY_RANGE
    rows = []
    for inverse_sensitivity in np.logspace(np.log10(low), np.log10(high), PLOT_POINTS):
        surface_loss = loss_product / inverse_sensitivity
        rows.append(
            (
                float(inverse_sensitivity),
                _inverse(surface_loss + bulk),
                _inverse(surface_loss),
                _inverse(bulk),
            )
        )
    return rows


def points_rows(fit, channel=None):
    channel = _plot_channel(fit.model, channel)
    rows = []
    for observation in fit.observations:
        sensitivity = channel_sensitivity(observation.sensitivity, channel) if channel is not None else 0.0
        rows.append(
            (
                observation.qubit_id,
                observation.design,
                observation.wafer,
                observation.substrate,
                observation.process,
                _inverse(sensitivity),
                observation.q,
            )
        )
    return rows
