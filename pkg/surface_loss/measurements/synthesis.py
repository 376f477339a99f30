from logging import getLogger
from math import isfinite

import numpy as np

from surface_loss.constants import (
    DEFAULT_SYNTH_PROCESS,
    DEFAULT_SYNTH_SUBSTRATE,
    LOGGER_NAME,
    QUOTED_DEVICE_COUNT,
    QUOTED_WAFER_COUNT,
    REFERENCE_DESIGN,
)
from surface_loss.exception import MeasurementError
from surface_loss.lossfit.model import angular_frequency, predict
from surface_loss.measurements.measurement import Ensemble, QubitMeasurement

"""

synthesis.py

This script holds the generator of synthetic device ensembles from known loss parameters.  Devices are assigned to
the designs and to the wafers round-robin, the true Q of each device comes from the loss model and the observed Q is
scattered by a relative lognormal factor:  Q = Q_true * exp(sigma * z) with z standard normal.

This script holds the following function(s):
synthesize(sensitivities, parameters, sigma, frequency, devices=QUOTED_DEVICE_COUNT, per_design=None,
           wafers=QUOTED_WAFER_COUNT, seed=0, substrate=DEFAULT_SYNTH_SUBSTRATE, process=DEFAULT_SYNTH_PROCESS)

"""


def synthesize(
    sensitivities,
    parameters,
    sigma,
    frequency,
    devices=QUOTED_DEVICE_COUNT,
    per_design=None,
    wafers=QUOTED_WAFER_COUNT,
    seed=0,
    substrate=DEFAULT_SYNTH_SUBSTRATE,
    process=DEFAULT_SYNTH_PROCESS,
):
    logger = getLogger(LOGGER_NAME)
    sensitivities = list(sensitivities)

    if not (isfinite(sigma) and sigma >= 0):
        log_message = f"Invalid relative scatter: {sigma}, expected a nonnegative value."
        logger.error(log_message)
        raise MeasurementError(log_message)
    if not sensitivities:
        log_message = "Synthesis needs at least one design."
        logger.error(log_message)
        raise MeasurementError(log_message)
    if per_design is not None:
        if per_design < 1:
            log_message = f"Invalid devices per design: {per_design}."
            logger.error(log_message)
            raise MeasurementError(log_message)
        devices = per_design * len(sensitivities)
    if devices < 1 or wafers < 1:
        log_message = f"Invalid ensemble shape: {devices} device(s) on {wafers} wafer(s)."
        logger.error(log_message)
        raise MeasurementError(log_message)
    if not (isfinite(frequency) and frequency > 0):
        log_message = f"Invalid qubit frequency: {frequency} Hz; synthetic devices need an explicit frequency."
        logger.error(log_message)
        raise MeasurementError(log_message)

    omega = angular_frequency(frequency)
    true_q = []
    for sensitivity in sensitivities:
        prediction = predict(parameters, sensitivity, omega)
        if prediction.unbounded:
            log_message = f"Design: {sensitivity.design} has no loss under the given parameters, its Q is unbounded."
            logger.error(log_message)
            raise MeasurementError(log_message)
        true_q.append(prediction.q)

    generator = np.random.default_rng(seed)
    scatter = generator.standard_normal(devices)

    measurements = []
    for index in range(devices):
        design_index = index % len(sensitivities)
        design = sensitivities[design_index].design
        q = true_q[design_index] * float(np.exp(sigma * scatter[index]))
        t1 = q / omega
        measurements.append(
            QubitMeasurement(
                f"Q{index + 1:03d}",
                f"W{index % wafers + 1}",
                substrate,
                process,
                design,
                frequency,
                t1,
                0.0,
                1,
                [(None, t1)],
                design not in REFERENCE_DESIGN,
            )
        )

    logger.info(
        f"Synthesized {devices} device(s) over {len(sensitivities)} design(s) and {min(wafers, devices)} wafer(s) "
        f"with relative scatter: {sigma} and seed: {seed}."
    )

    return Ensemble(measurements, {"synthetic": True, "seed": seed, "sigma": sigma})
