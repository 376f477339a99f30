from concurrent.futures import ThreadPoolExecutor
from logging import getLogger

import numpy as np

from surface_loss.constants import (
    DEFAULT_BOOTSTRAP_RESAMPLES,
    DEFAULT_CONFIDENCE,
    LOGGER_NAME,
    MINIMUM_BOOTSTRAP_DEVICES,
    MINIMUM_BOOTSTRAP_RESAMPLES,
)
from surface_loss.exception import FitError
from surface_loss.lossfit.fit import _check_problem, _solve, wafer_weights

"""

bootstrap.py

This script holds the case resampling bootstrap over devices used for the confidence intervals of the loss fit.  All
resample indices are drawn up front from one seeded generator, so the intervals do not depend on how the resamples are
spread over worker threads.

This script holds the following object(s):
BootstrapResult(object)

This script holds the following function(s):
bootstrap(observations, model, resamples=DEFAULT_BOOTSTRAP_RESAMPLES, confidence=DEFAULT_CONFIDENCE, seed=0,
          workers=1, wafer_weighting=False)

"""


class BootstrapResult:
    def __init__(self, model, samples, confidence, seed, failed=0):
        self.model = model

        # Resamples x parameters, rows of failed resamples removed
        self.samples = samples

        self.confidence = confidence
        self.seed = seed
        self.failed = failed

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def resamples(self):
        return self.samples.shape[0] + self.failed

    @property
    def intervals(self):
        tail = 100.0 * (1.0 - self.confidence) / 2.0
        lower, upper = np.percentile(self.samples, [tail, 100.0 - tail], axis=0)
        return {
            name: (float(low), float(high)) for name, low, high in zip(self.model.parameters, lower, upper)
        }

    def to_dict(self):
        return {
            "resamples": self.resamples,
            "failed": self.failed,
            "confidence": self.confidence,
            "seed": self.seed,
            "intervals": {name: list(interval) for name, interval in self.intervals.items()},
        }

    def stringify(self, padding=""):
        string = padding + "Resamples: {}\n" + padding + "Confidence: {}\n" + padding + "Seed: {}"
        string = string.format(self.resamples, self.confidence, self.seed)
        for name, (low, high) in self.intervals.items():
            string += "\n" + padding + "{}: [{}, {}]".format(name, low, high)
        return string


def bootstrap(
    observations,
    model,
    resamples=DEFAULT_BOOTSTRAP_RESAMPLES,
    confidence=DEFAULT_CONFIDENCE,
    seed=0,
    workers=1,
    wafer_weighting=False,
):
    observations = list(observations)
    logger = getLogger(LOGGER_NAME)

    if resamples < MINIMUM_BOOTSTRAP_RESAMPLES:
        log_message = f"The bootstrap needs at least {MINIMUM_BOOTSTRAP_RESAMPLES} resamples but {resamples} were requested."
        logger.error(log_message)
        raise FitError(log_message)
    if len(observations) < MINIMUM_BOOTSTRAP_DEVICES:
        log_message = (
            f"Too few devices to resample meaningfully: {len(observations)}, "
            f"at least {MINIMUM_BOOTSTRAP_DEVICES} are needed."
        )
        logger.error(log_message)
        raise FitError(log_message)
    if not 0.0 < confidence < 1.0:
        log_message = f"Invalid confidence level: {confidence}, expected 0 < confidence < 1."
        logger.error(log_message)
        raise FitError(log_message)

    if wafer_weighting:
        observations = wafer_weights(observations)

    matrix = model.design_matrix([observation.sensitivity for observation in observations])
    _check_problem(model, matrix)
    target = np.array([1.0 / observation.q for observation in observations])
    weights = np.array([observation.weight for observation in observations])

    generator = np.random.default_rng(seed)
    indices = generator.integers(0, len(observations), size=(resamples, len(observations)))

    def single_resample(resample):
        rows = indices[resample]
        if not np.all(np.any(matrix[rows], axis=0)):
            return None
        try:
            values, *_ = _solve(matrix[rows], target[rows], weights[rows])
        except (FitError, FloatingPointError, np.linalg.LinAlgError, ZeroDivisionError):
            return None
        if not np.all(np.isfinite(values)):
            return None
        return np.maximum(values, 0.0)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(single_resample, range(resamples)))
    else:
        results = [single_resample(resample) for resample in range(resamples)]

    samples = [result for result in results if result is not None]
    failed = resamples - len(samples)
    if failed:
        logger.warning(f"{failed} of {resamples} bootstrap resample(s) could not be fitted.")
    if not samples:
        log_message = "No bootstrap resample could be fitted."
        logger.error(log_message)
        raise FitError(log_message)

    return BootstrapResult(model, np.array(samples), confidence, seed, failed)
