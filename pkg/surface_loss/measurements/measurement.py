import warnings
from collections import OrderedDict
from logging import getLogger
from math import isfinite, pi

import numpy as np

from surface_loss.constants import (
    LOGGER_NAME,
    MINIMUM_HISTOGRAM_BINS,
    REFERENCE_DESIGN,
    SUBSTRATE,
)
from surface_loss.exception import MeasurementError

"""

measurement.py

This script holds per-device T1 measurements, the aggregation of fluctuating T1 traces and the ensemble of devices that
enters a loss fit.

Times are in seconds and frequencies in hertz.  The quality factor of a device is Q = 2 pi f T1 with T1 the arithmetic
mean of its samples, or the median when asked for.

This script holds the following object(s):
T1Summary(object)
QubitMeasurement(object)
FrequencyGroup(object)
Ensemble(object)

This script holds the following function(s):
q_from_t1(frequency, t1)
aggregate(samples)

"""


def q_from_t1(frequency, t1):
    if not (isfinite(frequency) and frequency > 0):
        log_message = f"Invalid qubit frequency: {frequency} Hz, expected a positive value."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeasurementError(log_message)
    if not (isfinite(t1) and t1 > 0):
        log_message = f"Invalid T1: {t1} s, expected a positive value."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeasurementError(log_message)
    return 2.0 * pi * frequency * t1


class T1Summary:
    def __init__(self, mean, std, median, count, histogram_counts, histogram_edges):
        self.mean = mean
        self.std = std
        self.median = median
        self.count = count
        self.histogram_counts = histogram_counts
        self.histogram_edges = histogram_edges

    def __repr__(self):
        return f"T1Summary(mean={self.mean!r}, std={self.std!r}, median={self.median!r}, count={self.count!r})"


def _histogram(values):
    if values.min() == values.max():
        return [int(values.size)], [float(values[0]), float(values[0])]
    edges = np.histogram_bin_edges(values, bins="fd")
    if edges.size - 1 < MINIMUM_HISTOGRAM_BINS:
        edges = np.histogram_bin_edges(values, bins=MINIMUM_HISTOGRAM_BINS)
    counts, edges = np.histogram(values, bins=edges)
    return counts.tolist(), edges.tolist()


def aggregate(samples):
    """
    Summarizes a T1 trace given in seconds:  arithmetic mean, sample standard deviation, median and a histogram with
    Freedman-Diaconis bins (at least 5).  A constant trace gives a single degenerate bin.
    """
    values = np.asarray([float(sample) for sample in samples], dtype=float)
    if values.size == 0:
        log_message = "Cannot aggregate an empty T1 trace."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeasurementError(log_message)
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        log_message = f"T1 samples must be positive, found: {values[~(np.isfinite(values) & (values > 0.0))].tolist()}."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeasurementError(log_message)

    if values.size == 1:
        warning_message = "Only one T1 sample was given, the standard deviation is reported as 0."
        getLogger(LOGGER_NAME).warning(warning_message)
        warnings.warn(warning_message, RuntimeWarning)
        std = 0.0
    else:
        std = float(np.std(values, ddof=1))

    counts, edges = _histogram(values)
    return T1Summary(float(np.mean(values)), std, float(np.median(values)), int(values.size), counts, edges)


class QubitMeasurement:
    def __init__(
        self,
        qubit_id,
        wafer,
        substrate,
        process,
        design,
        frequency,
        t1_mean,
        t1_std=0.0,
        n_samples=1,
        t1_samples=None,
        custom=False,
        t1_median=None,
    ):
        self.qubit_id = qubit_id
        self.wafer = wafer
        self.substrate = substrate
        self.process = process
        self.design = design
        self.frequency = float(frequency)
        self.t1_mean = float(t1_mean)
        self.t1_std = float(t1_std)
        self.n_samples = int(n_samples)

        # List of (timestamp or None, T1 in seconds)
        self.t1_samples = list(t1_samples or [])

        self.custom = bool(custom)
        self.t1_median = self.t1_mean if t1_median is None else float(t1_median)

        if not qubit_id:
            log_message = "A qubit measurement needs a qubit id."
            getLogger(LOGGER_NAME).error(log_message)
            raise MeasurementError(log_message)
        if substrate not in SUBSTRATE:
            log_message = f"Invalid substrate: {substrate} for qubit: {qubit_id}, expected one of: {list(SUBSTRATE)}."
            getLogger(LOGGER_NAME).error(log_message)
            raise MeasurementError(log_message)
        if not (isfinite(self.t1_std) and self.t1_std >= 0):
            log_message = f"Invalid T1 standard deviation: {t1_std} s for qubit: {qubit_id}."
            getLogger(LOGGER_NAME).error(log_message)
            raise MeasurementError(log_message)
        if self.n_samples < 1:
            log_message = f"Invalid sample count: {n_samples} for qubit: {qubit_id}."
            getLogger(LOGGER_NAME).error(log_message)
            raise MeasurementError(log_message)

        # Validates the frequency and T1
        self.q = q_from_t1(self.frequency, self.t1_mean)
        self.q_median = q_from_t1(self.frequency, self.t1_median)

    @classmethod
    def from_samples(cls, qubit_id, wafer, substrate, process, design, frequency, t1_samples, custom=False):
        summary = aggregate([t1 for _, t1 in t1_samples])
        return cls(
            qubit_id,
            wafer,
            substrate,
            process,
            design,
            frequency,
            summary.mean,
            summary.std,
            summary.count,
            t1_samples,
            custom,
            summary.median,
        )

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, QubitMeasurement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (
            self.qubit_id,
            self.wafer,
            self.substrate,
            self.process,
            self.design,
            self.frequency,
            self.t1_mean,
            self.t1_std,
            self.n_samples,
            self.custom,
        )

    @property
    def omega(self):
        return 2.0 * pi * self.frequency

    @property
    def timestamped(self):
        return bool(self.t1_samples) and all(timestamp is not None for timestamp, _ in self.t1_samples)

    def quality_factor(self, use_median=False):
        return self.q_median if use_median else self.q

    def summary(self):
        if self.t1_samples:
            return aggregate([t1 for _, t1 in self.t1_samples])
        return T1Summary(self.t1_mean, self.t1_std, self.t1_median, self.n_samples, [self.n_samples], [self.t1_mean] * 2)

    def stringify(self, padding=""):
        string = (
            padding + "Qubit Id: {}\n"
            + padding + "Wafer: {}\n"
            + padding + "Substrate: {}\n"
            + padding + "Process: {}\n"
            + padding + "Design: {}\n"
            + padding + "Frequency (Hz): {}\n"
            + padding + "T1 Mean (s): {}\n"
            + padding + "T1 Std (s): {}\n"
            + padding + "Samples: {}\n"
            + padding + "Q: {}"
        )
        return string.format(
            self.qubit_id,
            self.wafer,
            self.substrate,
            self.process,
            self.design,
            self.frequency,
            self.t1_mean,
            self.t1_std,
            self.n_samples,
            self.q,
        )


class FrequencyGroup:
    def __init__(self, design, frequency, devices, mean_q, mean_t1):
        self.design = design
        self.frequency = frequency
        self.devices = devices
        self.mean_q = mean_q
        self.mean_t1 = mean_t1

    def __repr__(self):
        return (
            f"FrequencyGroup(design={self.design!r}, frequency={self.frequency!r}, devices={self.devices!r}, "
            f"mean_q={self.mean_q!r}, mean_t1={self.mean_t1!r})"
        )


class Ensemble:
    def __init__(self, measurements, provenance=None, known_designs=REFERENCE_DESIGN):
        self._measurements = tuple(measurements)
        self.provenance = dict(provenance or {})

        seen = set()
        for measurement in self._measurements:
            if measurement.qubit_id in seen:
                log_message = f"Duplicate qubit id: {measurement.qubit_id}."
                getLogger(LOGGER_NAME).error(log_message)
                raise MeasurementError(log_message)
            seen.add(measurement.qubit_id)

            if known_designs is not None and measurement.design not in known_designs and not measurement.custom:
                log_message = (
                    f"Unknown design: {measurement.design} for qubit: {measurement.qubit_id}; mark it custom to use "
                    f"a design outside of: {list(known_designs)}."
                )
                getLogger(LOGGER_NAME).error(log_message)
                raise MeasurementError(log_message)

    def __len__(self):
        return len(self._measurements)

    def __iter__(self):
        return iter(self._measurements)

    def __getitem__(self, index):
        return self._measurements[index]

    def __eq__(self, other):
        if not isinstance(other, Ensemble):
            return NotImplemented
        return self._measurements == other._measurements

    def __repr__(self):
        return f"Ensemble({len(self)} device(s), designs={self.designs!r})"

    @property
    def measurements(self):
        return list(self._measurements)

    @property
    def designs(self):
        return list(OrderedDict.fromkeys(measurement.design for measurement in self._measurements))

    @property
    def wafers(self):
        return list(OrderedDict.fromkeys(measurement.wafer for measurement in self._measurements))

    @property
    def timestamped(self):
        return bool(self._measurements) and all(measurement.timestamped for measurement in self._measurements)

    def by_id(self, qubit_id):
        for measurement in self._measurements:
            if measurement.qubit_id == qubit_id:
                return measurement
        return None

    def filter(self, substrate=None, process=None):
        selected = [
            measurement
            for measurement in self._measurements
            if (substrate is None or measurement.substrate == substrate)
            and (process is None or measurement.process == process)
        ]
        return Ensemble(selected, self.provenance, known_designs=None)

    def frequency_groups(self):
        """
        Groups the devices of every design by frequency and returns the mean Q and mean T1 of each group, ordered by
        design and then by frequency.
        """
        groups = OrderedDict()
        for measurement in self._measurements:
            groups.setdefault((measurement.design, measurement.frequency), []).append(measurement)
        return [
            FrequencyGroup(
                design,
                frequency,
                len(members),
                float(np.mean([member.q for member in members])),
                float(np.mean([member.t1_mean for member in members])),
            )
            for (design, frequency), members in sorted(groups.items(), key=lambda item: (item[0][0], item[0][1]))
        ]
