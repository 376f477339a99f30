import csv
from logging import getLogger
from math import isfinite

from surface_loss.constants import (
    DEFAULT_LEVELS,
    INTERFACE_ORDER,
    LOGGER_NAME,
    SENSITIVITY_COLUMNS,
    UTF_8,
)
from surface_loss.exception import GeometryError, SensitivityParsingError
from surface_loss.geometry.design import default_layers
from surface_loss.participation.participation import converge_section

"""

sensitivity.py

This script holds the per-design surface loss sensitivity vector, the energy weighted combination of cross-section
reports into such a vector and the reader of sensitivity files.

This script holds the following object(s):
SensitivityVector(object)
DesignSensitivity(object)

This script holds the following function(s):
combine(design, reports)
design_sensitivity(design, layers=None, levels=DEFAULT_LEVELS, base_level=0, drive=None)
load_sensitivity_csv(file_path)

"""


class SensitivityVector:
    def __init__(self, design, r, error=None, reliable=True):
        self.design = design

        # Interface -> sensitivity in 1/m
        self.r = {interface: float(r.get(interface, 0.0)) for interface in INTERFACE_ORDER}

        # Interface -> error estimate in 1/m, None when no error bars exist
        error = error or {}
        self.error = {interface: error.get(interface) for interface in INTERFACE_ORDER}

        self.reliable = reliable

        for interface, value in self.r.items():
            if not (isfinite(value) and value >= 0):
                log_message = f"Invalid sensitivity: {value} for interface: {interface} of design: {design}."
                getLogger(LOGGER_NAME).error(log_message)
                raise GeometryError(log_message)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, SensitivityVector):
            return NotImplemented
        return (self.design, self.r, self.error) == (other.design, other.r, other.error)

    @property
    def has_errors(self):
        return all(value is not None for value in self.error.values())

    def values(self, channels=INTERFACE_ORDER):
        return [self.r[channel] for channel in channels]

    def stringify(self, padding=""):
        string = padding + "Design: {}".format(self.design)
        for interface in INTERFACE_ORDER:
            error = self.error[interface]
            string += "\n" + padding + "r_{} (1/m): {}{}".format(
                interface,
                self.r[interface],
                "" if error is None else f" +/- {error}",
            )
        return string


class DesignSensitivity:
    def __init__(self, vector, reports, solutions):
        self.vector = vector
        self.reports = reports
        self.solutions = solutions

    @property
    def reliable(self):
        return all(report.reliable for report in self.reports)


def combine(design, reports):
    """
    Combines per-section reports with the section weights:  R = sum(w * U_surface) / sum(w * U_total) per interface.
    Section errors are combined with the same energy weights.
    """
    if len(reports) != len(design.sections):
        log_message = (
            f"Design: {design.name} has {len(design.sections)} section(s) but {len(reports)} report(s) were given."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    weights = [weight for _, weight in design.sections]
    total_energy = sum(weight * report.energy_pul for weight, report in zip(weights, reports))

    r, error = {}, {}
    for interface in INTERFACE_ORDER:
        if not all(interface in report.entries for report in reports):
            continue
        entries = [report.entries[interface] for report in reports]
        thickness = entries[0].thickness
        surface_energy = sum(weight * entry.surface_energy_pul for weight, entry in zip(weights, entries))
        r[interface] = (surface_energy / total_energy) / thickness
        if all(entry.error is not None for entry in entries):
            error[interface] = (
                sum(weight * entry.error * report.energy_pul for weight, entry, report in zip(weights, entries, reports))
                / total_energy
            )

    return SensitivityVector(
        design.name,
        r,
        error,
        all(report.reliable for report in reports),
    )


def design_sensitivity(design, layers=None, levels=DEFAULT_LEVELS, base_level=0, drive=None):
    layers = layers or default_layers()
    reports, solutions = [], []
    for section, _ in design.sections:
        report, solution = converge_section(section, layers, levels, base_level, drive)
        reports.append(report)
        solutions.append(solution)
    return DesignSensitivity(combine(design, reports), reports, solutions)


def _parse_value(row, column, line_number, optional=False):
    text = (row.get(column) or "").strip()
    if not text:
        if optional:
            return None
        log_message = f"Missing value for: {column} on line {line_number}."
        getLogger(LOGGER_NAME).error(log_message)
        raise SensitivityParsingError(log_message)
    try:
        value = float(text)
    except ValueError:
        value = float("nan")
    if not (isfinite(value) and value >= 0):
        log_message = f"Invalid value: {text!r} for: {column} on line {line_number}."
        getLogger(LOGGER_NAME).error(log_message)
        raise SensitivityParsingError(log_message)
    return value


def load_sensitivity_csv(file_path):
    vectors = []
    try:
        with open(file_path, "r", encoding=UTF_8, newline="") as sensitivity_file:
            reader = csv.DictReader(sensitivity_file)
            missing = [column for column in SENSITIVITY_COLUMNS if column not in (reader.fieldnames or [])]
            if missing:
                log_message = f"Sensitivity file: {file_path} is missing column(s): {', '.join(missing)}."
                getLogger(LOGGER_NAME).error(log_message)
                raise SensitivityParsingError(log_message)

            seen = set()
            for row in reader:
                line_number = reader.line_num
                design = (row.get("design") or "").strip()
                if not design:
                    log_message = f"Missing design name on line {line_number} of: {file_path}."
                    getLogger(LOGGER_NAME).error(log_message)
                    raise SensitivityParsingError(log_message)
                if design in seen:
                    log_message = f"Duplicate design: {design} on line {line_number} of: {file_path}."
                    getLogger(LOGGER_NAME).error(log_message)
                    raise SensitivityParsingError(log_message)
                seen.add(design)

                r = {
                    interface: _parse_value(row, f"r_{interface}_per_m", line_number)
                    for interface in INTERFACE_ORDER
                }
                error = {
                    interface: _parse_value(row, f"err_{interface}", line_number, optional=True)
                    for interface in INTERFACE_ORDER
                }
                vectors.append(SensitivityVector(design, r, error))
    except OSError as e:
        log_message = f"Unable to read sensitivity file: {file_path} with error: {e}."
        getLogger(LOGGER_NAME).error(log_message)
        raise SensitivityParsingError(log_message)

    if not vectors:
        log_message = f"Sensitivity file: {file_path} holds no designs."
        getLogger(LOGGER_NAME).error(log_message)
        raise SensitivityParsingError(log_message)

    return vectors
