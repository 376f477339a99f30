from csv import QUOTE_MINIMAL, writer
from logging import getLogger
from math import isinf, isnan

from surface_loss.constants import (
    FIELD_DUMP_COLUMNS,
    GIGAHERTZ_EXPONENT,
    INTERFACE_ORDER,
    LOGGER_NAME,
    LONG_MEASUREMENT_COLUMNS,
    MICROSECOND_EXPONENT,
    PLOT_COLUMNS,
    POINT_COLUMNS,
    SENSITIVITY_COLUMNS,
    UTF_8,
    WIDE_MEASUREMENT_COLUMNS,
)
from surface_loss.exception import ExportError
from surface_loss.utilities import to_file_units

"""

csv_export.py

This script holds the objects used for exporting results of the surface loss library to csv files.  Floats are written
with their shortest round-tripping representation so that the files are identical from run to run and read back to
the same values.

This script holds the following object(s):
TableCsvExporter(object)
SensitivityCsvExporter(object)
MeasurementCsvExporter(object)
PlotCsvExporter(object)
FieldCsvExporter(object)

This script holds the following function(s):
format_value(value)

"""


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if isnan(value):
            return "nan"
        if isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


class TableCsvExporter:
    @staticmethod
    def write_table(csv_file_name, header, rows):
        logger = getLogger(LOGGER_NAME)
        logger.info(f"Writing CSV file: {csv_file_name}.")
        try:
            with open(csv_file_name, "w", encoding=UTF_8, newline="") as csv_file_handle:
                csv_writer = writer(
                    csv_file_handle, delimiter=",", quotechar='"', quoting=QUOTE_MINIMAL, lineterminator="\n"
                )
                csv_writer.writerow(header)
                for row in rows:
                    csv_writer.writerow([format_value(value) for value in row])
        except OSError as e:
            log_message = f"Unable to write CSV file: {csv_file_name} with error: {e}."
            logger.error(log_message)
            raise ExportError(log_message)


class SensitivityCsvExporter:
    @staticmethod
    def write_sensitivities(csv_file_name, vectors):
        rows = [
            [vector.design]
            + [vector.r[interface] for interface in INTERFACE_ORDER]
            + [vector.error[interface] for interface in INTERFACE_ORDER]
            for vector in vectors
        ]
        TableCsvExporter.write_table(csv_file_name, SENSITIVITY_COLUMNS, rows)


class MeasurementCsvExporter:
    """
    Writes an ensemble in the long layout when every device carries timestamped samples and in the wide layout
    otherwise.  Times are written in microseconds and frequencies in gigahertz.
    """

    @staticmethod
    def write_measurements(csv_file_name, ensemble):
        custom = any(measurement.custom for measurement in ensemble)
        if ensemble.timestamped:
            header, rows = MeasurementCsvExporter._long_rows(ensemble)
        else:
            header, rows = MeasurementCsvExporter._wide_rows(ensemble)
        if custom:
            header = header + ["custom"]
            rows = [row + [measurement_custom] for row, measurement_custom in rows]
        else:
            rows = [row for row, _ in rows]
        TableCsvExporter.write_table(csv_file_name, header, rows)

    @staticmethod
    def _metadata(measurement):
        return [
            measurement.qubit_id,
            measurement.wafer,
            measurement.substrate,
            measurement.process,
            measurement.design,
            to_file_units(measurement.frequency, -GIGAHERTZ_EXPONENT),
        ]

    @staticmethod
    def _wide_rows(ensemble):
        rows = [
            (
                MeasurementCsvExporter._metadata(measurement)
                + [
                    to_file_units(measurement.t1_mean, MICROSECOND_EXPONENT),
                    to_file_units(measurement.t1_std, MICROSECOND_EXPONENT),
                    str(measurement.n_samples),
                ],
                measurement.custom,
            )
            for measurement in ensemble
        ]
        return list(WIDE_MEASUREMENT_COLUMNS), rows

    @staticmethod
    def _long_rows(ensemble):
        rows = [
            (
                MeasurementCsvExporter._metadata(measurement)
                + [timestamp, to_file_units(t1, MICROSECOND_EXPONENT)],
                measurement.custom,
            )
            for measurement in ensemble
            for timestamp, t1 in measurement.t1_samples
        ]
        return list(LONG_MEASUREMENT_COLUMNS), rows


class PlotCsvExporter:
    @staticmethod
    def write_curve(csv_file_name, rows):
        TableCsvExporter.write_table(csv_file_name, PLOT_COLUMNS, rows)

    @staticmethod
    def write_points(csv_file_name, rows):
        TableCsvExporter.write_table(csv_file_name, POINT_COLUMNS, rows)


class FieldCsvExporter:
    @staticmethod
    def write_potential(csv_file_name, solution):
        mesh = solution.mesh
        rows = (
            (float(x), float(y), float(solution.potential[i, j]))
            for i, x in enumerate(mesh.x_nodes)
            for j, y in enumerate(mesh.y_nodes)
        )
        TableCsvExporter.write_table(csv_file_name, FIELD_DUMP_COLUMNS, rows)
