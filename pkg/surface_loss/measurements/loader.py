import csv
from collections import OrderedDict
from datetime import datetime
from logging import getLogger

from surface_loss.constants import (
    FALSE_FLAGS,
    GIGAHERTZ_EXPONENT,
    LOGGER_NAME,
    LONG_MEASUREMENT_COLUMNS,
    MICROSECOND_EXPONENT,
    REFERENCE_DESIGN,
    TRUE_FLAGS,
    UTF_8,
    WIDE_MEASUREMENT_COLUMNS,
)
from surface_loss.exception import MeasurementError, MeasurementParsingError
from surface_loss.measurements.measurement import Ensemble, QubitMeasurement
from surface_loss.utilities import from_file_units, hash_file

"""

loader.py

This script holds the reader of measurement CSV files.  Two layouts are accepted, told apart by the header:

    wide:  qubit_id,wafer,substrate,process,design,freq_GHz,t1_us_mean,t1_us_std,n_samples
    long:  qubit_id,wafer,substrate,process,design,freq_GHz,timestamp_iso8601,t1_us

Long files hold one row per T1 sample and are aggregated per qubit on load.  Both layouts may carry an optional
custom column marking designs outside of the reference set.

This script holds the following function(s):
load_csv(file_path, known_designs=REFERENCE_DESIGN)

"""

WIDE = "wide"
LONG = "long"
METADATA_COLUMNS = ["wafer", "substrate", "process", "design", "freq_GHz", "custom"]


def _parsing_error(message, line_number):
    getLogger(LOGGER_NAME).error(message)
    return MeasurementParsingError(message, line_number)


def _text(row, column, line_number, file_path):
    value = (row.get(column) or "").strip()
    if not value:
        raise _parsing_error(f"Missing value for: {column} on line {line_number} of: {file_path}.", line_number)
    return value


def _positive(row, column, exponent, line_number, file_path):
    text = _text(row, column, line_number, file_path)
    try:
        value = from_file_units(text, exponent)
    except ValueError:
        raise _parsing_error(f"Invalid number: {text!r} for: {column} on line {line_number} of: {file_path}.", line_number)
    if not value > 0:
        raise _parsing_error(
            f"Non-positive value: {text} for: {column} on line {line_number} of: {file_path}.", line_number
        )
    return value


def _custom(row, line_number, file_path):
    text = (row.get("custom") or "").strip().lower()
    if text in TRUE_FLAGS:
        return True
    if text in FALSE_FLAGS:
        return False
    raise _parsing_error(f"Invalid custom flag: {text!r} on line {line_number} of: {file_path}.", line_number)


def _layout(fieldnames, file_path):
    fieldnames = fieldnames or []
    if all(column in fieldnames for column in LONG_MEASUREMENT_COLUMNS):
        return LONG
    if all(column in fieldnames for column in WIDE_MEASUREMENT_COLUMNS):
        return WIDE
    missing_wide = [column for column in WIDE_MEASUREMENT_COLUMNS if column not in fieldnames]
    missing_long = [column for column in LONG_MEASUREMENT_COLUMNS if column not in fieldnames]
    raise _parsing_error(
        f"Measurement file: {file_path} matches neither layout; missing wide column(s): {', '.join(missing_wide)} "
        f"or long column(s): {', '.join(missing_long)}.",
        1,
    )


def _wrap(build, line_number, file_path):
    try:
        return build()
    except MeasurementParsingError:
        raise
    except MeasurementError as e:
        raise _parsing_error(f"{e} (line {line_number} of: {file_path})", line_number)


def _wide_measurements(reader, file_path):
    measurements = []
    for row in reader:
        line_number = reader.line_num
        text = _text(row, "n_samples", line_number, file_path)
        try:
            n_samples = int(text)
        except ValueError:
            raise _parsing_error(f"Invalid sample count: {text!r} on line {line_number} of: {file_path}.", line_number)

        std_text = (row.get("t1_us_std") or "").strip() or "0"
        try:
            t1_std = from_file_units(std_text, -MICROSECOND_EXPONENT)
        except ValueError:
            raise _parsing_error(
                f"Invalid number: {std_text!r} for: t1_us_std on line {line_number} of: {file_path}.", line_number
            )

        def build():
            return QubitMeasurement(
                _text(row, "qubit_id", line_number, file_path),
                _text(row, "wafer", line_number, file_path),
                _text(row, "substrate", line_number, file_path),
                _text(row, "process", line_number, file_path),
                _text(row, "design", line_number, file_path),
                _positive(row, "freq_GHz", GIGAHERTZ_EXPONENT, line_number, file_path),
                _positive(row, "t1_us_mean", -MICROSECOND_EXPONENT, line_number, file_path),
                t1_std,
                n_samples,
                custom=_custom(row, line_number, file_path),
            )

        measurements.append((line_number, _wrap(build, line_number, file_path)))
    return measurements, None


def _long_measurements(reader, file_path):
    groups = OrderedDict()
    latest = None
    for row in reader:
        line_number = reader.line_num
        qubit_id = _text(row, "qubit_id", line_number, file_path)
        metadata = (
            _text(row, "wafer", line_number, file_path),
            _text(row, "substrate", line_number, file_path),
            _text(row, "process", line_number, file_path),
            _text(row, "design", line_number, file_path),
            _positive(row, "freq_GHz", GIGAHERTZ_EXPONENT, line_number, file_path),
            _custom(row, line_number, file_path),
        )

        timestamp_text = _text(row, "timestamp_iso8601", line_number, file_path)
        try:
            timestamp = datetime.fromisoformat(timestamp_text)
        except ValueError:
            raise _parsing_error(
                f"Invalid timestamp: {timestamp_text!r} on line {line_number} of: {file_path}.", line_number
            )
        t1 = _positive(row, "t1_us", -MICROSECOND_EXPONENT, line_number, file_path)

        if qubit_id not in groups:
            groups[qubit_id] = {"line_number": line_number, "metadata": metadata, "samples": []}
        elif groups[qubit_id]["metadata"] != metadata:
            conflicts = [
                column
                for column, first, current in zip(METADATA_COLUMNS, groups[qubit_id]["metadata"], metadata)
                if first != current
            ]
            raise _parsing_error(
                f"Conflicting {', '.join(conflicts)} for qubit: {qubit_id} on line {line_number} of: {file_path}.",
                line_number,
            )
        groups[qubit_id]["samples"].append((timestamp_text, t1))

        if latest is None or timestamp > latest[0]:
            latest = (timestamp, timestamp_text)

    measurements = []
    for qubit_id, group in groups.items():
        wafer, substrate, process, design, frequency, custom = group["metadata"]
        line_number = group["line_number"]
        measurements.append(
            (
                line_number,
                _wrap(
                    lambda: QubitMeasurement.from_samples(
                        qubit_id, wafer, substrate, process, design, frequency, group["samples"], custom
                    ),
                    line_number,
                    file_path,
                ),
            )
        )
    return measurements, latest[1] if latest else None


def load_csv(file_path, known_designs=REFERENCE_DESIGN):
    try:
        with open(file_path, "r", encoding=UTF_8, newline="") as measurement_file:
            reader = csv.DictReader(measurement_file)
            layout = _layout(reader.fieldnames, file_path)
            if layout == LONG:
                measurements, latest = _long_measurements(reader, file_path)
            else:
                measurements, latest = _wide_measurements(reader, file_path)
        digest = hash_file(file_path)
    except OSError as e:
        log_message = f"Unable to read measurement file: {file_path} with error: {e}."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeasurementError(log_message)

    if not measurements:
        raise _parsing_error(f"Measurement file: {file_path} holds no devices.", None)

    seen = {}
    for line_number, measurement in measurements:
        if measurement.qubit_id in seen:
            raise _parsing_error(
                f"Duplicate qubit id: {measurement.qubit_id} on line {line_number} of: {file_path} "
                f"(first seen on line {seen[measurement.qubit_id]}).",
                line_number,
            )
        seen[measurement.qubit_id] = line_number

        if known_designs is not None and measurement.design not in known_designs and not measurement.custom:
            raise _parsing_error(
                f"Unknown design: {measurement.design} on line {line_number} of: {file_path}; set the custom column "
                f"to use a design outside of: {list(known_designs)}.",
                line_number,
            )

    provenance = OrderedDict(
        [
            ("path", str(file_path)),
            ("sha256", digest),
            ("layout", layout),
            ("latest_sample", latest),
        ]
    )
    getLogger(LOGGER_NAME).info(f"Loaded {len(measurements)} device(s) from: {file_path} ({layout} layout).")

    return Ensemble([measurement for _, measurement in measurements], provenance, known_designs)
