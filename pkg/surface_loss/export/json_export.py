import json
from logging import getLogger
from math import isfinite

import numpy as np

from surface_loss.constants import LOGGER_NAME, UTF_8
from surface_loss.exception import ExportError

"""

json_export.py

This script holds the writer of JSON documents such as the convergence report and the fit report.  Non-finite floats
are written as null since JSON has no representation for them, and numpy scalars and arrays are converted to plain
Python values.  Key order is kept as built.

This script holds the following object(s):
JsonExporter(object)

This script holds the following function(s):
to_json_compatible(value)

"""


def to_json_compatible(value):
    if isinstance(value, dict):
        return {str(key): to_json_compatible(entry) for key, entry in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_compatible(entry) for entry in value]
    if isinstance(value, np.ndarray):
        return to_json_compatible(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if isfinite(value) else None
    return value


class JsonExporter:
    @staticmethod
    def dumps(document):
        return json.dumps(to_json_compatible(document), indent=2, allow_nan=False) + "\n"

    @staticmethod
    def write(json_file_name, document):
        logger = getLogger(LOGGER_NAME)
        logger.info(f"Writing JSON file: {json_file_name}.")
        try:
            text = JsonExporter.dumps(document)
            with open(json_file_name, "w", encoding=UTF_8, newline="\n") as json_file_handle:
                json_file_handle.write(text)
        except (OSError, TypeError, ValueError) as e:
            log_message = f"Unable to write JSON file: {json_file_name} with error: {e}."
            logger.error(log_message)
            raise ExportError(log_message)
