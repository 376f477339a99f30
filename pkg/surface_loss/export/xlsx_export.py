from logging import getLogger
from os import rename
from os.path import exists, join
from uuid import uuid4

from openpyxl import Workbook

from surface_loss.constants import LOGGER_NAME
from surface_loss.exception import ExportError

"""

xlsx_export.py

This script holds the object used for exporting the tables of the surface loss library to one xlsx workbook with a
sheet per table.

This script holds the following object(s):
WorkbookXlsxExporter(object)

"""

# Sheet names are limited to this many characters by the file format
MAXIMUM_SHEET_NAME_LENGTH = 31


class WorkbookXlsxExporter:
    def __init__(self, export_directory, file_name):
        self._workbook = Workbook(write_only=True)
        self._xlsx_file_name = join(export_directory, file_name)
        self._sheets = {}

    def __enter__(self):

        # Check if the file exists and if it does rename it
        if exists(self._xlsx_file_name):
            new_file_name_for_existing_file = self._xlsx_file_name + "-" + str(uuid4())
            rename(self._xlsx_file_name, new_file_name_for_existing_file)

            log_message = (
                "File: {} already existing when creating the workbook.  The file was renamed to: {} and new data "
                "will be written to the file name specified."
            )
            log_message = log_message.format(self._xlsx_file_name, new_file_name_for_existing_file)
            getLogger(LOGGER_NAME).debug(log_message)

        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if not self._sheets:
            self._workbook.create_sheet("empty")
        try:
            self._workbook.save(self._xlsx_file_name)
        except OSError as e:
            log_message = f"Unable to save workbook: {self._xlsx_file_name} with error: {e}."
            getLogger(LOGGER_NAME).error(log_message)
            raise ExportError(log_message)
        getLogger(LOGGER_NAME).debug(f"Saving file {self._xlsx_file_name} after xlsx export.")

    @property
    def file_name(self):
        return self._xlsx_file_name

    def write_sheet(self, sheet_name, header, rows):
        sheet_name = sheet_name[:MAXIMUM_SHEET_NAME_LENGTH]
        if sheet_name in self._sheets:
            log_message = f"Sheet: {sheet_name} was already written to: {self._xlsx_file_name}."
            getLogger(LOGGER_NAME).warning(log_message)
            raise ExportError(log_message)

        sheet = self._workbook.create_sheet(sheet_name)
        self._sheets[sheet_name] = sheet
        sheet.append(list(header))
        for row in rows:
            sheet.append([self._cell_value(value) for value in row])

    @staticmethod
    def _cell_value(value):

        # Spreadsheets hold no infinities or NaNs
        if isinstance(value, float) and value != value:
            return "nan"
        if isinstance(value, float) and value in (float("inf"), float("-inf")):
            return "inf" if value > 0 else "-inf"
        return value
