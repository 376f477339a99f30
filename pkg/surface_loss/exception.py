"""

exception.py

This script holds the custom exceptions used in this library.

The exceptions are split into two families that the command line maps onto exit codes:  DataError for problems with
the inputs (exit code 2) and NumericalError for failures of the numerical machinery (exit code 3).  UsageError covers
bad command line usage (exit code 1).

This script holds the following object(s):
SurfaceLossError(Exception)
UsageError(SurfaceLossError)
DataError(SurfaceLossError)
GeometryError(DataError)
LayerError(DataError)
MeasurementError(DataError)
MeasurementParsingError(MeasurementError)
SensitivityParsingError(DataError)
ReportError(DataError)
DesignSelectionError(DataError)
IdentifiabilityError(DataError)
NumericalError(SurfaceLossError)
MeshError(NumericalError)
SolverError(NumericalError)
ExtrapolationError(NumericalError)
OracleError(NumericalError)
FitError(NumericalError)
ExportError(SurfaceLossError)

"""


class SurfaceLossError(Exception):
    pass


class UsageError(SurfaceLossError):
    pass


class DataError(SurfaceLossError):
    pass


class GeometryError(DataError):
    pass


class LayerError(DataError):
    pass


class MeasurementError(DataError):
    pass


class MeasurementParsingError(MeasurementError):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class SensitivityParsingError(DataError):
    pass


class ReportError(DataError):
    pass


class DesignSelectionError(DataError):
    pass


class IdentifiabilityError(DataError):
    pass


class NumericalError(SurfaceLossError):
    pass


class MeshError(NumericalError):
    pass


class SolverError(NumericalError):
    pass


class ExtrapolationError(NumericalError):
    pass


class OracleError(NumericalError):
    pass


class FitError(NumericalError):
    pass


class ExportError(SurfaceLossError):
    pass
