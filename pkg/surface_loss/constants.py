from collections.abc import MutableMapping
from logging import getLogger

from scipy.constants import epsilon_0

"""

constants.py

This script holds constants defined for reference by the surface loss library.  Additionally, a class has been
added to this script for constant enumerations.

All lengths are in meters, times in seconds and frequencies in hertz unless the name of the constant says otherwise.

This script holds the following object(s):
Enum(MutableMapping)

"""


LOGGER_NAME = "surface_loss"


class Enum(MutableMapping):
    def __init__(self, data):
        if isinstance(data, list):
            self._store = {value: value for value in data}
        elif isinstance(data, dict):
            self._store = data
        else:
            log_message = (
                f"Unable to initialize enumeration for: {data} with type: {type(data)}."
            )
            getLogger(LOGGER_NAME).error(log_message)
            raise ValueError(log_message)

    def __getattr__(self, key):
        try:
            return self._store[key]
        except KeyError:
            raise AttributeError(key)

    def __getitem__(self, key):
        return self._store[key]

    def __setitem__(self, key, value):
        self._store[key] = value

    def __delitem__(self, key):
        del self._store[key]

    def __contains__(self, key):
        return key in self._store

    def __iter__(self):
        return iter(self._store)

    def __len__(self):
        return len(self._store)


UTF_8 = "utf-8"

EPSILON_0 = epsilon_0

# Conductor terminals on the substrate surface
TERMINAL = Enum(["PLUS", "MINUS", "GROUND", "FLOATING"])

# Lossy interfaces:  substrate-metal, substrate-vacuum and metal-vacuum
INTERFACE = Enum(["SM", "SV", "MV"])
INTERFACE_ORDER = ["SM", "SV", "MV"]
HUMAN_READABLE_INTERFACES = {
    "SM": "substrate-metal",
    "SV": "substrate-vacuum",
    "MV": "metal-vacuum",
}

# Pseudo channel used when several interfaces are merged into one fitted loss product
COMBINED_CHANNEL = "COMBINED"
BULK_PARAMETER = "bulk"

REFERENCE_DESIGN = Enum(["Hero", "ExtendedHero", "Guard", "Skeleton"])

SUBSTRATE = Enum(["EFG", "HEM", "other"])

COORDINATE_SYSTEM = Enum(["CARTESIAN", "POLAR"])

EXPORT_TYPES = Enum(["CSV", "XLSX"])

COMMANDS = ["participation", "fit", "synth", "select", "report"]

# Default drive in volts; the floating terminal has no entry since its potential is solved for
DEFAULT_DRIVE = {TERMINAL.PLUS: 0.5, TERMINAL.MINUS: -0.5, TERMINAL.GROUND: 0.0}

# Geometry defaults
DEFAULT_SUBSTRATE_EPS = 10.0
MINIMUM_BOX_EXTENT_RATIO = 5.0
REFERENCE_BOX_EXTENT_RATIO = 10.0
HERO_PAD_WIDTH = 350e-6
HERO_GAP = 350e-6
EXTENDED_HERO_PAD_WIDTH = 700e-6
EXTENDED_HERO_GAP = 700e-6
GUARD_PAD_WIDTH = 350e-6
GUARD_GAP = 20e-6
SKELETON_BONE_COUNT = 7
SKELETON_BONE_WIDTH = 10e-6
SKELETON_BONE_PITCH = 20e-6

# Layer defaults
DEFAULT_LAYER_THICKNESS = 3e-9
DEFAULT_LAYER_EPS = 6.2
THIN_LAYER_GAP_RATIO = 100.0

# Mesh grading
EDGE_CELL_GAP_RATIO = 200.0
CLIP_EDGE_CELLS = 4
NEAR_EDGE_GRADING_RATIO = 1.2
FAR_GRADING_RATIO = 1.5
NEAR_EDGE_CELL_MULTIPLE = 10.0
MAXIMUM_CELL_BOX_FRACTION = 0.125
MAXIMUM_MESH_NODES = 4000000
TEST_PROBLEM_BASE_CELLS = 16
TEST_PROBLEM_ANGULAR_CELLS = 4

# Solver tolerances
SOLVER_RELATIVE_RESIDUAL = 1e-10
ENERGY_CROSS_CHECK_TOLERANCE = 5e-3

# Extrapolation
MINIMUM_EXTRAPOLATION_LEVELS = 3
DEFAULT_LEVELS = 3

# Fit defaults
DEFAULT_BOOTSTRAP_RESAMPLES = 1000
MINIMUM_BOOTSTRAP_RESAMPLES = 100
MINIMUM_BOOTSTRAP_DEVICES = 5
DEFAULT_CONFIDENCE = 0.90
UNRESOLVABLE_CORRELATION = 0.98
ILL_CONDITIONED_LIMIT = 1e4
EXHAUSTIVE_SELECTION_LIMIT = 20
KKT_TOLERANCE = 1e-10

# Numbers quoted for the EFG sapphire ensemble:  loss product of the surface trend, fixed background quality factor
# and the substrate loss tangent it was attributed to
QUOTED_SURFACE_LOSS_PRODUCT = 1.6e-11
QUOTED_BACKGROUND_Q = 3e6
QUOTED_SUBSTRATE_LOSS_TANGENT = 3e-7
QUOTED_DEVICE_COUNT = 35
QUOTED_WAFER_COUNT = 6

# Measurement file columns
WIDE_MEASUREMENT_COLUMNS = [
    "qubit_id",
    "wafer",
    "substrate",
    "process",
    "design",
    "freq_GHz",
    "t1_us_mean",
    "t1_us_std",
    "n_samples",
]
LONG_MEASUREMENT_COLUMNS = [
    "qubit_id",
    "wafer",
    "substrate",
    "process",
    "design",
    "freq_GHz",
    "timestamp_iso8601",
    "t1_us",
]
OPTIONAL_MEASUREMENT_COLUMNS = ["custom"]
TRUE_FLAGS = ["1", "true", "yes", "y"]
FALSE_FLAGS = ["", "0", "false", "no", "n"]
MINIMUM_HISTOGRAM_BINS = 5

# Tags written by the synth command unless overridden
DEFAULT_SYNTH_SUBSTRATE = "EFG"
DEFAULT_SYNTH_PROCESS = "acetone"

# File unit exponents:  microseconds and gigahertz
MICROSECOND_EXPONENT = 6
GIGAHERTZ_EXPONENT = 9

SENSITIVITY_COLUMNS = [
    "design",
    "r_SM_per_m",
    "r_SV_per_m",
    "r_MV_per_m",
    "err_SM",
    "err_SV",
    "err_MV",
]
PLOT_COLUMNS = ["inv_r_m", "Q_model", "Q_surface_only", "Q_background"]
POINT_COLUMNS = ["qubit_id", "design", "wafer", "substrate", "process", "inv_r_m", "Q"]
FIELD_DUMP_COLUMNS = ["x_m", "y_m", "V"]

# Plot abscissa range for the model curve, inverse sensitivity in meters
PLOT_INVERSE_SENSITIVITY_RANGE = (1e-8, 1e-2)
PLOT_POINTS = 61

# Output file names
SENSITIVITY_FILE_NAME = "sensitivities.csv"
CONVERGENCE_FILE_NAME = "convergence.json"
FIT_REPORT_FILE_NAME = "fit_report.json"
FIT_PLOT_FILE_NAME = "fit_plot.csv"
FIT_POINTS_FILE_NAME = "fit_points.csv"
MEASUREMENT_FILE_NAME = "measurements.csv"
SELECTION_FILE_NAME = "selection.txt"
REPORT_FILE_NAME = "report.txt"
WORKBOOK_FILE_NAME = "surface_loss.xlsx"

EXIT_SUCCESS = 0
EXIT_USAGE_ERROR = 1
EXIT_DATA_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
