import hashlib
import json
import logging
from collections import OrderedDict
from decimal import Decimal, InvalidOperation
from logging import getLogger
from os import makedirs
from os.path import exists, isdir

from configargparse import ArgParser, ConfigFileParser, ConfigFileParserException

from surface_loss._version import __version__
from surface_loss.constants import (
    COMMANDS,
    DEFAULT_BOOTSTRAP_RESAMPLES,
    DEFAULT_CONFIDENCE,
    DEFAULT_LAYER_EPS,
    DEFAULT_LAYER_THICKNESS,
    DEFAULT_LEVELS,
    INTERFACE,
    LOGGER_NAME,
    QUOTED_BACKGROUND_Q,
    QUOTED_DEVICE_COUNT,
    QUOTED_SURFACE_LOSS_PRODUCT,
    QUOTED_WAFER_COUNT,
)
from surface_loss.exception import UsageError

"""

utilities.py

This script holds general utility functions for reference by the surface loss library.

The script holds the following class(es):
JsonConfigFileParser(ConfigFileParser)
SurfaceLossArgParser(ArgParser)

This script holds the following function(s):
create_directory(dir_path)
hash_file(file_path, algorithm="sha256")
to_file_units(value, exponent)
from_file_units(text, exponent)
parse_channels(text)
parse_args(args=None)

"""


def create_directory(dir_path: str) -> bool:
    """
    Creates a directory if it doesn't already exist.
    :param dir_path: The path of the directory to create
    :return: bool whether the directory was created correctly or if it already exists
    """
    if not exists(dir_path):
        try:
            makedirs(dir_path)
        except OSError as e:
            logging.getLogger(LOGGER_NAME).error(
                f"Unable to create directory {dir_path} with error: {e}"
            )
            return False

    # Ensure the directory was actually created, and it is actually a directory
    return exists(dir_path) and isdir(dir_path)


def hash_file(file_path: str, algorithm="sha256") -> str:
    """
    Generates a hash of a file by chunking it and utilizing the Python hashlib library.
    """
    if not exists(file_path):
        raise OSError(
            f"The file path {file_path} is not valid, the file does not exist"
        )

    hash_algo = hashlib.new(algorithm)
    with open(file_path, "rb") as f:
        while True:
            # Reading is buffered, so we can read smaller chunks.
            chunk = f.read(hash_algo.block_size * 1024)
            if not chunk:
                break
            hash_algo.update(chunk)
    return hash_algo.hexdigest()


def to_file_units(value, exponent):
    """
    Scales an internal SI value by a power of ten for writing to a file, e.g. seconds to microseconds with exponent 6.

    The scaling is done on the shortest decimal representation of the float so that from_file_units gives back the
    identical float.
    """
    return format(Decimal(repr(float(value))).scaleb(exponent), "f")


def from_file_units(text, exponent):
    """
    Inverse of to_file_units:  parses a decimal string and scales it by a power of ten, e.g. microseconds to seconds
    with exponent -6.
    """
    try:
        return float(Decimal(text.strip()).scaleb(exponent))
    except (InvalidOperation, AttributeError):
        raise ValueError(f"Unable to parse a number from: {text!r}.")


def parse_channels(text):
    """
    Parses a comma-delimited channel list such as "SM,SV" into an ordered tuple of interface names.
    """
    if isinstance(text, (list, tuple)):
        text = ",".join(text)
    channels = []
    for token in str(text).split(","):
        token = token.strip().upper()
        if not token:
            continue
        if token not in INTERFACE:
            log_message = f"Unknown loss channel: {token}, expected one of {list(INTERFACE)}."
            getLogger(LOGGER_NAME).error(log_message)
            raise UsageError(log_message)
        if token not in channels:
            channels.append(token)
    return tuple(channels)


class JsonConfigFileParser(ConfigFileParser):
    """
    Parses --config files written as a single JSON object whose keys mirror the long command line flags, e.g.
    {"seed": 3, "layer_t": 2.0, "channels": "SM,SV", "force": true}.
    """

    def get_syntax_description(self):
        return (
            "Config files are JSON objects whose keys are the long option names without the leading dashes "
            '(underscores and dashes are interchangeable), e.g. {"seed": 3, "layer-eps": 6.2}.'
        )

    def parse(self, stream):
        try:
            content = json.load(stream, object_pairs_hook=OrderedDict)
        except json.JSONDecodeError as e:
            raise ConfigFileParserException(
                f"Unable to parse JSON config file at line {e.lineno} column {e.colno}: {e.msg}"
            )
        if not isinstance(content, dict):
            raise ConfigFileParserException(
                "The JSON config file must hold a single object."
            )

        items = OrderedDict()
        for key, value in content.items():
            key = str(key).replace("_", "-")
            if isinstance(value, bool):
                items[key] = "true" if value else "false"
            elif isinstance(value, list):
                items[key] = [str(entry) for entry in value]
            elif value is None:
                continue
            else:
                items[key] = str(value)
        return items

    def serialize(self, items):
        return json.dumps(items, indent=2, sort_keys=True)


class SurfaceLossArgParser(ArgParser):
    """
    Argument parser raising UsageError instead of exiting so the command line can map it onto its own exit code.
    """

    def error(self, message):
        log_message = f"Invalid command line usage: {message}"
        getLogger(LOGGER_NAME).error(log_message)
        raise UsageError(log_message)


def parse_args(args=None):
    description = (
        "surface_loss computes surface-loss sensitivities of planar qubit capacitor designs with a 2D electrostatic "
        "field solver and separates coexisting loss channels (substrate-metal, substrate-vacuum, metal-vacuum and "
        "bulk) by fitting measured quality factors across designs.  Commands: participation GEOMETRY_FILE... | "
        "fit MEASUREMENTS_CSV SENSITIVITIES_CSV | synth SENSITIVITIES_CSV | select SENSITIVITIES_CSV | "
        "report FIT_REPORT_JSON."
    )

    parser = SurfaceLossArgParser(
        description=description,
        config_file_parser_class=JsonConfigFileParser,
    )

    # Define the argument for the configuration file that can optionally be passed
    parser.add_argument(
        "--config",
        required=False,
        is_config_file=True,
        help="the path to a JSON configuration file mirroring the long options",
    )

    parser.add_argument(
        "command",
        metavar="COMMAND",
        choices=COMMANDS,
        help="the command to run {participation, fit, synth, select, report}",
    )

    parser.add_argument(
        "inputs",
        metavar="INPUT",
        nargs="*",
        help="input files of the command",
    )

    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"version {__version__}",
        help="display the version of surface_loss",
    )

    parser.add_argument(
        "-o",
        "--out",
        metavar="OUTPUT_DIRECTORY",
        env_var="SURFLOSS_OUT",
        help="directory to write output files to (defaults to the current directory)",
    )

    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        env_var="SURFLOSS_SEED",
        help="seed for synthetic data and bootstrap resampling (default 0)",
    )

    parser.add_argument(
        "-e",
        "--export",
        nargs="*",
        choices=["csv", "xlsx"],
        default=["csv"],
        metavar="EXPORT_TYPE",
        env_var="SURFLOSS_EXPORT_TYPE",
        help="additional table formats {csv, xlsx}; csv and json files are always written",
    )

    solver_group = parser.add_argument_group("participation")
    solver_group.add_argument(
        "--levels",
        type=int,
        default=DEFAULT_LEVELS,
        env_var="SURFLOSS_LEVELS",
        help="number of successive mesh levels to solve; 3 or more enables extrapolation (default 3)",
    )
    solver_group.add_argument(
        "--base-level",
        type=int,
        default=0,
        env_var="SURFLOSS_BASE_LEVEL",
        help="coarsest mesh level of the series (default 0)",
    )
    solver_group.add_argument(
        "--layer-t",
        type=float,
        default=DEFAULT_LAYER_THICKNESS * 1e9,
        metavar="NM",
        env_var="SURFLOSS_LAYER_T",
        help="assumed lossy layer thickness in nanometers (default 3)",
    )
    solver_group.add_argument(
        "--layer-eps",
        type=float,
        default=DEFAULT_LAYER_EPS,
        metavar="X",
        env_var="SURFLOSS_LAYER_EPS",
        help="assumed relative permittivity of the lossy layers (default 6.2)",
    )
    solver_group.add_argument(
        "--design",
        action="append",
        default=None,
        metavar="DESIGN_NAME",
        env_var="SURFLOSS_DESIGN",
        help="reference design to include {Hero, ExtendedHero, Guard, Skeleton}; may be repeated",
    )
    solver_group.add_argument(
        "--scale",
        type=float,
        default=1.0,
        env_var="SURFLOSS_SCALE",
        help="uniform scale factor applied to reference designs (default 1)",
    )
    solver_group.add_argument(
        "--dump-fields",
        action="store_true",
        default=False,
        env_var="SURFLOSS_DUMP_FIELDS",
        help="write the potential of the finest solve of every section as csv (x_m, y_m, V)",
    )
    solver_group.add_argument(
        "--force",
        action="store_true",
        default=False,
        env_var="SURFLOSS_FORCE",
        help="exit with success even if an extrapolation was flagged unreliable",
    )

    fit_group = parser.add_argument_group("fit")
    fit_group.add_argument(
        "--channels",
        default="SV",
        metavar="LIST",
        env_var="SURFLOSS_CHANNELS",
        help="comma-delimited loss channels of the model, subset of SM,SV,MV (default SV)",
    )
    fit_group.add_argument(
        "--no-bulk",
        action="store_true",
        default=False,
        env_var="SURFLOSS_NO_BULK",
        help="drop the design-independent bulk loss term from the model",
    )
    fit_group.add_argument(
        "--merge-channels",
        action="store_true",
        default=False,
        env_var="SURFLOSS_MERGE_CHANNELS",
        help="fit one loss product shared by all listed channels",
    )
    fit_group.add_argument(
        "--bootstrap",
        type=int,
        default=DEFAULT_BOOTSTRAP_RESAMPLES,
        metavar="N",
        env_var="SURFLOSS_BOOTSTRAP",
        help="number of bootstrap resamples, 0 disables the bootstrap (default 1000)",
    )
    fit_group.add_argument(
        "--confidence",
        type=float,
        default=DEFAULT_CONFIDENCE,
        env_var="SURFLOSS_CONFIDENCE",
        help="confidence level of the bootstrap intervals (default 0.90)",
    )
    fit_group.add_argument(
        "--workers",
        type=int,
        default=1,
        env_var="SURFLOSS_WORKERS",
        help="threads used for bootstrap resamples (default 1)",
    )
    fit_group.add_argument(
        "--wafer-weighting",
        action="store_true",
        default=False,
        env_var="SURFLOSS_WAFER_WEIGHTING",
        help="give every wafer the same total weight instead of every device",
    )
    fit_group.add_argument(
        "--skip-unmatched",
        action="store_true",
        default=False,
        env_var="SURFLOSS_SKIP_UNMATCHED",
        help="leave out measured devices whose design has no sensitivity entry instead of failing",
    )
    fit_group.add_argument(
        "--median",
        action="store_true",
        default=False,
        env_var="SURFLOSS_MEDIAN",
        help="derive Q from the median of the T1 samples instead of the mean",
    )
    fit_group.add_argument(
        "--substrate",
        default=None,
        env_var="SURFLOSS_SUBSTRATE",
        help="fit: only use devices with this substrate tag; synth: substrate tag to write (default EFG)",
    )
    fit_group.add_argument(
        "--process",
        default=None,
        env_var="SURFLOSS_PROCESS",
        help="fit: only use devices with this process tag; synth: process tag to write (default acetone)",
    )
    fit_group.add_argument(
        "--plot-channel",
        default=None,
        env_var="SURFLOSS_PLOT_CHANNEL",
        help="channel on the abscissa of the Q versus 1/r plot data (default the first model channel)",
    )

    synth_group = parser.add_argument_group("synth")
    synth_group.add_argument(
        "--truth-x-sm",
        type=float,
        default=0.0,
        metavar="M",
        env_var="SURFLOSS_TRUTH_X_SM",
        help="substrate-metal loss product t*tan(delta) in meters (default 0)",
    )
    synth_group.add_argument(
        "--truth-x-sv",
        type=float,
        default=QUOTED_SURFACE_LOSS_PRODUCT,
        metavar="M",
        env_var="SURFLOSS_TRUTH_X_SV",
        help="substrate-vacuum loss product t*tan(delta) in meters (default 1.6e-11)",
    )
    synth_group.add_argument(
        "--truth-x-mv",
        type=float,
        default=0.0,
        metavar="M",
        env_var="SURFLOSS_TRUTH_X_MV",
        help="metal-vacuum loss product t*tan(delta) in meters (default 0)",
    )
    synth_group.add_argument(
        "--truth-q-bulk",
        type=float,
        default=QUOTED_BACKGROUND_Q,
        env_var="SURFLOSS_TRUTH_Q_BULK",
        help="bulk quality factor, inf for no bulk loss (default 3e6)",
    )
    synth_group.add_argument(
        "--sigma",
        type=float,
        default=0.2,
        env_var="SURFLOSS_SIGMA",
        help="relative lognormal scatter of Q (default 0.2)",
    )
    synth_group.add_argument(
        "--devices",
        type=int,
        default=QUOTED_DEVICE_COUNT,
        env_var="SURFLOSS_DEVICES",
        help="total devices assigned round-robin over the designs (default 35)",
    )
    synth_group.add_argument(
        "--per-design",
        type=int,
        default=None,
        env_var="SURFLOSS_PER_DESIGN",
        help="devices per design, overrides --devices",
    )
    synth_group.add_argument(
        "--wafers",
        type=int,
        default=QUOTED_WAFER_COUNT,
        env_var="SURFLOSS_WAFERS",
        help="number of wafer labels assigned round-robin (default 6)",
    )
    synth_group.add_argument(
        "--frequency-ghz",
        type=float,
        default=None,
        env_var="SURFLOSS_FREQUENCY_GHZ",
        help="qubit frequency in GHz written for every synthetic device (required for synth)",
    )

    select_group = parser.add_argument_group("select")
    select_group.add_argument(
        "-k",
        "--k",
        type=int,
        default=None,
        dest="k",
        env_var="SURFLOSS_K",
        help="number of designs to select",
    )

    logging_group = parser.add_argument_group("logging")
    logging_group.add_argument(
        "-l",
        "--log-level",
        default="off",
        choices=["critical", "error", "warning", "info", "debug", "off"],
        metavar="LOG_LEVEL",
        env_var="SURFLOSS_LOG_LEVEL",
        help="level to log messages at {critical, error, warning, info, debug, off}",
    )
    logging_group.add_argument(
        "-i",
        "--log-file",
        default=None,
        metavar="LOG_FILE",
        env_var="SURFLOSS_LOG_FILE",
        help="log file to write to; default is to write to console, ignored if log level set to off "
        "(appends if file already exists)",
    )
    logging_group.add_argument(
        "--warnings",
        action="store_true",
        default=False,
        help="enable runtime warnings",
    )
    logging_group.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        default=False,
        env_var="SURFLOSS_QUIET",
        help="do not print summaries to the console",
    )

    return parser.parse_args(args)
