import sys
import warnings
from logging import (
    CRITICAL,
    DEBUG,
    ERROR,
    INFO,
    WARNING,
    basicConfig,
    getLogger,
)
from math import inf, isfinite
from os.path import join
from warnings import warn

from surface_loss._version import __version__
from surface_loss.constants import (
    CONVERGENCE_FILE_NAME,
    DEFAULT_SYNTH_PROCESS,
    DEFAULT_SYNTH_SUBSTRATE,
    EXIT_DATA_ERROR,
    EXIT_NUMERICAL_ERROR,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    EXPORT_TYPES,
    FIT_PLOT_FILE_NAME,
    FIT_POINTS_FILE_NAME,
    FIT_REPORT_FILE_NAME,
    GIGAHERTZ_EXPONENT,
    INTERFACE_ORDER,
    LOGGER_NAME,
    MEASUREMENT_FILE_NAME,
    MINIMUM_BOOTSTRAP_DEVICES,
    PLOT_COLUMNS,
    POINT_COLUMNS,
    REFERENCE_DESIGN,
    REPORT_FILE_NAME,
    SELECTION_FILE_NAME,
    SENSITIVITY_COLUMNS,
    SENSITIVITY_FILE_NAME,
    WORKBOOK_FILE_NAME,
)
from surface_loss.exception import (
    DataError,
    ExportError,
    GeometryError,
    MeasurementError,
    NumericalError,
    SurfaceLossError,
    UsageError,
)
from surface_loss.export.csv_export import (
    FieldCsvExporter,
    MeasurementCsvExporter,
    PlotCsvExporter,
    SensitivityCsvExporter,
)
from surface_loss.export.json_export import JsonExporter, to_json_compatible
from surface_loss.export.text_export import (
    ReportConsoleExporter,
    ReportTextExporter,
    render_fit_report,
    render_selection,
)
from surface_loss.export.xlsx_export import WorkbookXlsxExporter
from surface_loss.geometry.design import default_layers, load_geometry, reference_design
from surface_loss.lossfit.bootstrap import bootstrap
from surface_loss.lossfit.fit import fit
from surface_loss.lossfit.identifiability import select_designs
from surface_loss.lossfit.model import LossModel, LossParameters, Observation
from surface_loss.lossfit.report import build_fit_report, load_fit_report, plot_curve, points_rows
from surface_loss.measurements.loader import load_csv
from surface_loss.measurements.synthesis import synthesize
from surface_loss.output import stringify_design_sensitivity, stringify_frequency_groups, stringify_sensitivities
from surface_loss.participation.sensitivity import design_sensitivity, load_sensitivity_csv
from surface_loss.utilities import (
    create_directory,
    from_file_units,
    hash_file,
    parse_args,
    parse_channels,
)

"""

entrypoint.py

This script will act as the command line script to run this library as a stand-alone application.  Each command
writes its files to the output directory and returns an exit code:  0 on success, 1 on usage errors, 2 on data errors
and 3 on numerical failures, including unreliable extrapolations unless --force is given.

This script holds the following function(s):
main(arguments)
cmd_participation(arguments, output_directory)
cmd_fit(arguments, output_directory)
cmd_synth(arguments, output_directory)
cmd_select(arguments, output_directory)
cmd_report(arguments, output_directory)
run(args=None)
cli()

"""

LOGGING_LEVELS = {
    "critical": CRITICAL,
    "error": ERROR,
    "warning": WARNING,
    "info": INFO,
    "debug": DEBUG,
}


def _setup_logging(arguments):
    logger = getLogger(LOGGER_NAME)
    logging_level_arg = arguments.log_level or "off"
    if logging_level_arg != "off":
        if logging_level_arg not in LOGGING_LEVELS:
            raise UsageError(f"Invalid option for logging: {logging_level_arg}.")
        logging_level = LOGGING_LEVELS[logging_level_arg]

        basicConfig(
            level=logging_level,
            format="%(levelname)s %(asctime)s [%(pathname)s] %(funcName)s at line %(lineno)d: %(message)s",
            datefmt="%d %b %Y %H:%M:%S",
            filename=arguments.log_file if arguments.log_file else None,
        )
        logger.setLevel(logging_level)
        logger.propagate = True

    logger.debug(f"Setup logging using the log level: {logging_level_arg}.")
    logger.info(f"Using options: {arguments}")

    if arguments.warnings:

        # Turn warnings on if it was specified
        warnings.filterwarnings("always")

        logger.info("Warnings have been turned on.")

    else:

        # Ignore warnings by default
        warnings.filterwarnings("ignore")


def _inputs(arguments, count, names):
    if len(arguments.inputs) != count:
        raise UsageError(
            f"The {arguments.command} command takes {count} input(s): {' '.join(names)}, "
            f"but {len(arguments.inputs)} were given."
        )
    return arguments.inputs


def _export_types(arguments):
    return {export_type.upper() for export_type in (arguments.export or [])}


def _console(arguments, text):
    if not arguments.quiet:
        ReportConsoleExporter.write(text if text.endswith("\n") else text + "\n")


def _collect_designs(arguments):
    designs = [load_geometry(path) for path in arguments.inputs]
    for name in arguments.design or []:
        if name not in REFERENCE_DESIGN:
            raise UsageError(f"Unknown reference design: {name}, expected one of: {list(REFERENCE_DESIGN)}.")
        designs.append(reference_design(name, arguments.scale))
    if not designs:
        raise UsageError("The participation command needs geometry files or --design names.")

    names = [design.name for design in designs]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        log_message = f"Duplicate design name(s): {', '.join(duplicates)}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)
    return designs


def cmd_participation(arguments, output_directory):
    logger = getLogger(LOGGER_NAME)
    if arguments.levels < 1:
        raise UsageError(f"Invalid number of mesh levels: {arguments.levels}.")
    if arguments.base_level < 0:
        raise UsageError(f"Invalid base mesh level: {arguments.base_level}.")

    designs = _collect_designs(arguments)
    layers = default_layers(arguments.layer_t * 1e-9, arguments.layer_eps)

    vectors, convergence = [], []
    for design in designs:
        logger.info(f"Computing sensitivities of design: {design.name} with {len(design.sections)} section(s).")
        result = design_sensitivity(design, layers, arguments.levels, arguments.base_level)
        logger.debug(f"Sensitivity of design: {design.name}:\n" + stringify_design_sensitivity(result, "\t"))
        vectors.append(result.vector)
        convergence.append(
            {
                "design": design.name,
                "reliable": result.reliable,
                "r_per_m": result.vector.r,
                "error_per_m": result.vector.error,
                "sections": [
                    {"weight_m": weight, "report": report.to_dict()}
                    for (_, weight), report in zip(design.sections, result.reports)
                ],
            }
        )
        if arguments.dump_fields:
            for index, solution in enumerate(result.solutions):
                FieldCsvExporter.write_potential(
                    join(output_directory, f"fields_{design.name}_{index}.csv"), solution
                )

    SensitivityCsvExporter.write_sensitivities(join(output_directory, SENSITIVITY_FILE_NAME), vectors)
    JsonExporter.write(
        join(output_directory, CONVERGENCE_FILE_NAME),
        {
            "format": "surface_loss.convergence",
            "version": __version__,
            "levels": arguments.levels,
            "base_level": arguments.base_level,
            "layers": {
                interface: {"thickness_m": layer.thickness, "eps_layer": layer.eps_layer}
                for interface, layer in layers.items()
            },
            "designs": convergence,
        },
    )

    if EXPORT_TYPES.XLSX in _export_types(arguments):
        with WorkbookXlsxExporter(output_directory, WORKBOOK_FILE_NAME) as workbook:
            workbook.write_sheet(
                "sensitivities",
                SENSITIVITY_COLUMNS,
                [
                    [vector.design]
                    + [vector.r[interface] for interface in INTERFACE_ORDER]
                    + [vector.error[interface] for interface in INTERFACE_ORDER]
                    for vector in vectors
                ],
            )

    _console(arguments, stringify_sensitivities(vectors))

    unreliable = [vector.design for vector in vectors if not vector.reliable]
    if unreliable:
        log_message = f"Mesh extrapolation is unreliable for design(s): {', '.join(unreliable)}."
        if arguments.force:
            logger.warning(log_message + "  Continuing since --force was given.")
            warn(log_message, RuntimeWarning)
        else:
            logger.error(log_message)
            print(log_message, file=sys.stderr)
            return EXIT_NUMERICAL_ERROR
    return EXIT_SUCCESS


def _model(arguments):
    channels = parse_channels(arguments.channels)
    return LossModel(channels, not arguments.no_bulk, arguments.merge_channels)


def _join(ensemble, vectors, skip_unmatched=False):
    by_design = {vector.design: vector for vector in vectors}
    measured = ensemble.designs
    unmatched = [design for design in measured if design not in by_design]
    matched = [design for design in measured if design in by_design]
    if not matched:
        log_message = (
            f"No measured design matches a sensitivity entry; measured design(s): {', '.join(measured) or 'none'}; "
            f"sensitivity design(s): {', '.join(by_design) or 'none'}."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise DataError(log_message)
    if unmatched:
        if not skip_unmatched:
            log_message = (
                f"Measured design(s) without sensitivities: {', '.join(unmatched)}; sensitivity design(s): "
                f"{', '.join(by_design)}.  Use --skip-unmatched to fit the matched devices only."
            )
            getLogger(LOGGER_NAME).error(log_message)
            raise DataError(log_message)
        log_message = f"Measured design(s) without sensitivities are skipped: {', '.join(unmatched)}."
        getLogger(LOGGER_NAME).warning(log_message)
        warn(log_message, RuntimeWarning)
    return by_design


def cmd_fit(arguments, output_directory):
    logger = getLogger(LOGGER_NAME)
    measurement_path, sensitivity_path = _inputs(arguments, 2, ["MEASUREMENTS_CSV", "SENSITIVITIES_CSV"])
    model = _model(arguments)

    vectors = load_sensitivity_csv(sensitivity_path)
    known_designs = list(REFERENCE_DESIGN) + [vector.design for vector in vectors]
    ensemble = load_csv(measurement_path, known_designs)
    ensemble = ensemble.filter(arguments.substrate, arguments.process)
    if not len(ensemble):
        log_message = (
            f"No devices left after filtering on substrate: {arguments.substrate} and process: {arguments.process}."
        )
        logger.error(log_message)
        raise MeasurementError(log_message)

    by_design = _join(ensemble, vectors, arguments.skip_unmatched)
    observations = [
        Observation(
            by_design[measurement.design],
            measurement.quality_factor(arguments.median),
            None,
            measurement.qubit_id,
            measurement.wafer,
            measurement.substrate,
            measurement.process,
        )
        for measurement in ensemble
        if measurement.design in by_design
    ]

    result = fit(observations, model, arguments.wafer_weighting)
    if arguments.bootstrap:
        if len(observations) < MINIMUM_BOOTSTRAP_DEVICES:
            log_message = (
                f"Skipping the bootstrap: {len(observations)} device(s) are too few to resample, at least "
                f"{MINIMUM_BOOTSTRAP_DEVICES} are needed."
            )
            logger.warning(log_message)
            warn(log_message, RuntimeWarning)
        else:
            result.bootstrap = bootstrap(
                observations,
                model,
                arguments.bootstrap,
                arguments.confidence,
                arguments.seed,
                arguments.workers,
                arguments.wafer_weighting,
            )

    provenance = {
        "measurements": dict(ensemble.provenance),
        "sensitivities": {"path": str(sensitivity_path), "sha256": hash_file(sensitivity_path)},
        "filters": {"substrate": arguments.substrate, "process": arguments.process},
        "t1_statistic": "median" if arguments.median else "mean",
    }
    report = build_fit_report(result, provenance)

    plot_channel = arguments.plot_channel.upper() if arguments.plot_channel else None
    curve = plot_curve(result.parameters, plot_channel)
    points = points_rows(result, plot_channel)

    JsonExporter.write(join(output_directory, FIT_REPORT_FILE_NAME), report)
    PlotCsvExporter.write_curve(join(output_directory, FIT_PLOT_FILE_NAME), curve)
    PlotCsvExporter.write_points(join(output_directory, FIT_POINTS_FILE_NAME), points)

    if EXPORT_TYPES.XLSX in _export_types(arguments):
        with WorkbookXlsxExporter(output_directory, WORKBOOK_FILE_NAME) as workbook:
            intervals = result.bootstrap.intervals if result.bootstrap is not None else {}
            workbook.write_sheet(
                "parameters",
                ["parameter", "value", "ci_low", "ci_high"],
                [
                    [name, value] + list(intervals.get(name, (None, None)))
                    for name, value in result.values.items()
                ],
            )
            workbook.write_sheet("plot", PLOT_COLUMNS, curve)
            workbook.write_sheet("points", POINT_COLUMNS, points)

    _console(arguments, render_fit_report(to_json_compatible(report)))
    groups = ensemble.frequency_groups()
    if len({group.frequency for group in groups}) > 1:
        _console(arguments, "Frequency groups:\n" + stringify_frequency_groups(groups, "  "))
    return EXIT_SUCCESS


def cmd_synth(arguments, output_directory):
    (sensitivity_path,) = _inputs(arguments, 1, ["SENSITIVITIES_CSV"])
    if arguments.frequency_ghz is None:
        raise UsageError("The synth command needs an explicit qubit frequency (--frequency-ghz).")
    if not (isfinite(arguments.frequency_ghz) and arguments.frequency_ghz > 0):
        raise UsageError(f"Invalid qubit frequency: {arguments.frequency_ghz} GHz.")
    if not arguments.truth_q_bulk > 0:
        raise UsageError(f"Invalid bulk quality factor: {arguments.truth_q_bulk}.")

    vectors = load_sensitivity_csv(sensitivity_path)
    truth_model = LossModel(INTERFACE_ORDER, include_bulk=True)
    bulk = 0.0 if arguments.truth_q_bulk == inf else 1.0 / arguments.truth_q_bulk
    parameters = LossParameters(
        truth_model,
        {
            "SM": arguments.truth_x_sm,
            "SV": arguments.truth_x_sv,
            "MV": arguments.truth_x_mv,
            "bulk": bulk,
        },
    )

    frequency = from_file_units(repr(float(arguments.frequency_ghz)), GIGAHERTZ_EXPONENT)
    ensemble = synthesize(
        vectors,
        parameters,
        arguments.sigma,
        frequency,
        arguments.devices,
        arguments.per_design,
        arguments.wafers,
        arguments.seed,
        arguments.substrate or DEFAULT_SYNTH_SUBSTRATE,
        arguments.process or DEFAULT_SYNTH_PROCESS,
    )

    MeasurementCsvExporter.write_measurements(join(output_directory, MEASUREMENT_FILE_NAME), ensemble)
    _console(
        arguments,
        f"Wrote {len(ensemble)} synthetic device(s) over {len(ensemble.designs)} design(s) and "
        f"{len(ensemble.wafers)} wafer(s) to: {join(output_directory, MEASUREMENT_FILE_NAME)}",
    )
    return EXIT_SUCCESS


def cmd_select(arguments, output_directory):
    (sensitivity_path,) = _inputs(arguments, 1, ["SENSITIVITIES_CSV"])
    if arguments.k is None:
        raise UsageError("The select command needs the number of designs to select (--k).")

    vectors = load_sensitivity_csv(sensitivity_path)
    selection = select_designs(vectors, arguments.k)

    text = render_selection(selection)
    ReportTextExporter.write(join(output_directory, SELECTION_FILE_NAME), text)
    _console(arguments, text)
    return EXIT_SUCCESS


def cmd_report(arguments, output_directory):
    (report_path,) = _inputs(arguments, 1, ["FIT_REPORT_JSON"])
    text = render_fit_report(load_fit_report(report_path))
    if arguments.out:
        ReportTextExporter.write(join(output_directory, REPORT_FILE_NAME), text)
    _console(arguments, text)
    return EXIT_SUCCESS


COMMAND_HANDLERS = {
    "participation": cmd_participation,
    "fit": cmd_fit,
    "synth": cmd_synth,
    "select": cmd_select,
    "report": cmd_report,
}


def main(arguments):
    """
    The primary entrypoint for the surface loss commands.

    :param arguments: the object of key => value arguments that have been provided as the runtime configuration in which
        the command should run.
    :return: the exit code of the command
    """
    _setup_logging(arguments)

    output_directory = arguments.out or "."
    if (arguments.command != "report" or arguments.out) and not create_directory(output_directory):
        raise ExportError(f"Unable to create the output directory: {output_directory}.")

    getLogger(LOGGER_NAME).debug(f"Running command: {arguments.command} with output directory: {output_directory}.")
    return COMMAND_HANDLERS[arguments.command](arguments, output_directory)


def run(args=None):
    """
    Parses the arguments, runs the command and maps errors onto exit codes instead of raising them.
    """
    try:
        return main(parse_args(args))
    except UsageError as e:
        print(f"surface_loss: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except (DataError, ExportError) as e:
        print(f"surface_loss: data error: {e}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except NumericalError as e:
        print(f"surface_loss: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    except SurfaceLossError as e:
        print(f"surface_loss: error: {e}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except OSError as e:
        print(f"surface_loss: unable to access a file: {e}", file=sys.stderr)
        return EXIT_DATA_ERROR


def cli():
    sys.exit(run())


if __name__ == "__main__":
    """
    Allows the script to be called without an explicit function call and calls the cli() function.
    """
    cli()
