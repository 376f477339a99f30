from logging import getLogger

from surface_loss.constants import (
    BULK_PARAMETER,
    HUMAN_READABLE_INTERFACES,
    LOGGER_NAME,
    UTF_8,
)
from surface_loss.exception import ExportError, ReportError

"""

text_export.py

This script holds the objects used for rendering fit reports and design selections as human readable text, to the
console or to text files.

This script holds the following object(s):
ReportConsoleExporter(object)
ReportTextExporter(object)

This script holds the following function(s):
render_fit_report(report)
render_selection(selection)

"""


def _number(value, unit=""):
    if value is None:
        return "n/a"
    return "{:.6g}{}".format(value, f" {unit}" if unit else "")


def _interval(intervals, name, unit=""):
    interval = intervals.get(name)
    if not interval or any(bound is None for bound in interval):
        return ""
    return "  [{}, {}]".format(_number(interval[0], unit), _number(interval[1], unit))


def _channel_name(name):
    if name == BULK_PARAMETER:
        return "bulk"
    return HUMAN_READABLE_INTERFACES.get(name, name)


def render_fit_report(report):
    """
    Renders a fit report document as loaded by load_fit_report.  Confidence intervals are shown only when the report
    carries them.
    """
    try:
        model = report["model"]
        intervals = report.get("confidence_intervals") or {}
        identifiability = report["identifiability"]

        lines = [f"Surface loss fit report (surface_loss {report.get('version', 'unknown')})", ""]
        lines.append(
            "Model: channels {}; bulk term: {}{}".format(
                ", ".join(model.get("channels", [])) or "none",
                "yes" if model.get("include_bulk") else "no",
                "; channels merged" if model.get("merge_channels") else "",
            )
        )
        lines.append(
            "Devices: {}  Degrees of freedom: {}  Weighted residual norm: {}".format(
                len(report["devices"]), report.get("degrees_of_freedom", "n/a"), _number(report.get("residual_norm"))
            )
        )
        if report.get("wafer_weighting"):
            lines.append("Devices are weighted so that every wafer carries the same total weight.")

        lines.append("")
        confidence = report.get("confidence")
        heading = "Parameters"
        if intervals and confidence is not None:
            heading += " ({:g}% bootstrap intervals)".format(100.0 * confidence)
        lines.append(heading + ":")

        for name, value in report["x_m"].items():
            lines.append("  x_{} = {}{}".format(name, _number(value, "m"), _interval(intervals, name, "m")))

        if model.get("include_bulk"):
            q_bulk = report.get("Q_bulk")
            lines.append(
                "  b = {}{}  (Q_bulk = {}, bulk loss tangent {})".format(
                    _number(report.get("b")),
                    _interval(intervals, BULK_PARAMETER),
                    "unbounded" if q_bulk is None else _number(q_bulk),
                    _number(report.get("tan_delta_bulk")),
                )
            )

        lines.append("")
        lines.append("Identifiability:")
        lines.append("  Condition number of the weighted design matrix: {}".format(
            "infinite" if identifiability.get("condition_number") is None else _number(identifiability["condition_number"])
        ))
        correlations = identifiability.get("correlations", {})
        for pair, value in correlations.items():
            lines.append("  {} correlation {}: {}".format(identifiability.get("correlation_kind", ""), pair, _number(value)))
        for channel, value in identifiability.get("bulk_correlations", {}).items():
            lines.append("  cosine {}/bulk: {}".format(channel, _number(value)))

        for first, second in identifiability.get("unresolvable_pairs", []):
            value = correlations.get(f"{first}/{second}")
            if value is None:
                value = identifiability.get("bulk_correlations", {}).get(first)
            lines.append(
                "  The data cannot resolve whether {} or {} loss dominates, or whether both contribute equally "
                "(correlation {}).".format(_channel_name(first), _channel_name(second), _number(value))
            )
        if identifiability.get("ill_conditioned"):
            lines.append("  The weighted design matrix is ill conditioned; fitted parameters may trade off freely.")

        designs = report.get("designs") or []
        if designs:
            lines.append("")
            lines.append("Designs:")
            width = max(len(str(entry["design"])) for entry in designs)
            lines.append("  {}  {:>7}  {:>14}  {:>14}".format("design".ljust(width), "devices", "Q measured", "Q predicted"))
            for entry in designs:
                predicted = entry.get("Q_predicted")
                lines.append(
                    "  {}  {:>7}  {:>14}  {:>14}".format(
                        str(entry["design"]).ljust(width),
                        entry.get("devices", ""),
                        _number(entry.get("Q_measured_mean")),
                        "unbounded" if predicted is None else _number(predicted),
                    )
                )

        provenance = report.get("provenance") or {}
        if provenance.get("measurements"):
            source = provenance["measurements"]
            lines.append("")
            lines.append("Measurements: {} (sha256 {})".format(source.get("path"), source.get("sha256")))

    except (KeyError, TypeError, AttributeError, ValueError) as e:
        log_message = f"Malformed fit report content: {e!r}."
        getLogger(LOGGER_NAME).error(log_message)
        raise ReportError(log_message)

    return "\n".join(lines) + "\n"


def render_selection(selection):
    lines = ["Selected designs: {}".format(", ".join(selection.designs))]
    lines.append("Information determinant: {}".format(_number(selection.criterion)))
    lines.append("Condition number: {}".format(_number(selection.condition_number)))
    lines.append("Search: {}".format("exhaustive" if selection.exhaustive else "greedy exchange"))
    return "\n".join(lines) + "\n"


class ReportConsoleExporter:
    @staticmethod
    def write(text):
        print(text, end="")


class ReportTextExporter:
    @staticmethod
    def write(text_file_name, text):
        logger = getLogger(LOGGER_NAME)
        logger.info(f"Writing text file: {text_file_name}.")
        try:
            with open(text_file_name, "w", encoding=UTF_8, newline="\n") as text_file_handle:
                text_file_handle.write(text)
        except OSError as e:
            log_message = f"Unable to write text file: {text_file_name} with error: {e}."
            logger.error(log_message)
            raise ExportError(log_message)
