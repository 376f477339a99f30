from logging import getLogger
from math import isfinite

from surface_loss.constants import (
    DEFAULT_SUBSTRATE_EPS,
    LOGGER_NAME,
    MINIMUM_BOX_EXTENT_RATIO,
    TERMINAL,
)
from surface_loss.exception import GeometryError

"""

cross_section.py

This script holds the objects describing a single 2D electrostatic problem:  zero-thickness conductors lying on the
surface line y = 0 of a dielectric substrate filling the lower half of a rectangular box.

This script holds the following object(s):
Conductor(object)
CrossSection(object)
ValidationReport(object)

This script holds the following function(s):
validate(section, require_driven=True)

"""


class Conductor:
    def __init__(self, x_min, x_max, terminal):
        if terminal not in TERMINAL:
            log_message = f"Invalid terminal: {terminal} for conductor [{x_min}, {x_max}], expected one of: {list(TERMINAL)}."
            getLogger(LOGGER_NAME).error(log_message)
            raise GeometryError(log_message)

        try:
            self.x_min = float(x_min)
            self.x_max = float(x_max)
        except (TypeError, ValueError):
            log_message = f"Invalid conductor extent: [{x_min}, {x_max}]."
            getLogger(LOGGER_NAME).error(log_message)
            raise GeometryError(log_message)

        self.terminal = terminal

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, Conductor):
            return NotImplemented
        return (self.x_min, self.x_max, self.terminal) == (
            other.x_min,
            other.x_max,
            other.terminal,
        )

    def __hash__(self):
        return hash((self.x_min, self.x_max, self.terminal))

    @property
    def width(self):
        return self.x_max - self.x_min

    @property
    def floating(self):
        return self.terminal == TERMINAL.FLOATING

    def scaled(self, scale):
        return Conductor(self.x_min * scale, self.x_max * scale, self.terminal)

    def to_dict(self):
        return {"x_min_m": self.x_min, "x_max_m": self.x_max, "terminal": self.terminal}

    def stringify(self, padding=""):
        string = padding + "Terminal: {}\n" + padding + "X Min (m): {}\n" + padding + "X Max (m): {}"
        return string.format(self.terminal, self.x_min, self.x_max)


class CrossSection:
    """
    A cross-section of a planar device.  The substrate with relative permittivity substrate_eps fills y < 0 and vacuum
    fills y > 0 inside the box [-box_halfwidth, box_halfwidth] x [-box_height, box_height], whose walls are held at 0 V.
    """

    def __init__(
        self,
        conductors,
        box_halfwidth,
        box_height,
        substrate_eps=DEFAULT_SUBSTRATE_EPS,
        name="",
    ):
        self.name = name
        self.conductors = list(conductors)
        self.substrate_eps = float(substrate_eps)
        self.box_halfwidth = float(box_halfwidth)
        self.box_height = float(box_height)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, CrossSection):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def lateral_extent(self):
        if not self.conductors:
            return 0.0
        return max(c.x_max for c in self.conductors) - min(c.x_min for c in self.conductors)

    @property
    def driven_conductors(self):
        return [c for c in self.conductors if not c.floating]

    @property
    def floating_conductors(self):
        return [c for c in self.conductors if c.floating]

    @property
    def gaps(self):
        ordered = sorted(self.conductors, key=lambda c: c.x_min)
        return [right.x_min - left.x_max for left, right in zip(ordered, ordered[1:])]

    @property
    def minimum_gap(self):
        """
        The smallest separation between neighboring conductors.  A lone conductor falls back to its own width.
        """
        gaps = self.gaps
        if gaps:
            return min(gaps)
        if self.conductors:
            return min(c.width for c in self.conductors)
        return None

    def scaled(self, scale):
        return CrossSection(
            [conductor.scaled(scale) for conductor in self.conductors],
            self.box_halfwidth * scale,
            self.box_height * scale,
            self.substrate_eps,
            self.name,
        )

    def to_dict(self):
        return {
            "name": self.name,
            "substrate_eps": self.substrate_eps,
            "box": [self.box_halfwidth, self.box_height],
            "conductors": [conductor.to_dict() for conductor in self.conductors],
        }

    def stringify(self, padding=""):
        string = (
            padding + "Name: {}\n"
            + padding + "Substrate Permittivity: {}\n"
            + padding + "Box Halfwidth (m): {}\n"
            + padding + "Box Height (m): {}\n"
            + padding + "Conductor Count: {}"
        )
        string = string.format(
            self.name,
            self.substrate_eps,
            self.box_halfwidth,
            self.box_height,
            len(self.conductors),
        )
        for conductor in self.conductors:
            string += "\n" + padding + "Conductor:\n{}".format(conductor.stringify(padding + "\t"))
        return string


class ValidationReport:

    OVERLAP = "overlap"
    DEGENERATE_CONDUCTOR = "degenerate conductor"
    OUTSIDE_BOX = "conductor outside box"
    BOX_TOO_SMALL = "box too small"
    INVALID_BOX = "invalid box"
    INVALID_PERMITTIVITY = "invalid substrate permittivity"
    NO_CONDUCTORS = "no conductors"
    NO_DRIVEN_CONDUCTOR = "no driven conductor"

    def __init__(self, section_name):
        self.section_name = section_name
        self.violations = []

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __bool__(self):
        return self.passed

    @property
    def passed(self):
        return not self.violations

    @property
    def kinds(self):
        return [kind for kind, _ in self.violations]

    def add(self, kind, message):
        self.violations.append((kind, message))

    def raise_for_violations(self):
        if self.violations:
            log_message = f"Cross-section: {self.section_name!r} is invalid: " + "; ".join(
                message for _, message in self.violations
            )
            getLogger(LOGGER_NAME).error(log_message)
            raise GeometryError(log_message)

    def stringify(self, padding=""):
        if self.passed:
            return padding + f"Cross-section: {self.section_name!r} passed validation"
        string = padding + f"Cross-section: {self.section_name!r} has {len(self.violations)} violation(s):"
        for kind, message in self.violations:
            string += "\n" + padding + f"\t{kind}: {message}"
        return string


def validate(section, require_driven=True):
    report = ValidationReport(section.name)

    if not (isfinite(section.substrate_eps) and section.substrate_eps >= 1.0):
        report.add(
            ValidationReport.INVALID_PERMITTIVITY,
            f"substrate permittivity {section.substrate_eps} must be finite and >= 1",
        )

    if not (
        isfinite(section.box_halfwidth)
        and isfinite(section.box_height)
        and section.box_halfwidth > 0
        and section.box_height > 0
    ):
        report.add(
            ValidationReport.INVALID_BOX,
            f"box dimensions ({section.box_halfwidth}, {section.box_height}) must be strictly positive",
        )
        return report

    if not section.conductors:
        report.add(ValidationReport.NO_CONDUCTORS, "the cross-section holds no conductors")
        return report

    for conductor in section.conductors:
        if not (isfinite(conductor.x_min) and isfinite(conductor.x_max)) or conductor.x_min >= conductor.x_max:
            report.add(
                ValidationReport.DEGENERATE_CONDUCTOR,
                f"conductor [{conductor.x_min}, {conductor.x_max}] has no positive width",
            )
        elif conductor.x_min <= -section.box_halfwidth or conductor.x_max >= section.box_halfwidth:
            report.add(
                ValidationReport.OUTSIDE_BOX,
                f"conductor [{conductor.x_min}, {conductor.x_max}] does not lie strictly inside the box",
            )

    ordered = sorted(section.conductors, key=lambda c: (c.x_min, c.x_max))
    for left, right in zip(ordered, ordered[1:]):
        # Touching intervals would short two conductors together
        if right.x_min <= left.x_max:
            report.add(
                ValidationReport.OVERLAP,
                f"conductors [{left.x_min}, {left.x_max}] and [{right.x_min}, {right.x_max}] overlap",
            )

    extent = section.lateral_extent
    if section.box_halfwidth < MINIMUM_BOX_EXTENT_RATIO * extent:
        report.add(
            ValidationReport.BOX_TOO_SMALL,
            f"box halfwidth {section.box_halfwidth} m is less than {MINIMUM_BOX_EXTENT_RATIO:g} times the "
            f"pattern extent {extent} m",
        )

    if require_driven and not section.driven_conductors:
        report.add(
            ValidationReport.NO_DRIVEN_CONDUCTOR,
            "at least one conductor must be PLUS, MINUS or GROUND",
        )

    return report
