import json
from logging import getLogger
from math import isfinite

from surface_loss.constants import (
    DEFAULT_LAYER_EPS,
    DEFAULT_LAYER_THICKNESS,
    DEFAULT_SUBSTRATE_EPS,
    EXTENDED_HERO_GAP,
    EXTENDED_HERO_PAD_WIDTH,
    GUARD_GAP,
    GUARD_PAD_WIDTH,
    HERO_GAP,
    HERO_PAD_WIDTH,
    INTERFACE,
    LOGGER_NAME,
    REFERENCE_BOX_EXTENT_RATIO,
    REFERENCE_DESIGN,
    SKELETON_BONE_COUNT,
    SKELETON_BONE_PITCH,
    SKELETON_BONE_WIDTH,
    TERMINAL,
    UTF_8,
)
from surface_loss.exception import GeometryError, LayerError
from surface_loss.geometry.cross_section import Conductor, CrossSection, validate

"""

design.py

This script holds the objects and functions for building device designs out of weighted cross-sections, the lossy
layer assumptions and the one-dimensional stacked dielectric fixture.  It also reads and writes the JSON geometry
files.

This script holds the following object(s):
LayerSpec(object)
DesignSpec(object)
ParallelPlateFixture(object)

This script holds the following function(s):
default_layers(thickness=DEFAULT_LAYER_THICKNESS, eps_layer=DEFAULT_LAYER_EPS)
reference_design(name, scale=1.0)
parallel_plate_fixture(gap, layer)
load_geometry(file_path)
save_geometry(design, file_path)

"""


class LayerSpec:
    def __init__(self, interface, thickness=DEFAULT_LAYER_THICKNESS, eps_layer=DEFAULT_LAYER_EPS):
        if interface not in INTERFACE:
            log_message = f"Invalid interface: {interface}, expected one of: {list(INTERFACE)}."
            getLogger(LOGGER_NAME).error(log_message)
            raise LayerError(log_message)
        if not (isfinite(thickness) and thickness > 0):
            log_message = f"Invalid layer thickness: {thickness} m for interface: {interface}."
            getLogger(LOGGER_NAME).error(log_message)
            raise LayerError(log_message)
        if not (isfinite(eps_layer) and eps_layer >= 1.0):
            log_message = f"Invalid layer permittivity: {eps_layer} for interface: {interface}."
            getLogger(LOGGER_NAME).error(log_message)
            raise LayerError(log_message)

        self.interface = interface
        self.thickness = float(thickness)
        self.eps_layer = float(eps_layer)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def with_thickness(self, thickness):
        return LayerSpec(self.interface, thickness, self.eps_layer)

    def stringify(self, padding=""):
        string = padding + "Interface: {}\n" + padding + "Thickness (m): {}\n" + padding + "Permittivity: {}"
        return string.format(self.interface, self.thickness, self.eps_layer)


def default_layers(thickness=DEFAULT_LAYER_THICKNESS, eps_layer=DEFAULT_LAYER_EPS):
    return {interface: LayerSpec(interface, thickness, eps_layer) for interface in INTERFACE}


class DesignSpec:
    """
    A device design represented by 2D cross-sections, each standing for weight meters of out-of-plane length.
    """

    def __init__(self, name, sections):
        self.name = name
        self.sections = []

        for section, weight in sections:
            weight = float(weight)
            if not (isfinite(weight) and weight > 0):
                log_message = f"Invalid section weight: {weight} m in design: {name}."
                getLogger(LOGGER_NAME).error(log_message)
                raise GeometryError(log_message)
            self.sections.append((section, weight))

        if not self.sections:
            log_message = f"Design: {name} has no cross-sections."
            getLogger(LOGGER_NAME).error(log_message)
            raise GeometryError(log_message)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def __eq__(self, other):
        if not isinstance(other, DesignSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def custom(self):
        return self.name not in REFERENCE_DESIGN

    @property
    def total_weight(self):
        return sum(weight for _, weight in self.sections)

    def scaled(self, scale):
        return DesignSpec(
            self.name,
            [(section.scaled(scale), weight * scale) for section, weight in self.sections],
        )

    def to_dict(self):
        first = self.sections[0][0]
        return {
            "name": self.name,
            "substrate_eps": first.substrate_eps,
            "box": [first.box_halfwidth, first.box_height],
            "sections": [
                {
                    "weight_m": weight,
                    "conductors": [conductor.to_dict() for conductor in section.conductors],
                }
                for section, weight in self.sections
            ],
        }

    def stringify(self, padding=""):
        string = padding + "Design: {}\n" + padding + "Section Count: {}\n" + padding + "Total Weight (m): {}"
        string = string.format(self.name, len(self.sections), self.total_weight)
        for index, (section, weight) in enumerate(self.sections):
            string += "\n" + padding + f"Section {index} (weight {weight} m):\n"
            string += section.stringify(padding + "\t")
        return string


def _two_pad_conductors(pad_width, gap):
    half_gap = gap / 2
    return [
        Conductor(-half_gap - pad_width, -half_gap, TERMINAL.PLUS),
        Conductor(half_gap, half_gap + pad_width, TERMINAL.MINUS),
    ]


def _skeleton_conductors():
    conductors = _two_pad_conductors(HERO_PAD_WIDTH, HERO_GAP)
    middle = (SKELETON_BONE_COUNT - 1) / 2
    bones = []
    for index in range(SKELETON_BONE_COUNT):
        center = (index - middle) * SKELETON_BONE_PITCH
        bones.append(
            Conductor(
                center - SKELETON_BONE_WIDTH / 2,
                center + SKELETON_BONE_WIDTH / 2,
                TERMINAL.FLOATING,
            )
        )
    return [conductors[0]] + bones + [conductors[1]]


def reference_design(name, scale=1.0):
    """
    Builds one of the four reference designs at unit scale and then multiplies every length by scale, so two scales
    of the same design differ by exactly that factor in every field.
    """
    if name not in REFERENCE_DESIGN:
        log_message = f"Unknown reference design: {name}, expected one of: {list(REFERENCE_DESIGN)}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    try:
        scale = float(scale)
    except (TypeError, ValueError):
        scale = float("nan")
    if not (isfinite(scale) and scale > 0):
        log_message = f"Invalid scale: {scale} for reference design: {name}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    if name == REFERENCE_DESIGN.Hero:
        conductors, pad_width = _two_pad_conductors(HERO_PAD_WIDTH, HERO_GAP), HERO_PAD_WIDTH
    elif name == REFERENCE_DESIGN.ExtendedHero:
        conductors, pad_width = (
            _two_pad_conductors(EXTENDED_HERO_PAD_WIDTH, EXTENDED_HERO_GAP),
            EXTENDED_HERO_PAD_WIDTH,
        )
    elif name == REFERENCE_DESIGN.Guard:
        conductors, pad_width = _two_pad_conductors(GUARD_PAD_WIDTH, GUARD_GAP), GUARD_PAD_WIDTH
    else:
        conductors, pad_width = _skeleton_conductors(), HERO_PAD_WIDTH

    extent = max(c.x_max for c in conductors) - min(c.x_min for c in conductors)
    box = REFERENCE_BOX_EXTENT_RATIO * extent
    section = CrossSection(conductors, box, box, DEFAULT_SUBSTRATE_EPS, name)

    design = DesignSpec(name, [(section, pad_width)])
    return design if scale == 1.0 else design.scaled(scale)


class ParallelPlateFixture:
    """
    One-dimensional stack between two plates:  vacuum of thickness gap - thickness in series with the lossy layer.
    """

    def __init__(self, gap, layer):
        self.gap = gap
        self.layer = layer
        self.vacuum_thickness = gap - layer.thickness
        self.layer_thickness = layer.thickness

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def series_thicknesses(self):
        return self.vacuum_thickness, self.layer_thickness

    @property
    def effective_thickness(self):
        """
        Vacuum-equivalent plate separation of the stack, i.e. capacitance per area is epsilon_0 / effective_thickness.
        """
        return self.vacuum_thickness + self.layer_thickness / self.layer.eps_layer

    def stringify(self, padding=""):
        string = (
            padding + "Gap (m): {}\n"
            + padding + "Vacuum Thickness (m): {}\n"
            + padding + "Layer Thickness (m): {}\n"
            + padding + "Layer Permittivity: {}"
        )
        return string.format(self.gap, self.vacuum_thickness, self.layer_thickness, self.layer.eps_layer)


def parallel_plate_fixture(gap, layer):
    if not (isfinite(gap) and gap > 0):
        log_message = f"Invalid plate gap: {gap} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise LayerError(log_message)
    if layer.thickness >= gap:
        log_message = f"Layer thickness: {layer.thickness} m must be less than the plate gap: {gap} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise LayerError(log_message)
    return ParallelPlateFixture(gap, layer)


def _require(mapping, key, context):
    try:
        return mapping[key]
    except (KeyError, TypeError):
        log_message = f"Missing key: {key!r} in {context}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)


def load_geometry(file_path):
    try:
        with open(file_path, "r", encoding=UTF_8) as geometry_file:
            content = json.load(geometry_file)
    except json.JSONDecodeError as e:
        log_message = f"Unable to parse geometry file: {file_path} at line {e.lineno} column {e.colno}: {e.msg}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)
    except OSError as e:
        log_message = f"Unable to read geometry file: {file_path} with error: {e}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    context = f"geometry file: {file_path}"
    name = str(_require(content, "name", context))
    box = _require(content, "box", context)
    try:
        box_halfwidth, box_height = (float(value) for value in box)
        substrate_eps = float(content.get("substrate_eps", DEFAULT_SUBSTRATE_EPS))
    except (TypeError, ValueError):
        log_message = f"Invalid box or substrate permittivity in {context}."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    sections = []
    for index, entry in enumerate(_require(content, "sections", context)):
        section_context = f"section {index} of {context}"
        conductors = [
            Conductor(
                _require(conductor, "x_min_m", section_context),
                _require(conductor, "x_max_m", section_context),
                _require(conductor, "terminal", section_context),
            )
            for conductor in _require(entry, "conductors", section_context)
        ]
        section = CrossSection(conductors, box_halfwidth, box_height, substrate_eps, name)
        validate(section).raise_for_violations()
        try:
            weight = float(_require(entry, "weight_m", section_context))
        except (TypeError, ValueError):
            log_message = f"Invalid weight in {section_context}."
            getLogger(LOGGER_NAME).error(log_message)
            raise GeometryError(log_message)
        sections.append((section, weight))

    return DesignSpec(name, sections)


def save_geometry(design, file_path):
    with open(file_path, "w", encoding=UTF_8) as geometry_file:
        json.dump(design.to_dict(), geometry_file, indent=2)
        geometry_file.write("\n")
