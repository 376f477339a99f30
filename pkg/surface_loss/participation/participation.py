from logging import getLogger
from warnings import warn

import numpy as np

from surface_loss.constants import (
    CLIP_EDGE_CELLS,
    DEFAULT_LEVELS,
    EPSILON_0,
    INTERFACE,
    INTERFACE_ORDER,
    LOGGER_NAME,
    MINIMUM_EXTRAPOLATION_LEVELS,
    THIN_LAYER_GAP_RATIO,
)
from surface_loss.exception import LayerError, MeshError, SolverError
from surface_loss.solver.extrapolation import extrapolate
from surface_loss.solver.field_solver import solve, surface_fields
from surface_loss.solver.mesh import build_mesh

"""

participation.py

This script holds the thin-layer participation computations.  A lossy layer of thickness t is not meshed; its energy
per unit length is t times a line integral along the surface of the energy density the layer would hold given the
exact continuity conditions of the clean solve:

    SV, on the exposed substrate:  0.5 * (eps_0 * eps_layer * E_parallel^2 + D_perp^2 / (eps_0 * eps_layer))
    SM, under the metal:           0.5 * sigma_bottom^2 / (eps_0 * eps_layer)
    MV, on top of the metal:       0.5 * sigma_top^2 / (eps_0 * eps_layer)

The fields diverge at conductor edges, so a strip around every edge is left out of the integral.  The strip covers a
fixed number of cells of a chosen mesh level on each side of the edge and stays the same while the mesh is refined,
which makes the integral converge; an estimate of the clipped part is added to the error.

This script holds the following object(s):
ParticipationEntry(object)
ParticipationReport(object)

This script holds the following function(s):
participation(solution, layer, clip_level=None)
section_participation(solution, layers, clip_level=None)
converge_section(section, layers, levels=DEFAULT_LEVELS, base_level=0, drive=None)

"""


class ParticipationEntry:
    def __init__(
        self,
        interface,
        thickness,
        eps_layer,
        surface_energy_pul,
        energy_pul,
        error=None,
        clipped_fraction=0.0,
        absent=False,
    ):
        self.interface = interface
        self.thickness = thickness
        self.eps_layer = eps_layer
        self.surface_energy_pul = surface_energy_pul
        self.energy_pul = energy_pul
        self.ratio = surface_energy_pul / energy_pul
        self.sensitivity = self.ratio / thickness
        self.error = error
        self.clipped_fraction = clipped_fraction
        self.absent = absent

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def to_dict(self):
        return {
            "interface": self.interface,
            "thickness_m": self.thickness,
            "eps_layer": self.eps_layer,
            "R": self.ratio,
            "r_per_m": self.sensitivity,
            "err_per_m": self.error,
            "surface_energy_J_per_m": self.surface_energy_pul,
            "clipped_fraction": self.clipped_fraction,
            "absent": self.absent,
        }

    def stringify(self, padding=""):
        string = (
            padding + "Interface: {}\n"
            + padding + "Participation Ratio: {}\n"
            + padding + "Sensitivity (1/m): {}\n"
            + padding + "Error (1/m): {}\n"
            + padding + "Clipped Fraction: {}"
        )
        return string.format(self.interface, self.ratio, self.sensitivity, self.error, self.clipped_fraction)


class ParticipationReport:
    def __init__(
        self,
        name,
        energy_pul,
        entries,
        energy_error=None,
        capacitance_pul=None,
        levels=None,
        reliable=True,
        history=None,
    ):
        self.name = name
        self.energy_pul = energy_pul
        self.energy_error = energy_error
        self.capacitance_pul = capacitance_pul
        self.entries = entries
        self.levels = list(levels or [])
        self.reliable = reliable
        self.history = list(history or [])

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def ratio(self, interface):
        return self.entries[interface].ratio

    def sensitivity(self, interface):
        return self.entries[interface].sensitivity

    def to_dict(self):
        return {
            "name": self.name,
            "levels": self.levels,
            "energy_J_per_m": self.energy_pul,
            "energy_error_J_per_m": self.energy_error,
            "capacitance_F_per_m": self.capacitance_pul,
            "reliable": self.reliable,
            "interfaces": [self.entries[interface].to_dict() for interface in INTERFACE_ORDER if interface in self.entries],
            "history": self.history,
        }

    def stringify(self, padding=""):
        string = (
            padding + "Name: {}\n"
            + padding + "Levels: {}\n"
            + padding + "Energy Per Unit Length (J/m): {}\n"
            + padding + "Energy Error (J/m): {}\n"
            + padding + "Reliable: {}"
        )
        string = string.format(self.name, self.levels, self.energy_pul, self.energy_error, self.reliable)
        for interface in INTERFACE_ORDER:
            if interface in self.entries:
                string += "\n" + self.entries[interface].stringify(padding + "\t")
        return string


class _SurfaceIntegral:
    def __init__(self, interface, integral, clipped, absent, reason=None):
        self.interface = interface
        self.integral = integral
        self.clipped = clipped
        self.absent = absent
        self.reason = reason


def _check_thin_layer(solution, layer):
    limit = solution.problem.minimum_feature / THIN_LAYER_GAP_RATIO
    if layer.thickness > limit:
        log_message = (
            f"Layer: {layer.interface} of thickness {layer.thickness} m is too thick for: {solution.problem.name!r}; "
            f"the thin-layer approximation needs at most {limit} m (smallest gap / {THIN_LAYER_GAP_RATIO:g})."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise LayerError(log_message)


def _clip_zones(solution, clip_level):
    """
    Returns (edge node index, left node index, right node index) for every conductor edge away from the box walls.
    A zone reaches CLIP_EDGE_CELLS cells of the clip level to each side of the edge, so its ends are nodes of every
    finer mesh, and it never passes the middle of the interval to the next edge.
    """
    mesh = solution.mesh
    conductor = solution.problem.surface_conductor
    x = mesh.x_nodes
    stride = 2 ** (mesh.level - clip_level)
    edges = sorted(mesh.edge_cells)
    zones = []
    for number in np.unique(conductor[conductor >= 0]):
        indices = np.flatnonzero(conductor == number)
        for index in (int(indices[0]), int(indices[-1])):
            position = float(x[index])
            if not (0 < index < x.size - 1 and position in mesh.edge_cells):
                continue
            order = edges.index(position)
            lower = 0.5 * (position + edges[order - 1]) if order > 0 else x[0]
            upper = 0.5 * (position + edges[order + 1]) if order < len(edges) - 1 else x[-1]
            left = right = index
            for _ in range(CLIP_EDGE_CELLS):
                if left - stride >= 0 and x[left - stride] >= lower:
                    left -= stride
                if right + stride < x.size and x[right + stride] <= upper:
                    right += stride
            zones.append((index, left, right))
    return zones


def _kept_lengths(starts, ends, zones, x):
    kept = ends - starts
    for _, left, right in zones:
        overlap = np.minimum(ends, x[right]) - np.maximum(starts, x[left])
        kept = kept - np.clip(overlap, 0.0, None)
    return np.clip(kept, 0.0, None)


def _surface_integrals(solution, layer, clip_level=None):
    mesh = solution.mesh
    clip_level = mesh.level if clip_level is None else clip_level
    if clip_level > mesh.level:
        log_message = f"Clip level: {clip_level} is finer than the mesh level: {mesh.level}."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)

    fields = surface_fields(solution)
    x = fields.x
    dx = np.diff(x)
    conductor = fields.conductor
    eps = EPSILON_0 * layer.eps_layer

    # A segment between two nodes of the same conductor is metal, every other segment is exposed substrate
    segment_metal = (conductor[:-1] >= 0) & (conductor[:-1] == conductor[1:])

    # Half control volumes: the right half of node i and the left half of node i + 1 both lie on segment i
    zones = _clip_zones(solution, clip_level)
    right_kept = _kept_lengths(x[:-1], x[:-1] + 0.5 * dx, zones, x)
    left_kept = _kept_lengths(x[1:] - 0.5 * dx, x[1:], zones, x)

    if layer.interface == INTERFACE.SV:
        density = 0.5 * (eps * fields.e_parallel**2 + fields.d_up**2 / eps)
        on_segment = ~segment_metal
        present = fields.has_substrate and bool(on_segment.any())
        reason = "the cross-section has no exposed substrate"
    elif layer.interface == INTERFACE.SM:
        density = 0.5 * fields.sigma_bottom**2 / eps
        on_segment = segment_metal
        present = fields.has_substrate and bool(on_segment.any())
        reason = "the cross-section has no metal on a substrate"
    else:
        density = 0.5 * fields.sigma_top**2 / eps
        on_segment = segment_metal
        present = bool(on_segment.any())
        reason = "the cross-section has no metal"

    if not present:
        return _SurfaceIntegral(layer.interface, 0.0, 0.0, True, reason)

    integral = float(
        np.sum(np.where(on_segment, density[:-1] * right_kept + density[1:] * left_kept, 0.0))
    )

    # The clipped strips are credited with the density at their far ends
    clipped = 0.0
    for index, left, right in zones:
        if on_segment[index]:
            clipped += float(density[right]) * (x[right] - x[index])
        if on_segment[index - 1]:
            clipped += float(density[left]) * (x[index] - x[left])

    return _SurfaceIntegral(layer.interface, integral, clipped, False)


def _warn_absent(name, surface_integral):
    log_message = (
        f"Interface: {surface_integral.interface} is absent from: {name!r} ({surface_integral.reason}); its "
        f"participation is reported as zero."
    )
    getLogger(LOGGER_NAME).warning(log_message)
    warn(log_message, RuntimeWarning)


def _require_energy(solution):
    if not solution.energy_pul > 0.0:
        log_message = f"The solution of: {solution.problem.name!r} stores no energy; participation is undefined."
        getLogger(LOGGER_NAME).error(log_message)
        raise SolverError(log_message)


def participation(solution, layer, clip_level=None):
    """
    Computes the participation ratio and sensitivity of one layer from a single solve.  The error of the entry is the
    estimate of the clipped edge strips.
    """
    _check_thin_layer(solution, layer)
    _require_energy(solution)

    surface_integral = _surface_integrals(solution, layer, clip_level)
    if surface_integral.absent:
        _warn_absent(solution.problem.name, surface_integral)

    entry = ParticipationEntry(
        layer.interface,
        layer.thickness,
        layer.eps_layer,
        layer.thickness * surface_integral.integral,
        solution.energy_pul,
        absent=surface_integral.absent,
    )
    if surface_integral.integral > 0:
        entry.clipped_fraction = surface_integral.clipped / surface_integral.integral
    entry.error = entry.clipped_fraction * entry.sensitivity
    return entry


def section_participation(solution, layers, clip_level=None):
    entries = {}
    for interface in INTERFACE_ORDER:
        if interface in layers:
            entries[interface] = participation(solution, layers[interface], clip_level)
    return ParticipationReport(
        solution.problem.name,
        solution.energy_pul,
        entries,
        capacitance_pul=solution.capacitance_pul,
        levels=[solution.mesh.level],
    )


def converge_section(section, layers, levels=DEFAULT_LEVELS, base_level=0, drive=None):
    """
    Solves a cross-section at levels base_level ... base_level + levels - 1 and extrapolates the energy and the surface
    integrals to the refined limit.  The clip strips stay on the base level's nodes throughout.

    Returns the report and the solution of the finest level.
    """
    logger = getLogger(LOGGER_NAME)
    if levels < 1:
        log_message = f"At least one mesh level is needed but {levels} were requested."
        logger.error(log_message)
        raise MeshError(log_message)

    interfaces = [interface for interface in INTERFACE_ORDER if interface in layers]
    energies, integrals, history = [], {interface: [] for interface in interfaces}, []
    latest = {}
    solution = None

    for level in range(base_level, base_level + levels):
        mesh = build_mesh(section, level)
        solution = solve(section, mesh, drive)
        _require_energy(solution)

        energies.append(solution.energy_pul)
        record = {
            "level": level,
            "nodes": mesh.node_count,
            "minimum_edge_cell_m": mesh.minimum_edge_cell,
            "energy_J_per_m": solution.energy_pul,
            "field_energy_J_per_m": solution.field_energy_pul,
            "capacitance_F_per_m": solution.capacitance_pul,
            "relative_residual": solution.residual,
            "floating_potentials_V": [
                potential
                for potential, driven in zip(solution.conductor_potentials, solution.problem.driven)
                if not driven
            ],
        }
        for interface in interfaces:
            _check_thin_layer(solution, layers[interface])
            surface_integral = _surface_integrals(solution, layers[interface], base_level)
            integrals[interface].append(surface_integral.integral)
            latest[interface] = surface_integral
            record[f"integral_{interface}_J_per_m2"] = surface_integral.integral
        history.append(record)
        logger.info(f"Solved: {section.name!r} at level {level} with energy {solution.energy_pul} J/m.")

    for interface in interfaces:
        if latest[interface].absent:
            _warn_absent(section.name, latest[interface])

    entries = {}
    reliable = True
    if levels >= MINIMUM_EXTRAPOLATION_LEVELS:
        energy_extrapolation = extrapolate(energies)
        energy_value, energy_error = energy_extrapolation.value, energy_extrapolation.error
        reliable = energy_extrapolation.reliable
        for interface in interfaces:
            layer = layers[interface]
            integral_extrapolation = extrapolate(integrals[interface])
            reliable = reliable and integral_extrapolation.reliable
            entry = ParticipationEntry(
                interface,
                layer.thickness,
                layer.eps_layer,
                layer.thickness * integral_extrapolation.value,
                energy_value,
                absent=latest[interface].absent,
            )
            relative = energy_error / energy_value
            if integral_extrapolation.value > 0:
                relative += integral_extrapolation.error / integral_extrapolation.value
                entry.clipped_fraction = latest[interface].clipped / integral_extrapolation.value
            entry.error = (relative + entry.clipped_fraction) * entry.sensitivity
            entries[interface] = entry
        if not reliable:
            logger.warning(f"Extrapolation of: {section.name!r} over levels {history[0]['level']} to "
                           f"{history[-1]['level']} is unreliable.")
    else:
        log_message = (
            f"Only {levels} mesh level(s) solved for: {section.name!r}; at least {MINIMUM_EXTRAPOLATION_LEVELS} are "
            f"needed for extrapolation so no error estimates are reported."
        )
        logger.warning(log_message)
        warn(log_message, RuntimeWarning)
        energy_value, energy_error = energies[-1], None
        for interface in interfaces:
            layer = layers[interface]
            entry = ParticipationEntry(
                interface,
                layer.thickness,
                layer.eps_layer,
                layer.thickness * integrals[interface][-1],
                energy_value,
                absent=latest[interface].absent,
            )
            if integrals[interface][-1] > 0:
                entry.clipped_fraction = latest[interface].clipped / integrals[interface][-1]
            entries[interface] = entry

    capacitance = solution.capacitance_pul
    if capacitance is not None:
        capacitance = capacitance * energy_value / solution.energy_pul

    report = ParticipationReport(
        section.name,
        energy_value,
        entries,
        energy_error,
        capacitance,
        list(range(base_level, base_level + levels)),
        reliable,
        history,
    )
    return report, solution
