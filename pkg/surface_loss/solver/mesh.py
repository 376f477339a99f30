from logging import getLogger

import numpy as np

from surface_loss.constants import (
    COORDINATE_SYSTEM,
    EDGE_CELL_GAP_RATIO,
    FAR_GRADING_RATIO,
    LOGGER_NAME,
    MAXIMUM_CELL_BOX_FRACTION,
    MAXIMUM_MESH_NODES,
    NEAR_EDGE_CELL_MULTIPLE,
    NEAR_EDGE_GRADING_RATIO,
)
from surface_loss.exception import GeometryError, MeshError
from surface_loss.geometry.cross_section import validate

"""

mesh.py

This script holds the nonuniform tensor-product grid used by the field solver and the functions building it.  Grid
lines pass through every conductor endpoint and through the substrate surface y = 0, and are geometrically graded
toward conductor edges.  Each refinement level bisects every cell of the level below.

For polar grids the x nodes hold the radius and the y nodes hold the angle.

This script holds the following object(s):
Mesh(object)

This script holds the following function(s):
build_mesh(section, level=0)
uniform_mesh(x_range, x_cells, y_range, y_cells, level=0, coordinate_system=COORDINATE_SYSTEM.CARTESIAN)

"""


class Mesh:
    def __init__(
        self,
        x_nodes,
        y_nodes,
        coordinate_system=COORDINATE_SYSTEM.CARTESIAN,
        level=0,
        edge_cells=None,
        surface_index=None,
    ):
        self.x_nodes = np.asarray(x_nodes, dtype=float)
        self.y_nodes = np.asarray(y_nodes, dtype=float)
        self.coordinate_system = coordinate_system
        self.level = level

        # Conductor endpoint -> smallest adjacent cell at level 0
        self.edge_cells = dict(edge_cells or {})

        # Index of the y grid line on the substrate surface, if any
        self.surface_index = surface_index

        for name, nodes in (("x", self.x_nodes), ("y", self.y_nodes)):
            if nodes.ndim != 1 or nodes.size < 2 or not np.all(np.diff(nodes) > 0):
                log_message = f"The {name} nodes of a mesh must be a strictly increasing array of at least two values."
                getLogger(LOGGER_NAME).error(log_message)
                raise MeshError(log_message)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def shape(self):
        return self.x_nodes.size, self.y_nodes.size

    @property
    def node_count(self):
        return self.x_nodes.size * self.y_nodes.size

    @property
    def dx(self):
        return np.diff(self.x_nodes)

    @property
    def dy(self):
        return np.diff(self.y_nodes)

    @property
    def minimum_cell(self):
        return float(min(self.dx.min(), self.dy.min()))

    @property
    def minimum_edge_cell(self):
        """
        The smallest cell touching a conductor edge at this level, or None for meshes built without conductors.
        """
        if not self.edge_cells:
            return None
        return min(self.edge_cells.values()) / 2**self.level

    def edge_cell(self, x, level=None):
        """
        Returns the edge cell of the conductor endpoint x at the requested level (default this mesh's level).
        """
        level = self.level if level is None else level
        return self.edge_cells[x] / 2**level

    def stringify(self, padding=""):
        string = (
            padding + "Coordinate System: {}\n"
            + padding + "Level: {}\n"
            + padding + "Shape: {}\n"
            + padding + "Minimum Cell (m): {}\n"
            + padding + "Minimum Edge Cell (m): {}"
        )
        return string.format(
            self.coordinate_system,
            self.level,
            self.shape,
            self.minimum_cell,
            self.minimum_edge_cell,
        )


def _next_cell(previous, first, maximum):
    ratio = NEAR_EDGE_GRADING_RATIO if previous < NEAR_EDGE_CELL_MULTIPLE * first else FAR_GRADING_RATIO
    return min(previous * ratio, maximum)


def _one_sided_cells(first, length, maximum):
    cells = []
    total = 0.0
    cell = min(first, maximum)
    while total < length:
        cells.append(cell)
        total += cell
        cell = _next_cell(cell, first, maximum)
    return cells


def _interval_cells(length, left_cell, right_cell, maximum):
    """
    Cells filling an interval of the given length, graded up from both ends.  Each step extends whichever end has the
    smaller next cell, and the result is shrunk uniformly to fit the interval exactly.
    """
    if left_cell == right_cell:
        half = _one_sided_cells(left_cell, length / 2, maximum)
        cells = half + half[::-1]
    else:
        left, right = [], []
        next_left, next_right = min(left_cell, maximum), min(right_cell, maximum)
        total = 0.0
        while total < length:
            # Ties extend both ends so that mirrored intervals get mirrored cells
            grow_left = next_left <= next_right
            grow_right = next_right <= next_left
            if grow_left:
                left.append(next_left)
                total += next_left
                next_left = _next_cell(next_left, left_cell, maximum)
            if grow_right:
                right.append(next_right)
                total += next_right
                next_right = _next_cell(next_right, right_cell, maximum)
        cells = left + right[::-1]

    cells = np.asarray(cells, dtype=float)
    return cells * (length / cells.sum())


def _nodes_from_key_points(key_points, key_cells, maximum):
    nodes = [np.array([key_points[0]])]
    key_indices = [0]
    for index in range(len(key_points) - 1):
        start, end = key_points[index], key_points[index + 1]
        cells = _interval_cells(end - start, key_cells[index], key_cells[index + 1], maximum)
        interior = start + np.cumsum(cells)[:-1]
        nodes.append(interior)
        nodes.append(np.array([end]))
        key_indices.append(key_indices[-1] + interior.size + 1)
    return np.concatenate(nodes), key_indices


def _symmetrize(nodes, key_points, key_indices):
    """
    Makes a node array mirror symmetric about zero if its key points are, restoring the key points exactly.
    """
    key_points = np.asarray(key_points)
    if not np.array_equal(key_points, -key_points[::-1]):
        return nodes
    if not np.allclose(nodes, -nodes[::-1], rtol=0.0, atol=1e-9 * abs(key_points[-1])):
        return nodes
    nodes = 0.5 * (nodes - nodes[::-1])
    nodes[key_indices] = key_points
    return nodes


def _bisect(nodes, times):
    for _ in range(times):
        refined = np.empty(2 * nodes.size - 1)
        refined[0::2] = nodes
        refined[1::2] = 0.5 * (nodes[:-1] + nodes[1:])
        nodes = refined
    return nodes


def _check_node_count(x_count, y_count, level, name):
    if x_count * y_count > MAXIMUM_MESH_NODES:
        log_message = (
            f"Mesh level: {level} of: {name!r} needs {x_count} x {y_count} nodes which exceeds the limit of "
            f"{MAXIMUM_MESH_NODES}; the box is too large relative to the finest features for this refinement."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)


def build_mesh(section, level=0):
    if level < 0:
        log_message = f"Invalid mesh level: {level}."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)

    report = validate(section, require_driven=False)
    if not report.passed:
        log_message = f"Unable to mesh an invalid cross-section: {report}"
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    halfwidth, height = section.box_halfwidth, section.box_height
    maximum = MAXIMUM_CELL_BOX_FRACTION * min(halfwidth, height)

    endpoints = sorted({c.x_min for c in section.conductors} | {c.x_max for c in section.conductors})
    x_key_points = [-halfwidth] + endpoints + [halfwidth]

    # One edge cell for every conductor endpoint, set by the smallest conductor or gap interval; the outer box
    # intervals do not count.  The surface line uses it too, so the cells around every edge are square.
    intervals = np.diff(x_key_points[1:-1])
    smallest = float(intervals.min()) if intervals.size else x_key_points[1] - x_key_points[0]
    surface_cell = min(smallest / EDGE_CELL_GAP_RATIO, maximum)
    x_key_cells = [maximum] + [surface_cell] * (len(x_key_points) - 2) + [maximum]

    y_key_points = [-height, 0.0, height]
    y_key_cells = [maximum, surface_cell, maximum]

    x_nodes, x_key_indices = _nodes_from_key_points(x_key_points, x_key_cells, maximum)
    x_nodes = _symmetrize(x_nodes, x_key_points, x_key_indices)
    y_nodes, y_key_indices = _nodes_from_key_points(y_key_points, y_key_cells, maximum)

    _check_node_count(
        (x_nodes.size - 1) * 2**level + 1,
        (y_nodes.size - 1) * 2**level + 1,
        level,
        section.name,
    )

    dx = np.diff(x_nodes)
    edge_cells = {}
    for key_point, key_index in zip(x_key_points[1:-1], x_key_indices[1:-1]):
        edge_cells[key_point] = float(min(dx[key_index - 1], dx[key_index]))

    mesh = Mesh(
        _bisect(x_nodes, level),
        _bisect(y_nodes, level),
        COORDINATE_SYSTEM.CARTESIAN,
        level,
        edge_cells,
        y_key_indices[1] * 2**level,
    )

    getLogger(LOGGER_NAME).debug(
        f"Built mesh for: {section.name!r} at level {level} with shape {mesh.shape} and minimum edge cell "
        f"{mesh.minimum_edge_cell} m."
    )

    return mesh


def uniform_mesh(
    x_range,
    x_cells,
    y_range,
    y_cells,
    level=0,
    coordinate_system=COORDINATE_SYSTEM.CARTESIAN,
    surface_index=None,
):
    if level < 0:
        log_message = f"Invalid mesh level: {level}."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)

    x_nodes = np.linspace(x_range[0], x_range[1], x_cells + 1)
    y_nodes = np.linspace(y_range[0], y_range[1], y_cells + 1)
    _check_node_count(x_cells * 2**level + 1, y_cells * 2**level + 1, level, coordinate_system)
    return Mesh(
        _bisect(x_nodes, level),
        _bisect(y_nodes, level),
        coordinate_system,
        level,
        surface_index=None if surface_index is None else surface_index * 2**level,
    )
