from logging import getLogger
from math import pi
from warnings import catch_warnings, simplefilter, warn

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.linalg import MatrixRankWarning, cg, spsolve

from surface_loss.constants import (
    COORDINATE_SYSTEM,
    DEFAULT_DRIVE,
    ENERGY_CROSS_CHECK_TOLERANCE,
    EPSILON_0,
    LOGGER_NAME,
    SOLVER_RELATIVE_RESIDUAL,
    TERMINAL,
    TEST_PROBLEM_ANGULAR_CELLS,
    TEST_PROBLEM_BASE_CELLS,
)
from surface_loss.exception import GeometryError, MeshError, SolverError
from surface_loss.geometry.cross_section import CrossSection, validate
from surface_loss.solver.mesh import build_mesh, uniform_mesh

"""

field_solver.py

This script holds the finite volume (box method) solver for div(eps grad V) = 0 on the tensor grids of mesh.py.

Potentials live on the nodes and relative permittivity on the cells.  Every cell contributes a conductance to each of
its four edges, so an edge lying on the substrate surface collects half of its weight from the substrate cell below
and half from the vacuum cell above and flux continuity across the surface is exact.  Nodes on a driven conductor or on
a Dirichlet wall are eliminated, and all nodes of a floating conductor collapse into one unknown whose equation is the
zero net charge condition.  The reduced system is symmetric positive definite.

This script holds the following object(s):
FieldProblem(object)
FieldSolution(object)
Energy(object)
SurfaceFields(object)

This script holds the following function(s):
assemble_problem(section, mesh, drive=None)
parallel_plate_problem(gap, level=0, width=None, drive=None)
coax_problem(inner_radius, outer_radius, level=0, drive=None)
solve(section, mesh=None, drive=None)
energy(solution)
surface_fields(solution)

"""


class FieldProblem:
    def __init__(
        self,
        name,
        mesh,
        permittivity,
        conductor_labels,
        conductor_terminals,
        conductor_potentials,
        conductor_nodes,
        boundary_nodes,
        minimum_feature,
        substrate_eps=None,
        surface_conductor=None,
        section=None,
    ):
        self.name = name
        self.mesh = mesh

        # Relative permittivity of every cell, shape (nx - 1, ny - 1)
        self.permittivity = permittivity

        self.conductor_labels = list(conductor_labels)
        self.conductor_terminals = list(conductor_terminals)

        # None marks a floating conductor
        self.conductor_potentials = list(conductor_potentials)

        # Flat node indices (i * ny + j) of every conductor and of the grounded walls
        self.conductor_nodes = list(conductor_nodes)
        self.boundary_nodes = boundary_nodes

        self.minimum_feature = minimum_feature
        self.substrate_eps = substrate_eps

        # Conductor index of every node on the surface line, -1 on the exposed substrate
        self.surface_conductor = surface_conductor

        self.section = section

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def has_substrate(self):
        surface_index = self.mesh.surface_index
        return surface_index is not None and surface_index > 0 and self.substrate_eps is not None

    @property
    def driven(self):
        return [potential is not None for potential in self.conductor_potentials]

    def stringify(self, padding=""):
        string = (
            padding + "Name: {}\n"
            + padding + "Conductor Count: {}\n"
            + padding + "Floating Conductor Count: {}\n"
            + padding + "Substrate Permittivity: {}\n"
            + padding + "Mesh:\n{}"
        )
        return string.format(
            self.name,
            len(self.conductor_labels),
            self.conductor_potentials.count(None),
            self.substrate_eps,
            self.mesh.stringify(padding + "\t"),
        )


class Energy:
    def __init__(self, charge_sum, field_integral):
        self.charge_sum = charge_sum
        self.field_integral = field_integral

    def __repr__(self):
        return f"Energy(charge_sum={self.charge_sum!r}, field_integral={self.field_integral!r})"

    @property
    def relative_difference(self):
        scale = max(abs(self.charge_sum), abs(self.field_integral))
        if scale == 0.0:
            return 0.0
        return abs(self.charge_sum - self.field_integral) / scale


class FieldSolution:
    def __init__(
        self,
        problem,
        potential,
        conductor_potentials,
        conductor_charges,
        boundary_charge,
        energy_pul,
        field_energy_pul,
        residual,
    ):
        self.problem = problem

        # Node potentials, shape (nx, ny)
        self.potential = potential

        self.conductor_potentials = conductor_potentials
        self.conductor_charges = conductor_charges
        self.boundary_charge = boundary_charge

        # Charge sum energy is the reported value, the cell quadrature is kept for the cross-check
        self.energy_pul = energy_pul
        self.field_energy_pul = field_energy_pul

        self.residual = residual

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def mesh(self):
        return self.problem.mesh

    @property
    def total_charge(self):
        return float(sum(self.conductor_charges) + self.boundary_charge)

    @property
    def capacitance_pul(self):
        """
        Capacitance per unit length 2 U / dV^2 between the PLUS and MINUS terminals, or None for other drives.
        """
        terminals = self.problem.conductor_terminals
        if TERMINAL.PLUS not in terminals or TERMINAL.MINUS not in terminals:
            return None
        plus = self.conductor_potentials[terminals.index(TERMINAL.PLUS)]
        minus = self.conductor_potentials[terminals.index(TERMINAL.MINUS)]
        if plus == minus:
            return None
        return 2.0 * self.energy_pul / (plus - minus) ** 2

    def stringify(self, padding=""):
        string = (
            padding + "Problem: {}\n"
            + padding + "Energy Per Unit Length (J/m): {}\n"
            + padding + "Field Energy Per Unit Length (J/m): {}\n"
            + padding + "Capacitance Per Unit Length (F/m): {}\n"
            + padding + "Boundary Charge (C/m): {}\n"
            + padding + "Relative Residual: {}"
        )
        string = string.format(
            self.problem.name,
            self.energy_pul,
            self.field_energy_pul,
            self.capacitance_pul,
            self.boundary_charge,
            self.residual,
        )
        for label, terminal, potential, charge in zip(
            self.problem.conductor_labels,
            self.problem.conductor_terminals,
            self.conductor_potentials,
            self.conductor_charges,
        ):
            string += "\n" + padding + f"\tConductor {label} ({terminal}): {potential} V, {charge} C/m"
        return string


class SurfaceFields:
    """
    Fields on the substrate surface line, one value per surface node.  d_up and d_down are the y components of the
    displacement field just above and just below the surface, taken from flux balances over the upper and lower halves
    of each node's control volume.
    """

    def __init__(self, x, width, conductor, e_parallel, d_up, d_down, substrate_eps, has_substrate):
        self.x = x
        self.width = width
        self.conductor = conductor
        self.e_parallel = e_parallel
        self.d_up = d_up
        self.d_down = d_down
        self.substrate_eps = substrate_eps
        self.has_substrate = has_substrate

    def __repr__(self):
        return f"SurfaceFields(nodes={self.x.size}, has_substrate={self.has_substrate})"

    @property
    def on_conductor(self):
        return self.conductor >= 0

    @property
    def e_perp_vacuum(self):
        return self.d_up / EPSILON_0

    @property
    def e_perp_substrate(self):
        if not self.has_substrate:
            return np.zeros_like(self.d_down)
        return self.d_down / (EPSILON_0 * self.substrate_eps)

    @property
    def sigma_top(self):
        return np.where(self.on_conductor, self.d_up, 0.0)

    @property
    def sigma_bottom(self):
        return np.where(self.on_conductor, -self.d_down, 0.0)


def _locate(nodes, value, tolerance):
    index = int(np.argmin(np.abs(nodes - value)))
    if abs(nodes[index] - value) > tolerance:
        log_message = f"The mesh has no grid line at {value} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)
    return index


def _resolve_drive(drive):
    resolved = dict(DEFAULT_DRIVE)
    if drive:
        for terminal, potential in drive.items():
            if terminal not in TERMINAL or terminal == TERMINAL.FLOATING:
                log_message = f"Invalid drive terminal: {terminal}."
                getLogger(LOGGER_NAME).error(log_message)
                raise GeometryError(log_message)
            resolved[terminal] = float(potential)
    return resolved


def assemble_problem(section, mesh, drive=None):
    report = validate(section, require_driven=False)
    if not report.passed:
        report.raise_for_violations()

    if mesh.surface_index is None or mesh.coordinate_system != COORDINATE_SYSTEM.CARTESIAN:
        log_message = f"Cross-section: {section.name!r} needs a cartesian mesh with a surface grid line."
        getLogger(LOGGER_NAME).error(log_message)
        raise MeshError(log_message)

    drive = _resolve_drive(drive)
    nx, ny = mesh.shape
    surface = mesh.surface_index
    tolerance = 1e-9 * section.box_halfwidth

    permittivity = np.ones((nx - 1, ny - 1))
    permittivity[:, :surface] = section.substrate_eps

    index = np.arange(nx * ny).reshape(nx, ny)
    boundary = np.zeros((nx, ny), dtype=bool)
    boundary[0, :] = boundary[-1, :] = boundary[:, 0] = boundary[:, -1] = True

    labels, terminals, potentials, nodes = [], [], [], []
    surface_conductor = np.full(nx, -1, dtype=int)
    for number, conductor in enumerate(section.conductors):
        start = _locate(mesh.x_nodes, conductor.x_min, tolerance)
        end = _locate(mesh.x_nodes, conductor.x_max, tolerance)
        surface_conductor[start:end + 1] = number
        labels.append(f"{conductor.terminal}_{number}")
        terminals.append(conductor.terminal)
        potentials.append(None if conductor.floating else drive[conductor.terminal])
        nodes.append(index[start:end + 1, surface].copy())

    return FieldProblem(
        section.name,
        mesh,
        permittivity,
        labels,
        terminals,
        potentials,
        nodes,
        index[boundary],
        section.minimum_gap,
        section.substrate_eps,
        surface_conductor,
        section,
    )


def parallel_plate_problem(gap, level=0, width=None, drive=None):
    """
    Vacuum between a MINUS plate on y = 0 and a PLUS plate on y = gap, with insulating (zero flux) side walls so the
    interior field is uniform.  The bottom plate lies on the surface line.
    """
    if not gap > 0:
        log_message = f"Invalid plate gap: {gap} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    width = gap if width is None else width
    drive = _resolve_drive(drive)
    mesh = uniform_mesh(
        (0.0, width),
        TEST_PROBLEM_ANGULAR_CELLS,
        (0.0, gap),
        TEST_PROBLEM_BASE_CELLS,
        level,
        COORDINATE_SYSTEM.CARTESIAN,
        surface_index=0,
    )
    nx, ny = mesh.shape
    index = np.arange(nx * ny).reshape(nx, ny)

    return FieldProblem(
        "parallel plate",
        mesh,
        np.ones((nx - 1, ny - 1)),
        ["MINUS_plate", "PLUS_plate"],
        [TERMINAL.MINUS, TERMINAL.PLUS],
        [drive[TERMINAL.MINUS], drive[TERMINAL.PLUS]],
        [index[:, 0].copy(), index[:, -1].copy()],
        np.array([], dtype=int),
        gap,
        None,
        np.zeros(nx, dtype=int),
    )


def coax_problem(inner_radius, outer_radius, level=0, drive=None):
    """
    Vacuum between a PLUS inner cylinder and a MINUS outer cylinder solved on a polar grid covering the full angle.
    """
    if not 0 < inner_radius < outer_radius:
        log_message = f"Invalid coax radii: inner {inner_radius} m and outer {outer_radius} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise GeometryError(log_message)

    drive = _resolve_drive(drive)
    mesh = uniform_mesh(
        (inner_radius, outer_radius),
        TEST_PROBLEM_BASE_CELLS,
        (0.0, 2.0 * pi),
        TEST_PROBLEM_ANGULAR_CELLS,
        level,
        COORDINATE_SYSTEM.POLAR,
    )
    nx, ny = mesh.shape
    index = np.arange(nx * ny).reshape(nx, ny)

    return FieldProblem(
        "coax",
        mesh,
        np.ones((nx - 1, ny - 1)),
        ["PLUS_inner", "MINUS_outer"],
        [TERMINAL.PLUS, TERMINAL.MINUS],
        [drive[TERMINAL.PLUS], drive[TERMINAL.MINUS]],
        [index[0, :].copy(), index[-1, :].copy()],
        np.array([], dtype=int),
        outer_radius - inner_radius,
    )


def _cell_weights(mesh, permittivity):
    """
    Returns the conductances every cell gives to its edges along x and along y, each of shape (nx - 1, ny - 1).
    """
    dx = mesh.dx[:, None]
    dy = mesh.dy[None, :]
    if mesh.coordinate_system == COORDINATE_SYSTEM.POLAR:
        radius = 0.5 * (mesh.x_nodes[:-1] + mesh.x_nodes[1:])[:, None]
        return permittivity * radius * dy / (2.0 * dx), permittivity * dx / (2.0 * radius * dy)
    return permittivity * dy / (2.0 * dx), permittivity * dx / (2.0 * dy)


def _edges(mesh, permittivity):
    nx, ny = mesh.shape
    x_weights, y_weights = _cell_weights(mesh, permittivity)

    x_edges = np.zeros((nx - 1, ny))
    x_edges[:, :-1] += x_weights
    x_edges[:, 1:] += x_weights

    y_edges = np.zeros((nx, ny - 1))
    y_edges[:-1, :] += y_weights
    y_edges[1:, :] += y_weights

    index = np.arange(nx * ny).reshape(nx, ny)
    first = np.concatenate((index[:-1, :].ravel(), index[:, :-1].ravel()))
    second = np.concatenate((index[1:, :].ravel(), index[:, 1:].ravel()))
    weights = np.concatenate((x_edges.ravel(), y_edges.ravel()))
    return first, second, weights


def _stiffness(node_count, first, second, weights):
    rows = np.concatenate((first, second, first, second))
    columns = np.concatenate((first, second, second, first))
    data = np.concatenate((weights, weights, -weights, -weights))
    return coo_matrix((data, (rows, columns)), shape=(node_count, node_count)).tocsr()


def _solve_reduced(matrix, rhs, name):
    logger = getLogger(LOGGER_NAME)
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0.0:
        return np.zeros(rhs.size), 0.0

    solution = None
    try:
        with catch_warnings():
            simplefilter("error", MatrixRankWarning)
            solution = spsolve(matrix.tocsc(), rhs)
    except (MatrixRankWarning, RuntimeError, ValueError) as e:
        logger.warning(f"Direct solve failed for: {name!r} with error: {e}.  Falling back to conjugate gradients.")

    if solution is not None and np.all(np.isfinite(solution)):
        residual = np.linalg.norm(matrix @ solution - rhs) / rhs_norm
        if residual <= SOLVER_RELATIVE_RESIDUAL:
            return solution, residual
        logger.info(f"Direct solve residual: {residual} for: {name!r} above tolerance, refining with conjugate gradients.")
    else:
        solution = None

    solution, info = cg(
        matrix,
        rhs,
        x0=solution,
        rtol=SOLVER_RELATIVE_RESIDUAL,
        atol=0.0,
        maxiter=10 * rhs.size,
    )
    residual = np.linalg.norm(matrix @ solution - rhs) / rhs_norm
    if info != 0 or not np.isfinite(residual) or residual > SOLVER_RELATIVE_RESIDUAL:
        log_message = (
            f"The field solve for: {name!r} did not converge: relative residual {residual} exceeds "
            f"{SOLVER_RELATIVE_RESIDUAL}."
        )
        logger.error(log_message)
        raise SolverError(log_message)
    return solution, residual


def _solve_problem(problem):
    logger = getLogger(LOGGER_NAME)
    mesh = problem.mesh
    nx, ny = mesh.shape
    node_count = nx * ny

    if not any(problem.driven):
        log_message = f"Singular system for: {problem.name!r}: no driven conductor."
        logger.error(log_message)
        raise SolverError(log_message)

    first, second, weights = _edges(mesh, problem.permittivity)
    stiffness = _stiffness(node_count, first, second, weights)

    # Column of every node in the reduced system:  -1 for eliminated nodes, one shared column per floating conductor
    column = np.zeros(node_count, dtype=int)
    fixed = np.zeros(node_count)
    column[problem.boundary_nodes] = -1
    for nodes, potential in zip(problem.conductor_nodes, problem.conductor_potentials):
        if potential is not None:
            column[nodes] = -1
            fixed[nodes] = potential

    free = column >= 0
    for nodes, potential in zip(problem.conductor_nodes, problem.conductor_potentials):
        if potential is None:
            free[nodes] = False
    free_count = int(free.sum())
    column[free] = np.arange(free_count)

    floating_columns = []
    for nodes, potential in zip(problem.conductor_nodes, problem.conductor_potentials):
        if potential is None:
            column[nodes] = free_count + len(floating_columns)
            floating_columns.append(free_count + len(floating_columns))
    unknown_count = free_count + len(floating_columns)

    kept = np.flatnonzero(column >= 0)
    prolongation = csr_matrix(
        (np.ones(kept.size), (kept, column[kept])),
        shape=(node_count, unknown_count),
    )

    matrix = (prolongation.T @ stiffness @ prolongation).tocsr()
    rhs = -(prolongation.T @ (stiffness @ fixed))
    reduced, residual = _solve_reduced(matrix, rhs, problem.name)

    potential = prolongation @ reduced + fixed
    node_charges = EPSILON_0 * (stiffness @ potential)

    conductor_potentials = []
    conductor_charges = []
    floating_index = 0
    for nodes, fixed_potential in zip(problem.conductor_nodes, problem.conductor_potentials):
        if fixed_potential is None:
            conductor_potentials.append(float(reduced[floating_columns[floating_index]]))
            floating_index += 1
        else:
            conductor_potentials.append(float(fixed_potential))
        conductor_charges.append(float(node_charges[nodes].sum()))

    boundary_mask = np.zeros(node_count, dtype=bool)
    boundary_mask[problem.boundary_nodes] = True
    for nodes in problem.conductor_nodes:
        boundary_mask[nodes] = False
    boundary_charge = float(node_charges[boundary_mask].sum())

    charge_sum = 0.5 * sum(q * v for q, v in zip(conductor_charges, conductor_potentials))
    field_integral = 0.5 * EPSILON_0 * float(np.sum(weights * (potential[first] - potential[second]) ** 2))

    solution = FieldSolution(
        problem,
        potential.reshape(nx, ny),
        conductor_potentials,
        conductor_charges,
        boundary_charge,
        charge_sum,
        field_integral,
        residual,
    )

    check = energy(solution)
    if check.relative_difference > ENERGY_CROSS_CHECK_TOLERANCE:
        log_message = (
            f"Energy cross-check failed for: {problem.name!r} at level {mesh.level}: charge sum {check.charge_sum} "
            f"J/m versus field integral {check.field_integral} J/m."
        )
        logger.warning(log_message)
        warn(log_message, RuntimeWarning)

    logger.debug(
        f"Solved: {problem.name!r} at level {mesh.level} with {unknown_count} unknowns, energy {charge_sum} J/m and "
        f"relative residual {residual}."
    )

    return solution


def solve(section, mesh=None, drive=None):
    """
    Solves a cross-section on the given mesh (level 0 when omitted) for the given terminal drive, or solves an already
    assembled FieldProblem when one is passed in place of the cross-section.
    """
    if isinstance(section, FieldProblem):
        return _solve_problem(section)

    if not isinstance(section, CrossSection):
        log_message = f"Unable to solve an object of type: {type(section)}."
        getLogger(LOGGER_NAME).error(log_message)
        raise SolverError(log_message)

    if mesh is None:
        mesh = build_mesh(section)
    return _solve_problem(assemble_problem(section, mesh, drive))


def energy(solution):
    return Energy(solution.energy_pul, solution.field_energy_pul)


def surface_fields(solution):
    problem = solution.problem
    mesh = problem.mesh
    surface = mesh.surface_index
    if surface is None or mesh.coordinate_system != COORDINATE_SYSTEM.CARTESIAN:
        log_message = f"The problem: {problem.name!r} has no surface line to report fields on."
        getLogger(LOGGER_NAME).error(log_message)
        raise SolverError(log_message)

    nx, ny = mesh.shape
    potential = solution.potential
    x_weights, y_weights = _cell_weights(mesh, problem.permittivity)
    dx = mesh.dx
    on_surface = potential[:, surface]

    def half_box_outflux(row, neighbor):
        outflux = np.zeros(nx)
        lateral = x_weights[:, row] * (on_surface[:-1] - on_surface[1:])
        outflux[:-1] += lateral
        outflux[1:] -= lateral
        outflux[:-1] += y_weights[:, row] * (on_surface[:-1] - neighbor[:-1])
        outflux[1:] += y_weights[:, row] * (on_surface[1:] - neighbor[1:])
        return outflux

    width = np.zeros(nx)
    width[:-1] += 0.5 * dx
    width[1:] += 0.5 * dx

    d_up = np.zeros(nx)
    if surface < ny - 1:
        d_up = EPSILON_0 * half_box_outflux(surface, potential[:, surface + 1]) / width

    d_down = np.zeros(nx)
    if surface > 0:
        d_down = -EPSILON_0 * half_box_outflux(surface - 1, potential[:, surface - 1]) / width

    gradient = np.zeros(nx)
    left, right = dx[:-1], dx[1:]
    gradient[1:-1] = (
        left**2 * on_surface[2:] - right**2 * on_surface[:-2] + (right**2 - left**2) * on_surface[1:-1]
    ) / (left * right * (left + right))
    gradient[0] = (on_surface[1] - on_surface[0]) / dx[0]
    gradient[-1] = (on_surface[-1] - on_surface[-2]) / dx[-1]

    conductor = problem.surface_conductor
    e_parallel = np.where(conductor >= 0, 0.0, -gradient)

    return SurfaceFields(
        mesh.x_nodes.copy(),
        width,
        conductor.copy(),
        e_parallel,
        d_up,
        d_down,
        problem.substrate_eps,
        problem.has_substrate,
    )
