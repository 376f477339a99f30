import numpy as np
import pytest

from surface_loss.exception import GeometryError, MeshError
from surface_loss.geometry.cross_section import Conductor, CrossSection
from surface_loss.geometry.design import reference_design
from surface_loss.solver.mesh import Mesh, build_mesh, uniform_mesh
from surface_loss.tests.utilities import strip_section


def test_mesh_requires_increasing_nodes():
    with pytest.raises(MeshError):
        Mesh([0.0, 1.0, 1.0], [0.0, 1.0])
    with pytest.raises(MeshError):
        Mesh([0.0], [0.0, 1.0])


def test_build_mesh_hero():
    section = reference_design("Hero").sections[0][0]
    mesh = build_mesh(section, 0)

    # Every conductor endpoint and the substrate surface are grid lines
    for conductor in section.conductors:
        assert np.min(np.abs(mesh.x_nodes - conductor.x_min)) == 0.0
        assert np.min(np.abs(mesh.x_nodes - conductor.x_max)) == 0.0
    assert mesh.y_nodes[mesh.surface_index] == 0.0
    assert mesh.x_nodes[0] == -section.box_halfwidth
    assert mesh.x_nodes[-1] == section.box_halfwidth

    # Edge cells are at most 1/200 of the smallest conductor or gap interval
    assert mesh.minimum_edge_cell <= 350e-6 / 200 * (1 + 1e-6)
    assert mesh.minimum_cell <= mesh.minimum_edge_cell


def test_build_mesh_is_mirror_symmetric():
    mesh = build_mesh(reference_design("Hero").sections[0][0], 0)
    assert np.array_equal(mesh.x_nodes, -mesh.x_nodes[::-1])


def test_build_mesh_refinement():
    section = strip_section()
    coarse = build_mesh(section, 0)
    fine = build_mesh(section, 1)

    assert fine.shape == (2 * coarse.shape[0] - 1, 2 * coarse.shape[1] - 1)
    assert np.array_equal(fine.x_nodes[::2], coarse.x_nodes)
    assert np.array_equal(fine.y_nodes[::2], coarse.y_nodes)
    assert fine.minimum_cell == pytest.approx(coarse.minimum_cell / 2, rel=1e-9)
    assert fine.minimum_edge_cell == pytest.approx(coarse.minimum_edge_cell / 2)
    assert fine.surface_index == 2 * coarse.surface_index

    # Edge cells are kept per endpoint at level 0 and scaled on request
    endpoint = section.conductors[0].x_max
    assert fine.edge_cell(endpoint, 0) == coarse.edge_cell(endpoint)


def test_build_mesh_guard_edge_cell():
    mesh = build_mesh(reference_design("Guard").sections[0][0], 0)
    assert mesh.minimum_edge_cell <= 20e-6 / 200 * (1 + 1e-6)


def test_build_mesh_uses_one_edge_cell_for_every_endpoint():
    mesh = build_mesh(reference_design("Skeleton").sections[0][0], 0)

    # The 10 um bones and gaps set the edge cell of the 350 um pads as well
    cells = np.array(list(mesh.edge_cells.values()))
    assert cells.size == 18
    np.testing.assert_allclose(cells, 10e-6 / 200, rtol=0.25)
    assert cells.max() <= 10e-6 / 200 * (1 + 1e-6)

    # Square cells where the surface line meets an edge
    assert 0.75 * 10e-6 / 200 <= mesh.dy[mesh.surface_index] <= 10e-6 / 200 * (1 + 1e-6)


def test_build_mesh_errors():
    with pytest.raises(MeshError):
        build_mesh(strip_section(), -1)

    invalid = CrossSection([Conductor(-1e-4, 1e-5, "PLUS"), Conductor(0.0, 1e-4, "MINUS")], 1e-2, 1e-2)
    with pytest.raises(GeometryError):
        build_mesh(invalid)

    # Refinement beyond the node budget is refused before anything is allocated
    with pytest.raises(MeshError):
        build_mesh(reference_design("Skeleton").sections[0][0], 8)


def test_uniform_mesh():
    mesh = uniform_mesh((0.0, 1.0), 4, (0.0, 2.0), 8, level=2, surface_index=3)
    assert mesh.shape == (17, 33)
    assert mesh.surface_index == 12
    assert mesh.minimum_edge_cell is None
    np.testing.assert_allclose(mesh.dx, 1.0 / 16)
    np.testing.assert_allclose(mesh.dy, 2.0 / 32)
