import numpy as np
import pytest

from vpfp1d.mesh import SpatialMesh, cell_average, uniform_mesh


def test_uniform_mesh_paper_resolution():
    mesh = uniform_mesh(-6.0, 6.0, 128)
    assert mesh.widths[0] == pytest.approx(0.09375, abs=0.0)
    assert mesh.centers[0] == pytest.approx(-5.953125, abs=0.0)
    assert mesh.n_cells == 128


def test_uniform_mesh_small_centers():
    mesh = uniform_mesh(0.0, 1.0, 4)
    assert np.allclose(mesh.centers, [0.125, 0.375, 0.625, 0.875])


def test_uniform_mesh_three_cells_partition():
    mesh = uniform_mesh(-1.0, 1.0, 3)
    assert np.allclose(mesh.widths, 2.0 / 3.0)
    assert np.sum(mesh.widths) == pytest.approx(2.0, rel=1e-15)


def test_uniform_mesh_rejects_degenerate():
    with pytest.raises(ValueError):
        uniform_mesh(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        uniform_mesh(1.0, 0.0, 8)


@pytest.mark.parametrize("n_cells", [3, 17, 128, 501])
def test_partition_property(n_cells):
    mesh = uniform_mesh(-6.0, 6.0, n_cells)
    eps = np.finfo(float).eps
    assert abs(np.sum(mesh.widths) - mesh.length) <= 4 * eps * n_cells * mesh.length


@pytest.mark.parametrize("shift", [-3, -1, 1, 2, 7])
def test_periodic_index_bijection(shift):
    mesh = uniform_mesh(0.0, 1.0, 13)
    images = {mesh.neighbor(j, shift) for j in range(mesh.n_cells)}
    assert images == set(range(mesh.n_cells))


def test_edges_match_widths():
    mesh = uniform_mesh(-2.0, 3.0, 10)
    edges = mesh.edges
    assert edges[0] == -2.0
    assert edges[-1] == pytest.approx(3.0, rel=1e-15)
    assert np.allclose(np.diff(edges), mesh.widths)
    assert np.allclose(0.5 * (edges[:-1] + edges[1:]), mesh.centers)


def test_cell_average_constant():
    mesh = uniform_mesh(-6.0, 6.0, 32)
    avg = cell_average(lambda x: np.ones_like(x), mesh)
    assert np.allclose(avg, 1.0, rtol=0, atol=1e-15)


def test_cell_average_linear_hits_midpoints():
    mesh = uniform_mesh(-6.0, 6.0, 32)
    avg = cell_average(lambda x: x, mesh)
    assert np.allclose(avg, mesh.centers, rtol=1e-14, atol=1e-14)


def test_cell_average_cosine_against_antiderivative():
    # oracle: (6/pi)(sin(pi x_{j+1/2}/6) - sin(pi x_{j-1/2}/6)) / dx
    mesh = uniform_mesh(-6.0, 6.0, 128)
    edges = mesh.edges
    exact = (6.0 / np.pi) * np.diff(np.sin(np.pi * edges / 6.0)) / mesh.widths
    avg = cell_average(lambda x: np.cos(np.pi * x / 6.0), mesh, quadrature_order=3)
    assert np.max(np.abs(avg - exact)) < 1e-12


def test_cell_average_rejects_bad_order():
    mesh = uniform_mesh(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        cell_average(lambda x: x, mesh, quadrature_order=0)


def test_mesh_invariant_validation():
    with pytest.raises(ValueError):
        SpatialMesh(a=0.0, b=1.0, n_cells=4,
                    centers=np.array([0.1, 0.3, 0.2, 0.9]),
                    widths=np.full(4, 0.25))
    with pytest.raises(ValueError):
        SpatialMesh(a=0.0, b=1.0, n_cells=4,
                    centers=np.array([0.125, 0.375, 0.625, 0.875]),
                    widths=np.array([0.25, -0.25, 0.25, 0.25]))
