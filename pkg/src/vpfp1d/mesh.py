"""Periodic 1D spatial mesh and cell-average projection.

The mesh partitions [a, b] into N_x control volumes K_j with centers x_j
and widths dx_j.  Topology is periodic: cell N_x-1 neighbors cell 0.
All discrete operators in this package index cells modulo N_x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpatialMesh:
    """Partition of the periodic interval [a, b] into cells.

    Attributes:
        a, b: domain endpoints (a < b)
        n_cells: number of control volumes N_x
        centers: cell midpoints x_j, strictly increasing
        widths: cell widths dx_j, strictly positive, summing to b - a
    """

    a: float
    b: float
    n_cells: int
    centers: np.ndarray = field(repr=False)
    widths: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_cells < 3:
            raise ValueError("mesh needs at least 3 cells (3-point stencils)")
        if not self.a < self.b:
            raise ValueError("mesh requires a < b")
        if np.any(self.widths <= 0.0):
            raise ValueError("cell widths must be strictly positive")
        if np.any(np.diff(self.centers) <= 0.0):
            raise ValueError("cell centers must be strictly increasing")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def h(self) -> float:
        """Largest cell width."""
        return float(np.max(self.widths))

    @property
    def edges(self) -> np.ndarray:
        """Cell interfaces x_{j+1/2}, length n_cells + 1."""
        e = np.empty(self.n_cells + 1)
        e[0] = self.a
        np.cumsum(self.widths, out=e[1:])
        e[1:] += self.a
        return e

    def neighbor(self, j: int, shift: int) -> int:
        """Periodic neighbor index of cell j displaced by shift cells."""
        return (j + shift) % self.n_cells


def uniform_mesh(a: float, b: float, n_cells: int) -> SpatialMesh:
    """Build a uniform periodic mesh of n_cells cells on [a, b].

    All widths equal (b - a)/n_cells and centers sit at a + (j + 1/2)*dx.
    Rejects n_cells < 3 since the central-difference stencil needs three
    distinct cells.
    """
    if n_cells < 3:
        raise ValueError("uniform_mesh requires n_cells >= 3")
    if not a < b:
        raise ValueError("uniform_mesh requires a < b")
    dx = (b - a) / n_cells
    centers = a + (np.arange(n_cells) + 0.5) * dx
    widths = np.full(n_cells, dx)
    return SpatialMesh(a=float(a), b=float(b), n_cells=int(n_cells),
                       centers=centers, widths=widths)


def cell_average(g, mesh: SpatialMesh, quadrature_order: int = 3) -> np.ndarray:
    """Per-cell averages (1/dx_j) * integral of g over K_j.

    Uses a fixed-order Gauss-Legendre rule on every cell; g must accept a
    numpy array of points and return values of the same shape.
    """
    if quadrature_order < 1:
        raise ValueError("quadrature_order must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_order)
    # map reference nodes on [-1, 1] into each cell
    half = 0.5 * mesh.widths
    pts = mesh.centers[:, None] + half[:, None] * nodes[None, :]
    vals = g(pts)
    return 0.5 * (vals @ weights)
