"""Hermite basis in velocity: evaluation, projection, reconstruction.

The basis functions are Hermite polynomials (orthonormal under the standard
Gaussian weight, generated by  xi*H_k = sqrt(k)*H_{k-1} + sqrt(k+1)*H_{k+1})
times the Maxwellian at temperature T0.  States store the renormalized
coefficients D_k = C_k / sqrt(rho_inf), so that plain unweighted l2 sums of
the rows measure the weighted distance between distribution functions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .equilibrium import Equilibrium
from .mesh import SpatialMesh, cell_average

# hermgauss weights degrade to 0/NaN past this order (float64 underflow)
_MAX_QUAD_ORDER = 350

# renormalization cadence of the stabilized recurrence; growth per step is
# bounded by |xi| + 2 sqrt(k), so 16 steps cannot overflow the headroom
_RESCALE_EVERY = 16


@dataclass(frozen=True)
class HermiteBasis:
    """Velocity basis parameters: temperature of the Maxwellian and the
    largest mode the instance is meant to evaluate."""

    temperature: float
    max_mode: int

    def __post_init__(self):
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        if self.max_mode < 0:
            raise ValueError("max_mode must be non-negative")

    def maxwellian(self, v: np.ndarray) -> np.ndarray:
        t0 = self.temperature
        return np.exp(-0.5 * v * v / t0) / np.sqrt(2.0 * np.pi * t0)


@dataclass
class HermiteState:
    """Renormalized Hermite coefficients plus the modified potential.

    coefficients has shape (n_modes + 1, n_cells) and stores the deviation
    from the stationary hierarchy: row 0 holds D_0 - sqrt(rho_inf), row k >= 1
    holds D_k (whose stationary value is zero).  Carrying the deviation keeps
    full relative precision as the solution relaxes, so conservation and
    energy-balance identities hold at any decay depth; the absolute
    distribution is recovered through reconstruct().

    omega is the modified potential of the reformulated Poisson equation.
    Owned exclusively by the integration loop; diagnostics receive it
    read-only between steps.
    """

    n_modes: int
    mesh: SpatialMesh
    coefficients: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)
    time: float = 0.0

    def __post_init__(self):
        expect = (self.n_modes + 1, self.mesh.n_cells)
        if self.coefficients.shape != expect:
            raise ValueError(f"coefficient matrix must have shape {expect}")
        if self.omega.shape != (self.mesh.n_cells,):
            raise ValueError("omega must have one value per cell")

    def copy(self) -> "HermiteState":
        return HermiteState(n_modes=self.n_modes, mesh=self.mesh,
                            coefficients=self.coefficients.copy(),
                            omega=self.omega.copy(), time=self.time)

    def all_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coefficients))
                    and np.all(np.isfinite(self.omega)))


def eval_hermite_functions(basis: HermiteBasis, v, k_max: int) -> np.ndarray:
    """Evaluate the weighted basis functions Psi_k(v) for k = 0..k_max.

    Returns an array of shape (k_max + 1, len(v)).  The recurrence runs on
    the Gaussian-weighted functions with a tracked per-point exponent, so
    huge mode numbers (10^4 and beyond) stay finite; results below the
    float64 floor underflow to zero, which is the documented behavior for
    |v| far in the Maxwellian tail.
    """
    if k_max > basis.max_mode:
        raise ValueError("k_max exceeds the basis max_mode")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    t0 = basis.temperature
    xi = v / np.sqrt(t0)

    out = np.empty((k_max + 1, v.size))
    # true value of mode k is a_cur * exp(expo)
    expo = -0.5 * xi * xi - 0.5 * np.log(2.0 * np.pi * t0)
    a_prev = np.zeros_like(xi)
    a_cur = np.ones_like(xi)
    out[0] = np.exp(expo)
    for k in range(k_max):
        a_next = (xi * a_cur - np.sqrt(k) * a_prev) / np.sqrt(k + 1.0)
        a_prev, a_cur = a_cur, a_next
        if (k + 1) % _RESCALE_EVERY == 0:
            mag = np.maximum(np.abs(a_cur), np.abs(a_prev))
            scale = np.where((mag > 1e100) | ((mag > 0.0) & (mag < 1e-100)),
                             mag, 1.0)
            a_cur /= scale
            a_prev /= scale
            expo += np.log(scale)
        out[k + 1] = a_cur * np.exp(expo)
    return out


def _hermite_quadrature(t0: float, order: int):
    """Gauss-Hermite rule prepared for integrals against the Maxwellian.

    Returns velocity nodes v_m and log-corrected weights so that
    integral g(v) M(v) dv  ~=  sum_m  exp(lw_m) * W(xi_m) ...  assembled by
    the callers through _weighted_polynomial_table below.
    """
    if order > _MAX_QUAD_ORDER:
        raise ValueError(
            f"Gauss-Hermite order {order} exceeds the float64-stable limit "
            f"{_MAX_QUAD_ORDER}; use the per-mode analytic path for deep "
            "Hermite hierarchies")
    s, w = hermgauss(order)
    v_nodes = np.sqrt(2.0 * t0) * s
    with np.errstate(divide="ignore"):
        log_w = np.where(w > 0.0, np.log(np.where(w > 0.0, w, 1.0)), -np.inf)
    # fold the e^{+s^2} back in logs; pairs with weighted polynomials below
    log_w = log_w + s * s
    return s, v_nodes, log_w


def _weighted_polynomial_products(basis: HermiteBasis, k_max: int, order: int):
    """Products w_m * H_k(xi_m) / sqrt(pi) for the Maxwellian quadrature,
    computed overflow-free as  exp(log_w) * [H_k e^{-xi^2/2}]."""
    t0 = basis.temperature
    s, v_nodes, log_w = _hermite_quadrature(t0, order)
    weighted = eval_hermite_functions(basis, v_nodes, k_max)
    weighted = weighted * np.sqrt(2.0 * np.pi * t0)  # strip the Maxwellian norm
    products = weighted * np.exp(log_w)[None, :] / np.sqrt(np.pi)
    return v_nodes, products


def project_modulated_maxwellian(h, equilibrium: Equilibrium, n_modes: int,
                                 quad_order: int | None = None,
                                 x_quadrature_order: int = 3) -> HermiteState:
    """Project initial data f0(x, v) = h(x, v) * M(v) onto a Hermite state.

    h must broadcast over numpy arrays in both arguments.  The velocity
    integral for each mode coefficient uses a Gauss-Hermite rule in the
    thermally scaled variable; the spatial cell averages use the mesh
    Gauss-Legendre rule.  Warns when the tail of the mode spectrum carries
    more than 1e-8 of the total coefficient energy (under-resolution).
    """
    mesh = equilibrium.mesh
    basis = HermiteBasis(temperature=equilibrium.temperature, max_mode=n_modes)
    if quad_order is None:
        quad_order = min(2 * n_modes + 32, _MAX_QUAD_ORDER)
    if quad_order < 2:
        raise ValueError("quad_order must be at least 2")
    v_nodes, products = _weighted_polynomial_products(basis, n_modes, quad_order)

    nodes, leg_w = np.polynomial.legendre.leggauss(x_quadrature_order)
    half = 0.5 * mesh.widths
    x_pts = (mesh.centers[:, None] + half[:, None] * nodes[None, :]).ravel()

    h_vals = h(x_pts[:, None], v_nodes[None, :])
    h_vals = np.broadcast_to(h_vals, (x_pts.size, v_nodes.size))
    # mode coefficients C_k at every spatial quadrature point
    c_pts = h_vals @ products.T                      # (n_pts, n_modes+1)
    c_cells = c_pts.reshape(mesh.n_cells, x_quadrature_order, n_modes + 1)
    c_avg = 0.5 * np.einsum("jqk,q->jk", c_cells, leg_w)
    coeffs = (c_avg / equilibrium.sqrt_rho[:, None]).T.copy()
    coeffs[0] -= equilibrium.sqrt_rho

    _warn_on_tail_energy(coeffs, mesh, n_modes, equilibrium.mass)
    return HermiteState(n_modes=n_modes, mesh=mesh, coefficients=coeffs,
                        omega=np.zeros(mesh.n_cells), time=0.0)


def state_from_mode_coefficients(mode_coefficients, equilibrium: Equilibrium,
                                 n_modes: int,
                                 quadrature_order: int = 3) -> HermiteState:
    """Build a state from analytic per-mode coefficient closures C_k(x).

    ``mode_coefficients`` maps mode index k to either a callable of x or an
    array of per-cell values.  This is the exact path used by the experiment
    presets (no velocity quadrature), and the only practical one for deep
    hierarchies with thousands of modes.  Modes above n_modes are discarded
    (hard truncation) with a warning.
    """
    mesh = equilibrium.mesh
    coeffs = np.zeros((n_modes + 1, mesh.n_cells))
    for k, ck in mode_coefficients.items():
        if k < 0:
            raise ValueError("mode indices must be non-negative")
        if k > n_modes:
            warnings.warn(f"mode {k} above the truncation {n_modes} is dropped")
            continue
        if callable(ck):
            avg = cell_average(ck, mesh, quadrature_order)
        else:
            avg = np.asarray(ck, dtype=float)
            if avg.shape != (mesh.n_cells,):
                raise ValueError(f"mode {k} values must match the mesh")
        coeffs[k] = avg / equilibrium.sqrt_rho
    coeffs[0] -= equilibrium.sqrt_rho
    return HermiteState(n_modes=n_modes, mesh=mesh, coefficients=coeffs,
                        omega=np.zeros(mesh.n_cells), time=0.0)


def equilibrium_state(equilibrium: Equilibrium, n_modes: int) -> HermiteState:
    """The stationary state: zero deviation on every mode."""
    mesh = equilibrium.mesh
    coeffs = np.zeros((n_modes + 1, mesh.n_cells))
    return HermiteState(n_modes=n_modes, mesh=mesh, coefficients=coeffs,
                        omega=np.zeros(mesh.n_cells), time=0.0)


def reconstruct(state: HermiteState, equilibrium: Equilibrium,
                v_grid) -> np.ndarray:
    """Evaluate f(x_j, v_m) = sqrt(rho_j) * sum_k D_{k,j} Psi_k(v_m).

    Returns an array of shape (n_cells, len(v_grid)).
    """
    return reconstruct_deviation(state, equilibrium, v_grid, absolute=True)


def reconstruct_deviation(state: HermiteState, equilibrium: Equilibrium,
                          v_grid, absolute: bool = False) -> np.ndarray:
    """Evaluate f - f_inf on the (x_j, v_m) grid; with absolute=True the
    stationary part rho_j M(v_m) is added back."""
    v_grid = np.atleast_1d(np.asarray(v_grid, dtype=float))
    basis = HermiteBasis(temperature=equilibrium.temperature,
                         max_mode=state.n_modes)
    psi = eval_hermite_functions(basis, v_grid, state.n_modes)
    out = (state.coefficients.T @ psi) * equilibrium.sqrt_rho[:, None]
    if absolute:
        out += equilibrium.rho[:, None] * basis.maxwellian(v_grid)[None, :]
    return out


def _warn_on_tail_energy(coeffs: np.ndarray, mesh: SpatialMesh, n_modes: int,
                         mass_scale: float):
    weights = mesh.widths
    energies = (coeffs ** 2) @ weights
    total = float(np.sum(energies))
    # deviations at the rounding floor carry no resolution information
    if total <= 1e-24 * mass_scale:
        return
    tail_start = int(np.floor(0.9 * n_modes)) + 1
    if tail_start <= n_modes:
        tail = float(np.sum(energies[tail_start:]))
        if tail > 1e-8 * total:
            warnings.warn(
                f"tail modes k > {tail_start - 1} hold {tail / total:.2e} of "
                "the coefficient energy; the velocity resolution is marginal")


# -- snapshot output -------------------------------------------------------

def write_snapshot_csv(path, x_grid, v_grid, values):
    """Phase-space snapshot as CSV: first row the velocity grid, first
    column the cell centers, body the values f(x_j, v_m)."""
    x_grid = np.asarray(x_grid)
    v_grid = np.asarray(v_grid)
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        fh.write("x/v," + ",".join(f"{v:.17g}" for v in v_grid) + "\r\n")
        for xj, row in zip(x_grid, values):
            fh.write(f"{xj:.17g}," + ",".join(f"{u:.17g}" for u in row) + "\r\n")


def write_snapshot_binary(path, x_grid, v_grid, values):
    """Flat binary snapshot: int64 header (N_x, N_v), then the x grid, the
    v grid and the row-major float64 values."""
    x_grid = np.asarray(x_grid, dtype=np.float64)
    v_grid = np.asarray(v_grid, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    with open(path, "wb") as fh:
        np.array([x_grid.size, v_grid.size], dtype=np.int64).tofile(fh)
        x_grid.tofile(fh)
        v_grid.tofile(fh)
        values.tofile(fh)


def read_snapshot_csv(path):
    """Inverse of write_snapshot_csv; returns (x_grid, v_grid, values)."""
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip().split(",")
        v_grid = np.array([float(tok) for tok in header[1:]])
        rows = [line.strip().split(",") for line in fh if line.strip()]
    x_grid = np.array([float(r[0]) for r in rows])
    values = np.array([[float(tok) for tok in r[1:]] for r in rows])
    return x_grid, v_grid, values
