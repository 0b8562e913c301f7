"""Discrete stationary state of the kinetic model.

The stationary density is a Maxwell-Boltzmann profile rho = c * exp(-phi/T0)
together with the discrete electric field chosen so that the transport
operator annihilates sqrt(rho) exactly (well-balancing).  The field on cell j
uses the centered ratio

    E_j = 2*T0/sqrt(rho_j) * (sqrt(rho_{j+1}) - sqrt(rho_{j-1})) / (2*dx_j),

which is the discrete counterpart of  E = 2*T0 * d/dx log sqrt(rho).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import SpatialMesh

# exp argument beyond which exp(-phi/T0) over/underflows badly
_EXP_GUARD = 700.0


class NonConvergence(RuntimeError):
    """Newton iteration failed to reach the requested residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Equilibrium:
    """Stationary state (rho, phi, E) on a periodic mesh.

    Invariants: rho = normalization * exp(-phi/temperature) > 0 everywhere,
    and the stored field makes the discrete transport operator vanish on
    sqrt_rho componentwise (see operators module).
    """

    mesh: SpatialMesh
    temperature: float
    phi: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    sqrt_rho: np.ndarray = field(repr=False)
    e_field: np.ndarray = field(repr=False)
    normalization: float

    @property
    def mass(self) -> float:
        """Total stationary mass  sum_j dx_j rho_j."""
        return float(np.dot(self.mesh.widths, self.rho))

    def log_slope(self) -> np.ndarray:
        """Centered ratio s_j = (sqrt_rho_{j+1} - sqrt_rho_{j-1}) / sqrt_rho_j.

        The transport stencils are built from this quantity so that the
        cancellation against sqrt_rho is exact in floating point.
        """
        sr = self.sqrt_rho
        return (np.roll(sr, -1) - np.roll(sr, 1)) / sr

    def is_uniform(self) -> bool:
        """True when the background density carries no field (E identically 0)."""
        scale = self.temperature / self.mesh.h
        return float(np.max(np.abs(self.e_field))) <= 1e-14 * scale


@dataclass(frozen=True)
class IonDensity:
    """Prescribed ion background rho_i >= 0 with positive total mass."""

    mesh: SpatialMesh
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if np.any(self.values < 0.0):
            raise ValueError("ion density must be non-negative")
        if np.dot(self.mesh.widths, self.values) <= 0.0:
            raise ValueError("ion density must carry positive total mass")

    @property
    def mass(self) -> float:
        return float(np.dot(self.mesh.widths, self.values))


def _field_from_sqrt_rho(mesh: SpatialMesh, sqrt_rho: np.ndarray,
                         temperature: float) -> np.ndarray:
    diff = np.roll(sqrt_rho, -1) - np.roll(sqrt_rho, 1)
    return (2.0 * temperature / sqrt_rho) * diff / (2.0 * mesh.widths)


def from_potential(mesh: SpatialMesh, phi, T0: float,
                   mean_density: float = 1.0) -> Equilibrium:
    """Equilibrium from a prescribed stationary potential.

    ``phi`` is either an array of per-cell values or a callable evaluated at
    cell centers.  The normalization constant fixes the discrete mean density
    (1/(b-a)) * sum_j dx_j rho_j to ``mean_density``.
    """
    if T0 <= 0.0:
        raise ValueError("temperature must be positive")
    if mean_density <= 0.0:
        raise ValueError("mean density must be positive")
    phi_j = phi(mesh.centers) if callable(phi) else np.asarray(phi, dtype=float)
    if phi_j.shape != (mesh.n_cells,):
        raise ValueError("potential values must match the mesh")
    if np.max(np.abs(phi_j)) / T0 > _EXP_GUARD:
        raise ValueError("potential/temperature ratio exceeds exp overflow guard "
                         f"({_EXP_GUARD}); rescale the problem")
    boltzmann = np.exp(-phi_j / T0)
    c_inf = mean_density * mesh.length / np.dot(mesh.widths, boltzmann)
    rho = c_inf * boltzmann
    sqrt_rho = np.sqrt(rho)
    e_field = _field_from_sqrt_rho(mesh, sqrt_rho, T0)
    return Equilibrium(mesh=mesh, temperature=float(T0), phi=phi_j, rho=rho,
                       sqrt_rho=sqrt_rho, e_field=e_field,
                       normalization=float(c_inf))


def _periodic_laplacian(mesh: SpatialMesh):
    """Standard 3-point periodic Laplacian as a dense matrix.

    Used only inside the Poisson-Boltzmann solve; mesh sizes there are small
    and the Newton Jacobian is dense-solved.
    """
    n = mesh.n_cells
    dx2 = mesh.widths ** 2
    lap = np.zeros((n, n))
    idx = np.arange(n)
    lap[idx, idx] = -2.0 / dx2
    lap[idx, (idx + 1) % n] = 1.0 / dx2
    lap[idx, (idx - 1) % n] = 1.0 / dx2
    return lap


def solve_poisson_boltzmann(ion: IonDensity, T0: float,
                            newton_tol: float = 1e-11,
                            max_iter: int = 50) -> Equilibrium:
    """Solve the nonlinear elliptic problem for the stationary potential.

    Finds phi with  -lap_h phi = c * exp(-phi/T0) - rho_i,  the mass condition
    c * sum dx exp(-phi/T0) = sum dx rho_i fixing c (Gummel-style update inside
    the loop), and the zero-mean gauge sum dx_j phi_j = 0.  Newton steps are
    damped by halving until the residual decreases.
    """
    if T0 <= 0.0:
        raise ValueError("temperature must be positive")
    if newton_tol <= 0.0:
        raise ValueError("newton_tol must be positive")
    mesh = ion.mesh
    widths = mesh.widths
    lap = _periodic_laplacian(mesh)
    ion_mass = ion.mass

    def residual(phi, c):
        return -(lap @ phi) - c * np.exp(-phi / T0) + ion.values

    phi = np.zeros(mesh.n_cells)
    c_inf = ion_mass / mesh.length
    res = residual(phi, c_inf)
    res_norm = np.max(np.abs(res))
    for _ in range(max_iter):
        if res_norm <= newton_tol:
            break
        boltz = np.exp(-phi / T0)
        c_inf = ion_mass / np.dot(widths, boltz)
        res = residual(phi, c_inf)
        jac = -lap + np.diag((c_inf / T0) * boltz)
        step = np.linalg.solve(jac, -res)
        # damped update: halve until the residual actually decreases
        lam = 1.0
        for _ in range(30):
            trial = phi + lam * step
            if np.max(np.abs(trial)) / T0 > _EXP_GUARD:
                lam *= 0.5
                continue
            trial_res = np.max(np.abs(residual(trial, c_inf)))
            if trial_res < res_norm:
                break
            lam *= 0.5
        else:
            raise NonConvergence("Newton damping exhausted", residual=res_norm)
        phi = trial
        res_norm = trial_res
    else:
        raise NonConvergence(
            f"no convergence after {max_iter} Newton iterations "
            f"(last residual {res_norm:.3e})", residual=res_norm)

    # gauge fix: shift phi to discrete zero mean, absorbing the shift into c
    shift = np.dot(widths, phi) / mesh.length
    phi = phi - shift
    boltz = np.exp(-phi / T0)
    c_inf = ion_mass / np.dot(widths, boltz)
    rho = c_inf * boltz
    sqrt_rho = np.sqrt(rho)
    e_field = _field_from_sqrt_rho(mesh, sqrt_rho, T0)
    return Equilibrium(mesh=mesh, temperature=float(T0), phi=phi, rho=rho,
                       sqrt_rho=sqrt_rho, e_field=e_field,
                       normalization=float(c_inf))
