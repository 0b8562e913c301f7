"""Discrete transport operators and the constrained modified Poisson solve.

The transport pair on a periodic mesh is

    (A u)_j  = sqrt(T0) (u_{j+1} - u_{j-1}) / (2 dx_j) - E_j/(2 sqrt(T0)) u_j
    (A* u)_j = -sqrt(T0) (u_{j+1} - u_{j-1}) / (2 dx_j) - E_j/(2 sqrt(T0)) u_j

adjoint to each other in the dx-weighted l2 product on uniform meshes.  The
implementation groups the diagonal through the stored centered log-slope of
sqrt(rho_inf), which makes  A sqrt(rho_inf) = 0  exact in floating point.

The modified Poisson operator is the composition  L = A* rho_inf^{-1} A, a
positive semi-definite wide-stencil operator whose kernel contains
sqrt(rho_inf).  Solves are made well-posed by symmetric bordering with the
mean-zero functional and, on even-sized meshes, a second alternating-parity
functional: central differences decouple the two cell parities there, which
leaves an exact second null vector on uniform backgrounds and a spectrally
small near-null one (alternating sums of smooth samples) on smooth
non-uniform backgrounds.  Because the bordering is symmetric, the extra
gauge is invisible to the discrete energy identity.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .equilibrium import Equilibrium


class IncompatibleRHS(ValueError):
    """Right-hand side violates the discrete quasi-neutrality compatibility."""


class SingularSystem(RuntimeError):
    """Bordered factorization detected rank deficiency beyond the declared
    kernel (or produced an unusable solve)."""


class TransportOperators:
    """Matched pair of discrete transport operators for one equilibrium."""

    def __init__(self, equilibrium: Equilibrium):
        self.equilibrium = equilibrium
        mesh = equilibrium.mesh
        self.mesh = mesh
        t0 = equilibrium.temperature
        self.coef = np.sqrt(t0) / (2.0 * mesh.widths)
        self.slope = equilibrium.log_slope()

    def apply_A(self, u: np.ndarray) -> np.ndarray:
        diff = np.roll(u, -1) - np.roll(u, 1)
        return self.coef * (diff - self.slope * u)

    def apply_Astar(self, u: np.ndarray) -> np.ndarray:
        diff = np.roll(u, -1) - np.roll(u, 1)
        return self.coef * (-diff - self.slope * u)

    def _stencil(self, sign: float) -> sp.csr_matrix:
        n = self.mesh.n_cells
        idx = np.arange(n)
        rows = np.concatenate([idx, idx, idx])
        cols = np.concatenate([(idx + 1) % n, (idx - 1) % n, idx])
        vals = np.concatenate([sign * self.coef, -sign * self.coef,
                               -self.coef * self.slope])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def matrix_A(self) -> sp.csr_matrix:
        return self._stencil(+1.0)

    def matrix_Astar(self) -> sp.csr_matrix:
        return self._stencil(-1.0)

    def poisson_matrix(self) -> sp.csr_matrix:
        """Wide-stencil composition  A* rho^{-1} A  (5-point, periodic)."""
        inv_rho = sp.diags(1.0 / self.equilibrium.rho)
        return (self.matrix_Astar() @ inv_rho @ self.matrix_A()).tocsr()

    def elliptic_matrix(self) -> sp.csr_matrix:
        """Unweighted composition  A* A  (hypocoercivity auxiliary solve)."""
        return (self.matrix_Astar() @ self.matrix_A()).tocsr()


def bordering_vectors(equilibrium: Equilibrium, kind: str) -> list[np.ndarray]:
    """Constraint columns for the kernel of the composed operators.

    kind "omega": the modified-potential gauge sum dx_j w_j / sqrt(rho_j) = 0.
    kind "state": the auxiliary-unknown gauge sum dx_j u_j sqrt(rho_j) = 0.

    On even-sized meshes the central-difference kernel is two-dimensional to
    working precision (odd-even decoupling; exact on uniform backgrounds),
    so a second alternating functional is appended there to keep the
    bordered systems well-conditioned.
    """
    sr = equilibrium.sqrt_rho
    if kind == "omega":
        base = 1.0 / sr
    elif kind == "state":
        base = sr.copy()
    else:
        raise ValueError(f"unknown bordering kind {kind!r}")
    columns = [base]
    n = equilibrium.mesh.n_cells
    if n % 2 == 0:
        parity = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        columns.append(parity * base)
    return columns


class _BorderedSolver:
    """LU factorization of [[M, W], [R^T, 0]] with residual verification."""

    def __init__(self, matrix: sp.spmatrix, columns: list[np.ndarray],
                 widths: np.ndarray):
        n = matrix.shape[0]
        nc = len(columns)
        self.n = n
        self.n_constraints = nc
        col_block = sp.csc_matrix(np.column_stack(columns))
        row_block = sp.csc_matrix(np.column_stack(
            [widths * w for w in columns]).T)
        zero = sp.csc_matrix((nc, nc))
        bordered = sp.bmat([[matrix, col_block], [row_block, zero]],
                           format="csc")
        self.bordered = bordered
        try:
            self.lu = spla.splu(bordered)
        except RuntimeError as exc:
            raise SingularSystem(f"bordered factorization failed: {exc}") from exc

    def solve(self, rhs: np.ndarray):
        full = np.zeros(self.n + self.n_constraints)
        full[: self.n] = rhs
        sol = self.lu.solve(full)
        if not np.all(np.isfinite(sol)):
            raise SingularSystem("bordered solve produced non-finite values")
        rhs_scale = max(float(np.max(np.abs(full))), 1e-300)
        if float(np.max(np.abs(sol))) > 1e14 * rhs_scale:
            raise SingularSystem(
                "bordered solve amplification beyond any admissible "
                "conditioning; the operator is rank deficient beyond the "
                "declared kernel")
        residual = self.bordered @ sol - full
        if np.max(np.abs(residual)) > 1e-10 * rhs_scale:
            # one step of iterative refinement before giving up
            sol = sol + self.lu.solve(-residual)
            residual = self.bordered @ sol - full
        if np.max(np.abs(residual)) > 1e-8 * rhs_scale:
            raise SingularSystem(
                "bordered solve residual too large; the operator is rank "
                "deficient beyond the declared kernel")
        return sol[: self.n], sol[self.n:]


class PoissonOperator:
    """Constrained solver for  (A* rho^{-1} A) omega = rhs  with the
    mean-zero gauge on omega (plus the parity gauge when required)."""

    def __init__(self, equilibrium: Equilibrium,
                 operators: TransportOperators | None = None):
        self.equilibrium = equilibrium
        self.ops = operators if operators is not None else TransportOperators(equilibrium)
        self.columns = bordering_vectors(equilibrium, "omega")
        self._solver = _BorderedSolver(self.ops.poisson_matrix(), self.columns,
                                       equilibrium.mesh.widths)
        self.last_multipliers: np.ndarray | None = None

    @property
    def n_constraints(self) -> int:
        return len(self.columns)

    def apply(self, omega: np.ndarray) -> np.ndarray:
        flux = self.ops.apply_A(omega) / self.equilibrium.rho
        return self.ops.apply_Astar(flux)

    def solve(self, rhs: np.ndarray, compat_tol: float = 1e-10):
        """Solve for (omega, multiplier).

        The right-hand side must satisfy the discrete quasi-neutrality
        compatibility <sqrt(rho), rhs> = 0 within compat_tol relative, up to
        the rounding floor of the conserved mass (states decayed to that
        floor stay solvable).
        """
        widths = self.equilibrium.mesh.widths
        defect = float(np.dot(widths, self.equilibrium.sqrt_rho * rhs))
        norm = float(np.sqrt(np.dot(widths, rhs * rhs)))
        floor = 1e-13 * self.equilibrium.mass
        if abs(defect) > compat_tol * norm + floor:
            raise IncompatibleRHS(
                f"quasi-neutrality defect {defect:.3e} exceeds "
                f"{compat_tol:.1e} * |rhs| = {compat_tol * norm:.3e}")
        omega, mults = self._solver.solve(rhs)
        self.last_multipliers = mults
        return omega, float(mults[0])


class EllipticSolver:
    """Constrained solver for  (A* A) u = rhs  with the sqrt(rho)-weighted
    mean-zero gauge; used by the hypocoercivity functional."""

    def __init__(self, equilibrium: Equilibrium,
                 operators: TransportOperators | None = None):
        self.equilibrium = equilibrium
        self.ops = operators if operators is not None else TransportOperators(equilibrium)
        self.columns = bordering_vectors(equilibrium, "state")
        self._solver = _BorderedSolver(self.ops.elliptic_matrix(), self.columns,
                                       equilibrium.mesh.widths)

    def solve(self, rhs: np.ndarray, compat_tol: float = 1e-10):
        widths = self.equilibrium.mesh.widths
        defect = float(np.dot(widths, self.equilibrium.sqrt_rho * rhs))
        norm = float(np.sqrt(np.dot(widths, rhs * rhs)))
        floor = 1e-13 * self.equilibrium.mass
        if abs(defect) > compat_tol * norm + floor:
            raise IncompatibleRHS(
                f"compatibility defect {defect:.3e} exceeds "
                f"{compat_tol:.1e} * |rhs|")
        u, mults = self._solver.solve(rhs)
        return u, mults
