"""Fully implicit linearized step: one sparse factorization, many solves.

Each step solves the coupled system in (D_0..D_N, omega, multipliers):

    (eps/dt) D_k  + sqrt(k) A D_{k-1} - sqrt(k+1) A* D_{k+1}
                  + [k=1] A omega  + (k/tau0) D_k  = (eps/dt) D_k^old
    (A* rho^{-1} A) omega - (D_0 - sqrt(rho)) + multipliers = 0
    gauge rows on omega = 0

The matrix is autonomous, so it is assembled and LU-factorized once per
(eps, tau0, dt, scheme, equilibrium, n_modes) and reused for every step.
States carry the zeroth mode as the deviation D_0 - sqrt(rho_inf), which
keeps the stationary state an exact fixed point of the solve (zero in, zero
out) at any parameter values.

Unknown ordering is mode-major with cells contiguous; the omega block sits
right after the D_1 block so the bandwidth stays O(n_cells) regardless of
the depth of the Hermite hierarchy.  Constraint rows come last.

The implicit-midpoint variant (for the Strang composition) reuses the same
template: the midpoint state solves the backward-Euler system with half the
step, and the end state is its linear extrapolation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .equilibrium import Equilibrium
from .hermite import HermiteState
from .operators import TransportOperators, bordering_vectors

BACKWARD_EULER = "backward_euler"
IMPLICIT_MIDPOINT = "implicit_midpoint"


class FactorizationFailure(RuntimeError):
    """Sparse LU factorization of the implicit-step matrix failed."""


@dataclass(frozen=True)
class StepParams:
    """Parameters of one linearized substep."""

    eps: float
    tau0: float
    dt_sub: float
    scheme: str = BACKWARD_EULER

    def __post_init__(self):
        if self.eps <= 0.0 or self.tau0 <= 0.0 or self.dt_sub <= 0.0:
            raise ValueError("eps, tau0 and dt_sub must be positive")
        if self.scheme not in (BACKWARD_EULER, IMPLICIT_MIDPOINT):
            raise ValueError(f"unknown scheme {self.scheme!r}")


class LinearStepOperator:
    """Assembled and factorized implicit step, applied via step()."""

    def __init__(self, params: StepParams, equilibrium: Equilibrium,
                 n_modes: int, operators: TransportOperators | None = None,
                 diag_pivot_thresh: float | None = None,
                 equilibrate: bool | None = None):
        if n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        self.params = params
        self.equilibrium = equilibrium
        self.n_modes = n_modes
        self.ops = operators if operators is not None else TransportOperators(equilibrium)
        self.columns = bordering_vectors(equilibrium, "omega")

        n = equilibrium.mesh.n_cells
        self.n_cells = n
        self.n_constraints = len(self.columns)
        self.dimension = (n_modes + 2) * n + self.n_constraints

        # midpoint solves the half-step backward-Euler system, then extrapolates
        self._eff_dt = params.dt_sub if params.scheme == BACKWARD_EULER \
            else 0.5 * params.dt_sub
        self._eps_over_dt = params.eps / self._eff_dt

        self._matrix = self._assemble()
        if equilibrate is None:
            # ill-conditioned small-eps systems factor more reliably raw
            equilibrate = params.eps >= 1e-3
        options = {"Equil": bool(equilibrate)}
        start = time.perf_counter()
        try:
            self._lu = spla.splu(self._matrix,
                                 diag_pivot_thresh=diag_pivot_thresh,
                                 options=options)
        except RuntimeError as exc:
            advice = ""
            if params.eps < 1e-3:
                advice = (" (small eps: try diag_pivot_thresh below 1.0 and "
                          "keep equilibration disabled)")
            raise FactorizationFailure(f"{exc}{advice}") from exc
        self.factorization_seconds = time.perf_counter() - start
        self.last_multipliers = np.zeros(self.n_constraints)

    # -- layout -------------------------------------------------------------

    def _block(self, k: int) -> int:
        # D_0 -> 0, D_1 -> 1, omega -> 2, D_k -> k+1 for k >= 2
        return k if k <= 1 else k + 1

    _OMEGA_BLOCK = 2

    def _offset(self, block: int) -> int:
        return block * self.n_cells

    # -- assembly -----------------------------------------------------------

    def _assemble(self) -> sp.csc_matrix:
        n = self.n_cells
        n_modes = self.n_modes
        params = self.params
        dim = self.dimension
        widths = self.equilibrium.mesh.widths

        rows, cols, vals = [], [], []

        def add_block(block_row, block_col, coo, factor):
            rows.append(self._offset(block_row) + coo.row)
            cols.append(self._offset(block_col) + coo.col)
            vals.append(factor * coo.data)

        a_coo = self.ops.matrix_A().tocoo()
        astar_coo = self.ops.matrix_Astar().tocoo()
        poisson_coo = self.ops.poisson_matrix().tocoo()

        # time derivative plus collisional damping on every mode diagonal
        ks = np.arange(n_modes + 1)
        blocks = np.where(ks <= 1, ks, ks + 1)
        diag_rows = (blocks[:, None] * n + np.arange(n)[None, :]).ravel()
        diag_vals = np.repeat(self._eps_over_dt + ks / params.tau0, n)
        rows.append(diag_rows)
        cols.append(diag_rows)
        vals.append(diag_vals)

        # transport ladder
        for k in range(n_modes + 1):
            if k >= 1:
                add_block(self._block(k), self._block(k - 1), a_coo, np.sqrt(k))
            if k + 1 <= n_modes:
                add_block(self._block(k), self._block(k + 1), astar_coo,
                          -np.sqrt(k + 1.0))
        # field coupling enters the first mode only
        add_block(self._block(1), self._OMEGA_BLOCK, a_coo, 1.0)

        # Poisson block: L omega - (D_0 - sqrt(rho)) + multiplier columns = 0
        add_block(self._OMEGA_BLOCK, self._OMEGA_BLOCK, poisson_coo, 1.0)
        idx = np.arange(n)
        rows.append(self._offset(self._OMEGA_BLOCK) + idx)
        cols.append(self._offset(0) + idx)
        vals.append(np.full(n, -1.0))
        for i, w in enumerate(self.columns):
            col = dim - self.n_constraints + i
            rows.append(self._offset(self._OMEGA_BLOCK) + idx)
            cols.append(np.full(n, col))
            vals.append(w)
            # matching gauge row on omega
            rows.append(np.full(n, col))
            cols.append(self._offset(self._OMEGA_BLOCK) + idx)
            vals.append(widths * w)

        matrix = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim))
        matrix.sum_duplicates()
        return matrix

    def matrix(self) -> sp.csc_matrix:
        """The assembled implicit-step matrix (for dumps and tests)."""
        return self._matrix

    # -- stepping -----------------------------------------------------------

    def _pack(self, state: HermiteState) -> np.ndarray:
        n = self.n_cells
        rhs = np.zeros(self.dimension)
        rhs[0:n] = state.coefficients[0]
        rhs[n:2 * n] = state.coefficients[1]
        for k in range(2, self.n_modes + 1):
            off = self._offset(self._block(k))
            rhs[off:off + n] = state.coefficients[k]
        rhs *= self._eps_over_dt
        return rhs

    def _unpack(self, solution: np.ndarray, out: np.ndarray) -> np.ndarray:
        n = self.n_cells
        out[0] = solution[0:n]
        out[1] = solution[n:2 * n]
        for k in range(2, self.n_modes + 1):
            off = self._offset(self._block(k))
            out[k] = solution[off:off + n]
        return out

    def step(self, state: HermiteState) -> HermiteState:
        """Advance the state by one substep of width dt_sub."""
        if state.n_modes != self.n_modes:
            raise ValueError("state and operator mode counts differ")
        if state.mesh.n_cells != self.n_cells:
            raise ValueError("state and operator meshes differ")
        solution = self._lu.solve(self._pack(state))

        n = self.n_cells
        coeffs = np.empty_like(state.coefficients)
        self._unpack(solution, coeffs)
        omega = solution[self._offset(self._OMEGA_BLOCK):
                         self._offset(self._OMEGA_BLOCK) + n].copy()
        self.last_multipliers = solution[self.dimension - self.n_constraints:].copy()

        if self.params.scheme == IMPLICIT_MIDPOINT:
            # solution holds the midpoint; extrapolate to the step end
            coeffs = 2.0 * coeffs - state.coefficients
            omega = 2.0 * omega - state.omega

        return HermiteState(n_modes=self.n_modes, mesh=state.mesh,
                            coefficients=coeffs, omega=omega,
                            time=state.time + self.params.dt_sub)

    def dump_matrix(self, path):
        """Write the assembled matrix in matrix-market text format."""
        import scipy.io
        scipy.io.mmwrite(path, self._matrix.tocoo())
