"""Time-loop orchestration: splitting compositions and the echo protocol.

Three integrators are provided:

    lie         backward-Euler linear step, then backward-Euler quadratic step
    strang      half linear / full quadratic / half linear, all implicit
                midpoint (second order)
    linearized  the linear step only, scheme selectable (backward Euler is
                the energy-dissipating variant; implicit midpoint matches the
                second-order accuracy of the experiment runs)

Scheme selection matters in the stiff regime: implicit midpoint is A- but
not L-stable (|R| -> 1 at infinity), so for eps far below dt only the
backward-Euler compositions relax to the stationary state in one step; the
stiff-limit sweeps use lie for that reason.

Time is advanced in the scaled variable multiplying the time derivative by
eps; diagnostics report both t and t/eps so runs at different eps can be
overlaid.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .diagnostics import (DiagnosticsRecord, calibrate_beta0,
                          equivalence_window, hypocoercivity_parts, record,
                          remainder)
from .equilibrium import Equilibrium
from .hermite import HermiteState, state_from_mode_coefficients
from .mesh import cell_average
from .operators import EllipticSolver, PoissonOperator, TransportOperators
from .stepper_linear import (BACKWARD_EULER, IMPLICIT_MIDPOINT,
                             LinearStepOperator, StepParams)
from .stepper_nonlinear import nonlinear_step

LIE = "lie"
STRANG = "strang"
LINEARIZED = "linearized"


class NonFiniteState(RuntimeError):
    """The state stopped being finite; reports the offending step index."""

    def __init__(self, step_index: int):
        super().__init__(f"non-finite state after step {step_index}")
        self.step_index = step_index


class _HypoTracker:
    """Evaluates the modified energy with an adaptively calibrated coupling.

    The coupling beta0 is halved whenever the equivalence window around the
    free energy fails or (on dissipative backward-Euler linearized runs) the
    functional rises; once it is small enough both conditions hold for good,
    which is the empirical counterpart of the admissible-threshold lemma.
    """

    def __init__(self, beta0, equilibrium, ops, elliptic, enforce_decay):
        self.beta0 = beta0
        self.equilibrium = equilibrium
        self.ops = ops
        self.elliptic = elliptic
        self.enforce_decay = enforce_decay
        self.prev_e = None
        self.prev_cross = None
        self.settled_index = 0

    def evaluate(self, state, record_index: int) -> float:
        _, e_val, cross = hypocoercivity_parts(state, self.equilibrium,
                                               self.ops, self.elliptic)
        margin = 1e-12 * max(e_val, 1e-300)
        while True:
            h_val = e_val + self.beta0 * cross
            lo, hi = equivalence_window(e_val)
            ok = lo - margin <= h_val <= hi + margin
            if ok and self.enforce_decay and self.prev_e is not None:
                prev_h = self.prev_e + self.beta0 * self.prev_cross
                ok = h_val <= prev_h + margin
            if ok or self.beta0 == 0.0:
                break
            self.beta0 *= 0.5
            self.settled_index = record_index
        self.prev_e = e_val
        self.prev_cross = cross
        return h_val


@dataclass(frozen=True)
class SimulationParams:
    """Physical and numerical parameters of one run."""

    eps: float
    tau0: float
    dt: float
    t_end: float
    n_modes: int
    integrator: str = STRANG
    diag_every: int = 1
    snapshot_times: tuple = ()
    t_start: float = 0.0
    linearized_scheme: str = BACKWARD_EULER
    track_hypocoercivity: bool = False
    beta0: float | None = None
    diag_pivot_thresh: float | None = None
    equilibrate: bool | None = None

    def __post_init__(self):
        if min(self.eps, self.tau0, self.dt) <= 0.0:
            raise ValueError("eps, tau0 and dt must be positive")
        if self.n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        if self.t_end < self.t_start:
            raise ValueError("t_end must not precede t_start")
        if self.integrator not in (LIE, STRANG, LINEARIZED):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.diag_every < 1:
            raise ValueError("diag_every must be at least 1")
        for ts in self.snapshot_times:
            if not (self.t_start <= ts <= self.t_end + 0.5 * self.dt):
                raise ValueError(f"snapshot time {ts} outside the run window")

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))


def mean_correct(state: HermiteState, equilibrium: Equilibrium) -> None:
    """Shift the density deviation along sqrt(rho) so the discrete mass
    matches the stationary mass exactly (quasi-neutrality of the constrained
    Poisson solve)."""
    widths = equilibrium.mesh.widths
    defect = float(np.dot(widths, equilibrium.sqrt_rho * state.coefficients[0]))
    state.coefficients[0] -= (defect / equilibrium.mass) * equilibrium.sqrt_rho


def run(params: SimulationParams, equilibrium: Equilibrium,
        initial: HermiteState, on_record=None, on_snapshot=None,
        progress: bool = False, info: dict | None = None):
    """Integrate from t_start to t_end; returns (final_state, records).

    on_record(rec) fires on every emitted DiagnosticsRecord; on_snapshot(state)
    fires at the step nearest each requested snapshot time.  The initial state
    is mean-corrected and its potential re-solved before stepping, so restarts
    are consistent by construction.  When ``info`` is given, the one-time
    factorization cost is reported in it.
    """
    ops = TransportOperators(equilibrium)
    poisson = PoissonOperator(equilibrium, ops)

    state = initial.copy()
    state.time = params.t_start
    mean_correct(state, equilibrium)
    omega0, _ = poisson.solve(state.coefficients[0])
    state.omega = omega0

    lin, lin_half = None, None
    solver_opts = dict(diag_pivot_thresh=params.diag_pivot_thresh,
                       equilibrate=params.equilibrate)
    if params.integrator == LIE:
        lin = LinearStepOperator(
            StepParams(params.eps, params.tau0, params.dt, BACKWARD_EULER),
            equilibrium, params.n_modes, ops, **solver_opts)
    elif params.integrator == STRANG:
        lin_half = LinearStepOperator(
            StepParams(params.eps, params.tau0, 0.5 * params.dt,
                       IMPLICIT_MIDPOINT),
            equilibrium, params.n_modes, ops, **solver_opts)
    else:
        lin = LinearStepOperator(
            StepParams(params.eps, params.tau0, params.dt,
                       params.linearized_scheme),
            equilibrium, params.n_modes, ops, **solver_opts)

    if info is not None:
        op = lin if lin is not None else lin_half
        info["factorization_s"] = op.factorization_seconds
        info["dimension"] = op.dimension

    tracker = None
    if params.track_hypocoercivity:
        elliptic = EllipticSolver(equilibrium, ops)
        beta0 = params.beta0
        if beta0 is None:
            beta0 = calibrate_beta0(state, equilibrium, ops, elliptic)
        dissipative = (params.integrator == LINEARIZED
                       and params.linearized_scheme == BACKWARD_EULER)
        tracker = _HypoTracker(beta0, equilibrium, ops, elliptic,
                               enforce_decay=dissipative)

    records: list[DiagnosticsRecord] = []

    def emit(st, rem):
        h_val = math.nan
        if tracker is not None:
            h_val = tracker.evaluate(st, len(records))
        rec = record(st, equilibrium, params.eps, params.tau0, ops,
                     remainder_value=rem, h_functional=h_val)
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    n_steps = params.n_steps
    snapshot_steps = {}
    for ts in params.snapshot_times:
        idx = int(round((ts - params.t_start) / params.dt))
        snapshot_steps.setdefault(min(max(idx, 0), n_steps), []).append(ts)

    emit(state, math.nan)
    if on_snapshot is not None and 0 in snapshot_steps:
        on_snapshot(state)

    for n in range(1, n_steps + 1):
        previous = state
        if params.integrator == LIE:
            state = lin.step(state)
            state = nonlinear_step(state, params.dt, params.eps,
                                   BACKWARD_EULER, equilibrium, ops)
        elif params.integrator == STRANG:
            state = lin_half.step(state)
            state = nonlinear_step(state, params.dt, params.eps,
                                   IMPLICIT_MIDPOINT, equilibrium, ops)
            state = lin_half.step(state)
        else:
            state = lin.step(state)
        # substeps advance their own widths; pin the composite clock
        state.time = params.t_start + n * params.dt

        if not state.all_finite():
            raise NonFiniteState(n)

        if n % params.diag_every == 0 or n == n_steps:
            rem = remainder(previous, state, equilibrium, params.dt, ops)
            emit(state, rem)
        if on_snapshot is not None and n in snapshot_steps:
            on_snapshot(state)
        if progress and (n % max(1, n_steps // 10) == 0 or n == n_steps):
            print(f"  step {n}/{n_steps}  t={state.time:.3f}", file=sys.stderr)

    if info is not None and tracker is not None:
        info["beta0_final"] = tracker.beta0
        info["beta0_settled_index"] = tracker.settled_index
    return state, records


def run_echo_protocol(params_phase1: SimulationParams,
                      params_phase2: SimulationParams,
                      delta: float, k1: float, k2: float,
                      equilibrium: Equilibrium,
                      on_record=None, on_snapshot=None,
                      progress: bool = False):
    """Two-phase echo experiment on a uniform background.

    Phase 1 starts from the mode-k1 perturbed Maxwellian at t_start of
    params_phase1 and relaxes by wave damping; phase 2 re-perturbs the
    density with mode k2 at t = 0 and watches the nonlinear beating.
    Returns (records_phase1, records_phase2, final_state).
    """
    if not equilibrium.is_uniform():
        raise ValueError("the echo protocol requires a uniform background")

    initial = state_from_mode_coefficients(
        {0: lambda x: 1.0 + delta * np.cos(k1 * x)},
        equilibrium, params_phase1.n_modes)
    state, records1 = run(params_phase1, equilibrium, initial,
                          on_record=None, progress=progress)

    bump = cell_average(lambda x: delta * np.cos(k2 * x), equilibrium.mesh)
    state.coefficients[0] = state.coefficients[0] + bump / equilibrium.sqrt_rho

    final, records2 = run(params_phase2, equilibrium, state,
                          on_record=on_record, on_snapshot=on_snapshot,
                          progress=progress)
    return records1, records2, final
