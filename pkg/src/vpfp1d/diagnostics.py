"""Scalar functionals tracked along a run.

Everything here is a pure function of a state snapshot (plus the previous
snapshot for the dissipation remainder).  The free energy is

    E = 1/2 ( sum_k ||D_k - Dinf_k||^2  +  ||A omega / sqrt(rho)||^2 )

with dx-weighted l2 norms, and the discrete balance it satisfies under the
backward-Euler linearized step is

    (E' - E)/dt + dt * R + (1/(eps*tau0)) sum_{k>=1} k ||D_k'||^2 = 0,

R being the positive numeric-dissipation remainder of the two step ends.

The hypocoercivity functional augments E with a transport cross term built
from an auxiliary elliptic solve; for a small enough coupling beta0 it is
equivalent to E within the explicit window [E/2, 3E/2] and decays
monotonically along linearized runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import Equilibrium
from .hermite import HermiteState
from .operators import EllipticSolver, TransportOperators


class InsufficientData(ValueError):
    """Too few samples inside the fitting window."""


class NonPositiveValues(ValueError):
    """Log-linear fitting requires strictly positive values."""


CSV_COLUMNS = ("t", "t_over_eps", "energy", "dissipation", "remainder",
               "l2_f", "l2_local", "l2_rho", "e_pot",
               "mode1", "mode2", "mode3", "mode4", "mass", "h_functional")


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of the diagnostics stream (see CSV_COLUMNS for the layout).

    remainder refers to the interval ending at this record's step and is NaN
    on the first record of a run; h_functional is NaN when the hypocoercivity
    functional was not requested.
    """

    t: float
    t_over_eps: float
    energy: float
    dissipation: float
    remainder: float
    l2_f: float
    l2_local: float
    l2_rho: float
    e_pot: float
    field_modes: np.ndarray = field(repr=False)
    mass: float = 0.0
    h_functional: float = math.nan

    def as_row(self) -> list[float]:
        return [self.t, self.t_over_eps, self.energy, self.dissipation,
                self.remainder, self.l2_f, self.l2_local, self.l2_rho,
                self.e_pot, *self.field_modes.tolist(), self.mass,
                self.h_functional]


@dataclass(frozen=True)
class HypocoercivityRecord:
    """Auxiliary elliptic solution and the modified energy functional."""

    u: np.ndarray = field(repr=False)
    h_functional: float = math.nan
    beta0: float = 0.0


def _l2_norm_sq(values: np.ndarray, widths: np.ndarray) -> float:
    return float(np.dot(widths, values * values))


def electric_field(state: HermiteState, equilibrium: Equilibrium,
                   operators: TransportOperators | None = None) -> np.ndarray:
    """Self-consistent field deviation E_j = -sqrt(T0) (A omega)_j / sqrt(rho_j)."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    t0 = equilibrium.temperature
    return -np.sqrt(t0) * ops.apply_A(state.omega) / equilibrium.sqrt_rho


def energy(state: HermiteState, equilibrium: Equilibrium,
           operators: TransportOperators | None = None) -> float:
    """Discrete free energy of the deviation from equilibrium."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    widths = equilibrium.mesh.widths
    dev = state.coefficients
    coeff_part = float(np.sum((dev * dev) @ widths))
    flux = ops.apply_A(state.omega) / equilibrium.sqrt_rho
    return 0.5 * (coeff_part + _l2_norm_sq(flux, widths))


def dissipation_sum(state: HermiteState, equilibrium: Equilibrium,
                    eps: float, tau0: float) -> float:
    """Collisional dissipation (1/(eps*tau0)) sum_{k>=1} k ||D_k||^2."""
    widths = equilibrium.mesh.widths
    ks = np.arange(1, state.n_modes + 1, dtype=float)
    norms = (state.coefficients[1:] ** 2) @ widths
    return float(np.dot(ks, norms)) / (eps * tau0)


def mass_functional(state: HermiteState, equilibrium: Equilibrium) -> float:
    """Conserved mass  sum_j dx_j sqrt(rho_j) D_{0,j}  (stationary part plus
    the deviation's contribution)."""
    return equilibrium.mass + mass_deviation(state, equilibrium)


def mass_deviation(state: HermiteState, equilibrium: Equilibrium) -> float:
    """Mass carried by the stored deviation, sum_j dx_j sqrt(rho_j)
    (D_{0,j} - sqrt(rho_j)); exactly conserved by both substeps."""
    widths = equilibrium.mesh.widths
    return float(np.dot(widths, equilibrium.sqrt_rho * state.coefficients[0]))


def remainder(previous: HermiteState, current: HermiteState,
              equilibrium: Equilibrium, dt: float,
              operators: TransportOperators | None = None) -> float:
    """Numeric-dissipation remainder between two consecutive states."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    widths = equilibrium.mesh.widths
    d_diff = (current.coefficients - previous.coefficients) / dt
    coeff_part = float(np.sum((d_diff * d_diff) @ widths))
    flux = ops.apply_A(current.omega - previous.omega) / equilibrium.sqrt_rho / dt
    return 0.5 * (coeff_part + _l2_norm_sq(flux, widths))


def record(state: HermiteState, equilibrium: Equilibrium, eps: float,
           tau0: float, operators: TransportOperators | None = None,
           remainder_value: float = math.nan,
           h_functional: float = math.nan) -> DiagnosticsRecord:
    """Assemble the full diagnostics row for one state snapshot."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    widths = equilibrium.mesh.widths

    dev = state.coefficients
    mode_norms = (dev * dev) @ widths
    l2_rho_sq = float(mode_norms[0])
    l2_local_sq = float(np.sum(mode_norms[1:]))
    l2_f = math.sqrt(l2_rho_sq + l2_local_sq)

    flux = ops.apply_A(state.omega) / equilibrium.sqrt_rho
    field_sq = _l2_norm_sq(flux, widths)
    energy_val = 0.5 * (l2_rho_sq + l2_local_sq + field_sq)
    e_pot = equilibrium.temperature * field_sq

    e_vals = -np.sqrt(equilibrium.temperature) * flux
    spectrum = np.fft.rfft(e_vals) / e_vals.size
    n_avail = spectrum.size - 1
    modes = np.zeros(4)
    take = min(4, n_avail)
    modes[:take] = np.abs(spectrum[1:1 + take]) ** 2

    return DiagnosticsRecord(
        t=state.time,
        t_over_eps=state.time / eps,
        energy=energy_val,
        dissipation=dissipation_sum(state, equilibrium, eps, tau0),
        remainder=remainder_value,
        l2_f=l2_f,
        l2_local=math.sqrt(l2_local_sq),
        l2_rho=math.sqrt(l2_rho_sq),
        e_pot=e_pot,
        field_modes=modes,
        mass=mass_functional(state, equilibrium),
        h_functional=h_functional,
    )


def hypocoercivity_parts(state: HermiteState, equilibrium: Equilibrium,
                         operators: TransportOperators | None = None,
                         elliptic: EllipticSolver | None = None):
    """Auxiliary solution u, energy and transport cross term <A* D_1, u>.

    The modified energy for any coupling beta0 is then
    energy + beta0 * cross."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    solver = elliptic if elliptic is not None else EllipticSolver(equilibrium, ops)
    widths = equilibrium.mesh.widths
    u, _ = solver.solve(state.coefficients[0])
    cross = float(np.dot(widths, ops.apply_Astar(state.coefficients[1]) * u))
    return u, energy(state, equilibrium, ops), cross


def hypocoercivity(state: HermiteState, equilibrium: Equilibrium,
                   beta0: float, operators: TransportOperators | None = None,
                   elliptic: EllipticSolver | None = None) -> HypocoercivityRecord:
    """Modified energy H = E + beta0 <A* D_1, u> with A*A u = D_0 - sqrt(rho).

    u carries the sqrt(rho)-weighted zero-mean gauge; the solve shares the
    kernel/bordering policy of the Poisson operator.
    """
    if beta0 <= 0.0:
        raise ValueError("beta0 must be positive")
    u, e_val, cross = hypocoercivity_parts(state, equilibrium, operators,
                                           elliptic)
    return HypocoercivityRecord(u=u, h_functional=e_val + beta0 * cross,
                                beta0=beta0)


def equivalence_window(energy_value: float) -> tuple[float, float]:
    """Admissible range [E/2, 3E/2] of the modified energy at energy E."""
    return 0.5 * energy_value, 1.5 * energy_value


def calibrate_beta0(state: HermiteState, equilibrium: Equilibrium,
                    operators: TransportOperators | None = None,
                    elliptic: EllipticSolver | None = None,
                    start: float = 1.0, max_halvings: int = 60) -> float:
    """Halve beta0 from ``start`` until the equivalence window holds on the
    given state.  Returns a conservative default when the state is already
    at equilibrium (any beta0 works there)."""
    ops = operators if operators is not None else TransportOperators(equilibrium)
    solver = elliptic if elliptic is not None else EllipticSolver(equilibrium, ops)
    e_val = energy(state, equilibrium, ops)
    if e_val <= 0.0:
        return start / 16.0
    beta0 = start
    for _ in range(max_halvings):
        rec = hypocoercivity(state, equilibrium, beta0, ops, solver)
        lo, hi = equivalence_window(e_val)
        margin = 1e-12 * e_val
        if lo - margin <= rec.h_functional <= hi + margin:
            return beta0
        beta0 *= 0.5
    raise RuntimeError("beta0 calibration did not terminate")


def fit_decay_rate(times, values, window: tuple[float, float]) -> float:
    """Least-squares slope of log(value) against t inside the window,
    sign-flipped so that decaying series report positive rates."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    t_lo, t_hi = window
    mask = (times >= t_lo) & (times <= t_hi)
    if int(np.count_nonzero(mask)) < 10:
        raise InsufficientData(
            f"only {int(np.count_nonzero(mask))} samples in window "
            f"[{t_lo}, {t_hi}]; need at least 10")
    vals = values[mask]
    if np.any(vals <= 0.0):
        raise NonPositiveValues("values must be positive inside the window")
    slope = np.polyfit(times[mask], np.log(vals), 1)[0]
    return -float(slope)


def envelope_peaks(times, values):
    """Strict local maxima of a sampled series; returns (t_peaks, v_peaks).

    Used to fit decay rates of oscillatory quantities whose troughs pass
    near zero (potential energy of damped waves)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return times[:0], values[:0]
    interior = (values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:])
    idx = np.nonzero(interior)[0] + 1
    return times[idx], values[idx]
