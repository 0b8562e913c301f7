import math

import numpy as np
import pytest

from vpfp1d.diagnostics import (InsufficientData, NonPositiveValues,
                                calibrate_beta0, electric_field, energy,
                                envelope_peaks, equivalence_window,
                                fit_decay_rate, hypocoercivity,
                                mass_functional, record)
from vpfp1d.equilibrium import from_potential
from vpfp1d.hermite import (HermiteBasis, equilibrium_state, reconstruct,
                            state_from_mode_coefficients)
from vpfp1d.integrator import LINEARIZED, SimulationParams, run
from vpfp1d.mesh import uniform_mesh
from vpfp1d.operators import TransportOperators


@pytest.fixture(scope="module")
def eq():
    mesh = uniform_mesh(-6.0, 6.0, 64)
    return from_potential(mesh, lambda x: 0.2 * np.sin(np.pi * x / 6.0),
                          T0=1.0, mean_density=1.0)


@pytest.fixture(scope="module")
def perturbed_run(eq):
    """A short linearized backward-Euler run with diagnostics."""
    state = state_from_mode_coefficients(
        {0: lambda x: 1.0 + 0.01 * np.cos(np.pi * x / 6.0)}, eq, 24)
    params = SimulationParams(eps=1.0, tau0=100.0, dt=0.1, t_end=5.0,
                              n_modes=24, integrator=LINEARIZED,
                              linearized_scheme="backward_euler",
                              track_hypocoercivity=True)
    info = {}
    final, records = run(params, eq, state, info=info)
    return final, records, info


def test_record_at_equilibrium(eq):
    state = equilibrium_state(eq, 8)
    rec = record(state, eq, eps=1.0, tau0=1.0)
    assert rec.energy == 0.0
    assert rec.l2_f == 0.0
    assert rec.l2_local == 0.0
    assert rec.l2_rho == 0.0
    assert rec.e_pot == 0.0
    assert rec.dissipation == 0.0
    assert rec.mass == pytest.approx(eq.mass, rel=1e-14)
    assert np.all(rec.field_modes == 0.0)


def test_energy_identity_along_run(perturbed_run):
    final, records, _ = perturbed_run
    dt = 0.1
    for prev, cur in zip(records[:-1], records[1:]):
        balance = (cur.energy - prev.energy) / dt + dt * cur.remainder \
            + cur.dissipation
        scale = max(abs(cur.energy - prev.energy) / dt, dt * cur.remainder,
                    cur.dissipation)
        assert abs(balance) <= 1e-10 * scale
        assert cur.remainder >= 0.0


def test_l2_decomposition(perturbed_run):
    _, records, _ = perturbed_run
    for rec in records:
        assert rec.l2_f ** 2 == pytest.approx(
            rec.l2_local ** 2 + rec.l2_rho ** 2, rel=1e-12)


def test_potential_energy_consistency(eq, perturbed_run):
    final, _, _ = perturbed_run
    ops = TransportOperators(eq)
    flux = ops.apply_A(final.omega) / eq.sqrt_rho
    expected = eq.temperature * float(np.dot(eq.mesh.widths, flux * flux))
    rec = record(final, eq, eps=1.0, tau0=100.0)
    assert rec.e_pot == pytest.approx(expected, rel=1e-12)
    e_field = electric_field(final, eq, ops)
    direct = float(np.dot(eq.mesh.widths, e_field ** 2))
    assert rec.e_pot == pytest.approx(direct, rel=1e-12)


def test_field_modes_match_direct_dft(eq, perturbed_run):
    final, _, _ = perturbed_run
    rec = record(final, eq, eps=1.0, tau0=100.0)
    e_vals = electric_field(final, eq)
    n = e_vals.size
    for m in range(1, 5):
        coef = np.sum(e_vals * np.exp(-2j * np.pi * m * np.arange(n) / n)) / n
        assert rec.field_modes[m - 1] == pytest.approx(abs(coef) ** 2,
                                                       rel=1e-12, abs=1e-300)


def test_parseval_between_records_and_reconstruction(eq):
    from numpy.polynomial.hermite import hermgauss
    state = state_from_mode_coefficients(
        {0: lambda x: 1.0 + 0.01 * np.cos(np.pi * x / 6.0),
         2: lambda x: 0.004 * np.sin(np.pi * x / 3.0)}, eq, 12)
    rec = record(state, eq, eps=1.0, tau0=1.0)
    s, w = hermgauss(80)
    v = np.sqrt(2.0) * s
    basis = HermiteBasis(temperature=1.0, max_mode=12)
    f = reconstruct(state, eq, v)
    f_inf = reconstruct(equilibrium_state(eq, 12), eq, v)
    g = (f - f_inf) ** 2 / (eq.rho[:, None] * basis.maxwellian(v)[None, :])
    v_weights = w * np.sqrt(2.0) * np.exp(s * s)
    quad_norm = math.sqrt(float(eq.mesh.widths @ (g @ v_weights)))
    assert quad_norm == pytest.approx(rec.l2_f, rel=1e-8)


def test_hypocoercivity_zero_at_equilibrium(eq):
    state = equilibrium_state(eq, 8)
    rec = hypocoercivity(state, eq, beta0=0.25)
    assert np.allclose(rec.u, 0.0, atol=1e-13)
    assert rec.h_functional == pytest.approx(0.0, abs=1e-15)


def test_hypocoercivity_gauge(eq, perturbed_run):
    final, _, _ = perturbed_run
    rec = hypocoercivity(final, eq, beta0=0.125)
    gauge = float(np.dot(eq.mesh.widths, rec.u * eq.sqrt_rho))
    assert abs(gauge) <= 1e-12 * max(1.0, float(np.max(np.abs(rec.u))))


def test_equivalence_sweep_by_halving(eq):
    state = state_from_mode_coefficients(
        {0: lambda x: 1.0 + 0.02 * np.cos(np.pi * x / 6.0),
         1: lambda x: 0.01 * np.sin(np.pi * x / 6.0)}, eq, 8)
    from vpfp1d.integrator import mean_correct
    from vpfp1d.operators import PoissonOperator
    mean_correct(state, eq)
    state.omega, _ = PoissonOperator(eq).solve(state.coefficients[0])
    e_val = energy(state, eq)
    beta0 = 1.0
    ok = False
    for _ in range(40):
        h_val = hypocoercivity(state, eq, beta0).h_functional
        lo, hi = equivalence_window(e_val)
        if lo <= h_val <= hi:
            ok = True
            break
        beta0 *= 0.5
    assert ok
    assert calibrate_beta0(state, eq) >= beta0 * 0.5


def test_hypocoercivity_monotone_along_run(perturbed_run):
    _, records, info = perturbed_run
    h_vals = [rec.h_functional for rec in records]
    assert all(math.isfinite(h) for h in h_vals)
    # the adaptive coupling must settle, then decay monotonically
    settle = info["beta0_settled_index"]
    assert settle < len(records) - 5
    tail = h_vals[settle:]
    for prev, cur in zip(tail[:-1], tail[1:]):
        assert cur <= prev * (1.0 + 1e-12) + 1e-300
    # sandwich against the energy at every recorded step
    for rec in records:
        lo, hi = equivalence_window(rec.energy)
        margin = 1e-12 * max(rec.energy, 1e-300)
        assert lo - margin <= rec.h_functional <= hi + margin


def test_fit_decay_rate_pure_exponential():
    t = np.arange(0.0, 20.0, 0.1)
    assert fit_decay_rate(t, np.exp(-0.355 * t), (0.0, 20.0)) == \
        pytest.approx(0.355, abs=1e-10)
    assert fit_decay_rate(t, 5.0 * np.exp(-0.004 * t), (0.0, 20.0)) == \
        pytest.approx(0.004, abs=1e-10)


def test_fit_decay_rate_oscillatory():
    t = np.arange(0.0, 20.0, 0.01)
    vals = np.exp(-t) * (2.0 + np.cos(10.0 * t))
    rate = fit_decay_rate(t, vals, (0.0, 20.0))
    assert rate == pytest.approx(1.0, rel=0.05)


def test_fit_decay_rate_errors():
    t = np.arange(0.0, 1.0, 0.2)
    with pytest.raises(InsufficientData):
        fit_decay_rate(t, np.exp(-t), (0.0, 1.0))
    t = np.arange(0.0, 10.0, 0.1)
    vals = np.exp(-t)
    vals[5] = 0.0
    with pytest.raises(NonPositiveValues):
        fit_decay_rate(t, vals, (0.0, 10.0))


def test_envelope_peaks():
    t = np.linspace(0.0, 10.0, 2001)
    vals = np.exp(-0.3 * t) * (1.1 + np.cos(8.0 * t))
    tp, vp = envelope_peaks(t, vals)
    assert tp.size >= 10
    rate = fit_decay_rate(tp, vp, (0.0, 10.0))
    assert rate == pytest.approx(0.3, rel=0.05)


def test_mass_functional_definition(eq):
    state = equilibrium_state(eq, 4)
    state.coefficients[0] += 0.01 * np.cos(np.pi * eq.mesh.centers / 6.0)
    expected = eq.mass + float(
        np.dot(eq.mesh.widths, eq.sqrt_rho * state.coefficients[0]))
    assert mass_functional(state, eq) == expected
