import numpy as np
import pytest

from vpfp1d.equilibrium import from_potential
from vpfp1d.mesh import uniform_mesh
from vpfp1d.operators import (EllipticSolver, IncompatibleRHS, PoissonOperator,
                              SingularSystem, TransportOperators,
                              _BorderedSolver, bordering_vectors)


def _dense_transport(eq, star: bool):
    """Independent dense assembly straight from the stencil definition."""
    mesh = eq.mesh
    n = mesh.n_cells
    t0 = eq.temperature
    mat = np.zeros((n, n))
    for j in range(n):
        c = np.sqrt(t0) / (2.0 * mesh.widths[j])
        sgn = -1.0 if star else 1.0
        mat[j, (j + 1) % n] += sgn * c
        mat[j, (j - 1) % n] -= sgn * c
        mat[j, j] += -eq.e_field[j] / (2.0 * np.sqrt(t0))
    return mat


@pytest.fixture(scope="module")
def eq_sine():
    mesh = uniform_mesh(-6.0, 6.0, 64)
    return from_potential(mesh, lambda x: 0.2 * np.sin(np.pi * x / 6.0),
                          T0=1.0, mean_density=1.0)


@pytest.fixture(scope="module")
def eq_flat_odd():
    mesh = uniform_mesh(-6.0, 6.0, 33)
    return from_potential(mesh, np.zeros(33), T0=1.0, mean_density=1.0)


@pytest.fixture(scope="module")
def eq_flat_even():
    mesh = uniform_mesh(-6.0, 6.0, 64)
    return from_potential(mesh, np.zeros(64), T0=1.0, mean_density=1.0)


def test_sqrt_rho_in_kernel(eq_sine):
    ops = TransportOperators(eq_sine)
    out = ops.apply_A(eq_sine.sqrt_rho)
    assert np.max(np.abs(out)) <= 1e-15 * np.max(eq_sine.sqrt_rho)


def test_constants_in_kernel_on_flat_background(eq_flat_even):
    ops = TransportOperators(eq_flat_even)
    u = np.full(64, 2.5)
    assert np.all(ops.apply_A(u) == 0.0)
    assert np.all(ops.apply_Astar(u) == 0.0)


def test_hand_stencil_four_cells():
    # T0 = 1, dx = 1, E = 0, u = e_0:
    #   (A u)_j = (u_{j+1} - u_{j-1}) / 2  ->  (0, -1/2, 0, +1/2)
    mesh = uniform_mesh(0.0, 4.0, 4)
    eq = from_potential(mesh, np.zeros(4), T0=1.0, mean_density=1.0)
    ops = TransportOperators(eq)
    u = np.array([1.0, 0.0, 0.0, 0.0])
    assert np.allclose(ops.apply_A(u), [0.0, -0.5, 0.0, 0.5], atol=0.0)
    assert np.allclose(ops.apply_Astar(u), [0.0, 0.5, 0.0, -0.5], atol=0.0)


def test_matches_dense_oracle(eq_sine):
    ops = TransportOperators(eq_sine)
    dense_a = _dense_transport(eq_sine, star=False)
    dense_astar = _dense_transport(eq_sine, star=True)
    rng = np.random.default_rng(7)
    for _ in range(5):
        u = rng.standard_normal(64)
        assert np.allclose(ops.apply_A(u), dense_a @ u, rtol=1e-13, atol=1e-14)
        assert np.allclose(ops.apply_Astar(u), dense_astar @ u,
                           rtol=1e-13, atol=1e-14)
    assert np.allclose(ops.matrix_A().toarray(), dense_a, rtol=1e-15, atol=1e-16)
    assert np.allclose(ops.matrix_Astar().toarray(), dense_astar,
                       rtol=1e-15, atol=1e-16)


def test_adjointness_on_random_pairs(eq_sine):
    ops = TransportOperators(eq_sine)
    widths = eq_sine.mesh.widths
    rng = np.random.default_rng(11)
    for _ in range(200):
        u = rng.standard_normal(64)
        v = rng.standard_normal(64)
        lhs = float(np.dot(widths, ops.apply_A(u) * v))
        rhs = float(np.dot(widths, u * ops.apply_Astar(v)))
        bound = 1e-13 * np.linalg.norm(u) * np.linalg.norm(v)
        assert abs(lhs - rhs) <= bound


def test_poisson_positivity_and_kernel(eq_sine):
    poisson = PoissonOperator(eq_sine)
    widths = eq_sine.mesh.widths
    rng = np.random.default_rng(13)
    for _ in range(50):
        w = rng.standard_normal(64)
        quad = float(np.dot(widths, poisson.apply(w) * w))
        assert quad >= -1e-13 * float(np.dot(widths, w * w))
    kernel_res = poisson.apply(eq_sine.sqrt_rho)
    assert np.linalg.norm(kernel_res) <= 1e-13 * np.linalg.norm(eq_sine.sqrt_rho)


def test_energy_identity_hook(eq_sine):
    ops = TransportOperators(eq_sine)
    poisson = PoissonOperator(eq_sine, ops)
    widths = eq_sine.mesh.widths
    rng = np.random.default_rng(17)
    w = rng.standard_normal(64)
    quad = float(np.dot(widths, poisson.apply(w) * w))
    flux = ops.apply_A(w) / eq_sine.sqrt_rho
    norm = float(np.dot(widths, flux * flux))
    assert quad == pytest.approx(norm, rel=1e-12)


def test_solve_zero_rhs(eq_sine):
    poisson = PoissonOperator(eq_sine)
    omega, mult = poisson.solve(np.zeros(64))
    assert np.allclose(omega, 0.0, atol=1e-14)
    assert mult == pytest.approx(0.0, abs=1e-14)


def test_solve_equilibrium_rhs(eq_sine):
    # rhs = D_inf_0 - sqrt(rho) = 0: the well-balanced Poisson solve
    poisson = PoissonOperator(eq_sine)
    rhs = eq_sine.sqrt_rho - eq_sine.sqrt_rho
    omega, _ = poisson.solve(rhs)
    assert np.allclose(omega, 0.0, atol=1e-14)


def test_solve_against_discrete_symbol(eq_flat_odd):
    # single Fourier mode on a flat background: exact eigenvector of the
    # wide-stencil composition with symbol sin^2(k dx)/dx^2
    mesh = eq_flat_odd.mesh
    k1 = 2.0 * np.pi / mesh.length
    delta = 1e-3
    rhs = delta * np.cos(k1 * mesh.centers)
    dx = mesh.widths[0]
    symbol = np.sin(k1 * dx) ** 2 / dx ** 2
    poisson = PoissonOperator(eq_flat_odd)
    omega, mult = poisson.solve(rhs)
    assert np.allclose(omega, rhs / symbol, rtol=1e-10)
    assert abs(mult) < 1e-12


def test_solve_against_dense_pseudoinverse(eq_flat_odd):
    mesh = eq_flat_odd.mesh
    k1 = 2.0 * np.pi / mesh.length
    rhs = 1e-3 * np.cos(k1 * mesh.centers) + 5e-4 * np.sin(2 * k1 * mesh.centers)
    poisson = PoissonOperator(eq_flat_odd)
    dense = poisson.ops.poisson_matrix().toarray()
    oracle = np.linalg.pinv(dense, rcond=1e-10) @ rhs
    omega, _ = poisson.solve(rhs)
    assert np.allclose(omega, oracle, rtol=1e-9, atol=1e-12)


def test_incompatible_rhs_rejected(eq_sine):
    poisson = PoissonOperator(eq_sine)
    with pytest.raises(IncompatibleRHS):
        poisson.solve(np.ones(64))


def test_bordering_policy(eq_sine, eq_flat_odd, eq_flat_even):
    # parity gauge on every even mesh: the odd-even near-null vector exists
    # for smooth non-uniform backgrounds too (alternating sums of smooth
    # samples are spectrally small)
    assert len(bordering_vectors(eq_sine, "omega")) == 2      # even mesh
    assert len(bordering_vectors(eq_flat_odd, "omega")) == 1  # odd mesh
    assert len(bordering_vectors(eq_flat_even, "omega")) == 2
    with pytest.raises(ValueError):
        bordering_vectors(eq_sine, "bogus")


def test_even_flat_solve_well_posed(eq_flat_even):
    # without the parity constraint this system is singular
    mesh = eq_flat_even.mesh
    k1 = 2.0 * np.pi / mesh.length
    rhs = 1e-3 * np.cos(k1 * mesh.centers)
    poisson = PoissonOperator(eq_flat_even)
    dx = mesh.widths[0]
    symbol = np.sin(k1 * dx) ** 2 / dx ** 2
    omega, _ = poisson.solve(rhs)
    assert np.allclose(omega, rhs / symbol, rtol=1e-10)
    # both gauges hold
    alt = np.where(np.arange(64) % 2 == 0, 1.0, -1.0)
    widths = mesh.widths
    assert abs(np.dot(widths, omega / eq_flat_even.sqrt_rho)) < 1e-12
    assert abs(np.dot(widths, alt * omega / eq_flat_even.sqrt_rho)) < 1e-12


def test_missing_parity_constraint_detected(eq_flat_even):
    # white box: the single-constraint bordered system on an even flat mesh
    # keeps a null vector and must be reported as singular
    ops = TransportOperators(eq_flat_even)
    with pytest.raises(SingularSystem):
        solver = _BorderedSolver(ops.poisson_matrix(),
                                 [1.0 / eq_flat_even.sqrt_rho],
                                 eq_flat_even.mesh.widths)
        mesh = eq_flat_even.mesh
        k1 = 2.0 * np.pi / mesh.length
        solver.solve(1e-3 * np.cos(k1 * mesh.centers))


def test_elliptic_solver_gauge(eq_sine):
    solver = EllipticSolver(eq_sine)
    rng = np.random.default_rng(23)
    raw = rng.standard_normal(64)
    widths = eq_sine.mesh.widths
    # project the rhs onto the compatible subspace
    sr = eq_sine.sqrt_rho
    raw -= sr * np.dot(widths, sr * raw) / np.dot(widths, sr * sr)
    u, mults = solver.solve(raw)
    ops = TransportOperators(eq_sine)
    achieved = ops.apply_Astar(ops.apply_A(u))
    gauge = np.dot(widths, u * sr)
    assert abs(gauge) < 1e-12
    # the defect lies in the span of the bordering columns
    corr = achieved - raw
    cols = np.column_stack(solver.columns)
    fit, *_ = np.linalg.lstsq(cols, corr, rcond=None)
    assert np.max(np.abs(corr - cols @ fit)) < 1e-9
