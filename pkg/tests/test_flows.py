import numpy as np
import pytest

from vmsplit import cases
from vmsplit.advection import RotationAngleTooLarge
from vmsplit.diagnostics import poisson_residual
from vmsplit.flows import (
    FieldState,
    SimState,
    flow_electric,
    flow_magnetic,
    flow_transport,
    phi_kernel,
)
from vmsplit.grid import forward_transform, moment


@pytest.fixture
def landau_state(landau_grid):
    return cases.init_landau(landau_grid, alpha=0.5)


def zero_fields(grid):
    return FieldState(np.zeros(grid.nx), np.zeros(grid.nx), np.zeros(grid.nx))


class TestFlowElectric:
    def test_zero_field_identity(self, landau_grid, rng):
        f = rng.random(landau_grid.shape())
        state = SimState(f, zero_fields(landau_grid), 0.0)
        out = flow_electric(state, 0.1, landau_grid)
        assert np.array_equal(out.f, f)
        assert np.all(out.fields.b == 0.0)

    def test_magnetic_induction_analytic(self, landau_grid, rng):
        g = landau_grid
        fields = FieldState(
            np.zeros(g.nx), np.sin(g.k0 * g.x), np.zeros(g.nx)
        )
        state = SimState(np.zeros(g.shape()), fields, 0.0)
        dt = 0.1
        out = flow_electric(state, dt, g)
        expect = -dt * g.k0 * np.cos(g.k0 * g.x)
        assert np.max(np.abs(out.fields.b - expect)) < 1e-12
        assert np.array_equal(out.fields.e2, fields.e2)

    def test_electric_field_frozen(self, landau_state, landau_grid):
        out = flow_electric(landau_state, 0.1, landau_grid)
        assert np.array_equal(out.fields.e1, landau_state.fields.e1)
        assert np.array_equal(out.fields.e2, landau_state.fields.e2)

    def test_preserves_poisson_residual(self, landau_state, landau_grid):
        assert poisson_residual(landau_state, landau_grid) < 1e-13
        out = flow_electric(landau_state, 0.1, landau_grid)
        assert poisson_residual(out, landau_grid) < 1e-12

    def test_reversibility_fields_exact(self, landau_state, landau_grid):
        fwd = flow_electric(landau_state, 0.1, landau_grid)
        back = flow_electric(fwd, -0.1, landau_grid)
        assert np.max(np.abs(back.fields.b - landau_state.fields.b)) < 1e-13
        # f returns up to one round trip of advection error
        assert np.abs(back.f - landau_state.f).mean() < 1e-5


class TestFlowMagnetic:
    def test_zero_b_identity(self, landau_grid, rng):
        f = rng.random(landau_grid.shape())
        state = SimState(f, zero_fields(landau_grid), 0.0)
        out = flow_magnetic(state, 0.1, landau_grid)
        assert np.array_equal(out.f, f)
        assert np.all(out.fields.e2 == 0.0)

    def test_e2_update_analytic(self, landau_grid):
        g = landau_grid
        beta = 1e-3
        fields = FieldState(
            np.zeros(g.nx), np.zeros(g.nx), beta * np.cos(g.k0 * g.x)
        )
        state = SimState(np.zeros(g.shape()), fields, 0.0)
        dt = 0.1
        out = flow_magnetic(state, dt, g)
        expect = dt * beta * g.k0 * np.sin(g.k0 * g.x)
        assert np.max(np.abs(out.fields.e2 - expect)) < 1e-12
        assert np.array_equal(out.fields.b, fields.b)

    def test_isotropic_gaussian_rotation_invariance(self, landau_grid):
        g = landau_grid
        fv = np.exp(-0.5 * (g.v1c[:, None] ** 2 + g.v2c[None, :] ** 2)) / (2 * np.pi)
        f = np.broadcast_to(fv, g.shape()).copy()
        fields = FieldState(np.zeros(g.nx), np.zeros(g.nx), np.full(g.nx, 0.5))
        out = flow_magnetic(SimState(f, fields, 0.0), 0.2, g)
        # rotation invariance up to the kernel's truncation error
        assert np.abs(out.f - f).mean() < 1e-5

    def test_angle_guard(self, landau_grid):
        fields = FieldState(np.zeros(landau_grid.nx), np.zeros(landau_grid.nx), np.full(landau_grid.nx, 1.0))
        state = SimState(np.zeros(landau_grid.shape()), fields, 0.0)
        with pytest.raises(RotationAngleTooLarge):
            flow_magnetic(state, 3.5, landau_grid)

    def test_density_preserved(self, landau_grid):
        g = landau_grid
        fv = np.exp(-0.5 * (g.v1c[:, None] ** 2 + g.v2c[None, :] ** 2))
        f = fv[None] * (1 + 0.3 * np.cos(g.k0 * g.x))[:, None, None]
        fields = FieldState(np.zeros(g.nx), np.zeros(g.nx), 0.3 * np.cos(g.k0 * g.x))
        out = flow_magnetic(SimState(f, fields, 0.0), 0.2, g)
        d_in = moment(f, g, "1")
        d_out = moment(out.f, g, "1")
        assert np.max(np.abs(d_out - d_in)) < 1e-12 * d_in.max()


class TestFlowTransport:
    def test_zero_duration_identity(self, landau_state, landau_grid):
        out = flow_transport(landau_state, 0.0, landau_grid)
        assert np.max(np.abs(out.f - landau_state.f)) < 1e-15
        assert np.max(np.abs(out.fields.e1 - landau_state.fields.e1)) < 1e-15

    def test_uniform_f_only_mean_current(self, landau_grid):
        g = landau_grid
        fv = np.exp(-0.5 * ((g.v1c[:, None] - 0.5) ** 2 + (g.v2c[None, :] - 0.25) ** 2))
        fv = fv / (fv.sum() * g.dv1 * g.dv2)
        f = np.broadcast_to(fv, g.shape()).copy()
        state = SimState(f, zero_fields(g), 0.0)
        dt = 0.25
        out = flow_transport(state, dt, g)
        assert np.max(np.abs(out.f - f)) < 1e-14
        assert np.max(np.abs(out.fields.e1)) < 1e-14  # mode 0 pinned
        j2 = (moment(f, g, "v2") * g.dx).sum() / g.lx
        assert np.max(np.abs(out.fields.e2 + dt * j2)) < 1e-13

    def test_poisson_residual_machine_precision(self, landau_state, landau_grid):
        out = flow_transport(landau_state, 0.05, landau_grid)
        assert poisson_residual(out, landau_grid) < 1e-12

    def test_reversibility(self, landau_state, landau_grid):
        fwd = flow_transport(landau_state, 0.05, landau_grid)
        back = flow_transport(fwd, -0.05, landau_grid)
        assert np.max(np.abs(back.f - landau_state.f)) < 1e-12
        assert np.max(np.abs(back.fields.e1 - landau_state.fields.e1)) < 1e-12
        assert np.max(np.abs(back.fields.e2 - landau_state.fields.e2)) < 1e-12

    def test_exact_in_time(self, landau_state, landau_grid):
        one = flow_transport(landau_state, 0.05, landau_grid)
        two = flow_transport(flow_transport(landau_state, 0.025, landau_grid), 0.025, landau_grid)
        assert np.max(np.abs(one.f - two.f)) < 1e-12
        assert np.max(np.abs(one.fields.e1 - two.fields.e1)) < 1e-12
        assert np.max(np.abs(one.fields.e2 - two.fields.e2)) < 1e-12

    def test_b_untouched(self, landau_grid, landau_state):
        landau_state.fields.b[:] = 0.123
        out = flow_transport(landau_state, 0.05, landau_grid)
        assert np.array_equal(out.fields.b, landau_state.fields.b)

    def test_e2_update_against_time_quadrature_oracle(self, landau_state, landau_grid):
        # independent check of the exactly-integrated v2-current: integrate
        # E2' = -J2(t) for the streaming solution with many small substeps
        g = landau_grid
        dt = 0.05
        out = flow_transport(landau_state, dt, g)

        fbar = landau_state.f.mean(axis=0)
        pert_hat = forward_transform(landau_state.f - fbar[None])
        pert_hat[0] = 0.0
        h = (pert_hat * g.v2c[None, None, :]).sum(axis=2) * g.dv2
        h[0] = (fbar * g.v2c[None, :]).sum(axis=1) * g.dv2
        kv = np.outer(g.wavenumbers, g.v1c)

        n_sub = 10_000
        s_mid = (np.arange(n_sub) + 0.5) * (dt / n_sub)
        e2_hat = forward_transform(landau_state.fields.e2).astype(complex)
        total = np.zeros(g.nx, dtype=complex)
        for s in s_mid:  # midpoint rule in time on the exactly advected f
            total += (np.exp(-1j * kv * s) * h).sum(axis=1) * g.dv1
        e2_hat -= total * (dt / n_sub)
        e2_oracle = np.fft.ifft(e2_hat * g.nx).real
        scale = max(np.max(np.abs(out.fields.e2)), 1e-30)
        assert np.max(np.abs(out.fields.e2 - e2_oracle)) / scale < 1e-9


class TestPhiKernel:
    def test_zero_argument(self):
        assert phi_kernel(np.array([0.0]))[0] == pytest.approx(1.0, abs=1e-15)

    def test_branch_agreement_at_crossover(self):
        z = np.array([0.0099999, 0.0100001])
        closed = (1.0 - np.exp(-1j * z)) / (1j * z)
        series = phi_kernel(z)
        assert np.max(np.abs(series - closed) / np.abs(closed)) < 1e-13

    def test_taylor_expansion(self):
        z = np.array([1e-4])
        expect = 1.0 - 0.5j * z - z**2 / 6.0
        assert abs(phi_kernel(z)[0] - expect[0]) < 1e-13

    def test_against_quadrature(self):
        # phi(z) is the average of exp(-i z s) over s in [0, 1]
        for z in (0.005, 0.5, 3.0):
            s = (np.arange(20000) + 0.5) / 20000
            ref = np.exp(-1j * z * s).mean()
            assert abs(phi_kernel(np.array([z]))[0] - ref) < 1e-8
