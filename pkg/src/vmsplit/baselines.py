"""Two literature integrators used for comparison studies.

Both advance Maxwell's equations on a staggered time mesh (E at integer
steps, B at half steps) and the distribution function with a Strang
substep: half an x-transport, a full velocity step with frozen fields,
half an x-transport.  They differ in how the current entering Ampere's
law is computed:

* Mangeney-style predictor-corrector: trapezoidal average of the moment
  currents J^n and J^{n+1}.  Second order, but the discrete Gauss law
  drifts over time, which is exactly what the comparison is meant to show.
* VALIS: the current is extracted from the two spectral x-transport
  half-steps as an exact time average, which makes the discrete continuity
  equation rho^{n+1} = rho^n - ik dt J^{n+1/2} an identity and preserves
  the Gauss law to roundoff.

The velocity substep reuses the same shift and rotation kernels as the
Hamiltonian flows, so any difference between the schemes isolates the
field-coupling strategy rather than the advection method.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.fft

from . import advection
from .flows import FieldState, SimState, phi_kernel
from .grid import PhaseSpaceGrid, fft_workers, forward_transform, moment, spectral_derivative

BASELINE_KINDS = ("mangeney", "valis")


@dataclass
class StaggeredState:
    """Fields at time n with the magnetic field lagged to n - 1/2."""

    f: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    b_half: np.ndarray
    time: float


def bootstrap(state: SimState, dt: float, grid: PhaseSpaceGrid) -> StaggeredState:
    """Stagger an unstaggered state: B^{-1/2} = B + (dt/2) dE2/dx."""
    b_half = state.fields.b + 0.5 * dt * spectral_derivative(state.fields.e2, grid)
    return StaggeredState(
        f=state.f.copy(),
        e1=state.fields.e1.copy(),
        e2=state.fields.e2.copy(),
        b_half=b_half,
        time=state.time,
    )


def synchronize(stag: StaggeredState, dt: float, grid: PhaseSpaceGrid) -> SimState:
    """Unstagger: B^n = B^{n-1/2} - (dt/2) dE2^n/dx (inverse of bootstrap)."""
    b = stag.b_half - 0.5 * dt * spectral_derivative(stag.e2, grid)
    return SimState(stag.f, FieldState(stag.e1.copy(), stag.e2.copy(), b), stag.time)


def _stream(f: np.ndarray, tau: float, grid: PhaseSpaceGrid, with_currents: bool = False):
    """Exact x-transport of f over tau; optionally the time-averaged currents.

    The currents are the spectral averages (1/tau) int_0^tau J_hat dt of
    the streaming solution, J1_hat = int v1 f_hat phi(k v1 tau) dv and the
    v2-weighted analogue, which are exactly what the continuity equation
    telescopes through.  The x-average of f passes through untouched so
    roundoff scales with the perturbation only.
    """
    nx = grid.nx
    workers = fft_workers()
    fbar = f.mean(axis=0)
    pert_hat = scipy.fft.fft(f - fbar[None, :, :], axis=0, workers=workers) / nx
    pert_hat[0] = 0.0

    j1_hat = j2_hat = None
    if with_currents:
        phi = phi_kernel(np.outer(grid.wavenumbers, grid.v1c) * tau)  # (nx, nv1)
        g = pert_hat.sum(axis=2) * grid.dv2
        g[0] = (fbar * grid.dv2).sum(axis=1)
        h = (pert_hat * grid.v2c[None, None, :]).sum(axis=2) * grid.dv2
        h[0] = (fbar * grid.v2c[None, :]).sum(axis=1) * grid.dv2
        j1_hat = (phi * grid.v1c[None, :] * g).sum(axis=1) * grid.dv1
        j2_hat = (phi * h).sum(axis=1) * grid.dv1

    phase = np.exp(-1j * np.outer(grid.wavenumbers, grid.v1c) * tau)
    pert_hat *= phase[:, :, None]
    out = fbar[None, :, :] + scipy.fft.ifft(pert_hat * nx, axis=0, workers=workers).real
    if with_currents:
        return out, j1_hat, j2_hat
    return out


def _velocity_substep(
    f: np.ndarray,
    e1: np.ndarray,
    e2: np.ndarray,
    b: np.ndarray,
    dt: float,
    grid: PhaseSpaceGrid,
    method: str,
    rotation: str,
) -> np.ndarray:
    """Strang shift-rotate-shift velocity step with frozen fields."""
    f = advection.shift_v(f, 0.5 * dt * e1, 0.5 * dt * e2, grid, method=method)
    f = advection.rotate_velocity(f, dt * b, grid, method=method, mode=rotation)
    return advection.shift_v(f, 0.5 * dt * e1, 0.5 * dt * e2, grid, method=method)


def vlasov_strang_substep(
    f: np.ndarray,
    e1: np.ndarray,
    e2: np.ndarray,
    b: np.ndarray,
    dt: float,
    grid: PhaseSpaceGrid,
    method: str = "spline",
    rotation: str = "shears",
) -> np.ndarray:
    """One full Vlasov step with fields frozen at the half-time level."""
    f = _stream(f, 0.5 * dt, grid)
    f = _velocity_substep(f, e1, e2, b, dt, grid, method, rotation)
    return _stream(f, 0.5 * dt, grid)


def _half_advance_fields(stag: StaggeredState, dt: float, grid: PhaseSpaceGrid):
    """Shared predictor: B to n+1/2 and E to n+1/2 using the moment currents."""
    j1n = moment(stag.f, grid, "v1")
    j2n = moment(stag.f, grid, "v2")
    b_next = stag.b_half - dt * spectral_derivative(stag.e2, grid)
    e2_half = (
        stag.e2
        - 0.5 * dt * spectral_derivative(0.5 * (stag.b_half + b_next), grid)
        - 0.5 * dt * j2n
    )
    e1_half = stag.e1 - 0.5 * dt * j1n
    return j1n, j2n, b_next, e1_half, e2_half


def _project_zero_mean(e1: np.ndarray) -> np.ndarray:
    return e1 - e1.mean()


def step_mangeney(
    stag: StaggeredState,
    dt: float,
    grid: PhaseSpaceGrid,
    method: str = "spline",
    rotation: str = "shears",
) -> StaggeredState:
    """Predictor-corrector step; second order, not charge conserving."""
    j1n, j2n, b_next, e1_half, e2_half = _half_advance_fields(stag, dt, grid)
    f_new = vlasov_strang_substep(
        stag.f, e1_half, e2_half, b_next, dt, grid, method, rotation
    )
    j1n1 = moment(f_new, grid, "v1")
    j2n1 = moment(f_new, grid, "v2")
    e2_new = stag.e2 - dt * spectral_derivative(b_next, grid) - 0.5 * dt * (j2n + j2n1)
    e1_new = _project_zero_mean(stag.e1 - 0.5 * dt * (j1n + j1n1))
    return StaggeredState(f_new, e1_new, e2_new, b_next, stag.time + dt)


def step_valis(
    stag: StaggeredState,
    dt: float,
    grid: PhaseSpaceGrid,
    method: str = "spline",
    rotation: str = "shears",
) -> StaggeredState:
    """Charge-conserving step with spectrally time-averaged currents."""
    _, _, b_next, e1_half, e2_half = _half_advance_fields(stag, dt, grid)

    f_star, j1_s, j2_s = _stream(stag.f, 0.5 * dt, grid, with_currents=True)
    f_ss = _velocity_substep(f_star, e1_half, e2_half, b_next, dt, grid, method, rotation)
    f_new, j1_ss, j2_ss = _stream(f_ss, 0.5 * dt, grid, with_currents=True)

    j1_half = 0.5 * (j1_s + j1_ss)
    j2_half = 0.5 * (j2_s + j2_ss)

    workers = fft_workers()
    e1_hat = scipy.fft.fft(stag.e1, workers=workers) / grid.nx - dt * j1_half
    e1_hat[0] = 0.0
    e1_new = scipy.fft.ifft(e1_hat * grid.nx, workers=workers).real
    j2_real = scipy.fft.ifft(j2_half * grid.nx, workers=workers).real
    e2_new = stag.e2 - dt * spectral_derivative(b_next, grid) - dt * j2_real
    return StaggeredState(f_new, e1_new, e2_new, b_next, stag.time + dt)


_STEPPERS: dict[str, Callable] = {"mangeney": step_mangeney, "valis": step_valis}


def integrate(
    kind: str,
    state: SimState,
    dt: float,
    t_final: float,
    grid: PhaseSpaceGrid,
    observer: Callable[[int, SimState], None] | None = None,
    observe_every: int = 1,
    method: str = "spline",
    rotation: str = "shears",
) -> SimState:
    """Run a staggered baseline to t_final, observing synchronized states.

    A final partial step, when needed, restaggers at the reduced step size
    (the leapfrog pairing is only defined for a constant dt).
    """
    if kind not in BASELINE_KINDS:
        raise ValueError(f"unknown baseline {kind!r}")
    if t_final < state.time:
        raise ValueError("t_final lies before the current state time")
    stepper = _STEPPERS[kind]
    t0 = state.time
    n_whole = int(math.floor((t_final - t0) / dt + 1e-9))
    remainder = t_final - t0 - n_whole * dt

    if observer is not None:
        observer(0, state)
    stag = bootstrap(state, dt, grid)
    for i in range(1, n_whole + 1):
        stag = stepper(stag, dt, grid, method, rotation)
        stag.time = t0 + i * dt
        if observer is not None and (
            i % observe_every == 0 or (i == n_whole and remainder <= 1e-12 * dt)
        ):
            observer(i, synchronize(stag, dt, grid))
    final = synchronize(stag, dt, grid)
    if remainder > 1e-12 * dt:
        stag = bootstrap(final, remainder, grid)
        stag = stepper(stag, remainder, grid, method, rotation)
        stag.time = t_final
        final = synchronize(stag, remainder, grid)
        if observer is not None:
            observer(n_whole + 1, final)
    return final
