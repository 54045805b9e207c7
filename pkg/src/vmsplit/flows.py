"""The three exact sub-flows of the split Vlasov-Maxwell system.

The full system is advanced by composing three subsystems, each generated
by one term of the total energy (electric, magnetic, kinetic) and each
solvable exactly in time:

* :func:`flow_electric`  - velocity kick f(x, v) <- f(x, v - t E(x)) plus
  magnetic induction B <- B - t dE2/dx; E itself is frozen.
* :func:`flow_magnetic`  - velocity-plane rotation by angle t B(x) plus
  E2 <- E2 - t dB/dx; B itself is frozen.
* :func:`flow_transport` - free streaming in x, solved exactly per Fourier
  mode, with the electric field accumulated from the exactly time-integrated
  current so that the discrete Poisson identity ik E1_k = rho_k telescopes
  from one step to the next.

Only the velocity translations inside the first two flows are approximate
(module :mod:`vmsplit.advection`); everything else is exact in time and in x.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

from . import advection
from .grid import PhaseSpaceGrid, fft_workers, spectral_derivative


@dataclass
class FieldState:
    """Electric field components and magnetic field on the spatial nodes."""

    e1: np.ndarray
    e2: np.ndarray
    b: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(self.e1.copy(), self.e2.copy(), self.b.copy())


@dataclass
class SimState:
    """Distribution function (nx, nv1, nv2), fields, and current time."""

    f: np.ndarray
    fields: FieldState
    time: float

    def copy(self) -> "SimState":
        return SimState(self.f.copy(), self.fields.copy(), self.time)


def phi_kernel(z: np.ndarray) -> np.ndarray:
    """(1 - exp(-i z)) / (i z) with a series branch near z = 0.

    This is the time average of exp(-i z s) over s in [0, 1]; it appears in
    every exactly-integrated current.  Below |z| = 1e-2 the closed form
    loses ~eps/|z| digits to cancellation, so a Taylor expansion through
    z^5 is used there; the two branches agree to better than 1e-14 in
    relative terms at the crossover.
    """
    z = np.asarray(z, dtype=np.float64)
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)  # safe divisor
    closed = (1.0 - np.exp(-1j * zs)) / (1j * zs)
    z2 = z * z
    series = (
        1.0
        - 0.5j * z
        - z2 / 6.0
        + 1j * z2 * z / 24.0
        + z2 * z2 / 120.0
        - 1j * z2 * z2 * z / 720.0
    )
    return np.where(small, series, closed)


def flow_electric(
    state: SimState, t: float, grid: PhaseSpaceGrid, method: str = advection.DEFAULT_METHOD
) -> SimState:
    """Exact flow of the electric-energy subsystem over duration t."""
    if not np.isfinite(t):
        raise ValueError("flow duration must be finite")
    e1, e2 = state.fields.e1, state.fields.e2
    f = advection.shift_v(state.f, t * e1, t * e2, grid, method=method)
    b = state.fields.b - t * spectral_derivative(e2, grid)
    return SimState(f, FieldState(e1.copy(), e2.copy(), b), state.time)


def flow_magnetic(
    state: SimState,
    t: float,
    grid: PhaseSpaceGrid,
    method: str = advection.DEFAULT_METHOD,
    rotation: str = "shears",
) -> SimState:
    """Exact flow of the magnetic-energy subsystem over duration t.

    Raises :class:`~vmsplit.advection.RotationAngleTooLarge` when
    max |t B| >= pi.
    """
    if not np.isfinite(t):
        raise ValueError("flow duration must be finite")
    b = state.fields.b
    f = advection.rotate_velocity(state.f, t * b, grid, method=method, mode=rotation)
    e2 = state.fields.e2 - t * spectral_derivative(b, grid)
    return SimState(f, FieldState(state.fields.e1.copy(), e2, b.copy()), state.time)


def flow_transport(state: SimState, t: float, grid: PhaseSpaceGrid) -> SimState:
    """Exact flow of the kinetic-energy subsystem over duration t.

    Free streaming is solved per Fourier mode, f_k <- f_k exp(-i k v1 t).
    E1 receives exactly the time-integrated current of the streaming
    solution, which makes ik E1_k = rho_k an invariant of the step; the
    k = 0 component of E1 is pinned to zero (periodic solvability).  E2
    receives the time-integrated v2-current through the same kernel.  B is
    untouched.

    The x-average of f is split off and carried through unchanged, so all
    floating-point noise scales with the perturbation rather than with the
    bulk distribution.
    """
    if not np.isfinite(t):
        raise ValueError("flow duration must be finite")
    nx = grid.nx
    k = grid.wavenumbers
    workers = fft_workers()

    fbar = state.f.mean(axis=0)
    pert_hat = scipy.fft.fft(state.f - fbar[None, :, :], axis=0, workers=workers) / nx
    pert_hat[0] = 0.0

    # currents need the pre-transport spectrum
    dens_hat = pert_hat.sum(axis=2) * grid.dv2  # (nx, nv1)
    j2_hat = (pert_hat * grid.v2c[None, None, :]).sum(axis=2) * grid.dv2
    j2_hat[0] += (fbar * grid.v2c[None, :]).sum(axis=1) * grid.dv2

    phase = np.exp(-1j * np.outer(k, grid.v1c) * t)  # (nx, nv1)
    pert_hat *= phase[:, :, None]
    f = fbar[None, :, :] + scipy.fft.ifft(pert_hat * nx, axis=0, workers=workers).real

    e1_hat = scipy.fft.fft(state.fields.e1, workers=workers) / nx
    ksafe = np.where(k == 0.0, 1.0, k)
    e1_hat += ((phase - 1.0) * dens_hat).sum(axis=1) * grid.dv1 / (1j * ksafe)
    e1_hat[0] = 0.0

    kernel = t * phi_kernel(np.outer(k, grid.v1c) * t)  # exact integral of phase
    e2_hat = scipy.fft.fft(state.fields.e2, workers=workers) / nx
    e2_hat -= (kernel * j2_hat).sum(axis=1) * grid.dv1

    e1 = scipy.fft.ifft(e1_hat * nx, workers=workers).real
    e2 = scipy.fft.ifft(e2_hat * nx, workers=workers).real
    return SimState(f, FieldState(e1, e2, state.fields.b.copy()), state.time)
