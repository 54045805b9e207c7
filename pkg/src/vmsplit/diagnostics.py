"""Scalar and spectral observables: energies, mass, charge residual, rates.

The Poisson residual is the per-mode mismatch of the discrete Gauss law,
max over nonzero modes of |i k E1_k - rho_k|, reported relative to
max(floor, max |rho_k|).  With the default floor of 1 the residual is
meaningful even while the charge perturbation is still at noise level
(uniform-density starts); a charge-conserving integrator keeps it at
roundoff for the whole run.
"""

from dataclasses import dataclass

import numpy as np

from .flows import SimState
from .grid import PhaseSpaceGrid, forward_transform, moment


class FitDomainError(ValueError):
    """Rate fit requested on nonpositive values or too few samples."""


@dataclass
class DiagnosticsRecord:
    time: float
    e_pot: float
    e_mag: float
    e_kin: float
    e_tot: float
    mass: float
    poisson_residual: float
    mode_amps: dict


def poisson_residual(state: SimState, grid: PhaseSpaceGrid, floor: float = 1.0) -> float:
    """Relative max-norm violation of ik E1_k = rho_k over resolvable modes.

    The self-conjugate Nyquist mode is excluded: for a real nodal field its
    rho coefficient is real while ik E1 is imaginary, and the matching E1
    component (the Nyquist-frequency sine) vanishes at every node, so the
    identity is structurally unrepresentable there.
    """
    density = moment(state.f, grid, "1")
    rho_hat = forward_transform(density - 1.0)
    e1_hat = forward_transform(state.fields.e1)
    mismatch = np.abs(1j * grid.wavenumbers * e1_hat - rho_hat)
    scale = np.abs(rho_hat)
    mismatch[0] = scale[0] = 0.0
    mismatch[grid.nx // 2] = scale[grid.nx // 2] = 0.0
    return float(mismatch.max() / max(floor, scale.max()))


def record(state: SimState, grid: PhaseSpaceGrid, mode: int = 1) -> DiagnosticsRecord:
    """Energies, mass, residual, and fundamental-mode field amplitudes."""
    dx = grid.dx
    e1, e2, b = state.fields.e1, state.fields.e2, state.fields.b
    e_pot = 0.5 * dx * float((e1 * e1 + e2 * e2).sum())
    e_mag = 0.5 * dx * float((b * b).sum())
    e_kin = 0.5 * dx * float(moment(state.f, grid, "vsq").sum())
    mass = dx * float(moment(state.f, grid, "1").sum())
    amps = {
        ("e1", mode): float(np.abs(forward_transform(e1)[mode])),
        ("e2", mode): float(np.abs(forward_transform(e2)[mode])),
        ("b", mode): float(np.abs(forward_transform(b)[mode])),
    }
    return DiagnosticsRecord(
        time=state.time,
        e_pot=e_pot,
        e_mag=e_mag,
        e_kin=e_kin,
        e_tot=e_pot + e_mag + e_kin,
        mass=mass,
        poisson_residual=poisson_residual(state, grid),
        mode_amps=amps,
    )


def fit_rate(times, values, window: tuple[float, float]) -> float:
    """Least-squares slope of ln(value) vs time inside [t_a, t_b]."""
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    t_a, t_b = window
    sel = (times >= t_a) & (times <= t_b)
    t, y = times[sel], values[sel]
    if t.size < 10:
        raise FitDomainError(f"only {t.size} samples in window [{t_a}, {t_b}]")
    if np.any(y <= 0.0):
        raise FitDomainError("nonpositive values in fit window")
    slope, _ = np.polyfit(t, np.log(y), 1)
    return float(slope)


def envelope_rate(times, values, window: tuple[float, float]) -> float:
    """Rate fit through the local maxima of an oscillating decay.

    Used for the Landau-damping diagnostic, where the field energy
    oscillates at twice the plasma frequency under an exponential
    envelope; fitting the raw signal would be polluted by the zeros.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    interior = (values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:])
    idx = np.where(interior)[0] + 1
    if idx.size < 2:
        raise FitDomainError("no oscillation peaks found")
    return fit_rate(times[idx], values[idx], window)


def growth_window(times, values, low_factor: float = 10.0, high_frac: float = 0.1):
    """Auto-selected [t_a, t_b] for fitting an instability growth rate.

    Spans from where the signal first exceeds `low_factor` times its first
    positive value up to where it first reaches `high_frac` of its maximum.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    positive = values[values > 0.0]
    if positive.size == 0:
        raise FitDomainError("signal never positive")
    lo = low_factor * positive[0]
    hi = high_frac * values.max()
    if hi <= lo:
        raise FitDomainError("no usable growth interval between thresholds")
    above_lo = np.where(values >= lo)[0]
    above_hi = np.where(values >= hi)[0]
    if above_lo.size == 0 or above_hi.size == 0:
        raise FitDomainError("signal never crosses the fit thresholds")
    return float(times[above_lo[0]]), float(times[above_hi[0]])
