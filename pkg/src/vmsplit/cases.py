"""Benchmark initial conditions with Poisson-consistent electric fields.

Three standard kinetic-plasma configurations are provided, each with grid
and step-size defaults sized for desk-scale runs:

* Landau damping (strong, alpha = 0.5, and linear, alpha = 0.01) - a
  perturbed Maxwellian, purely electrostatic;
* Weibel instability - a temperature-anisotropic Maxwellian with a small
  magnetic seed, growth rate about 0.031 for the default parameters;
* two-stream instability - counter-propagating cold beams driven by a
  magnetic-field perturbation only.

Every initializer returns a state whose E1 satisfies the discrete Poisson
equation to roundoff, which is the starting point the charge-conserving
time integration preserves.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .flows import FieldState, SimState
from .grid import PhaseSpaceGrid, forward_transform, inverse_transform, moment


class SolvabilityViolation(ValueError):
    """Poisson source with nonzero mean on the torus (mass normalization bug)."""


class VelocityBoxWarning(UserWarning):
    """Initial distribution is not negligible at the velocity-box boundary."""


EDGE_TOLERANCE = 1e-10  # relative to max f0


@dataclass(frozen=True)
class CaseSpec:
    """Named benchmark with its physical parameters and numerical defaults."""

    name: str
    lx: float
    params: dict = field(default_factory=dict)
    nx: int = 32
    nv1: int = 64
    nv2: int = 64
    v1max: float = 6.0
    v2max: float = 6.0
    dt: float = 0.1
    t_final: float = 100.0

    def grid(self) -> PhaseSpaceGrid:
        return PhaseSpaceGrid(
            nx=self.nx,
            lx=self.lx,
            nv1=self.nv1,
            nv2=self.nv2,
            v1max=self.v1max,
            v2max=self.v2max,
        )


# Velocity boxes are sized so that f0 at every box edge stays below
# EDGE_TOLERANCE relative to max f0 and the zero-inflow boundary never
# sees appreciable mass over the default run lengths; they are wider than
# strictly needed at t = 0 to leave headroom for nonlinear heating.
CASES: dict[str, CaseSpec] = {
    "landau-strong": CaseSpec(
        name="landau-strong",
        lx=2.0 * np.pi / 0.4,
        params={"alpha": 0.5, "k": 0.4},
        # generous box: nonlinear sloshing carries structure to |v| ~ 7 and
        # numerical debris diffuses a little further out over t ~ 100
        v1max=14.0,
        v2max=8.0,
        dt=0.05,
        t_final=100.0,
    ),
    "landau-linear": CaseSpec(
        name="landau-linear",
        lx=2.0 * np.pi / 0.4,
        params={"alpha": 0.01, "k": 0.4},
        v1max=8.0,
        v2max=8.0,
        dt=0.05,
        t_final=50.0,
    ),
    "weibel": CaseSpec(
        name="weibel",
        lx=2.0 * np.pi / 1.25,
        params={"alpha": 1e-4, "k": 1.25, "v_th": 0.02, "t_r": 12.0, "b_seed": 1e-4},
        v1max=0.4,
        v2max=0.8,
        # the composed field kicks carry a wave CFL bound k_max*dt < 2
        # (< 1.57 for the triple jump); here k_max = 18.75, so long runs
        # need dt well below 0.08
        dt=0.05,
        t_final=200.0,
    ),
    "two-stream": CaseSpec(
        name="two-stream",
        lx=2.0 * np.pi,
        params={"beam_v": 0.2, "beam_width": 2e-3, "b_seed": 1e-3},
        v1max=0.8,
        v2max=0.8,
        dt=0.1,
        t_final=100.0,
    ),
}


def solve_poisson(density_deviation: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """E1 with dE1/dx equal to the given zero-mean charge density.

    The k = 0 coefficient of E1 is set to zero; on the torus the mean of
    the source must vanish for a solution to exist at all.
    """
    rho_hat = forward_transform(density_deviation)
    if abs(rho_hat[0]) >= 1e-10:
        raise SolvabilityViolation(
            f"mean charge density {rho_hat[0].real:.3e} exceeds 1e-10"
        )
    k = grid.wavenumbers
    ksafe = np.where(k == 0.0, 1.0, k)
    e1_hat = rho_hat / (1j * ksafe)
    e1_hat[0] = 0.0
    return inverse_transform(e1_hat)


def _check_box(f0: np.ndarray, name: str):
    fmax = f0.max()
    edge = max(
        np.abs(f0[:, 0, :]).max(),
        np.abs(f0[:, -1, :]).max(),
        np.abs(f0[:, :, 0]).max(),
        np.abs(f0[:, :, -1]).max(),
    )
    if edge > EDGE_TOLERANCE * fmax:
        warnings.warn(
            f"{name}: velocity box too small, f0 at box edge = {edge:.2e} "
            f"({edge / fmax:.2e} of max)",
            VelocityBoxWarning,
        )


def _poisson_consistent_state(f0: np.ndarray, grid: PhaseSpaceGrid, b0=None, e2=None):
    density = moment(f0, grid, "1")
    e1 = solve_poisson(density - 1.0, grid)
    fields = FieldState(
        e1=e1,
        e2=np.zeros(grid.nx) if e2 is None else e2,
        b=np.zeros(grid.nx) if b0 is None else b0,
    )
    return SimState(f0, fields, 0.0)


def init_landau(grid: PhaseSpaceGrid, alpha: float = 0.5) -> SimState:
    """Perturbed Maxwellian f0 = (1/2pi) exp(-|v|^2/2) (1 + alpha cos(k x)).

    The perturbation wavenumber is the grid fundamental k = 2 pi / lx;
    E1 comes from Poisson's equation, E2 = B = 0.
    """
    k = grid.k0
    fv = np.exp(-0.5 * (grid.v1c[:, None] ** 2 + grid.v2c[None, :] ** 2)) / (
        2.0 * np.pi
    )
    f0 = fv[None, :, :] * (1.0 + alpha * np.cos(k * grid.x))[:, None, None]
    _check_box(f0, "landau")
    return _poisson_consistent_state(f0, grid)


def init_weibel(
    grid: PhaseSpaceGrid,
    alpha: float = 1e-4,
    v_th: float = 0.02,
    t_r: float = 12.0,
    b_seed: float = 1e-4,
) -> SimState:
    """Anisotropic Maxwellian with magnetic seed B0 = b_seed cos(k x).

    The velocity profile is exp(-(v1^2 + v2^2/t_r)/v_th^2) normalized to
    unit density, i.e. prefactor 1/(pi v_th^2 sqrt(t_r)); temperature
    ratio t_r > 1 makes v2 hot and drives the instability.
    """
    k = grid.k0
    norm = 1.0 / (np.pi * v_th**2 * np.sqrt(t_r))
    fv = norm * np.exp(
        -(grid.v1c[:, None] ** 2 + grid.v2c[None, :] ** 2 / t_r) / v_th**2
    )
    f0 = fv[None, :, :] * (1.0 + alpha * np.cos(k * grid.x))[:, None, None]
    _check_box(f0, "weibel")
    b0 = b_seed * np.cos(k * grid.x)
    return _poisson_consistent_state(f0, grid, b0=b0)


def init_two_stream(
    grid: PhaseSpaceGrid,
    beam_v: float = 0.2,
    beam_width: float = 2e-3,
    b_seed: float = 1e-3,
) -> SimState:
    """Two counter-propagating beams, instability seeded in B only.

    f0 = (1/(2 pi w)) exp(-v2^2/w) [exp(-(v1-u)^2/w) + exp(-(v1+u)^2/w)]
    with u = beam_v and w = beam_width; B0 = b_seed sin(x) on lx = 2 pi.
    The density is spatially uniform, so the Poisson solve returns E1 = 0.
    """
    w = beam_width
    prof = np.exp(-((grid.v1c - beam_v) ** 2) / w) + np.exp(
        -((grid.v1c + beam_v) ** 2) / w
    )
    fv = prof[:, None] * np.exp(-grid.v2c[None, :] ** 2 / w) / (2.0 * np.pi * w)
    f0 = np.broadcast_to(fv, (grid.nx, grid.nv1, grid.nv2)).copy()
    _check_box(f0, "two-stream")
    b0 = b_seed * np.sin(grid.k0 * grid.x)
    return _poisson_consistent_state(f0, grid, b0=b0)


def build_initial_state(case: CaseSpec) -> tuple[PhaseSpaceGrid, SimState]:
    """Grid plus initial state for a (possibly parameter-overridden) case."""
    grid = case.grid()
    p = case.params
    if case.name.startswith("landau"):
        state = init_landau(grid, alpha=p["alpha"])
    elif case.name == "weibel":
        state = init_weibel(
            grid,
            alpha=p["alpha"],
            v_th=p["v_th"],
            t_r=p["t_r"],
            b_seed=p["b_seed"],
        )
    elif case.name == "two-stream":
        state = init_two_stream(
            grid,
            beam_v=p["beam_v"],
            beam_width=p["beam_width"],
            b_seed=p["b_seed"],
        )
    else:
        raise ValueError(f"unknown case {case.name!r}")
    return grid, state


def case_with_overrides(name: str, **overrides) -> CaseSpec:
    """Copy a registered case, overriding grid fields or physics parameters."""
    if name not in CASES:
        raise ValueError(f"unknown case {name!r}, expected one of {sorted(CASES)}")
    case = CASES[name]
    params = dict(case.params)
    spec_fields = {}
    for key, value in overrides.items():
        if key in params:
            params[key] = value
        elif key in ("nx", "nv1", "nv2", "v1max", "v2max", "dt", "t_final"):
            spec_fields[key] = value
        else:
            raise ValueError(f"case {name!r} has no parameter {key!r}")
    case = replace(case, params=params, **spec_fields)
    if "k" in params:  # perturbation wavenumber fixes the spatial period
        case = replace(case, lx=2.0 * np.pi / params["k"])
    return case
