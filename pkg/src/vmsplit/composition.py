"""Time integrators composed from the three exact sub-flows.

A single step applies the electric, magnetic, and transport flows in a
fixed pattern:

* Lie         - first order, one flow each per step;
* Strang      - second order, the palindrome E(t/2) B(t/2) T(t) B(t/2) E(t/2);
* triple jump - fourth order, three Strang sub-steps with durations
  (g1, g2, g1) dt where g1 = 1/(2 - 2^(1/3)) and g2 = 1 - 2 g1 < 0.

Every flow accepts negative durations, which the triple jump's backward
middle sub-step relies on.
"""

import math
from dataclasses import dataclass
from typing import Callable

from .flows import SimState, flow_electric, flow_magnetic, flow_transport
from .grid import PhaseSpaceGrid

SCHEME_KINDS = ("lie", "strang", "triple-jump")

# solves 2 g1 + g2 = 1 and 2 g1^3 + g2^3 = 0
TRIPLE_JUMP_G1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
TRIPLE_JUMP_G2 = 1.0 - 2.0 * TRIPLE_JUMP_G1


@dataclass(frozen=True)
class SplittingScheme:
    """Which composition to run and with what step size and kernels."""

    kind: str
    dt: float
    advection: str = "spline"
    rotation: str = "shears"

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


def _lie(state: SimState, dt: float, grid: PhaseSpaceGrid, adv: str, rot: str):
    state = flow_electric(state, dt, grid, method=adv)
    state = flow_magnetic(state, dt, grid, method=adv, rotation=rot)
    return flow_transport(state, dt, grid)


def _strang(state: SimState, dt: float, grid: PhaseSpaceGrid, adv: str, rot: str):
    h = 0.5 * dt
    state = flow_electric(state, h, grid, method=adv)
    state = flow_magnetic(state, h, grid, method=adv, rotation=rot)
    state = flow_transport(state, dt, grid)
    state = flow_magnetic(state, h, grid, method=adv, rotation=rot)
    return flow_electric(state, h, grid, method=adv)


def _triple_jump(state: SimState, dt: float, grid: PhaseSpaceGrid, adv: str, rot: str):
    state = _strang(state, TRIPLE_JUMP_G1 * dt, grid, adv, rot)
    state = _strang(state, TRIPLE_JUMP_G2 * dt, grid, adv, rot)
    return _strang(state, TRIPLE_JUMP_G1 * dt, grid, adv, rot)


_STEPPERS = {"lie": _lie, "strang": _strang, "triple-jump": _triple_jump}


def step(
    scheme: SplittingScheme,
    state: SimState,
    grid: PhaseSpaceGrid,
    dt: float | None = None,
) -> SimState:
    """Advance one step of scheme.dt (or an explicit partial duration)."""
    h = scheme.dt if dt is None else dt
    out = _STEPPERS[scheme.kind](state, h, grid, scheme.advection, scheme.rotation)
    out.time = state.time + h
    return out


def integrate(
    scheme: SplittingScheme,
    state: SimState,
    t_final: float,
    grid: PhaseSpaceGrid,
    observer: Callable[[int, SimState], None] | None = None,
    observe_every: int = 1,
) -> SimState:
    """Run fixed steps up to t_final (final partial step if needed).

    The observer, when given, receives (step index, state) read-only: at
    step 0 (the initial state), after every `observe_every`-th step, and
    after the final step.
    """
    if t_final < state.time:
        raise ValueError("t_final lies before the current state time")
    if observe_every < 1:
        raise ValueError("observe_every must be >= 1")
    t0 = state.time
    n_whole = int(math.floor((t_final - t0) / scheme.dt + 1e-9))
    remainder = t_final - t0 - n_whole * scheme.dt

    if observer is not None:
        observer(0, state)
    for i in range(1, n_whole + 1):
        state = step(scheme, state, grid)
        state.time = t0 + i * scheme.dt  # avoid accumulation drift
        if observer is not None and (i % observe_every == 0 or (i == n_whole and remainder <= 1e-12 * scheme.dt)):
            observer(i, state)
    if remainder > 1e-12 * scheme.dt:
        state = step(scheme, state, grid, dt=remainder)
        state.time = t_final
        if observer is not None:
            observer(n_whole + 1, state)
    return state
