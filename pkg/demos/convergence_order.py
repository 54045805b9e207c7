"""Measured time-integration orders of the three compositions.

Every sub-flow is exact in time, so the error of a composed step is pure
splitting error: first order for the single sweep, second for the
palindrome, fourth for the triple jump.  The script integrates a reduced
Weibel problem over a halving step-size ladder against a fine-step
reference and prints the observed orders.

Roughly two minutes (the reference run dominates).
"""

import numpy as np

from vmsplit import cases, composition

LADDER = (0.2, 0.1, 0.05, 0.025)

case = cases.case_with_overrides("weibel", t_final=1.0)
grid, state0 = cases.build_initial_state(case)

reference = composition.integrate(
    composition.SplittingScheme("triple-jump", dt=min(LADDER) / 8.0),
    state0.copy(), 1.0, grid,
)


def field_error(final):
    return (
        np.abs(final.fields.e1 - reference.fields.e1).mean()
        + np.abs(final.fields.e2 - reference.fields.e2).mean()
        + np.abs(final.fields.b - reference.fields.b).mean()
    )


for scheme in ("lie", "strang", "triple-jump"):
    errs = []
    for dt in LADDER:
        final = composition.integrate(
            composition.SplittingScheme(scheme, dt=dt), state0.copy(), 1.0, grid
        )
        errs.append(field_error(final))
    print(f"\n{scheme}")
    print(f"{'dt':>8} {'l1 field error':>16} {'order':>7}")
    prev = None
    for dt, err in zip(LADDER, errs):
        order = "" if prev is None else f"{np.log2(prev / err):7.3f}"
        print(f"{dt:8.4g} {err:16.6e} {order}")
        prev = err
