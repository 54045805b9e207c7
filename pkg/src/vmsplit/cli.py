"""Command-line front end: `vmsplit run | order-study | plot`.

Configuration is plain `key = value` text (# starts a comment); command
line flags override file values, and `--set key=value` may be repeated
for ad-hoc overrides.  Runs emit one CSV row of diagnostics per output
step with 17 significant digits, which together with the fixed reduction
orders in the kernels makes reruns byte-identical.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(non-finite state detected), 4 I/O error.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import advection, baselines, cases, composition, diagnostics
from .flows import SimState

SCHEMES = ("lie", "strang", "triple-jump", "valis", "mangeney")
ADVECTION_METHODS = ("fv3", "spline")
ROTATION_MODES = ("shears", "strang-sub")

_INT_KEYS = ("nx", "nv1", "nv2", "output_every")
_FLOAT_KEYS = ("v1max", "v2max", "dt", "t_final")
_STR_KEYS = ("case", "scheme", "advection", "rotation", "out")
_PARAM_KEYS = ("alpha", "k", "v_th", "t_r", "b_seed", "beam_v", "beam_width")

CSV_COLUMNS = (
    "time",
    "e_pot",
    "e_mag",
    "e_kin",
    "e_tot",
    "mass",
    "poisson_residual",
    "abs_E1_k",
    "abs_E2_k",
    "abs_B_k",
)


class ConfigError(ValueError):
    """Aggregated configuration problems; one line per offending entry."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


class NumericalFailure(RuntimeError):
    """Non-finite values detected in the state during a run."""


@dataclass
class RunConfig:
    case: str
    scheme: str = "strang"
    nx: int = 32
    nv1: int = 64
    nv2: int = 64
    v1max: float = 6.0
    v2max: float = 6.0
    dt: float = 0.1
    t_final: float = 100.0
    output_every: int = 5
    out: str | None = None
    advection: str = "spline"
    rotation: str = "shears"
    params: dict = field(default_factory=dict)
    explicit: set = field(default_factory=set)


def _parse_text(text: str):
    """key = value lines to {key: (value, where)}, collecting bad lines."""
    entries = {}
    problems = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value', got {raw!r}")
            continue
        key, _, value = line.partition("=")
        entries[key.strip()] = (value.strip(), f"line {lineno}")
    return entries, problems


def _build_config(entries: dict, problems: list) -> RunConfig:
    """Validate raw entries against the selected case; aggregate all errors."""
    known = set(_INT_KEYS) | set(_FLOAT_KEYS) | set(_STR_KEYS) | set(_PARAM_KEYS)
    for key, (_, where) in entries.items():
        if key not in known:
            problems.append(f"{where}: unknown key {key!r}")

    def take(key, conv, check=None, describe=""):
        if key not in entries:
            return None
        value, where = entries[key]
        try:
            parsed = conv(value)
        except ValueError:
            problems.append(f"{where}: cannot parse {key} = {value!r}")
            return None
        if check is not None and not check(parsed):
            problems.append(f"{where}: {key} = {value!r} invalid ({describe})")
            return None
        return parsed

    case_name = take("case", str, lambda c: c in cases.CASES, f"one of {sorted(cases.CASES)}")
    if case_name is None:
        if "case" not in entries:
            problems.append("missing required key 'case'")
        raise ConfigError(problems)

    base = cases.CASES[case_name]
    cfg = RunConfig(
        case=case_name,
        nx=base.nx,
        nv1=base.nv1,
        nv2=base.nv2,
        v1max=base.v1max,
        v2max=base.v2max,
        dt=base.dt,
        t_final=base.t_final,
        params=dict(base.params),
    )
    cfg.explicit = set(entries)

    val = take("scheme", str, lambda s: s in SCHEMES, f"one of {SCHEMES}")
    if val is not None:
        cfg.scheme = val
    val = take("advection", str, lambda s: s in ADVECTION_METHODS, f"one of {ADVECTION_METHODS}")
    if val is not None:
        cfg.advection = val
    val = take("rotation", str, lambda s: s in ROTATION_MODES, f"one of {ROTATION_MODES}")
    if val is not None:
        cfg.rotation = val
    if "out" in entries:
        cfg.out = entries["out"][0]

    for key in _INT_KEYS:
        checks = {
            "nx": (lambda n: n >= 4 and n % 2 == 0, "even integer >= 4"),
            "nv1": (lambda n: n >= 4, ">= 4"),
            "nv2": (lambda n: n >= 4, ">= 4"),
            "output_every": (lambda n: n >= 1, ">= 1"),
        }[key]
        val = take(key, int, *checks)
        if val is not None:
            setattr(cfg, key, val)
    for key in _FLOAT_KEYS:
        checks = {
            "v1max": (lambda x: x > 0, "> 0"),
            "v2max": (lambda x: x > 0, "> 0"),
            "dt": (lambda x: x > 0, "> 0"),
            "t_final": (lambda x: x >= 0, ">= 0"),
        }[key]
        val = take(key, float, *checks)
        if val is not None:
            setattr(cfg, key, val)

    for key in _PARAM_KEYS:
        if key in entries:
            if key not in cfg.params:
                problems.append(
                    f"{entries[key][1]}: case {case_name!r} has no parameter {key!r}"
                )
                continue
            val = take(key, float)
            if val is not None:
                cfg.params[key] = val

    if problems:
        raise ConfigError(problems)
    return cfg


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse config text, apply overrides (flag values win), validate."""
    entries, problems = _parse_text(text)
    for key, value in (overrides or {}).items():
        entries[key] = (str(value), f"flag --{key.replace('_', '-')}")
    return _build_config(entries, problems)


def dump_config(cfg: RunConfig) -> str:
    """Effective configuration as re-parseable `key = value` text."""
    lines = [
        f"case = {cfg.case}",
        f"scheme = {cfg.scheme}",
        f"nx = {cfg.nx}",
        f"nv1 = {cfg.nv1}",
        f"nv2 = {cfg.nv2}",
        f"v1max = {cfg.v1max!r}",
        f"v2max = {cfg.v2max!r}",
        f"dt = {cfg.dt!r}",
        f"t_final = {cfg.t_final!r}",
        f"output_every = {cfg.output_every}",
        f"advection = {cfg.advection}",
        f"rotation = {cfg.rotation}",
    ]
    if cfg.out is not None:
        lines.append(f"out = {cfg.out}")
    for key, value in cfg.params.items():
        lines.append(f"{key} = {value!r}")
    return "\n".join(lines) + "\n"


def _grid_and_state(cfg: RunConfig):
    case = cases.case_with_overrides(
        cfg.case,
        nx=cfg.nx,
        nv1=cfg.nv1,
        nv2=cfg.nv2,
        v1max=cfg.v1max,
        v2max=cfg.v2max,
        dt=cfg.dt,
        t_final=cfg.t_final,
        **cfg.params,
    )
    return cases.build_initial_state(case)


def _check_finite(state: SimState):
    if not (
        np.all(np.isfinite(state.f))
        and np.all(np.isfinite(state.fields.e1))
        and np.all(np.isfinite(state.fields.e2))
        and np.all(np.isfinite(state.fields.b))
    ):
        raise NumericalFailure(f"non-finite state at t = {state.time:.6g}")


def _format_row(rec: diagnostics.DiagnosticsRecord, mode: int) -> str:
    values = (
        rec.time,
        rec.e_pot,
        rec.e_mag,
        rec.e_kin,
        rec.e_tot,
        rec.mass,
        rec.poisson_residual,
        rec.mode_amps[("e1", mode)],
        rec.mode_amps[("e2", mode)],
        rec.mode_amps[("b", mode)],
    )
    return ",".join(f"{v:.17g}" for v in values)


def _integrate_any(cfg: RunConfig, grid, state, t_final, observer, observe_every):
    rotation = "strang" if cfg.rotation == "strang-sub" else cfg.rotation
    if cfg.scheme in baselines.BASELINE_KINDS:
        return baselines.integrate(
            cfg.scheme,
            state,
            cfg.dt,
            t_final,
            grid,
            observer=observer,
            observe_every=observe_every,
            method=cfg.advection,
            rotation=rotation,
        )
    scheme = composition.SplittingScheme(
        kind=cfg.scheme, dt=cfg.dt, advection=cfg.advection, rotation=rotation
    )
    return composition.integrate(
        scheme, state, t_final, grid, observer=observer, observe_every=observe_every
    )


def run(cfg: RunConfig) -> str:
    """Execute a configured run; returns the CSV text that was written."""
    grid, state = _grid_and_state(cfg)
    rows = [",".join(CSV_COLUMNS)]

    def observer(_step: int, st: SimState):
        _check_finite(st)
        rows.append(_format_row(diagnostics.record(st, grid), mode=1))

    _integrate_any(cfg, grid, state, cfg.t_final, observer, cfg.output_every)
    text = "\n".join(rows) + "\n"
    out_path = cfg.out or f"{cfg.case}-{cfg.scheme}.csv"
    with open(out_path, "w", newline="\n") as fh:
        fh.write(text)
    return text


def _field_l1_error(a: SimState, b: SimState) -> float:
    """Mean absolute nodal difference, summed across the three fields."""
    return float(
        np.abs(a.fields.e1 - b.fields.e1).mean()
        + np.abs(a.fields.e2 - b.fields.e2).mean()
        + np.abs(a.fields.b - b.fields.b).mean()
    )


def order_study(cfg: RunConfig, dt_ladder) -> list[tuple[float, float, float | None]]:
    """Field error vs a fine-step reference for a descending dt ladder.

    The reference is a triple-jump run at min(ladder)/8.  Returns rows of
    (stepsize, l1 error, observed order) where the order entry pairs each
    step size with the next one down the ladder.
    """
    ladder = [float(x) for x in dt_ladder]
    if len(ladder) < 2:
        raise ConfigError(["dt ladder needs at least two entries to measure an order"])
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError(["dt ladder must be strictly descending"])

    grid, state0 = _grid_and_state(cfg)
    ref_scheme = composition.SplittingScheme(
        kind="triple-jump",
        dt=min(ladder) / 8.0,
        advection=cfg.advection,
        rotation="strang" if cfg.rotation == "strang-sub" else cfg.rotation,
    )
    reference = composition.integrate(ref_scheme, state0.copy(), cfg.t_final, grid)
    _check_finite(reference)

    errors = []
    for dt in ladder:
        run_cfg = RunConfig(**{**cfg.__dict__, "dt": dt})
        final = _integrate_any(run_cfg, grid, state0.copy(), cfg.t_final, None, 1)
        _check_finite(final)
        errors.append(_field_l1_error(final, reference))

    rows = []
    for i, (dt, err) in enumerate(zip(ladder, errors)):
        if i == 0:
            rows.append((dt, err, None))
        else:
            order = math.log(errors[i - 1] / err) / math.log(ladder[i - 1] / dt)
            rows.append((dt, err, order))
    return rows


def order_study_csv(rows) -> str:
    lines = ["stepsize,l1_error,order"]
    for dt, err, order in rows:
        tail = "" if order is None else f"{order:.17g}"
        lines.append(f"{dt:.17g},{err:.17g},{tail}")
    return "\n".join(lines) + "\n"


def emit_plot_script(csv_path: str, quantity: str) -> str:
    """Self-contained gnuplot script: chosen column vs time, log y axis."""
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
    if quantity not in header:
        raise ConfigError(
            [f"unknown quantity {quantity!r}; available: {', '.join(header[1:])}"]
        )
    column = header.index(quantity) + 1  # gnuplot columns are 1-based
    return (
        "# generated by vmsplit plot\n"
        "set datafile separator ','\n"
        "set logscale y\n"
        "set xlabel 'time'\n"
        f"set ylabel '{quantity}'\n"
        f"plot '{csv_path}' using 1:{column} with lines title '{quantity}'\n"
    )


def _collect_overrides(args) -> dict:
    overrides = {}
    problems = []
    for item in args.set or []:
        if "=" not in item:
            problems.append(f"flag --set: expected key=value, got {item!r}")
            continue
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.case:
        overrides["case"] = args.case
    if getattr(args, "scheme", None):
        overrides["scheme"] = args.scheme
    if getattr(args, "out", None):
        overrides["out"] = args.out
    if problems:
        raise ConfigError(problems)
    return overrides


def _load_config(args, extra_defaults: dict | None = None) -> RunConfig:
    text = ""
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
    overrides = _collect_overrides(args)
    cfg = parse_config(text, overrides)
    for key, value in (extra_defaults or {}).items():
        if key not in cfg.explicit:
            setattr(cfg, key, value)
    return cfg


def _validate_thread_env():
    raw = os.environ.get("VLASOV_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError([f"VLASOV_THREADS must be an integer, got {raw!r}"])
    if n < 0:
        raise ConfigError(["VLASOV_THREADS must be >= 0"])


def _add_common_flags(sub):
    sub.add_argument("--case", help="benchmark case name")
    sub.add_argument("--scheme", help=f"integrator, one of {SCHEMES}")
    sub.add_argument("--config", help="path to key = value configuration file")
    sub.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a single configuration key (repeatable)",
    )
    sub.add_argument("--out", help="output path")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vmsplit",
        description="Split-step Vlasov-Maxwell solver (reduced 1+1/2D model)",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="integrate a benchmark and write CSV diagnostics")
    _add_common_flags(p_run)

    p_order = subs.add_parser("order-study", help="measure convergence order on a dt ladder")
    _add_common_flags(p_order)
    p_order.add_argument(
        "--dts",
        default="0.2,0.1,0.05,0.025",
        help="comma-separated descending step sizes",
    )

    p_plot = subs.add_parser("plot", help="emit a gnuplot script for a CSV column")
    p_plot.add_argument("--csv", required=True, help="diagnostics CSV path")
    p_plot.add_argument("--quantity", required=True, help="column to plot")
    p_plot.add_argument("--out", help="script path (default <csv>.<quantity>.gp)")

    args = parser.parse_args(argv)

    try:
        _validate_thread_env()
        if args.command == "run":
            cfg = _load_config(args)
            run(cfg)
            return 0
        if args.command == "order-study":
            # order studies default to a short horizon; long default run
            # lengths would make the reference run impractical
            cfg = _load_config(args, extra_defaults={"t_final": 1.0})
            rows = order_study(cfg, [s for s in args.dts.split(",") if s])
            text = order_study_csv(rows)
            out_path = cfg.out or f"{cfg.case}-{cfg.scheme}-orders.csv"
            with open(out_path, "w", newline="\n") as fh:
                fh.write(text)
            print(f"{'stepsize':>10} {'l1 error':>24} {'order':>10}")
            for dt, err, order in rows:
                order_txt = "" if order is None else f"{order:10.5f}"
                print(f"{dt:10.5g} {err:24.15e} {order_txt}")
            return 0
        if args.command == "plot":
            script = emit_plot_script(args.csv, args.quantity)
            out_path = args.out or f"{args.csv}.{args.quantity}.gp"
            with open(out_path, "w", newline="\n") as fh:
                fh.write(script)
            return 0
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"vmsplit: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, advection.RotationAngleTooLarge) as exc:
        print(f"vmsplit: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"vmsplit: I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
