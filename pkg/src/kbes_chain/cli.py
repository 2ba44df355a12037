"""Command-line front end.

Subcommands: ``evolve``, ``sweep``, ``steady``, ``spectrum``, ``validate``.
Parameters come from an optional ``--config`` file (YAML or JSON mapping)
and are overridden by individual flags.  Exit codes: 0 success, 1 failed
validation, 2 invalid configuration, 3 solver failure, 4 non-unique steady
state.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
import io
import json
import logging
import math
import sys
from typing import Optional
import warnings

import numpy as np
import yaml

from . import analytic
from .dynamics import propagate, spectrum, steady_state
from .entanglement import concurrence, l1_coherence
from .errors import KbesError, SteadyStateError
from .model import AnisotropyWarning, EWLParams, Kind, SpinChainParams, ewl_density, model_liouvillian
from .validation import Battery, run_battery


EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_SOLVER, EXIT_DEGENERATE = 0, 1, 2, 3, 4

AXES = ("t", "B", "JDelta", "a2", "n", "r")
EVOLVE_HEADER = (
    "t", "rho11", "rho22", "rho33", "rho44", "re_rho14", "im_rho14",
    "re_rho23", "im_rho23", "concurrence", "l1_coherence",
)


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    @classmethod
    def parse(cls, spec) -> "Axis":
        if isinstance(spec, str):
            parts = spec.split(":")
            if len(parts) != 4:
                raise ConfigError(f"axis must look like NAME:MIN:MAX:COUNT, got {spec!r}")
            name, lo, hi, count = parts
        elif isinstance(spec, dict):
            try:
                name, lo, hi, count = spec["name"], spec["min"], spec["max"], spec["count"]
            except KeyError as exc:
                raise ConfigError(f"axis entry is missing {exc}") from None
        else:
            raise ConfigError(f"cannot read axis from {spec!r}")
        try:
            axis = cls(str(name), float(lo), float(hi), int(count))
        except ValueError:
            raise ConfigError(f"non-numeric axis range in {spec!r}") from None
        if axis.name not in AXES:
            raise ConfigError(f"unknown axis {axis.name!r}; choose from {', '.join(AXES)}")
        if axis.count < 2:
            raise ConfigError(f"axis {axis.name} needs at least 2 points")
        if not axis.hi > axis.lo:
            raise ConfigError(f"axis {axis.name} has a degenerate range [{axis.lo}, {axis.hi}]")
        return axis

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class RunConfig:
    B: float = 0.0
    J: float = 1.0
    Delta: float = 1.0
    Jz: float = 0.0
    gamma: float = 1.0
    n: float = 0.0
    kind: str = "phi"
    r: float = 1.0
    a: float = 1 / math.sqrt(2)
    delta_phase: float = 0.0
    t_max: float = 10.0
    steps: int = 201
    at_time: Optional[float] = None
    axes: tuple = ()
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1
    perturb_oracle: float = 0.0

    def chain(self) -> SpinChainParams:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AnisotropyWarning)
            return SpinChainParams(self.B, self.J, self.Delta, self.Jz, self.gamma, self.n)

    def initial(self) -> EWLParams:
        return EWLParams(kind=self.kind, r=self.r, a=self.a, delta=self.delta_phase)

    def times(self) -> np.ndarray:
        if self.t_max == 0:
            return np.zeros(1)
        return np.linspace(0.0, self.t_max, self.steps)

    def validate(self) -> "RunConfig":
        try:
            self.chain()
            self.initial()
            Kind.parse(self.kind)
        except (ValueError, KbesError) as exc:
            raise ConfigError(str(exc)) from None
        if self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if self.t_max < 0:
            raise ConfigError("t_max must be nonnegative")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"sweep axes must be distinct, got {names}")
        for ax in self.axes:
            if ax.name in ("a2", "r") and not (0 <= ax.lo and ax.hi <= 1):
                raise ConfigError(f"axis {ax.name} must stay inside [0, 1]")
            if ax.name in ("t", "n") and ax.lo < 0:
                raise ConfigError(f"axis {ax.name} must be nonnegative")
        return self


# flag name -> (config key, type)
_OVERRIDES = {
    "B": ("B", float), "J": ("J", float), "Delta": ("Delta", float), "JDelta": ("JDelta", float),
    "Jz": ("Jz", float), "gamma": ("gamma", float), "n": ("n", float), "kind": ("kind", str),
    "r": ("r", float), "a": ("a", float), "delta_phase": ("delta_phase", float),
    "t_max": ("t_max", float), "steps": ("steps", int), "at_time": ("at_time", float),
    "out": ("out", str), "format": ("format", str), "workers": ("workers", int),
}


def load_config(args) -> RunConfig:
    raw = {}
    if args.config:
        try:
            with open(args.config) as fh:
                raw = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a key-value mapping")
        raw = {k.replace("-", "_"): v for k, v in raw.items()}
    for flag, (key, _) in _OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            raw[key] = value
    if getattr(args, "axis", None):
        raw["axes"] = args.axis
    if getattr(args, "perturb_oracle", None):
        raw["perturb_oracle"] = args.perturb_oracle

    jd = raw.pop("JDelta", None)
    axes = tuple(Axis.parse(a) for a in raw.pop("axes", ()) or ())
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        cfg = RunConfig(**raw, axes=axes)
        if jd is not None:
            if cfg.J == 0:
                raise ConfigError("JDelta needs a nonzero J")
            cfg = replace(cfg, Delta=float(jd) / cfg.J)
        cfg = replace(cfg, **{k: _OVERRIDES[k][1](getattr(cfg, k)) for k in
                              ("B", "J", "Delta", "Jz", "gamma", "n", "r", "a", "delta_phase", "t_max", "steps", "workers")})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def fmt(x: float) -> str:
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _round(x):
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, (float, np.floating)):
        return float(fmt(x)) if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def dump_json(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=False) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header, rows, cfg: RunConfig) -> str:
    if cfg.format == "json":
        return dump_json({"columns": list(header), "rows": [list(r) for r in rows]})
    return dump_csv(header, rows)


def cmd_evolve(cfg: RunConfig) -> int:
    if cfg.axes:
        raise ConfigError("evolve takes no sweep axes")
    traj = propagate(model_liouvillian(cfg.chain()), ewl_density(cfg.initial()), cfg.times())
    rows = []
    for t, rho, c, coh in zip(traj.times, traj.states, traj.concurrence, traj.l1_coherence):
        d = np.diag(rho).real
        rows.append((t, *d, rho[0, 3].real, rho[0, 3].imag, rho[1, 2].real, rho[1, 2].imag, c, coh))
    emit(cfg, _table(EVOLVE_HEADER, rows, cfg))
    return EXIT_OK


def _point_config(cfg: RunConfig, name: str, value: float) -> RunConfig:
    if name == "JDelta":
        return replace(cfg, Delta=value / cfg.J)
    if name == "a2":
        return replace(cfg, a=math.sqrt(value))
    return replace(cfg, **{name: float(value)})


def _sweep_task(task):
    """Evaluate one grid column or cell; pure function of its arguments."""
    cfg, assignments, times = task
    for name, value in assignments:
        cfg = _point_config(cfg, name, value)
    f = model_liouvillian(cfg.chain())
    if times is None:
        if cfg.at_time is None:
            rho = steady_state(f)
            return [(concurrence(rho), l1_coherence(rho))]
        times = [cfg.at_time]
    traj = propagate(f, ewl_density(cfg.initial()), times)
    return list(zip(traj.concurrence.tolist(), traj.l1_coherence.tolist()))


def _run_tasks(tasks, workers):
    if workers == 1:
        return [_sweep_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def cmd_sweep(cfg: RunConfig) -> int:
    if len(cfg.axes) != 2:
        raise ConfigError(f"sweep needs exactly two axes, got {len(cfg.axes)}")
    ax1, ax2 = cfg.axes
    if cfg.J == 0 and "JDelta" in (ax1.name, ax2.name):
        raise ConfigError("a JDelta axis needs a nonzero J")
    v1, v2 = ax1.values(), ax2.values()
    rows = []
    if "t" in (ax1.name, ax2.name):
        t_first = ax1.name == "t"
        other, tv = (ax2, v1) if t_first else (ax1, v2)
        ov = v2 if t_first else v1
        tasks = [(cfg, ((other.name, x),), tv) for x in ov]
        columns = _run_tasks(tasks, cfg.workers)
        for i, x1 in enumerate(v1):
            for j, x2 in enumerate(v2):
                c, coh = columns[j][i] if t_first else columns[i][j]
                rows.append((x1, x2, c, coh))
    else:
        tasks = [(cfg, ((ax1.name, x1), (ax2.name, x2)), None) for x1 in v1 for x2 in v2]
        results = _run_tasks(tasks, cfg.workers)
        for (_, ((_, x1), (_, x2)), _), res in zip(tasks, results):
            rows.append((x1, x2, *res[0]))
    emit(cfg, _table((ax1.name, ax2.name, "concurrence", "l1_coherence"), rows, cfg))
    return EXIT_OK


def _matrix_parts(m):
    return {"real": m.real.tolist(), "imag": m.imag.tolist()}


def cmd_steady(cfg: RunConfig) -> int:
    p = cfg.chain()
    rho = steady_state(model_liouvillian(p))
    ctx = analytic.ClosedFormContext.from_params(p)
    closed = analytic.steady_state_closed(ctx)
    report = {
        "params": {k: getattr(p, k) for k in ("B", "J", "Delta", "Jz", "gamma", "n")},
        "steady_state": _matrix_parts(rho),
        "concurrence": concurrence(rho),
        "l1_coherence": l1_coherence(rho),
        "k_m": analytic.k_m(ctx),
        "final_concurrence_analytic": analytic.final_concurrence(ctx),
        "max_deviation": float(np.abs(rho - closed).max()),
    }
    emit(cfg, dump_json(report))
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    w = spectrum(model_liouvillian(cfg.chain()))
    rows = [(z.real, z.imag) for z in w]
    emit(cfg, _table(("re_lambda", "im_lambda"), rows, cfg))
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    battery = Battery(extra_points=[(cfg.chain(), cfg.initial())])
    checks = run_battery(battery, perturb=cfg.perturb_oracle)
    ok = all(c.status != "fail" for c in checks)
    emit(cfg, dump_json({"passed": ok, "checks": [c.as_dict() for c in checks]}))
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "steady": cmd_steady,
    "spectrum": cmd_spectrum,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML or JSON file of key-value settings")
    g = common.add_argument_group("model")
    g.add_argument("--B", type=float, help="field strength (units of gamma)")
    g.add_argument("--J", type=float, help="exchange coupling")
    g.add_argument("--Delta", type=float, help="XY anisotropy")
    g.add_argument("--JDelta", type=float, help="set Delta so that J*Delta equals this value")
    g.add_argument("--Jz", type=float, help="z coupling")
    g.add_argument("--gamma", type=float, help="damping rate (default 1)")
    g.add_argument("--n", type=float, help="mean thermal occupation")
    g = common.add_argument_group("initial state")
    g.add_argument("--kind", choices=["phi", "psi"])
    g.add_argument("--r", type=float, help="purity in [0, 1]")
    g.add_argument("--a", type=float, help="real amplitude a; |b| = sqrt(1 - a^2)")
    g.add_argument("--delta-phase", dest="delta_phase", type=float, help="phase of b")
    g = common.add_argument_group("time grid and output")
    g.add_argument("--t-max", dest="t_max", type=float)
    g.add_argument("--steps", type=int)
    g.add_argument("--out", help="output path (default: stdout)")
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--workers", type=int, help="worker processes for sweeps (1 = serial)")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kbes-chain", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="time evolution of an EWL initial state")
    sw = sub.add_parser("sweep", parents=[common], help="concurrence over a 2-D parameter grid")
    sw.add_argument("--axis", action="append", metavar="NAME:MIN:MAX:COUNT",
                    help=f"sweep axis, given twice; NAME in {{{', '.join(AXES)}}}")
    sw.add_argument("--at-time", dest="at_time", type=float,
                    help="evaluate at this time when no t axis is swept (default: steady state)")
    sub.add_parser("steady", parents=[common], help="steady state versus the analytic formula")
    sub.add_parser("spectrum", parents=[common], help="eigenvalues of the Liouvillian")
    va = sub.add_parser("validate", parents=[common], help="oracle cross-check report")
    va.add_argument("--perturb-oracle", dest="perturb_oracle", type=float, default=None,
                    help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SteadyStateError as exc:
        print(f"steady state error (multiplicity {exc.multiplicity}): {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except KbesError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except np.linalg.LinAlgError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
