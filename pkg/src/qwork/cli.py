"""Command line entry point.

    qwork simulate [--config FILE] [flags]   # CSV time series
    qwork global-work --beta1 B1 --beta2 B2 [--E E] [--grid NA:NB]
    qwork validate [--quick]

Exit codes: 0 ok, 1 config error, 2 numerical-invariant failure,
3 validation-suite failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import analytic, dynamics, entanglement, qmat, thermo
from .dynamics import BathParams, Case, IntegrationError, SystemSpec

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3

CSV_HEADER = "t,C,W_a,W_b,W_tot,rho11,rho22,rho33,rho44,abs_rho14,purity,trace_residual"


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass
class RunConfig:
    """Simulation parameters.

    Defaults: beta E = 0.001, h_w = 0.1, gamma = 0.105, beta_i omega0 = 0.7/0.8,
    and bath inverse temperatures 0.05/0.03 for the entropy prefactors.
    """

    case: str = "CaseI"
    beta_e: float = 0.001
    E: float = 1.0
    h_w: float = 0.1
    gamma1: float = 0.105
    gamma2: float = 0.105
    n1: float | None = None
    beta1_omega0: float | None = 0.7
    n2: float | None = None
    beta2_omega0: float | None = 0.8
    beta1: float = 0.05
    beta2: float = 0.03
    t_end: float = 50.0
    dt: float = 0.01
    stride: int = 1
    work_convention: str = "paper_eq17"
    output_path: str | None = None

    def validate(self) -> "RunConfig":
        try:
            Case.parse(self.case)
            thermo.WorkConvention(self.work_convention)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for i in (1, 2):
            n, bw = getattr(self, f"n{i}"), getattr(self, f"beta{i}_omega0")
            if (n is None) == (bw is None):
                raise ConfigError(f"bath {i}: give exactly one of n{i} or beta{i}_omega0")
            if n is not None and n < 0:
                raise ConfigError(f"n{i} must be >= 0")
            if bw is not None and bw <= 0:
                raise ConfigError(f"beta{i}_omega0 must be > 0")
        if not self.dt > 0:
            raise ConfigError("dt must be > 0")
        if self.t_end < 0:
            raise ConfigError("t_end must be >= 0")
        if not self.E > 0 or self.beta_e < 0:
            raise ConfigError("need E > 0 and beta_e >= 0")
        if min(self.gamma1, self.gamma2) < 0:
            raise ConfigError("rates must be >= 0")
        if not (self.beta1 > 0 and self.beta2 > 0):
            raise ConfigError("beta1 and beta2 must be > 0")
        if self.stride < 1:
            raise ConfigError("stride must be >= 1")
        return self

    def system(self) -> SystemSpec:
        return SystemSpec(h_w=self.h_w, E=self.E, beta=self.beta_e / self.E, case=Case.parse(self.case))

    def baths(self) -> tuple[BathParams, BathParams]:
        out = []
        for gamma, n, bw in ((self.gamma1, self.n1, self.beta1_omega0),
                             (self.gamma2, self.n2, self.beta2_omega0)):
            out.append(BathParams(gamma, n) if n is not None else BathParams.from_beta_omega(gamma, bw))
        return out[0], out[1]

    def to_text(self) -> str:
        lines = [f"{f.name}={_dump(getattr(self, f.name))}" for f in fields(self)
                 if getattr(self, f.name) is not None]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, base: "RunConfig | None" = None) -> "RunConfig":
        return _apply(base or cls(), parse_key_values(text))


_FIELD_TYPES = {"case": str, "work_convention": str, "output_path": str, "stride": int}
_PAIRED = {"n1": "beta1_omega0", "beta1_omega0": "n1", "n2": "beta2_omega0", "beta2_omega0": "n2"}


def _dump(v) -> str:
    return fmt(v) if isinstance(v, float) else str(v)


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _apply(cfg: RunConfig, values: dict[str, object]) -> RunConfig:
    names = {f.name for f in fields(RunConfig)}
    changes = {}
    for k, v in values.items():
        if k not in names:
            raise ConfigError(f"unknown key {k!r}")
        typ = _FIELD_TYPES.get(k, float)
        try:
            changes[k] = typ(v)
        except ValueError:
            raise ConfigError(f"{k}: cannot parse {v!r}") from None
    given = set(changes)
    for k, other in _PAIRED.items():
        if k in given and other in given:
            raise ConfigError(f"{k} and {other} are mutually exclusive")
        if k in given:
            changes[other] = None
    return dataclasses.replace(cfg, **changes)


# --- simulate -------------------------------------------------------------

def simulation_rows(cfg: RunConfig):
    """Integrate and return (csv text, max deviation from the closed form)."""
    spec, baths = cfg.system(), cfg.baths()
    traj = dynamics.evolve(dynamics.initial_state(spec), spec, baths, cfg.t_end, cfg.dt, stride=cfg.stride)
    work = thermo.local_work(traj, spec, cfg.beta1, cfg.beta2, cfg.work_convention)
    params = analytic.ClosedFormParams.from_models(spec, baths)

    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    max_dev = 0.0
    for k, (t, rho) in enumerate(traj):
        max_dev = max(max_dev, float(np.max(np.abs(rho - analytic.rho_at(spec.case, t, params)))))
        d = np.real(np.diag(rho))
        row = [t, entanglement.concurrence(rho).value, work.W_a[k], work.W_b[k], work.W_tot[k],
               *d, abs(rho[0, 3]), qmat.purity(rho), np.trace(rho).real - 1.0]
        buf.write(",".join(fmt(float(x)) for x in row) + "\n")
    return buf.getvalue(), max_dev, traj.warnings


def cmd_simulate(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        cfg.validate()
        text, max_dev, warnings = simulation_rows(cfg)
    except IntegrationError as exc:
        print(f"integration failed at {exc}", file=stderr)
        return EXIT_NUMERIC
    except analytic.TranscriptionError as exc:
        print(f"closed form failed: {exc}", file=stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    for w in warnings:
        print(f"warning: {w}", file=stderr)
    print(f"max |rho_rk4 - rho_closed_form| = {max_dev:.3e}", file=stderr)
    return EXIT_OK


# --- global work ----------------------------------------------------------

def cmd_global_work(beta1: float | None, beta2: float | None, E: float = 1.0,
                    grid: str | None = None, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        if grid is not None:
            try:
                na, nb = (int(s) for s in grid.split(":"))
            except ValueError:
                raise ConfigError(f"--grid expects NA:NB, got {grid!r}") from None
            if na < 1 or nb < 1:
                raise ConfigError("grid sizes must be >= 1")
            points = thermo.work_grid(na, nb, E)
            print("beta1_E,beta2_E,beta_tilde_E,W,entropy_residual,W_nonneg", file=stdout)
            for p in points:
                print(",".join([fmt(p.beta1 * E), fmt(p.beta2 * E), fmt(p.beta_tilde * E), fmt(p.work),
                                fmt(p.entropy_residual), "pass" if p.claim_holds else "fail"]), file=stdout)
            bad = sum(not p.claim_holds for p in points)
            print(f"W >= -1e-10 violated at {bad} of {len(points)} grid points", file=stderr)
            return EXIT_OK
        if beta1 is None or beta2 is None:
            raise ConfigError("--beta1 and --beta2 are required without --grid")
        if not E > 0 or beta1 < 0 or beta2 < 0:
            raise ConfigError("need E > 0 and non-negative betas")
        r = thermo.global_work(beta1, beta2, E)
    except ConfigError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except thermo.SolverError as exc:
        print(f"solver failed: {exc}", file=stderr)
        return EXIT_NUMERIC
    print(f"beta_tilde={fmt(r.beta_tilde)}", file=stdout)
    print(f"W={fmt(r.work)}", file=stdout)
    print(f"entropy_residual={fmt(r.entropy_residual)}", file=stdout)
    return EXIT_OK


# --- validate -------------------------------------------------------------

def _reference_models(case: Case):
    spec = SystemSpec(h_w=0.1, E=1.0, beta=0.001, case=case)
    baths = (BathParams.from_beta_omega(0.105, 0.7), BathParams.from_beta_omega(0.105, 0.8))
    return spec, baths


def validation_checks(quick: bool = False):
    """Yield (name, passed, detail) for each oracle check."""
    times = [0.0, 1.0, 5.0] if quick else None
    t_end = 5.0 if quick else 50.0
    for case in Case:
        spec, baths = _reference_models(case)
        params = analytic.ClosedFormParams.from_models(spec, baths)
        try:
            traj = dynamics.evolve(dynamics.initial_state(spec), spec, baths, t_end, 0.01)
            idx = [int(round(t / 0.01)) for t in times] if quick else range(len(traj))
            dev = max(float(np.max(np.abs(traj.states[k] - analytic.rho_at(case, traj.times[k], params))))
                      for k in idx)
            yield f"rk4 vs closed form, {case.value}", dev <= 1e-8, f"max dev {dev:.2e}"
        except (analytic.TranscriptionError, IntegrationError) as exc:
            yield f"rk4 vs closed form, {case.value}", False, str(exc)
            continue
        inv = max(max(qmat.hermiticity_error(r), abs(np.trace(r).real - 1)) for r in traj.states)
        neg = min(float(np.linalg.eigvalsh(r)[0]) for r in traj.states)
        yield f"trace/hermiticity/positivity, {case.value}", inv <= 1e-10 and neg >= -1e-8, \
            f"max drift {inv:.1e}, min eig {neg:.1e}"
        if case is Case.I:
            dev = max(abs(entanglement.concurrence(r).value - entanglement.concurrence_x_state(r).value)
                      for r in traj.states[::10])
            yield "X-state vs general concurrence", dev <= 1e-9, f"max diff {dev:.2e}"
            c0 = entanglement.concurrence(traj.states[0]).value
            want = 1.0 / math.cosh(spec.beta * spec.E)
            yield "initial concurrence", abs(c0 - want) <= 1e-9, f"{c0:.12f} vs {want:.12f}"

    spec, baths = _reference_models(Case.I)
    fixed = dynamics.steady_state(baths)
    res = float(np.max(np.abs(dynamics.master_rhs(fixed, spec, baths))))
    yield "detailed-balance fixed point", res <= 1e-10, f"|rhs| {res:.1e}"
    params = analytic.ClosedFormParams.from_models(spec, baths)
    t_long = 1e4 / min(params.population_rates)
    try:
        dev = max(float(np.max(np.abs(analytic.rho_at(c, t_long, params) - fixed))) for c in Case)
        yield "closed-form long-time limit", dev <= 1e-6, f"max dev {dev:.1e}"
    except analytic.TranscriptionError as exc:
        yield "closed-form long-time limit", False, str(exc)


def cmd_validate(quick: bool = False, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ok = True
    for name, passed, detail in validation_checks(quick):
        ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}", file=stdout)
    print("all checks passed" if ok else "validation FAILED", file=stdout)
    return EXIT_OK if ok else EXIT_VALIDATION


# --- argument parsing -----------------------------------------------------

_SIM_FLAGS = {
    "--case": ("case", str), "--beta-e": ("beta_e", float), "--E": ("E", float), "--hw": ("h_w", float),
    "--gamma1": ("gamma1", float), "--gamma2": ("gamma2", float),
    "--n1": ("n1", float), "--beta1-omega0": ("beta1_omega0", float),
    "--n2": ("n2", float), "--beta2-omega0": ("beta2_omega0", float),
    "--beta1": ("beta1", float), "--beta2": ("beta2", float),
    "--t-end": ("t_end", float), "--dt": ("dt", float), "--stride": ("stride", int),
    "--convention": ("work_convention", str), "--out": ("output_path", str),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwork", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate a scenario and write a CSV time series")
    sim.add_argument("--config", help="key=value file; flags override it")
    for flag, (dest, typ) in _SIM_FLAGS.items():
        sim.add_argument(flag, dest=dest, type=str, default=None,
                         help=f"{dest} ({typ.__name__})")

    gw = sub.add_parser("global-work", help="effective temperature and global work")
    gw.add_argument("--beta1", type=float)
    gw.add_argument("--beta2", type=float)
    gw.add_argument("--E", type=float, default=1.0)
    gw.add_argument("--grid", help="NA:NB grid over (beta1 E, beta2 E) in (0, 5]^2")

    val = sub.add_parser("validate", help="run the oracle suite")
    val.add_argument("--quick", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    if args.command == "global-work":
        return cmd_global_work(args.beta1, args.beta2, args.E, args.grid)
    if args.command == "validate":
        return cmd_validate(args.quick)

    try:
        cfg = RunConfig()
        if args.config:
            with open(args.config) as fh:
                cfg = RunConfig.from_text(fh.read(), cfg)
        overrides = {dest: getattr(args, dest) for dest, _ in _SIM_FLAGS.values()
                     if getattr(args, dest) is not None}
        cfg = _apply(cfg, overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return cmd_simulate(cfg)


if __name__ == "__main__":
    sys.exit(main())
