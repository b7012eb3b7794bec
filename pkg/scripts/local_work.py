"""Local work W_a, W_b and W_tot along a dissipative run, under both sign
conventions for the energy term.

    python3 scripts/local_work.py --out results/local_work.csv
"""
import argparse
import csv
from dataclasses import dataclass

from qwork import dynamics, thermo
from qwork.dynamics import BathParams, Case, SystemSpec
from qwork.thermo import WorkConvention


@dataclass
class Config:
    beta_e: float = 0.1
    h_w: float = 0.1
    gamma: float = 0.105
    beta1_omega0: float = 0.7
    beta2_omega0: float = 0.8
    beta1: float = 0.05
    beta2: float = 0.03
    case: Case = Case.I
    t_end: float = 60.0
    dt: float = 0.01
    stride: int = 50


def run(cfg: Config):
    spec = SystemSpec(h_w=cfg.h_w, E=1.0, beta=cfg.beta_e, case=cfg.case)
    baths = (BathParams.from_beta_omega(cfg.gamma, cfg.beta1_omega0),
             BathParams.from_beta_omega(cfg.gamma, cfg.beta2_omega0))
    traj = dynamics.evolve(dynamics.initial_state(spec), spec, baths, cfg.t_end, cfg.dt, stride=cfg.stride)
    return traj.times, {c: thermo.local_work(traj, spec, cfg.beta1, cfg.beta2, c) for c in WorkConvention}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="local_work.csv")
    ap.add_argument("--case", default="CaseI")
    args = ap.parse_args()
    times, series = run(Config(case=Case.parse(args.case)))
    header = ["t"] + [f"{name}_{c.value}" for c in series for name in ("W_a", "W_b", "W_tot")]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, t in enumerate(times):
            row = [t] + [x for s in series.values() for x in (s.W_a[k], s.W_b[k], s.W_tot[k])]
            w.writerow([f"{x:.12g}" for x in row])
    for c, s in series.items():
        print(f"{c.value}: W_tot({times[-1]:g}) = {s.W_tot[-1]:.6f}")


if __name__ == "__main__":
    main()
