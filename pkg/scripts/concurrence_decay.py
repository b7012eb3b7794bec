"""Concurrence C(t) of the entangled, locally thermal start state under two
bath settings, plus the classically correlated and product starts.

    python3 scripts/concurrence_decay.py --out results/concurrence.csv
"""
import argparse
import csv
from dataclasses import dataclass, field

import numpy as np

from qwork import dynamics, entanglement
from qwork.dynamics import BathParams, Case, SystemSpec


@dataclass
class Setting:
    label: str
    beta1_omega0: float
    beta2_omega0: float
    case: Case = Case.I


@dataclass
class Config:
    beta_e: float = 0.001
    h_w: float = 0.1
    gamma: float = 0.105
    t_end: float = 40.0
    dt: float = 0.01
    stride: int = 50
    settings: list = field(default_factory=lambda: [
        Setting("entangled_cold", 0.7, 0.8),
        Setting("entangled_hot", 0.5, 0.6),
        Setting("classical", 0.7, 0.8, Case.II),
        Setting("product", 0.7, 0.8, Case.III),
    ])


def run(cfg: Config):
    columns = {}
    for s in cfg.settings:
        spec = SystemSpec(h_w=cfg.h_w, E=1.0, beta=cfg.beta_e, case=s.case)
        baths = (BathParams.from_beta_omega(cfg.gamma, s.beta1_omega0),
                 BathParams.from_beta_omega(cfg.gamma, s.beta2_omega0))
        traj = dynamics.evolve(dynamics.initial_state(spec), spec, baths, cfg.t_end, cfg.dt, stride=cfg.stride)
        columns["t"] = traj.times
        columns[s.label] = np.array([entanglement.concurrence(r).value for r in traj.states])
    return columns


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="concurrence.csv")
    ap.add_argument("--t-end", type=float, default=Config.t_end)
    args = ap.parse_args()
    cols = run(Config(t_end=args.t_end))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in zip(*cols.values()):
            w.writerow([f"{x:.12g}" for x in row])
    first = {k: v[0] for k, v in cols.items() if k != "t"}
    last = {k: v[-1] for k, v in cols.items() if k != "t"}
    print("C(0):", {k: round(float(v), 7) for k, v in first.items()})
    print(f"C({cols['t'][-1]:g}):", {k: f"{v:.2e}" for k, v in last.items()})


if __name__ == "__main__":
    main()
