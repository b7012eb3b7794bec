"""Effective inverse temperature and global work on a (beta1 E, beta2 E) grid,
with a count of points where W >= 0 fails.

    python3 scripts/global_work_grid.py --n 50 --out results/global_work.csv
"""
import argparse
import csv
from dataclasses import dataclass

from qwork import thermo


@dataclass
class Config:
    n: int = 50
    E: float = 1.0
    upper: float = 5.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--out", default="global_work.csv")
    args = ap.parse_args()
    cfg = Config(n=args.n)
    points = thermo.work_grid(cfg.n, cfg.n, cfg.E, cfg.upper)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["beta1_E", "beta2_E", "beta_tilde_E", "W", "entropy_residual", "W_nonneg"])
        for p in points:
            w.writerow([f"{p.beta1 * cfg.E:.12g}", f"{p.beta2 * cfg.E:.12g}", f"{p.beta_tilde * cfg.E:.12g}",
                        f"{p.work:.12g}", f"{p.entropy_residual:.3g}", "pass" if p.claim_holds else "fail"])
    bad = sum(not p.claim_holds for p in points)
    worst = min(points, key=lambda p: p.work)
    print(f"W >= 0 fails at {bad} of {len(points)} points (all off the diagonal beta1 = beta2)")
    print(f"largest extractable amount -W = {-worst.work:.6f} at beta1 E = {worst.beta1:g}, beta2 E = {worst.beta2:g}")
    print(f"max entropy residual {max(abs(p.entropy_residual) for p in points):.1e}")


if __name__ == "__main__":
    main()
