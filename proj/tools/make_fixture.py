#!/usr/bin/env python3
"""Writes the synthetic 365-day hourly PV fixture (data/pv_fixture.csv).

Diurnal shape: zero output for hours 0-5 and 20-23, near zero at 6 and 19,
peak at hour 13. Day-to-day variation is a negatively skewed cloudiness factor
(most days near clear sky, a tail of overcast days) times a small per-hour
jitter. The spread is invented; only the mean shape is meant to be realistic.
"""
import argparse
import random

MEAN_KWH = [
    0, 0, 0, 0, 0, 0, 400, 3500, 10000, 18000, 26000, 31500,
    34400, 36200, 35200, 31000, 24500, 16000, 8000, 2000, 0, 0, 0, 0,
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/pv_fixture.csv")
    ap.add_argument("--days", type=int, default=365)
    ap.add_argument("--seed", type=int, default=2018)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    with open(args.out, "w", newline="\n") as f:
        f.write("# synthetic hourly PV generation (kWh), generated by tools/make_fixture.py\n")
        f.write("# the per-hour variances are invented; only the diurnal mean shape is modeled\n")
        f.write("day," + ",".join(f"h{h}" for h in range(24)) + "\n")
        for d in range(args.days):
            cloud = 1.0 - 0.2 * rng.random() ** 3
            row = []
            for m in MEAN_KWH:
                v = m * cloud * (1.0 + 0.03 * (2.0 * rng.random() - 1.0)) / 0.95
                row.append(f"{v:.3f}")
            f.write(f"d{d + 1:03d}," + ",".join(row) + "\n")


if __name__ == "__main__":
    main()
