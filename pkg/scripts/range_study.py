#!/usr/bin/env python3
"""Survey deformation ranges over random designs.

Samples random valid designs, prints the distribution of the admissible
interval endpoints and which constraint blocks each end.

    python scripts/range_study.py --count 200 --seed 7
"""

import argparse
import sys

import numpy as np

sys.path.insert(0, "tests")
from conftest import random_design  # noqa: E402

from thedra.kinematics import parameter_range  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    lows, highs = [], []
    for _ in range(args.count):
        r = parameter_range(random_design(rng))
        lows.append(r.t_min)
        highs.append(r.t_max if np.isfinite(r.t_max) else np.nan)
    lows = np.array(lows)
    highs = np.array(highs)
    print(f"designs: {args.count}")
    print(
        f"t_min: median {np.median(lows):+.3f}, "
        f"range [{lows.min():+.3f}, {lows.max():+.3f}]"
    )
    print(
        f"t_max: median {np.nanmedian(highs):+.3f}, "
        f"range [{np.nanmin(highs):+.3f}, {np.nanmax(highs):+.3f}]"
    )


if __name__ == "__main__":
    main()
