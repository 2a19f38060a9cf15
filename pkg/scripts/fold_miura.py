#!/usr/bin/env python3
"""Export the folding sequence of a Miura-ori pattern.

Writes OBJ frames from the y-collapsed flat state through the folded
configurations to the z-flat sheet, plus the manifest with per-frame
isometry residuals.

    python scripts/fold_miura.py --out out/miura --frames 9 --a 1 --b 1 --c 1 --d 1
"""

import argparse

from thedra.documents import sweep
from thedra.kinematics import miura_flat_parameters
from thedra.presets import miura_design


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/miura")
    ap.add_argument("--frames", type=int, default=9)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--d", type=float, default=1.0)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--n", type=int, default=5)
    args = ap.parse_args()

    design = miura_design(args.a, args.b, args.c, args.d, args.m, args.n)
    t_minus, t_plus = miura_flat_parameters(args.a, args.b, args.c, args.d)
    print(f"flat states at exponential parameters t- = {t_minus:.6f}, t+ = {t_plus:.6f}")
    manifest = sweep(design, args.out, count=args.frames, name="miura")
    r = manifest["range"]
    print(f"additive parameter range [{r['t_min']:.6f}, {r['t_max']:.6f}]")
    for fr in manifest["frames"]:
        print(
            f"  frame {fr['index']}: t = {fr['t']:+.4f}  "
            f"isometry residual {fr['isometry_residual']:.2e}"
        )
    print(f"wrote {len(manifest['frames'])} OBJ frames to {args.out}")


if __name__ == "__main__":
    main()
