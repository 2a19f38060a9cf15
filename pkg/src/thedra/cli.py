"""Command-line workbench for building, deforming and serving designs."""

import argparse
import json
import os
import sys

import numpy as np

from . import errors
from .builders import build_thedron, classify
from .design import DesignData
from .documents import (
    canonical_json,
    export_obj,
    load,
    save,
    sweep,
)
from .kinematics import deform, parameter_range
from .metrology import check_isometric, max_dihedral_change, planarity
from .presets import (
    DISCRETE_PRESETS,
    SMOOTH_PRESETS,
    preset_document,
)
from .server import WORKSPACE_ENV, serve
from .smooth import (
    RevolutionSurface,
    SmoothSpec,
    TranslationalSurface,
    deform_general_surface,
    deform_molding_surface,
    deform_revolution_surface,
    deform_translational_surface,
    general_to_translational,
    sample_to_grid,
)


def _load_design(path) -> DesignData:
    doc = load(path)
    if doc.kind != "discrete":
        raise errors.SchemaViolation("this command needs a discrete design", path="kind")
    return doc.payload


def cmd_preset(args):
    kwargs = {}
    if args.params:
        for pair in args.params.split(","):
            key, _, value = pair.partition("=")
            kwargs[key.strip()] = float(value)
    doc = preset_document(args.name, **kwargs)
    save(doc, args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_build(args):
    design = _load_design(args.design)
    surface = build_thedron(design)
    export_obj(surface, args.output)
    print(f"wrote {args.output} ({surface.m + 1}x{surface.n + 1} vertices)")
    return 0


def cmd_range(args):
    design = _load_design(args.design)
    sys.stdout.write(canonical_json(parameter_range(design).to_dict()).decode())
    return 0


def cmd_classify(args):
    design = _load_design(args.design)
    print(classify(build_thedron(design)))
    return 0


def cmd_deform(args):
    design = _load_design(args.design)
    surface = deform(design, args.t)
    export_obj(surface, args.output)
    print(f"wrote {args.output} (t={args.t:g})")
    return 0


def cmd_sweep(args):
    design = _load_design(args.design)
    t_values = None
    if args.t_list:
        t_values = [float(x) for x in args.t_list.split(",")]
    manifest = sweep(
        design, args.output, t_values=t_values, count=args.frames,
        name=os.path.basename(args.design),
    )
    print(f"wrote {len(manifest['frames'])} frames to {args.output}")
    return 0


def cmd_verify(args):
    design = _load_design(args.design)
    rng = parameter_range(design)
    t = args.t if args.t is not None else 0.5 * (
        rng.t_max if np.isfinite(rng.t_max) else -rng.t_min
    )
    base = deform(design, 0.0)
    surf = deform(design, t)
    rep = check_isometric(base, surf, tol=1e-9)
    plan = max(planarity(base), planarity(surf))
    dihedral = max_dihedral_change(base, surf)
    ok = rep.passed and plan <= 1e-9
    print(f"parameter range   [{rng.t_min:.6g}, {rng.t_max:.6g}]")
    print(f"checked t         {t:.6g}")
    print(f"planarity         {plan:.3e}  (<= 1e-9)")
    print(
        f"isometry residual {max(rep.max_edge_residual, rep.max_diagonal_residual):.3e}"
        f"  (<= 1e-9, worst face {rep.worst_face})"
    )
    print(f"dihedral change   {dihedral:.3e} rad")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _smooth_preset_surface(name):
    if name not in SMOOTH_PRESETS:
        raise errors.SchemaViolation(
            f"unknown smooth preset {name!r}; choose from {sorted(SMOOTH_PRESETS)}"
        )
    return SMOOTH_PRESETS[name]()


def _smooth_input_surface(args):
    if args.preset and args.design:
        raise errors.SchemaViolation("pass either a smooth document or --preset, not both")
    if args.preset:
        return _smooth_preset_surface(args.preset)
    if not args.design:
        raise errors.SchemaViolation("need a smooth document path or --preset")
    doc = load(args.design)
    if doc.kind != "smooth":
        raise errors.SchemaViolation("smooth-deform needs a smooth document", path="kind")
    return doc.payload


def cmd_smooth_deform(args):
    surface = _smooth_input_surface(args)
    cls = args.surface_class
    if cls == "auto":
        cls = {
            RevolutionSurface: "revolution",
            TranslationalSurface: "translational",
            SmoothSpec: "general",
        }[type(surface)]
    if cls == "revolution":
        deformed = deform_revolution_surface(surface.f, surface.phi, surface.z, args.t)
    elif cls == "translational":
        if isinstance(surface, SmoothSpec):
            surface = general_to_translational(surface)
        deformed = deform_translational_surface(
            surface.x, surface.f, surface.y, surface.z, args.t
        )
    elif cls == "molding":
        deformed = deform_molding_surface(surface, args.t)
    elif cls == "general":
        deformed = deform_general_surface(surface, args.t)
    else:
        raise errors.SchemaViolation(f"unknown class {cls!r}")
    m, n = (int(x) for x in args.grid.split("x"))
    pts, plan = sample_to_grid(deformed, m, n)
    export_obj(pts, args.output)
    drift = 0.0
    for u in np.linspace(*surface.u_domain, 7):
        for v in np.linspace(*surface.v_domain, 7):
            a = np.array(surface.fundamental_form(u, v))
            b = np.array(deformed.fundamental_form(u, v))
            drift = max(drift, float(np.abs(a - b).max()))
    print(f"wrote {args.output} (class={cls}, t={args.t:g})")
    print(f"sampled planarity deviation {plan:.3e}; metric drift {drift:.3e}")
    return 0


def cmd_serve(args):
    workspace = args.workspace or os.environ.get(WORKSPACE_ENV) or os.path.join(
        os.getcwd(), "thedra-workspace"
    )
    serve(workspace, args.port, ui_dir=args.ui_dir)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="thedra",
        description="flexible trapezoidal quad-surfaces: build, deform, verify, serve",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", help="write a built-in design document")
    p.add_argument("name", choices=sorted(DISCRETE_PRESETS))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--params", help="comma-separated key=value overrides")
    p.set_defaults(fn=cmd_preset)

    p = sub.add_parser("build", help="construct the surface and export OBJ")
    p.add_argument("design")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("range", help="print the admissible deformation interval")
    p.add_argument("design")
    p.set_defaults(fn=cmd_range)

    p = sub.add_parser("classify", help="print the recomputed class tag")
    p.add_argument("design")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("deform", help="deform at a parameter value and export OBJ")
    p.add_argument("design")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_deform)

    p = sub.add_parser("sweep", help="export a frame sequence plus manifest")
    p.add_argument("design")
    p.add_argument("--frames", type=int, default=9)
    p.add_argument("--t-list", help="explicit comma-separated t values")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run the measurement oracles on a design")
    p.add_argument("design")
    p.add_argument("--t", type=float)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser(
        "smooth-deform", help="deform a smooth document or preset and sample to OBJ"
    )
    p.add_argument("design", nargs="?", help="smooth design document")
    p.add_argument("--preset", choices=sorted(SMOOTH_PRESETS))
    p.add_argument("--class", dest="surface_class", default="auto",
                   choices=["auto", "translational", "molding", "revolution", "general"])
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--grid", default="16x16")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_smooth_deform)

    p = sub.add_parser("serve", help="start the local workbench service")
    p.add_argument("--port", type=int, default=8754)
    p.add_argument("--workspace", help=f"defaults to ${WORKSPACE_ENV} or ./thedra-workspace")
    p.add_argument("--ui-dir", help="directory of built designer UI assets to serve")
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except errors.ThedraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
