"""Persistence and interchange: design documents, OBJ export, sweeps.

Documents are JSON with a fixed canonical rendering (sorted keys, 2-space
indent, shortest round-trip float repr), so identical designs serialize to
identical bytes.  The discrete payload stores exactly the generating data,
nothing derived.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import errors
from .builders import THedron
from .design import DesignData, build_tnet
from .functions import from_registry
from .kinematics import deform, parameter_range
from .metrology import check_isometric, dihedral_angles, face_residual_grid, planarity
from .smooth import SmoothSpec, validate_smooth_spec

SCHEMA_VERSION = 1
_HALF_PI = 0.5 * np.pi
_SMOOTH_KEYS = ("g", "psi", "c", "phi", "f", "z")


@dataclass(frozen=True)
class DesignDocument:
    kind: str  # "discrete" | "smooth"
    payload: object  # DesignData | SmoothSpec
    name: str = "untitled"
    created_at: str = "1970-01-01T00:00:00Z"
    schema_version: int = SCHEMA_VERSION


def _payload_dict(doc: DesignDocument):
    if doc.kind == "discrete":
        d: DesignData = doc.payload
        return {
            "m": d.m,
            "n": d.n,
            "phi": [float(x) for x in d.phi],
            "psi": [float(x) for x in d.psi],
            "f0": [float(x) for x in d.f0],
            "g0": [float(x) for x in d.g0],
            "z": [float(x) for x in d.z],
        }
    if doc.kind == "smooth":
        s: SmoothSpec = doc.payload
        return {
            "functions": {k: getattr(s, k).to_registry() for k in _SMOOTH_KEYS}
        }
    raise errors.SchemaViolation(f"unknown document kind {doc.kind!r}", path="kind")


def document_dict(doc: DesignDocument):
    return {
        "schema_version": doc.schema_version,
        "kind": doc.kind,
        "metadata": {"name": doc.name, "created_at": doc.created_at},
        "payload": _payload_dict(doc),
    }


def canonical_json(data) -> bytes:
    return (json.dumps(data, indent=2, sort_keys=True) + "\n").encode("utf-8")


def document_bytes(doc: DesignDocument) -> bytes:
    return canonical_json(document_dict(doc))


def document_id(doc: DesignDocument) -> str:
    """Content address of a document: hash of kind + payload (metadata does
    not change the identity)."""
    blob = canonical_json({"kind": doc.kind, "payload": _payload_dict(doc)})
    return hashlib.sha256(blob).hexdigest()[:12]


def _expect(cond, message, path):
    if not cond:
        raise errors.SchemaViolation(message, path=path)


def validate_design_values(d: dict):
    """Value-level checks of a discrete payload; returns a list of
    (path, message) violations."""
    bad = []
    z = d["z"]
    phi = d["phi"]
    psi = d["psi"]
    g0 = d["g0"]
    if z[0] != 0.0:
        bad.append(("payload.z[0]", "z[0] must be 0 (normal form)"))
    for j in range(1, len(z)):
        if z[j] == z[j - 1]:
            bad.append((f"payload.z[{j}]", f"z[{j}] equals z[{j - 1}]"))
    prev = 0.0
    for i in range(len(phi)):
        eta = psi[i] - prev
        theta = phi[i] - psi[i]
        if abs(eta) >= _HALF_PI:
            bad.append((f"payload.psi[{i}]", f"|eta[{i + 1}]| >= pi/2"))
        if abs(theta) >= _HALF_PI:
            bad.append((f"payload.phi[{i}]", f"|theta[{i + 1}]| >= pi/2"))
        prev = phi[i]
    for i, g in enumerate(g0):
        if g == 0.0:
            bad.append((f"payload.g0[{i}]", f"g0[{i}] must be nonzero"))
    return bad


def _parse_discrete(payload):
    for key in ("m", "n", "phi", "psi", "f0", "g0", "z"):
        _expect(key in payload, f"missing payload key {key!r}", f"payload.{key}")
    for key in ("phi", "psi", "f0", "g0", "z"):
        _expect(
            isinstance(payload[key], list)
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in payload[key]),
            f"{key} must be a list of numbers",
            f"payload.{key}",
        )
    m, n = payload["m"], payload["n"]
    _expect(isinstance(m, int) and m >= 1, "m must be a positive integer", "payload.m")
    _expect(isinstance(n, int) and n >= 1, "n must be a positive integer", "payload.n")
    for key, length in (("phi", m), ("psi", m), ("g0", m), ("f0", n), ("z", n + 1)):
        _expect(
            len(payload[key]) == length,
            f"{key} must have {length} entries for m={m}, n={n}",
            f"payload.{key}",
        )
    bad = validate_design_values(payload)
    if bad:
        path, message = bad[0]
        raise errors.InvariantViolation(message, path=path, violations=bad)
    design = DesignData(
        phi=payload["phi"], psi=payload["psi"], f0=payload["f0"],
        g0=payload["g0"], z=payload["z"],
    )
    # net-level invariants: one-signed strip widths, generating polygons
    # genuinely spanning
    try:
        build_tnet(design)
    except errors.ThedraError as exc:
        path = "payload"
        index = getattr(exc, "index", None)
        if isinstance(exc, errors.SignConsistency) and index is not None:
            path = f"payload.g0[{index - 1}]"
        elif isinstance(exc, errors.CollinearPolygon):
            path = "payload.f0"
        raise errors.InvariantViolation(str(exc), path=path) from exc
    return design


def _parse_smooth(payload):
    _expect("functions" in payload, "missing payload key 'functions'", "payload.functions")
    fns = payload["functions"]
    for key in _SMOOTH_KEYS:
        _expect(key in fns, f"missing function {key!r}", f"payload.functions.{key}")
    built = {}
    for key in _SMOOTH_KEYS:
        try:
            built[key] = from_registry(fns[key])
        except errors.SchemaViolation as exc:
            raise errors.SchemaViolation(str(exc), path=f"payload.functions.{key}") from exc
    try:
        spec = SmoothSpec(**built)
    except errors.ShapeMismatch as exc:
        raise errors.InvariantViolation(str(exc), path="payload.functions") from exc
    bad = validate_smooth_spec(spec)
    if bad:
        field, message = bad[0]
        raise errors.InvariantViolation(
            message,
            path=f"payload.functions.{field}",
            violations=[(f"payload.functions.{p}", m) for p, m in bad],
        )
    return spec


def document_from_dict(data) -> DesignDocument:
    _expect(isinstance(data, dict), "document must be a JSON object", "")
    for key in ("schema_version", "kind", "payload"):
        _expect(key in data, f"missing key {key!r}", key)
    _expect(
        data["schema_version"] == SCHEMA_VERSION,
        f"unsupported schema_version {data['schema_version']!r}",
        "schema_version",
    )
    meta = data.get("metadata", {})
    _expect(isinstance(meta, dict), "metadata must be an object", "metadata")
    kind = data["kind"]
    if kind == "discrete":
        payload = _parse_discrete(data["payload"])
    elif kind == "smooth":
        payload = _parse_smooth(data["payload"])
    else:
        raise errors.SchemaViolation(f"unknown kind {kind!r}", path="kind")
    return DesignDocument(
        kind=kind,
        payload=payload,
        name=str(meta.get("name", "untitled")),
        created_at=str(meta.get("created_at", "1970-01-01T00:00:00Z")),
    )


def save(doc: DesignDocument, path):
    try:
        with open(path, "wb") as fh:
            fh.write(document_bytes(doc))
    except OSError as exc:
        raise errors.IoError(f"cannot write {path}: {exc}") from exc


def load(path) -> DesignDocument:
    try:
        with open(path, "rb") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise errors.IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise errors.SchemaViolation(f"not valid JSON: {exc}", path="") from exc
    return document_from_dict(data)


# ---------------------------------------------------------------------------
# OBJ export
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def obj_bytes(surface) -> bytes:
    """Wavefront OBJ of a quad grid: vertices row-major (i outer, j inner),
    one quad face per cell, 17 significant digits."""
    pts = np.asarray(getattr(surface, "points", surface), dtype=float)
    m1, n1, _ = pts.shape
    lines = []
    for i in range(m1):
        for j in range(n1):
            x, y, z = pts[i, j]
            lines.append(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}")
    idx = lambda i, j: i * n1 + j + 1
    for i in range(1, m1):
        for j in range(1, n1):
            lines.append(
                f"f {idx(i - 1, j - 1)} {idx(i - 1, j)} {idx(i, j)} {idx(i, j - 1)}"
            )
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_obj(surface, path):
    try:
        with open(path, "wb") as fh:
            fh.write(obj_bytes(surface))
    except OSError as exc:
        raise errors.IoError(f"cannot write {path}: {exc}") from exc


def parse_obj(data: bytes):
    """Minimal OBJ reader for round-trip checks: returns (vertices, faces)."""
    verts = []
    faces = []
    for line in data.decode("utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
    return np.array(verts), faces


# ---------------------------------------------------------------------------
# deformation sweeps
# ---------------------------------------------------------------------------

def sweep_t_values(design: DesignData, count: int):
    """count parameter samples across the admissible range; a single frame
    is the undeformed t = 0.  An unbounded range is windowed symmetrically
    about 0."""
    if count < 1:
        raise ValueError("need at least one frame")
    if count == 1:
        return [0.0]
    rng = parameter_range(design)
    t_hi = rng.t_max if np.isfinite(rng.t_max) else -rng.t_min
    return list(np.linspace(rng.t_min, t_hi, count))


def sweep(design: DesignData, out_dir, t_values=None, count=None, name="design"):
    """Deform the design at each t, writing one OBJ per frame plus a
    manifest with the range, blocking reasons and per-frame isometry
    residuals vs the undeformed surface."""
    import os

    rng = parameter_range(design)
    if t_values is None:
        t_values = sweep_t_values(design, count if count is not None else 9)
    else:
        t_values = [float(t) for t in t_values]
        slack = 1e-12 * max(1.0, abs(rng.t_min))
        for t in t_values:
            if not rng.contains(t, slack=slack):
                raise errors.OutOfRange(
                    f"t={t:g} outside [{rng.t_min:g}, {rng.t_max:g}]",
                    reason=rng.max_blocking.reason if t > 0 else rng.min_blocking.reason,
                )

    os.makedirs(out_dir, exist_ok=True)
    base = deform(design, 0.0)
    frames = []
    for k, t in enumerate(t_values):
        surf = deform(design, t)
        fname = f"frame_{k:03d}.obj"
        export_obj(surf, os.path.join(out_dir, fname))
        report = check_isometric(base, surf, tol=1e-9)
        frames.append(
            {
                "index": k,
                "t": float(t),
                "file": fname,
                "isometry_residual": max(
                    report.max_edge_residual, report.max_diagonal_residual
                ),
                "planarity": planarity(surf),
            }
        )
    manifest = {
        "name": name,
        "range": rng.to_dict(),
        "frames": frames,
    }
    with open(os.path.join(out_dir, "manifest.json"), "wb") as fh:
        fh.write(canonical_json(manifest))
    return manifest


def mesh_payload(surface: THedron, base: THedron | None = None, t: float = 0.0):
    """JSON-friendly mesh frame: vertices, quad indices (0-based), isometry
    residual vs the undeformed surface and dihedral statistics."""
    pts = np.asarray(surface.points, dtype=float)
    m1, n1, _ = pts.shape
    quads = [
        [
            (i - 1) * n1 + (j - 1),
            (i - 1) * n1 + j,
            i * n1 + j,
            i * n1 + (j - 1),
        ]
        for i in range(1, m1)
        for j in range(1, n1)
    ]
    residual = 0.0
    face_residuals = [0.0] * len(quads)
    if base is not None:
        rep = check_isometric(base, surface, tol=1e-9)
        residual = max(rep.max_edge_residual, rep.max_diagonal_residual)
        face_residuals = [float(x) for x in face_residual_grid(base, surface).ravel()]
    try:
        rows, cols = dihedral_angles(surface)
        angles = np.concatenate([rows.ravel(), cols.ravel()])
    except errors.DegenerateFace:
        angles = np.array([])
    stats = (
        {
            "min": float(angles.min()),
            "max": float(angles.max()),
            "mean": float(angles.mean()),
            "count": int(angles.size),
        }
        if angles.size
        else {"min": None, "max": None, "mean": None, "count": 0}
    )
    return {
        "t": float(t),
        "class": surface.class_tag,
        "vertices": [[float(c) for c in p] for p in pts.reshape(-1, 3)],
        "quads": quads,
        "rows": int(m1),
        "cols": int(n1),
        "isometry_residual": float(residual),
        "face_residuals": face_residuals,
        "planarity": planarity(surface),
        "dihedral": stats,
    }
