"""Local HTTP frame service over a workspace directory.

Endpoints (JSON unless noted):

    POST /designs                 validate + persist, returns {"id": ...}
    GET  /designs                 list of stored design ids and names
    GET  /designs/{id}            the stored document
    GET  /designs/{id}/range      admissible deformation interval
    GET  /designs/{id}/mesh?t=..  mesh frame at parameter t
    GET  /designs/{id}/classify   recomputed class tag
    GET  /designs/{id}/obj?t=..   Wavefront OBJ of the frame (text/plain)
    GET  /presets                 names of built-in presets
    GET  /presets/{name}          a preset document

Invariant violations answer 400 with machine-readable field paths; a t
outside the admissible interval answers 422 with the range and blocking
reason in the body.  Compute is pure; writes are serialized by one lock.
"""

import json
import os
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import errors
from .builders import build_thedron, classify
from .documents import (
    DesignDocument,
    canonical_json,
    document_bytes,
    document_dict,
    document_from_dict,
    document_id,
    mesh_payload,
    obj_bytes,
)
from .kinematics import deform, parameter_range
from .presets import DISCRETE_PRESETS, preset_document

WORKSPACE_ENV = "THEDRA_WORKSPACE"

_ID_RE = re.compile(r"^[0-9a-f]{12}$")


class Workspace:
    """Directory of stored design documents with single-writer persistence."""

    def __init__(self, root):
        self.root = root
        self.designs_dir = os.path.join(root, "designs")
        os.makedirs(self.designs_dir, exist_ok=True)
        self._write_lock = threading.Lock()

    def _path(self, design_id):
        return os.path.join(self.designs_dir, f"{design_id}.json")

    def store(self, doc: DesignDocument) -> str:
        design_id = document_id(doc)
        with self._write_lock:
            with open(self._path(design_id), "wb") as fh:
                fh.write(document_bytes(doc))
        return design_id

    def fetch(self, design_id) -> DesignDocument:
        if not _ID_RE.match(design_id):
            raise KeyError(design_id)
        path = self._path(design_id)
        if not os.path.exists(path):
            raise KeyError(design_id)
        with open(path, "rb") as fh:
            return document_from_dict(json.load(fh))

    def list_ids(self):
        out = []
        for fname in sorted(os.listdir(self.designs_dir)):
            if fname.endswith(".json"):
                design_id = fname[:-5]
                try:
                    doc = self.fetch(design_id)
                except (KeyError, errors.ThedraError):
                    continue
                out.append({"id": design_id, "name": doc.name, "kind": doc.kind})
        return out


def _violations_payload(exc):
    if isinstance(exc, errors.InvariantViolation) and exc.violations:
        v = [{"path": p, "message": m} for p, m in exc.violations]
    else:
        v = [{"path": getattr(exc, "path", None), "message": str(exc)}]
    return {"error": type(exc).__name__, "violations": v}


class WorkbenchHandler(BaseHTTPRequestHandler):
    server_version = "thedra"
    protocol_version = "HTTP/1.1"

    # silence per-request logging; tests and the CLI drive many requests
    def log_message(self, fmt, *args):
        pass

    @property
    def workspace(self) -> Workspace:
        return self.server.workspace

    def _send(self, code, body: bytes, content_type="application/json"):
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _json(self, code, data):
        self._send(code, canonical_json(data))

    def _error(self, code, data):
        self._json(code, data)

    def do_OPTIONS(self):
        self._send(204, b"")

    # -- POST ---------------------------------------------------------------

    def do_POST(self):
        parsed = urlparse(self.path)
        if parsed.path.rstrip("/") != "/designs":
            self._error(404, {"error": "NotFound", "path": parsed.path})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            data = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            self._error(400, {"error": "SchemaViolation",
                              "violations": [{"path": "", "message": f"bad JSON: {exc}"}]})
            return
        try:
            doc = document_from_dict(data)
        except (errors.SchemaViolation, errors.InvariantViolation) as exc:
            self._error(400, _violations_payload(exc))
            return
        design_id = self.workspace.store(doc)
        self._json(201, {"id": design_id, "name": doc.name, "kind": doc.kind})

    # -- GET ----------------------------------------------------------------

    def do_GET(self):
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        parts = [p for p in parsed.path.split("/") if p]
        try:
            if parts == ["designs"]:
                self._json(200, {"designs": self.workspace.list_ids()})
            elif parts == ["presets"]:
                self._json(200, {"presets": sorted(DISCRETE_PRESETS)})
            elif len(parts) == 2 and parts[0] == "presets":
                try:
                    doc = preset_document(parts[1])
                except KeyError:
                    self._error(404, {"error": "NotFound", "preset": parts[1]})
                    return
                self._json(200, document_dict(doc))
            elif len(parts) >= 2 and parts[0] == "designs":
                self._design_route(parts[1], parts[2:], query)
            elif self._maybe_static(parsed.path):
                pass
            else:
                self._error(404, {"error": "NotFound", "path": parsed.path})
        except BrokenPipeError:
            pass

    def _design_route(self, design_id, rest, query):
        try:
            doc = self.workspace.fetch(design_id)
        except KeyError:
            self._error(404, {"error": "NotFound", "id": design_id})
            return
        if rest and doc.kind != "discrete":
            self._error(
                400,
                {"error": "SchemaViolation",
                 "violations": [{"path": "kind",
                                 "message": "frame endpoints need a discrete design"}]},
            )
            return

        if not rest:
            self._json(200, document_dict(doc))
            return
        verb = rest[0]
        design = doc.payload
        if verb == "range":
            self._json(200, parameter_range(design).to_dict())
        elif verb in ("mesh", "obj"):
            t_raw = query.get("t", ["0"])[0]
            try:
                t = float(t_raw)
            except ValueError:
                self._error(400, {"error": "SchemaViolation",
                                  "violations": [{"path": "t", "message": f"bad t {t_raw!r}"}]})
                return
            rng = parameter_range(design)
            if not rng.contains(t, slack=1e-12 * max(1.0, abs(t))):
                self._error(
                    422,
                    {
                        "error": "OutOfRange",
                        "t": t,
                        "range": rng.to_dict(),
                        "blocking": (rng.max_blocking if t > rng.t_max else rng.min_blocking).to_dict(),
                    },
                )
                return
            surface = deform(design, t)
            if verb == "mesh":
                base = deform(design, 0.0)
                self._json(200, mesh_payload(surface, base=base, t=t))
            else:
                self._send(200, obj_bytes(surface), content_type="text/plain; charset=utf-8")
        elif verb == "classify":
            self._json(200, {"class": classify(build_thedron(design))})
        else:
            self._error(404, {"error": "NotFound", "verb": verb})

    # -- static UI ----------------------------------------------------------

    _TYPES = {
        ".html": "text/html; charset=utf-8",
        ".js": "text/javascript; charset=utf-8",
        ".css": "text/css; charset=utf-8",
        ".map": "application/json",
    }

    def _maybe_static(self, path):
        ui_dir = getattr(self.server, "ui_dir", None)
        if not ui_dir:
            return False
        rel = path.lstrip("/") or "index.html"
        full = os.path.normpath(os.path.join(ui_dir, rel))
        if not full.startswith(os.path.normpath(ui_dir)) or not os.path.isfile(full):
            return False
        ext = os.path.splitext(full)[1]
        with open(full, "rb") as fh:
            self._send(200, fh.read(), content_type=self._TYPES.get(ext, "application/octet-stream"))
        return True


def make_server(workspace_dir, port=0, ui_dir=None) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer(("127.0.0.1", port), WorkbenchHandler)
    server.workspace = Workspace(workspace_dir)
    server.ui_dir = ui_dir
    return server


def serve(workspace_dir, port, ui_dir=None):
    server = make_server(workspace_dir, port, ui_dir)
    host, actual_port = server.server_address
    print(f"thedra workbench on http://{host}:{actual_port} (workspace: {workspace_dir})")
    try:
        server.serve_forever()
    finally:
        server.server_close()
