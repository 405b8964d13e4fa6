"""Stateless JSON-over-HTTP scoring service on the stdlib HTTP server.

Endpoints:

* ``POST /v1/score`` — score one request; response carries the modality
  scores, the fused label, the serving modality, and the artifact version.
* ``GET /v1/health`` — liveness plus artifact version.
* ``GET /v1/model-info`` — thresholds, calibration methods, fingerprints.

The loaded artifact is immutable, every request is scored independently,
and the threaded server keeps no cross-request state.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..errors import ArtifactError
from .artifact import ModelArtifact
from .scorer import RequestError


class _Handler(BaseHTTPRequestHandler):
    server_version = "aisoc-scoring/1"
    protocol_version = "HTTP/1.1"

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 - stdlib handler naming
        artifact = self.server.artifact  # type: ignore[attr-defined]
        if self.path == "/v1/health":
            self._send(200, {"status": "ok", "artifact_version": artifact.version})
        elif self.path == "/v1/model-info":
            self._send(200, {
                "format_version": artifact.format_version,
                "thresholds": {"t_m": artifact.fusion.t_m, "t_l": artifact.fusion.t_l},
                "calibrators": {
                    "malware": artifact.calibrator_malware.method.value,
                    "logs": artifact.calibrator_logs.method.value,
                },
                "fingerprints": artifact.fingerprints,
            })
        else:
            self._send(404, {"error": f"unknown path {self.path}"})

    def do_POST(self) -> None:  # noqa: N802 - stdlib handler naming
        if self.path != "/v1/score":
            self._send(404, {"error": f"unknown path {self.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            request = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            self._send(400, {"error": f"malformed JSON request: {exc}"})
            return
        try:
            self._send(200, self.server.scorer.score_request(request))  # type: ignore[attr-defined]
        except RequestError as exc:
            self._send(400, {"error": str(exc)})

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib signature
        pass  # keep the scoring path quiet; errors surface in responses


class ScoringService:
    """A running (or startable) scoring server bound to one artifact."""

    def __init__(self, artifact: ModelArtifact, host: str = "127.0.0.1", port: int = 0):
        if artifact.status != "SERVING":
            raise ArtifactError(
                "refusing to serve a PARTIAL artifact; missing components: "
                + ", ".join(artifact.missing_components()))
        self._server = ThreadingHTTPServer((host, port), _Handler)
        self._server.artifact = artifact  # type: ignore[attr-defined]
        self._server.scorer = artifact.to_scorer()  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        host, port = self._server.server_address[:2]
        return str(host), int(port)

    @property
    def url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def start(self) -> "ScoringService":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def shutdown(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "ScoringService":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.shutdown()


def serve(artifact: ModelArtifact, bind: tuple[str, int] = ("127.0.0.1", 8080)) -> ScoringService:
    """Create a service bound to ``bind``; call ``start()`` or ``serve_forever()``."""
    return ScoringService(artifact, host=bind[0], port=bind[1])
