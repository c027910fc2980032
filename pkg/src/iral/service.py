"""Threaded HTTP front end for the search pipeline.

Routes:
    GET /api/search?q=...&page=N   search results as JSON
    GET /healthz                   liveness probe
    GET /...                       static UI assets when a directory is configured

Responses are plain json.dumps output, so two identical requests against
fixture providers produce byte-identical bodies.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .config import AppConfig
from .errors import AllProvidersFailed, EmptyQuery, PageOutOfRange
from .pipeline import SearchEngine

logger = logging.getLogger(__name__)


class SearchRequestHandler(BaseHTTPRequestHandler):
    server_version = "iral/0.1"
    engine: SearchEngine  # set on the server instance
    static_dir: Path | None

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        logger.debug("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, separators=(",", ":")).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8")

    def do_GET(self) -> None:  # noqa: N802 (http.server naming)
        parts = urlsplit(self.path)
        if parts.path == "/healthz":
            self._send(200, b"ok", "text/plain; charset=utf-8")
        elif parts.path == "/api/search":
            self._handle_search(parse_qs(parts.query))
        else:
            self._handle_static(parts.path)

    def _handle_search(self, params: dict[str, list[str]]) -> None:
        query = params.get("q", [""])[0]
        raw_page = params.get("page", ["1"])[0]
        try:
            page = int(raw_page)
        except ValueError:
            self._send_json(400, {"error": f"page must be an integer, got {raw_page!r}"})
            return
        engine = self.server.engine  # type: ignore[attr-defined]
        try:
            payload = engine.search(query, page)
        except EmptyQuery:
            self._send_json(400, {"error": "no response: search query is blank"})
        except PageOutOfRange as exc:
            self._send_json(400, {"error": str(exc)})
        except AllProvidersFailed:
            self._send_json(
                502,
                {
                    "error": "all search providers are unreachable right now; "
                    "please retry once connectivity is restored"
                },
            )
        except Exception:
            logger.exception("search failed")
            self._send_json(500, {"error": "internal error"})
        else:
            self._send_json(200, payload)

    def _handle_static(self, path: str) -> None:
        static_dir = self.server.static_dir  # type: ignore[attr-defined]
        if static_dir is None:
            self._send_json(404, {"error": "not found"})
            return
        relative = path.lstrip("/") or "index.html"
        target = (static_dir / relative).resolve()
        try:
            target.relative_to(static_dir.resolve())
        except ValueError:
            self._send_json(404, {"error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), content_type)


class SearchServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, engine: SearchEngine, host: str = "127.0.0.1", port: int = 8080):
        super().__init__((host, port), SearchRequestHandler)
        self.engine = engine
        static = engine.config.static_dir
        self.static_dir = Path(static) if static else None


def serve(config: AppConfig, host: str = "127.0.0.1", port: int = 8080) -> SearchServer:
    """Start the server on a background thread and return it.

    Port 0 binds an ephemeral port; read the real one from
    ``server.server_address``.
    """
    server = SearchServer(SearchEngine(config), host=host, port=port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
