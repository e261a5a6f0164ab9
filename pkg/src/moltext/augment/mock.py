"""Scriptable in-process provider for hermetic pipeline tests.

A MockProvider replays a FIFO script of steps (ok / timeout / http_error /
malformed) and falls back to a responder callable once the script is
exhausted. It can be used through a real localhost HTTP server (exercising
the full wire contract) or through an in-process transport that skips the
socket, which is what the simulated-clock tests use. Every handled request
is logged with the limiter-relevant timestamp.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .providers import ProviderConfig, TransportError


def ok(text: str) -> tuple:
    return ("ok", text)


TIMEOUT = ("timeout",)
MALFORMED = ("malformed",)


def http_error(status: int) -> tuple:
    return ("http_error", status)


def _default_responder(body: dict) -> str:
    user = body["messages"][1]["content"]
    round_idx = body.get("round", 1)
    return f"Rewritten caption round {round_idx}: a faithful paraphrase of {len(user)} characters of input."


class MockProvider:
    def __init__(self, script=None, responder=None, clock=time.monotonic):
        self.script = list(script or [])
        self.responder = responder or _default_responder
        self.clock = clock
        self.requests: list[dict] = []
        self.request_times: list[float] = []
        self.auth_headers: list[str | None] = []
        self._lock = threading.Lock()

    def handle(self, body: dict, auth: str | None = None) -> dict:
        """Returns the response payload or raises TransportError like a
        failed network call would."""
        with self._lock:
            self.requests.append(body)
            self.request_times.append(self.clock())
            self.auth_headers.append(auth)
            step = self.script.pop(0) if self.script else None
        if step is None:
            text = self.responder(body)
            step = ("ok", text)
        elif callable(step):
            step = step(body)
        kind = step[0]
        if kind == "ok":
            return {"choices": [{"message": {"content": step[1]}}]}
        if kind == "timeout":
            raise TransportError("timed out (scripted)")
        if kind == "http_error":
            raise TransportError(f"HTTP {step[1]}")
        if kind == "malformed":
            return {"unexpected": True}
        raise ValueError(f"unknown script step {step!r}")

    def transport(self):
        """In-process transport with the same semantics as http_transport."""

        def send(config: ProviderConfig, body: dict) -> dict:
            secret = config.secret()
            auth = f"Bearer {secret}" if secret else None
            return self.handle(body, auth)

        return send

    def serve_http(self) -> tuple[str, "MockProviderServer"]:
        server = MockProviderServer(self)
        return server.url, server


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length).decode("utf-8"))
        provider: MockProvider = self.server.provider  # type: ignore[attr-defined]
        try:
            payload = provider.handle(body, self.headers.get("Authorization"))
        except TransportError as exc:
            if "HTTP" in str(exc):
                status = int(str(exc).split()[-1])
                self.send_response(status)
                self.end_headers()
                return
            # emulate a timeout by closing the connection abruptly
            self.close_connection = True
            return
        raw = json.dumps(payload).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.end_headers()
        self.wfile.write(raw)

    def log_message(self, fmt, *args):  # silence request logging
        pass


class MockProviderServer:
    def __init__(self, provider: MockProvider):
        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self._httpd.provider = provider  # type: ignore[attr-defined]
        host, port = self._httpd.server_address[:2]
        self.url = f"http://{host}:{port}/v1/chat/completions"
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def close(self):
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
