from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from promptcanvas.embeddings import StubEmbeddingProvider


@pytest.fixture(scope="session")
def stub_embedder():
    return StubEmbeddingProvider(dimension=64, seed=0)


class _JsonHandler(BaseHTTPRequestHandler):
    """Tiny JSON server; behavior injected through the server instance."""

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        self.server.requests.append(
            {"path": self.path, "body": body,
             "auth": self.headers.get("Authorization")}
        )
        status, payload = self.server.responder(self.path, body)
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):  # keep pytest output clean
        pass


class LocalJsonServer:
    def __init__(self, responder):
        self.server = HTTPServer(("127.0.0.1", 0), _JsonHandler)
        self.server.responder = responder
        self.server.requests = []
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    @property
    def requests(self):
        return self.server.requests

    def set_responder(self, responder):
        self.server.responder = responder

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def json_server():
    servers = []

    def make(responder):
        server = LocalJsonServer(responder)
        servers.append(server)
        return server

    yield make
    for server in servers:
        server.close()


def pytest_terminal_summary(terminalreporter):
    from .acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed in RESULTS.items():
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")
