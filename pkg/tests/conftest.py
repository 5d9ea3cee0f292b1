import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from accesslens.config import packaged_data


@pytest.fixture(scope="session")
def fixtures_dir():
    return packaged_data("fixtures")


def fixture_path(name: str) -> str:
    return packaged_data(f"fixtures/{name}")


class _StubHandler(BaseHTTPRequestHandler):
    """Protocol conformance stub: deterministic rule-based labels.

    behavior switches (set per-server): ``mode`` may be "ok",
    "bad_label", "short", "flaky" (fail twice then succeed) or
    "always_500".
    """

    mode = "ok"
    fail_budget = 0

    def log_message(self, *args):  # keep pytest output clean
        pass

    @staticmethod
    def rule_label(text: str) -> str:
        lowered = text.lower()
        if any(w in lowered for w in ("broken", "blocked", "unusable",
                                      "awful", "filthy", "refused")):
            return "negative"
        if any(w in lowered for w in ("excellent", "wonderful", "great",
                                      "spotless")):
            return "positive"
        if "freeway" in lowered or "highway" in lowered or \
                "downtown" in lowered or "budget" in lowered:
            return "unrelated"
        return "neutral"

    def do_POST(self):
        cls = type(self)
        if self.path != "/classify":
            self.send_error(404)
            return
        if cls.mode == "always_500" or (cls.mode == "flaky" and
                                        cls.fail_budget > 0):
            cls.fail_budget -= 1
            # Drop the connection so requests sees a transport error.
            self.connection.close()
            return
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length))
        texts = payload["texts"]
        labels = [self.rule_label(t) for t in texts]
        if cls.mode == "bad_label" and labels:
            labels[0] = "Positive!!"
        if cls.mode == "short" and labels:
            labels = labels[:-1]
        body = json.dumps({"labels": labels}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture
def stub_server():
    """Start a conformance stub; yields (endpoint URL, handler class)."""
    handler = type("Handler", (_StubHandler,), {"mode": "ok",
                                                "fail_budget": 0})
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}", handler
    finally:
        server.shutdown()
        thread.join()
