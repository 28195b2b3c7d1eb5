"""Wire-protocol serving: line-delimited JSON over stdio or a single HTTP
endpoint.

Requests:

    {"id": n, "type": "dist", "event_a": ..., "event_b": ..., "context": ...}
    {"id": n, "type": "dur", "event": ...}

Responses carry the request id; failures produce {"id": ..., "error": ...}
(id null when the line itself was unreadable). One bad request never stops
the stream. All emitted vectors are renormalized to sum exactly to one.
"""

from __future__ import annotations

import http.server
import json
import logging
import sys
import threading
from typing import Optional, TextIO

import numpy as np

from .model import DISTANCE_PREFIX, Seq2SeqScorer, mark_first_verb

logger = logging.getLogger(__name__)

__all__ = ["handle_request", "handle_line", "serve_stdio", "make_http_server", "serve"]


def _normalized(values: list[float]) -> list[float]:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"model produced invalid probabilities: {values!r}")
    total = float(arr.sum())
    if not 0.0 < total:
        raise ValueError(f"model produced a zero probability mass: {values!r}")
    return [float(v) for v in arr / total]


def _dist_response(request: dict, scorer: Seq2SeqScorer) -> dict:
    for key in ("event_a", "event_b", "context"):
        if not isinstance(request.get(key), str):
            raise ValueError(f"dist request needs string field {key!r}")
    # the comparison query always states the relation as `before`
    input_text = (
        f"event: {request['event_a']} starts before {request['event_b']}. "
        f"story: {request['context']}"
    )
    p_positive, p_negative = scorer.label_pair_probs(input_text)
    p_before, p_after = _normalized([p_positive, p_negative])
    d = _normalized(scorer.unit_probs(input_text, DISTANCE_PREFIX))
    return {"id": request["id"], "p_before": p_before, "p_after": p_after, "d": d}


def _dur_response(request: dict, scorer: Seq2SeqScorer) -> dict:
    if not isinstance(request.get("event"), str):
        raise ValueError("dur request needs string field 'event'")
    input_text = f"event: {mark_first_verb(request['event'])}"
    v = _normalized(scorer.unit_probs(input_text, "answer:"))
    return {"id": request["id"], "v": v}


def handle_request(request: dict, scorer: Seq2SeqScorer) -> dict:
    request_id = request.get("id") if isinstance(request, dict) else None
    try:
        if not isinstance(request, dict):
            raise ValueError("request must be a JSON object")
        kind = request.get("type")
        if kind == "dist":
            return _dist_response(request, scorer)
        if kind == "dur":
            return _dur_response(request, scorer)
        raise ValueError(f"unknown request type {kind!r}")
    except Exception as exc:  # one bad request must not kill the stream
        logger.warning("request %r failed: %s", request_id, exc)
        return {"id": request_id, "error": str(exc)}


def handle_line(line: str, scorer: Seq2SeqScorer) -> Optional[dict]:
    if not line.strip():
        return None
    try:
        request = json.loads(line)
    except json.JSONDecodeError as exc:
        return {"id": None, "error": f"undecodable request line: {exc}"}
    return handle_request(request, scorer)


def serve_stdio(scorer: Seq2SeqScorer, stdin: TextIO = None, stdout: TextIO = None):
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        response = handle_line(line, scorer)
        if response is None:
            continue
        stdout.write(json.dumps(response) + "\n")
        stdout.flush()


class _Handler(http.server.BaseHTTPRequestHandler):
    scorer: Seq2SeqScorer = None

    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length).decode("utf-8", errors="replace")
        response = handle_line(body, self.scorer) or {"id": None, "error": "empty request"}
        payload = json.dumps(response).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


def make_http_server(scorer: Seq2SeqScorer, host: str, port: int):
    handler = type("BoundHandler", (_Handler,), {"scorer": scorer})
    return http.server.ThreadingHTTPServer((host, port), handler)


def serve(scorer: Seq2SeqScorer, transport: str):
    """Run until terminated. transport is "stdio" or "host:port"."""
    if transport == "stdio":
        serve_stdio(scorer)
        return
    host, _, port = transport.rpartition(":")
    server = make_http_server(scorer, host or "127.0.0.1", int(port))
    logger.info("serving on http://%s:%d/", *server.server_address)
    try:
        server.serve_forever()
    finally:
        server.server_close()


def start_http_thread(scorer: Seq2SeqScorer, host: str = "127.0.0.1", port: int = 0):
    """Spin the HTTP transport on a daemon thread; returns (server, url)."""
    server = make_http_server(scorer, host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, f"http://{server.server_address[0]}:{server.server_address[1]}/"
