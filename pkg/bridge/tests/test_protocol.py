import json
import shutil
import subprocess
import sys
import urllib.request

import pytest

from lmbridge.model import load_model, mark_first_verb
from lmbridge.server import handle_line, handle_request, start_http_thread

TOLERANCE = 1e-6


@pytest.fixture(scope="module")
def scorer():
    return load_model("tiny", seed=0)


@pytest.fixture(scope="module")
def stdio_bridge():
    proc = subprocess.Popen(
        [sys.executable, "-m", "lmbridge.cli", "--model", "tiny"],
        stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1,
    )
    yield proc
    proc.stdin.close()
    proc.wait(timeout=10)


def send_line(proc, line):
    proc.stdin.write(line + "\n")
    proc.stdin.flush()
    return json.loads(proc.stdout.readline())


def dist_request(rid):
    return {"id": rid, "type": "dist", "event_a": "went to the park",
            "event_b": f"wrote review {rid}", "context": "I went to the park. I wrote a review."}


def dur_request(rid):
    return {"id": rid, "type": "dur", "event": f"took the bus {rid}"}


def assert_normalized(values, size):
    assert len(values) == size
    assert all(isinstance(v, float) and v == v and abs(v) != float("inf") for v in values)
    assert all(v >= 0 for v in values)
    assert abs(sum(values) - 1.0) <= TOLERANCE


class TestStdioConformance:
    def test_100_mixed_requests_one_response_each(self, stdio_bridge):
        requests = []
        for rid in range(1, 101):
            requests.append(dist_request(rid) if rid % 2 else dur_request(rid))
        responses = {}
        for request in requests:
            response = send_line(stdio_bridge, json.dumps(request))
            assert response["id"] not in responses
            responses[response["id"]] = response
        assert set(responses) == set(range(1, 101))
        for rid, response in responses.items():
            assert "error" not in response, response
            if rid % 2:
                assert_normalized([response["p_before"], response["p_after"]], 2)
                assert_normalized(response["d"], 7)
            else:
                assert_normalized(response["v"], 7)

    def test_malformed_line_does_not_terminate_stream(self, stdio_bridge):
        bad = send_line(stdio_bridge, "{this is not json")
        assert bad["id"] is None
        assert "error" in bad
        good = send_line(stdio_bridge, json.dumps(dist_request(999)))
        assert good["id"] == 999
        assert "error" not in good

    def test_bad_request_keeps_id_in_error(self, stdio_bridge):
        response = send_line(stdio_bridge, json.dumps({"id": 777, "type": "dist"}))
        assert response["id"] == 777
        assert "error" in response
        response = send_line(stdio_bridge, json.dumps({"id": 778, "type": "frobnicate"}))
        assert response == {"id": 778, "error": "unknown request type 'frobnicate'"}

    def test_deterministic_responses(self, stdio_bridge):
        first = send_line(stdio_bridge, json.dumps(dist_request(5000)))
        second = send_line(stdio_bridge, json.dumps(dist_request(5000)))
        assert first == second


@pytest.fixture(scope="module")
def endpoint(scorer):
    server, url = start_http_thread(scorer)
    yield url
    server.shutdown()


class TestHttpConformance:
    def post(self, url, body: str):
        request = urllib.request.Request(
            url, data=body.encode(), headers={"Content-Type": "application/json"}
        )
        with urllib.request.urlopen(request, timeout=30) as response:
            return json.loads(response.read())

    def test_mixed_requests(self, endpoint):
        for rid in range(1, 21):
            request = dist_request(rid) if rid % 2 else dur_request(rid)
            response = self.post(endpoint, json.dumps(request))
            assert response["id"] == rid
            if rid % 2:
                assert_normalized([response["p_before"], response["p_after"]], 2)
                assert_normalized(response["d"], 7)
            else:
                assert_normalized(response["v"], 7)

    def test_malformed_body(self, endpoint):
        response = self.post(endpoint, "not json at all")
        assert response["id"] is None
        assert "error" in response


class TestPingPredictor:
    """The primary CLI's ping-predictor round-trips against the bridge."""

    def temprel(self):
        path = shutil.which("temprel")
        assert path, "temprel CLI must be installed"
        return path

    def test_over_stdio(self):
        command = f"cmd:{sys.executable} -m lmbridge.cli --model tiny"
        result = subprocess.run(
            [self.temprel(), "ping-predictor", "--predictor", command],
            capture_output=True, text=True, timeout=180,
        )
        assert result.returncode == 0, result.stderr
        assert "dist ok" in result.stdout and "dur  ok" in result.stdout

    def test_over_http(self, scorer):
        server, url = start_http_thread(scorer)
        try:
            result = subprocess.run(
                [self.temprel(), "ping-predictor", "--predictor", url],
                capture_output=True, text=True, timeout=180,
            )
            assert result.returncode == 0, result.stderr
            assert "dist ok" in result.stdout
        finally:
            server.shutdown()


class TestScorerInternals:
    def test_unit_ids_distinct_and_known(self, scorer):
        assert len(set(scorer.unit_ids)) == 7
        unk = scorer.tokenizer.unk_token_id
        assert all(uid != unk for uid in scorer.unit_ids)

    def test_label_ids_distinct(self, scorer):
        assert scorer.positive_id != scorer.negative_id

    def test_handle_request_in_process(self, scorer):
        response = handle_request(dist_request(1), scorer)
        assert_normalized(response["d"], 7)

    def test_handle_line_blank(self, scorer):
        assert handle_line("   \n", scorer) is None

    def test_unknown_model_spec(self):
        with pytest.raises(ValueError, match="unknown model spec"):
            load_model("bogus")


class TestVerbMarker:
    def test_marks_first_verb(self):
        assert mark_first_verb("took the bus") == "[V] took the bus"
        assert mark_first_verb("the dog barked loudly") == "the dog [V] barked loudly"

    def test_falls_back_to_first_token(self):
        assert mark_first_verb("quiet blue sky") == "[V] quiet blue sky"

    def test_empty_event(self):
        assert mark_first_verb("") == "[V]"
