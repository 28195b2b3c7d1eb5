import http.server
import json
import sys
import threading
from pathlib import Path

import pytest

from temprel.core import TemporalUnit
from temprel.predictor import (
    BaselinePredictor,
    HttpPredictor,
    PredictorError,
    SubprocessPredictor,
    make_predictor,
)

STUB = Path(__file__).parent / "stub_predictor.py"


def one_hot(index):
    return tuple(1.0 if i == index else 0.0 for i in range(7))


class TestBaseline:
    def setup_method(self):
        self.predictor = BaselinePredictor()

    def test_narrative_order(self):
        premise = "Anna sneezed loudly. Later she cooked a big dinner for everyone."
        start, distance = self.predictor.dist("Anna sneezed", "cooked a big dinner", premise)
        assert (start.p_before, start.p_after) == (0.8, 0.2)
        assert distance.probs == one_hot(int(TemporalUnit.HOURS))

    def test_reverse_order(self):
        premise = "Anna sneezed loudly. Later she cooked a big dinner for everyone."
        start, _ = self.predictor.dist("cooked a big dinner", "Anna sneezed", premise)
        assert (start.p_before, start.p_after) == (0.2, 0.8)

    def test_identical_events_tie_to_before(self):
        premise = "Anna sneezed loudly in the kitchen."
        start, _ = self.predictor.dist("Anna sneezed", "Anna sneezed", premise)
        assert (start.p_before, start.p_after) == (0.8, 0.2)

    def test_unlocatable_event_is_epsilon_from_uniform(self):
        premise = "Anna sneezed loudly."
        start, _ = self.predictor.dist("martians landed", "Anna sneezed", premise)
        assert start.p_before == pytest.approx(0.5 + 1e-6, abs=1e-12)
        assert start.p_after == pytest.approx(0.5 - 1e-6, abs=1e-12)
        assert start.p_before > start.p_after

    def test_duration_lexicon_hit(self):
        assert BaselinePredictor().dur("sleep on the couch").probs == one_hot(1)
        assert BaselinePredictor().dur("Anna sneezed").probs == one_hot(0)

    def test_duration_default_days(self):
        assert BaselinePredictor().dur("zzz qqq").probs == one_hot(2)

    def test_output_bundles_all_three(self):
        premise = "Anna sneezed. Later Anna slept."
        output = self.predictor.output("Anna sneezed", "Anna slept", premise)
        assert output.start.p_before == 0.8
        assert output.distance.probs == one_hot(1)
        assert output.duration.probs == one_hot(0)

    def test_deterministic(self):
        premise = "Anna sneezed loudly. Later she cooked dinner."
        first = self.predictor.output("Anna sneezed", "cooked dinner", premise)
        second = BaselinePredictor().output("Anna sneezed", "cooked dinner", premise)
        assert first == second


def stub_command(*flags):
    return " ".join([sys.executable, str(STUB), *flags])


class TestSubprocessPredictor:
    def test_round_trip(self):
        with SubprocessPredictor(stub_command()) as predictor:
            start, distance = predictor.dist("a", "b", "ctx")
            assert start.p_before == pytest.approx(0.7)
            assert sum(distance.probs) == pytest.approx(1.0, abs=1e-12)
            duration = predictor.dur("slept")
            assert duration.probs == one_hot(1)

    def test_responses_matched_by_id_not_arrival_order(self):
        with SubprocessPredictor(stub_command("--decoy-first")) as predictor:
            first = predictor.dist("a", "b", "ctx")
            second = predictor.dist("a", "b", "ctx")
            assert first == second

    def test_error_response_raises_with_context(self):
        with SubprocessPredictor(stub_command()) as predictor:
            with pytest.raises(PredictorError, match="synthetic failure"):
                predictor.dist("boom", "b", "ctx")

    def test_near_normalized_vectors_accepted(self):
        with SubprocessPredictor(stub_command()) as predictor:
            start, distance = predictor.dist("skew", "b", "ctx")
            assert start.p_before + start.p_after == pytest.approx(1.0, abs=1e-12)
            assert sum(distance.probs) == pytest.approx(1.0, abs=1e-12)

    def test_badly_normalized_vectors_rejected(self):
        with SubprocessPredictor(stub_command()) as predictor:
            with pytest.raises(PredictorError, match="bad dist response"):
                predictor.dist("bad", "b", "ctx")

    def test_dead_process_raises(self):
        predictor = SubprocessPredictor(stub_command())
        predictor.close()
        with pytest.raises(PredictorError):
            predictor.dist("a", "b", "ctx")

    def test_unknown_command_raises(self):
        with pytest.raises(PredictorError):
            SubprocessPredictor("nonexistent-predictor-binary-xyz")


class _Handler(http.server.BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        request = json.loads(self.rfile.read(length))
        if request.get("type") == "dist":
            body = {"id": request["id"], "p_before": 0.25, "p_after": 0.75,
                    "d": [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]}
        else:
            body = {"id": request["id"], "v": [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]}
        payload = json.dumps(body).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_endpoint():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/"
    server.shutdown()
    thread.join()


class TestHttpPredictor:
    def test_round_trip(self, http_endpoint):
        predictor = HttpPredictor(http_endpoint)
        start, distance = predictor.dist("a", "b", "ctx")
        assert start.p_after == pytest.approx(0.75)
        assert distance.probs == one_hot(0)
        assert predictor.dur("slept").probs == one_hot(2)

    def test_unreachable_endpoint(self):
        predictor = HttpPredictor("http://127.0.0.1:1/", timeout=0.5)
        with pytest.raises(PredictorError):
            predictor.dur("slept")


class TestMakePredictor:
    def test_baseline(self):
        assert isinstance(make_predictor("baseline"), BaselinePredictor)

    def test_cmd(self):
        predictor = make_predictor(f"cmd:{stub_command()}")
        assert isinstance(predictor, SubprocessPredictor)
        predictor.close()

    def test_http(self):
        assert isinstance(make_predictor("http://localhost:9/"), HttpPredictor)

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            make_predictor("ftp://nope")
        with pytest.raises(ValueError):
            make_predictor("cmd:")
