import threading

import pytest

from arxpub.errors import FixtureMissing, NetworkError, RateLimited
from arxpub.transport import (
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    write_fixture,
)


class FakeResponse:
    def __init__(self, status_code, text=""):
        self.status_code = status_code
        self.text = text


class FakeSession:
    """Scripted requests.Session stand-in: pops one outcome per call."""

    def __init__(self, outcomes):
        self.outcomes = list(outcomes)
        self.calls = []

    def get(self, url, headers=None, timeout=None):
        self.calls.append((url, dict(headers or {}), timeout))
        outcome = self.outcomes.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def live(outcomes, attempts=3):
    sleeps = []
    transport = LiveTransport(
        user_agent="test-agent/1.0",
        timeout=5.0,
        attempts=attempts,
        base_delay=1.0,
        sleep=sleeps.append,
        session=FakeSession(outcomes),
    )
    return transport, sleeps


class TestLiveTransport:
    def test_happy_path_sets_user_agent(self):
        transport, _ = live([FakeResponse(200, "body")])
        response = transport.get("http://example.org/x")
        assert response.status == 200 and response.body == "body"
        session = transport._session
        assert session.calls[0][1]["User-Agent"] == "test-agent/1.0"

    def test_5xx_retried_with_backoff_then_succeeds(self):
        transport, sleeps = live([FakeResponse(503), FakeResponse(500), FakeResponse(200, "ok")])
        response = transport.get("http://example.org/x")
        assert response.status == 200
        assert sleeps == [1.0, 2.0]  # exponential from 1 s

    def test_transport_errors_exhaust_into_network_error(self):
        import requests

        transport, sleeps = live([requests.ConnectionError("boom")] * 3)
        with pytest.raises(NetworkError):
            transport.get("http://example.org/x")
        assert len(sleeps) == 2

    def test_429_raises_rate_limited_without_retry(self):
        transport, sleeps = live([FakeResponse(429)])
        with pytest.raises(RateLimited):
            transport.get("http://example.org/x")
        assert sleeps == []

    def test_404_returned_not_raised(self):
        transport, _ = live([FakeResponse(404, "gone")])
        assert transport.get("http://example.org/x").status == 404


class TestReplayTransport:
    def test_status_token_and_default(self, tmp_path):
        write_fixture(tmp_path, "a.txt", "http://x/one", "hello")
        write_fixture(tmp_path, "b.txt", "http://x/two", "gone", status=404)
        transport = ReplayTransport(tmp_path)
        assert transport.get("http://x/one") == transport.get("http://x/one")
        assert transport.get("http://x/one").status == 200
        assert transport.get("http://x/one").body == "hello"
        assert transport.get("http://x/two").status == 404

    def test_missing_fixture_raises(self, tmp_path):
        with pytest.raises(FixtureMissing):
            ReplayTransport(tmp_path).get("http://x/none")

    def test_status_zero_marks_transport_failure(self, tmp_path):
        write_fixture(tmp_path, "a.txt", "http://x/broken", "", status=0)
        with pytest.raises(NetworkError):
            ReplayTransport(tmp_path).get("http://x/broken")

    def test_429_fixture_raises_rate_limited(self, tmp_path):
        write_fixture(tmp_path, "a.txt", "http://x/limited", "", status=429)
        with pytest.raises(RateLimited):
            ReplayTransport(tmp_path).get("http://x/limited")

    def test_multiline_bodies_round_trip(self, tmp_path):
        body = "line one\nline two\n\nline four"
        write_fixture(tmp_path, "a.txt", "http://x/multi", body)
        assert ReplayTransport(tmp_path).get("http://x/multi").body == body

    def test_request_log_records_even_missing_fixtures(self, tmp_path):
        transport = ReplayTransport(tmp_path)
        with pytest.raises(FixtureMissing):
            transport.get("http://x/none")
        assert transport.request_log == ["http://x/none"]

    def test_log_is_shared_across_threads(self, tmp_path):
        write_fixture(tmp_path, "a.txt", "http://x/one", "hello")
        transport = ReplayTransport(tmp_path)
        threads = [
            threading.Thread(target=lambda: transport.get("http://x/one")) for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(transport.request_log) == 8


class TestRecordingTransport:
    def test_recorded_fixture_replays_identically(self, tmp_path):
        inner, _ = live([FakeResponse(200, "payload {x}")])
        recorder = RecordingTransport(inner, tmp_path)
        recorded = recorder.get("http://example.org/works?search=q")
        replay = ReplayTransport(tmp_path).get("http://example.org/works?search=q")
        assert replay.status == recorded.status
        assert replay.body == recorded.body

    def test_non_200_status_recorded(self, tmp_path):
        inner, _ = live([FakeResponse(404, "missing")])
        recorder = RecordingTransport(inner, tmp_path)
        recorder.get("http://example.org/gone")
        replay = ReplayTransport(tmp_path).get("http://example.org/gone")
        assert replay.status == 404
        assert replay.body == "missing"
