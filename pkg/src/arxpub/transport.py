"""HTTP transport with retry, recording and replay.

Every request goes through a :class:`Transport`; the live implementation
talks to the network with retries, the replay implementation answers from
a fixture directory and fails when a request has no fixture (which is how
tests catch stray cascade steps), and the recording implementation writes
fixtures while passing through.

Fixture format: one file per request; the first line holds the request
URL, optionally followed by a numeric status (default 200); everything
after the first newline is the verbatim response body.
"""

from __future__ import annotations

import hashlib
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Optional

import requests

from .errors import FixtureMissing, NetworkError, RateLimited

RETRYABLE_STATUSES = frozenset({500, 502, 503, 504})


@dataclass(frozen=True)
class HttpResponse:
    url: str
    status: int
    body: str

    @property
    def ok(self) -> bool:
        return 200 <= self.status < 300


class Transport:
    """Base: keeps an ordered, thread-safe log of every requested URL."""

    def __init__(self) -> None:
        self._log: list[str] = []
        self._log_lock = threading.Lock()

    @property
    def request_log(self) -> list[str]:
        with self._log_lock:
            return list(self._log)

    def reset_log(self) -> None:
        with self._log_lock:
            self._log.clear()

    def get(self, url: str, headers: Optional[Mapping[str, str]] = None) -> HttpResponse:
        with self._log_lock:
            self._log.append(url)
        return self._get(url, dict(headers or {}))

    def _get(self, url: str, headers: dict) -> HttpResponse:
        raise NotImplementedError


class LiveTransport(Transport):
    """Network transport. Retries transport failures and 5xx with
    exponential backoff; 429 raises RateLimited for the caller to handle."""

    def __init__(
        self,
        user_agent: str,
        timeout: float = 10.0,
        attempts: int = 3,
        base_delay: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
        session: Optional[requests.Session] = None,
    ) -> None:
        super().__init__()
        self.user_agent = user_agent
        self.timeout = timeout
        self.attempts = max(1, attempts)
        self.base_delay = base_delay
        self._sleep = sleep
        self._session = session or requests.Session()

    def _get(self, url: str, headers: dict) -> HttpResponse:
        headers.setdefault("User-Agent", self.user_agent)
        last_error: Optional[Exception] = None
        for attempt in range(self.attempts):
            if attempt:
                self._sleep(self.base_delay * (2 ** (attempt - 1)))
            try:
                response = self._session.get(url, headers=headers, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code == 429:
                raise RateLimited(f"429 from {url}")
            if response.status_code in RETRYABLE_STATUSES:
                last_error = NetworkError(f"{response.status_code} from {url}")
                continue
            return HttpResponse(url=url, status=response.status_code, body=response.text)
        raise NetworkError(f"request failed after {self.attempts} attempts: {url} ({last_error})")


class ReplayTransport(Transport):
    """Answers requests from a fixture directory; a missing fixture is an
    error, never a silent empty response."""

    def __init__(self, fixture_dir: Path | str) -> None:
        super().__init__()
        self.fixture_dir = Path(fixture_dir)
        self._index: Optional[dict[str, tuple[int, str]]] = None
        self._index_lock = threading.Lock()

    def _load_index(self) -> dict[str, tuple[int, str]]:
        with self._index_lock:
            if self._index is None:
                index: dict[str, tuple[int, str]] = {}
                if self.fixture_dir.is_dir():
                    for path in sorted(self.fixture_dir.iterdir()):
                        if not path.is_file():
                            continue
                        text = path.read_text(encoding="utf-8")
                        head, _, body = text.partition("\n")
                        parts = head.split()
                        if not parts:
                            continue
                        url = parts[0]
                        status = int(parts[1]) if len(parts) > 1 and parts[1].isdigit() else 200
                        index[url] = (status, body)
                self._index = index
            return self._index

    def invalidate(self) -> None:
        with self._index_lock:
            self._index = None

    def _get(self, url: str, headers: dict) -> HttpResponse:
        index = self._load_index()
        if url not in index:
            raise FixtureMissing(f"no fixture for {url} in {self.fixture_dir}")
        status, body = index[url]
        if status == 0:
            raise NetworkError(f"fixture marks {url} as a transport failure")
        if status == 429:
            raise RateLimited(f"429 from {url}")
        return HttpResponse(url=url, status=status, body=body)


class RecordingTransport(Transport):
    """Passes through to a live transport and writes one fixture file per
    request, named for the host/path plus a short hash of the full URL."""

    def __init__(self, inner: LiveTransport, record_dir: Path | str) -> None:
        super().__init__()
        self.inner = inner
        self.record_dir = Path(record_dir)
        self.record_dir.mkdir(parents=True, exist_ok=True)

    def _get(self, url: str, headers: dict) -> HttpResponse:
        response = self.inner._get(url, headers)
        slug = re.sub(r"[^a-zA-Z0-9._-]+", "_", url.split("://", 1)[-1])[:80]
        digest = hashlib.sha1(url.encode("utf-8")).hexdigest()[:10]
        path = self.record_dir / f"{slug}_{digest}.txt"
        head = url if response.status == 200 else f"{url} {response.status}"
        path.write_text(f"{head}\n{response.body}", encoding="utf-8")
        return response


def write_fixture(directory: Path | str, name: str, url: str, body: str, status: int = 200) -> Path:
    """Helper for building fixture files programmatically."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    head = url if status == 200 else f"{url} {status}"
    path = directory / name
    path.write_text(f"{head}\n{body}", encoding="utf-8")
    return path


def make_transport(config) -> Transport:
    """Replay when a fixture directory is configured, else live (optionally
    recording)."""
    if config.fixtures_dir is not None:
        return ReplayTransport(config.fixtures_dir)
    live = LiveTransport(
        user_agent=config.full_user_agent(),
        timeout=config.request_timeout,
        attempts=config.retry_attempts,
        base_delay=config.retry_base_delay,
    )
    if config.record_dir is not None:
        return RecordingTransport(live, config.record_dir)
    return live
