"""HTTP service exposing resolution to the web UI and to scripts.

Endpoints:

* ``GET /api/resolve?id={raw}`` runs the full pipeline and returns the
  resolution JSON. Input errors map to 400, an unknown id to 404, an
  unreachable arXiv API to 502; literature-database outages degrade to
  partial results with the errors listed per provider.
* ``GET /api/health`` reports the version and replay/live mode.

Responses are cached per normalized id (LRU with TTL) and resolutions are
rate-limited per client address. A built UI bundle, when present, is
served at "/".
"""

from __future__ import annotations

import json
import threading
import time
from collections import OrderedDict, deque
from typing import Callable, Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import ResolverConfig, __version__
from .errors import InputError, NetworkError, NotFound, ParseError, RateLimited
from .idnorm import normalize_arxiv_input
from .resolver import Resolver


class TtlLruCache:
    """Thread-safe LRU cache with per-entry expiry."""

    def __init__(self, capacity: int, ttl: float, clock: Callable[[], float] = time.monotonic) -> None:
        self.capacity = capacity
        self.ttl = ttl
        self._clock = clock
        self._entries: "OrderedDict[str, tuple[float, str]]" = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            expires, value = entry
            if self._clock() >= expires:
                del self._entries[key]
                return None
            self._entries.move_to_end(key)
            return value

    def put(self, key: str, value: str) -> None:
        if self.capacity <= 0:
            return
        with self._lock:
            self._entries[key] = (self._clock() + self.ttl, value)
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


class SlidingWindowLimiter:
    """At most ``limit`` events per ``window`` seconds per key."""

    def __init__(self, limit: int, window: float = 60.0, clock: Callable[[], float] = time.monotonic) -> None:
        self.limit = limit
        self.window = window
        self._clock = clock
        self._events: dict[str, deque] = {}
        self._lock = threading.Lock()

    def allow(self, key: str) -> bool:
        if self.limit <= 0:
            return True
        now = self._clock()
        with self._lock:
            events = self._events.setdefault(key, deque())
            while events and now - events[0] >= self.window:
                events.popleft()
            if len(events) >= self.limit:
                return False
            events.append(now)
            return True


def create_app(config: Optional[ResolverConfig] = None, resolver: Optional[Resolver] = None) -> FastAPI:
    config = config or ResolverConfig()
    resolver = resolver or Resolver(config)
    cache = TtlLruCache(config.cache_capacity, config.cache_ttl)
    limiter = SlidingWindowLimiter(config.rate_limit_per_minute)

    app = FastAPI(title="arxpub", version=__version__, docs_url=None, redoc_url=None)
    app.state.resolver = resolver
    app.state.cache = cache
    app.state.limiter = limiter

    @app.get("/api/health")
    def health() -> JSONResponse:
        return JSONResponse({"version": __version__, "mode": config.mode})

    @app.get("/api/resolve")
    def api_resolve(request: Request, id: str = Query(default="")) -> Response:
        try:
            arxiv_id = normalize_arxiv_input(id)
        except InputError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=400)

        cached = cache.get(arxiv_id.normalized)
        if cached is not None:
            return Response(content=cached, media_type="application/json")

        client = request.client.host if request.client else "unknown"
        if not limiter.allow(client):
            return JSONResponse({"detail": "rate limit exceeded, try again later"}, status_code=429)

        try:
            outcome = resolver.resolve_id(arxiv_id)
        except NotFound as exc:
            return JSONResponse({"detail": str(exc)}, status_code=404)
        except (NetworkError, RateLimited, ParseError) as exc:
            return JSONResponse(
                {"detail": f"arXiv API unavailable: {exc}"}, status_code=502
            )

        body = json.dumps(outcome.to_response_dict(tex_escape=config.tex_escape))
        cache.put(arxiv_id.normalized, body)
        return Response(content=body, media_type="application/json")

    ui_dir = config.ui_dir
    if ui_dir is not None and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def run_server(config: ResolverConfig) -> None:
    """Blocking uvicorn runner; raises OSError when the port is taken."""
    import socket

    import uvicorn

    # fail fast with a readable error instead of a uvicorn traceback
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((config.host, config.port))
    finally:
        probe.close()

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
