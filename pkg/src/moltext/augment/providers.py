"""Provider configuration, HTTP transport, rate limiting and retry policy.

The wire contract is an HTTPS POST of
``{"model": ..., "messages": [{"role": "system", ...}, {"role": "user",
...}], "temperature": ..., "round": ...}`` with a bearer token read from
the environment variable named in the config; the rewritten text is read
from a configurable JSON path, ``choices[0].message.content`` by default.

The rate limiter tracks the timestamps of the last R sends so no 60-second
sliding window ever sees more than R requests. Clock and sleep functions
are injectable for simulated-time tests.
"""

from __future__ import annotations

import json
import os
import random
import re
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import requests


@dataclass(frozen=True)
class ProviderConfig:
    name: str
    endpoint: str
    auth_env: str
    model: str
    max_concurrency: int = 1
    requests_per_minute: int = 60
    max_retries: int = 3
    timeout: float = 30.0
    temperature: float = 1.0
    response_path: str = "choices[0].message.content"

    def __post_init__(self):
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be at least 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def secret(self) -> str:
        return os.environ.get(self.auth_env, "")


def load_provider_configs(path) -> list[tuple[ProviderConfig, int]]:
    """Read provider configs plus per-provider round counts from a JSON or
    TOML file shaped {"providers": [{..., "rounds": n}, ...]}."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        try:
            import tomllib  # Python 3.11+
        except ImportError:  # pragma: no cover
            import tomli as tomllib
        payload = tomllib.loads(text)
    else:
        payload = json.loads(text)
    out = []
    for entry in payload["providers"]:
        entry = dict(entry)
        rounds = int(entry.pop("rounds", 1))
        out.append((ProviderConfig(**entry), rounds))
    return out


class TransportError(Exception):
    """Network failure, timeout, non-2xx status or unusable response body."""


_PATH_RE = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)|\[(\d+)\]")


def extract_text(payload, path: str) -> str:
    steps: list[str | int] = []
    consumed = 0
    for match in _PATH_RE.finditer(path):
        if path[consumed : match.start()].strip(".") != "":
            raise TransportError(f"cannot parse response path {path!r}")
        name, index = match.group(1), match.group(2)
        steps.append(name if name is not None else int(index))
        consumed = match.end()
    if path[consumed:].strip(".") != "" or not steps:
        raise TransportError(f"cannot parse response path {path!r}")
    current = payload
    for step in steps:
        try:
            current = current[step]
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"response lacks {path!r}: {exc}") from exc
    if not isinstance(current, str):
        raise TransportError(f"value at {path!r} is not text")
    return current


def http_transport(config: ProviderConfig, body: dict) -> dict:
    headers = {"Content-Type": "application/json"}
    secret = config.secret()
    if secret:
        headers["Authorization"] = f"Bearer {secret}"
    try:
        response = requests.post(
            config.endpoint, json=body, headers=headers, timeout=config.timeout
        )
    except requests.RequestException as exc:
        raise TransportError(str(exc)) from exc
    if response.status_code != 200:
        raise TransportError(f"HTTP {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise TransportError(f"non-JSON response: {exc}") from exc


class SlidingWindowLimiter:
    """Blocks so that at most ``rate`` acquisitions happen in any sliding
    ``window`` seconds. Thread safe."""

    def __init__(self, rate: int, window: float = 60.0, clock=time.monotonic, sleep=time.sleep):
        if rate < 1:
            raise ValueError("rate must be at least 1")
        self.rate = rate
        self.window = window
        self._clock = clock
        self._sleep = sleep
        self._sent: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._sent and now - self._sent[0] >= self.window:
                    self._sent.popleft()
                if len(self._sent) < self.rate:
                    self._sent.append(now)
                    return
                wait = self.window - (now - self._sent[0])
            self._sleep(max(wait, 1e-6))


@dataclass
class RetryPolicy:
    """Exponential backoff: base * factor**attempt seconds plus jitter."""

    max_retries: int
    base: float = 1.0
    factor: float = 2.0
    jitter: float = 1.0
    sleep: object = time.sleep
    rng: object = field(default_factory=random.Random)

    def delay(self, attempt: int) -> float:
        return self.base * (self.factor ** attempt) + self.rng.random() * self.jitter

    def wait(self, attempt: int) -> None:
        self.sleep(self.delay(attempt))
