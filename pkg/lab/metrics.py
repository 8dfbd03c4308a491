"""JSONL run log: one line per compile, verdict, divisor, conic or sweep case."""

from __future__ import annotations

import json
import logging
import threading
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

log = logging.getLogger(__name__)


class MetricsLogger:
    """Thread-safe buffered JSONL logger; I/O failures are logged, never raised."""

    def __init__(self, metrics_config: dict | None = None):
        metrics_config = metrics_config or {}
        self._enabled = bool(metrics_config.get("enabled", True))
        self._file_path = Path(metrics_config.get("file", "runs.jsonl"))
        try:
            flush_interval = int(metrics_config.get("flush_interval", 10))
        except (TypeError, ValueError):
            flush_interval = 10
        self._flush_interval = max(1, flush_interval)

        self._buffer: list[str] = []
        self._lock = threading.Lock()
        self._event_count = 0
        self._write_error_count = 0
        self._last_warn_s = 0.0
        self._warn_interval_s = 30.0

        if self._enabled:
            try:
                self._file_path.parent.mkdir(parents=True, exist_ok=True)
            except OSError:
                self._enabled = False
                self._warn("run log path is not writable; disabling run log")

    @property
    def enabled(self) -> bool:
        return self._enabled

    @property
    def path(self) -> Path:
        return self._file_path

    @property
    def write_errors(self) -> int:
        return self._write_error_count

    def log(self, event_type: str, **data) -> None:
        if not self._enabled:
            return
        entry = {"timestamp": time.time(), "event": event_type, **data}
        try:
            # sympy numbers, places and towers are written as their text
            line = json.dumps(entry, default=str)
        except (TypeError, ValueError, OverflowError):
            self._warn("run log serialization failed; dropping event")
            return
        with self._lock:
            self._buffer.append(line)
            self._event_count += 1
            if self._event_count % self._flush_interval == 0:
                self._flush_locked_safe()

    @contextmanager
    def timed(self, event_type: str, **data) -> Iterator[dict]:
        """Log event_type with duration_ms when the block exits; the block may add fields to the yielded dict."""
        extra: dict = {}
        start = time.perf_counter()
        try:
            yield extra
        except Exception as e:
            extra.setdefault("error", f"{type(e).__name__}: {e}")
            raise
        finally:
            elapsed = (time.perf_counter() - start) * 1000.0
            self.log(event_type, **data, **extra, duration_ms=round(elapsed, 3))

    def flush(self) -> None:
        with self._lock:
            self._flush_locked_safe()

    def _flush_locked(self) -> None:
        if not self._buffer:
            return
        with open(self._file_path, "a", encoding="utf-8") as f:
            for line in self._buffer:
                f.write(line + "\n")
        self._buffer.clear()

    def _flush_locked_safe(self) -> None:
        try:
            self._flush_locked()
        except (OSError, ValueError):
            # drop the buffer so a dead disk cannot grow memory
            self._buffer.clear()
            self._write_error_count += 1
            self._warn("run log flush failed; dropping buffered events")

    def _warn(self, message: str) -> None:
        now = time.monotonic()
        if self._last_warn_s and now - self._last_warn_s < self._warn_interval_s:
            return
        self._last_warn_s = now
        log.warning(message)


def read_events(path: str | Path, offset: int = 0) -> tuple[list[dict], int]:
    """Events appended after byte offset, and the new offset; malformed lines are skipped."""
    path = Path(path)
    if not path.exists():
        return [], offset
    events: list[dict] = []
    with path.open("r", encoding="utf-8") as f:
        f.seek(offset)
        for line in f:
            line = line.strip()
            if not line:
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError:
                continue
            if isinstance(payload, dict):
                events.append(payload)
        new_offset = f.tell()
    return events, new_offset
