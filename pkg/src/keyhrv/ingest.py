"""
Readers and writers for keystroke logs, keymaps and RR-interval recordings.

Keystroke logs are plain text, one ``timestamp_ms,keycode`` record per line,
no header. Keycodes are translated into symbols through a keymap
(``keycode,symbol`` per line). RR files hold one interval in milliseconds per
line; absolute time is supplied separately through ``start_ms``.
"""
from __future__ import annotations

import io
import logging
import os
import warnings
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping, Union

import numpy as np

logger = logging.getLogger(__name__)

Source = Union[str, bytes, IO[str], IO[bytes]]

#: Symbols removed from the event stream. Bigram identity is case-free, so
#: shift/caps carry no timing information we use.
MODIFIER_SYMBOLS = frozenset(
    {"SHIFT", "LSHIFT", "RSHIFT", "CTRL", "LCTRL", "RCTRL", "CONTROL", "ALT",
     "LALT", "RALT", "OPTION", "CMD", "COMMAND", "META", "WIN", "SUPER",
     "CAPSLOCK", "FN"}
)

RR_PLAUSIBLE_MS = (300.0, 2000.0)


class ParseError(ValueError):
    """Malformed input record. ``line`` is 1-based, ``path`` may be None."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.msg = message
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True, order=True)
class KeyEvent:
    """A single key press."""

    timestamp_ms: int
    symbol: str

    def __post_init__(self):
        if self.timestamp_ms <= 0:
            raise ValueError(f"timestamp_ms must be positive, got {self.timestamp_ms}")
        if not self.symbol:
            raise ValueError("symbol must be non-empty")

    @property
    def is_letter(self) -> bool:
        return len(self.symbol) == 1 and self.symbol.isalpha()


@dataclass(frozen=True)
class RrSeries:
    """Beat-to-beat intervals with the timestamp of each interval's ending beat.

    Attributes
    ----------
    end_ms : ndarray of int64
        Timestamp (ms) of the beat closing each interval, strictly increasing.
    rr_ms : ndarray of float64
        Interval lengths in ms, all positive.
    n_dropped : int
        Intervals discarded by the plausibility band while parsing.
    """

    end_ms: np.ndarray
    rr_ms: np.ndarray
    n_dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        end = np.asarray(self.end_ms, dtype=np.int64)
        rr = np.asarray(self.rr_ms, dtype=np.float64)
        if end.shape != rr.shape or end.ndim != 1:
            raise ValueError("end_ms and rr_ms must be 1-d arrays of equal length")
        if np.any(rr <= 0):
            raise ValueError("rr_ms must be positive")
        if np.any(np.diff(end) <= 0):
            raise ValueError("end_ms must be strictly increasing")
        object.__setattr__(self, "end_ms", end)
        object.__setattr__(self, "rr_ms", rr)

    @classmethod
    def from_intervals(cls, rr_ms: Iterable[float], start_ms: int = 0, n_dropped: int = 0) -> "RrSeries":
        """Anchor a bare interval list at ``start_ms`` by cumulative summation."""
        rr = np.asarray(list(rr_ms), dtype=np.float64)
        end = start_ms + np.rint(np.cumsum(rr)).astype(np.int64)
        return cls(end, rr, n_dropped)

    def __len__(self) -> int:
        return len(self.rr_ms)

    @property
    def samples(self) -> list[tuple[int, float]]:
        return list(zip(self.end_ms.tolist(), self.rr_ms.tolist()))

    def __eq__(self, other):
        if not isinstance(other, RrSeries):
            return NotImplemented
        return np.array_equal(self.end_ms, other.end_ms) and np.array_equal(self.rr_ms, other.rr_ms)


def _lines(source: Source) -> Iterator[tuple[int, str]]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        stream: Iterable = io.StringIO(source)
    else:
        stream = source
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if line:
            yield lineno, line


def normalize_symbol(symbol: str) -> str:
    return symbol.strip().upper()


def parse_keymap(source: Source) -> dict[int, str]:
    """Read a ``keycode,symbol`` table. Symbols are upper-cased."""
    keymap = {}
    for lineno, line in _lines(source):
        parts = [p.strip() for p in line.split(",", 1)]
        if len(parts) != 2 or not parts[1]:
            raise ParseError(f"expected 'keycode,symbol', got {line!r}", lineno)
        try:
            code = int(parts[0])
        except ValueError:
            raise ParseError(f"keycode is not an integer: {parts[0]!r}", lineno) from None
        keymap[code] = normalize_symbol(parts[1])
    return keymap


def default_keymap() -> dict[int, str]:
    """Windows virtual-key codes for letters, digits and the common named keys."""
    keymap = {code: chr(code) for code in range(ord("A"), ord("Z") + 1)}
    keymap.update({code: chr(code) for code in range(ord("0"), ord("9") + 1)})
    keymap.update({8: "BACKSPACE", 9: "TAB", 13: "ENTER", 16: "SHIFT", 17: "CTRL",
                   18: "ALT", 20: "CAPSLOCK", 27: "ESC", 32: "SPACE", 190: "PERIOD",
                   188: "COMMA"})
    return keymap


def parse_keystrokes(source: Source, keymap: Mapping[int, str], strict: bool = False) -> list[KeyEvent]:
    """Parse a ``timestamp_ms,keycode`` log into time-sorted key events.

    Modifier keys are dropped. Keycodes missing from ``keymap`` raise in
    strict mode; otherwise they are dropped and a single warning reports how
    many were skipped.
    """
    events = []
    unmapped = 0
    for lineno, line in _lines(source):
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 'timestamp_ms,keycode', got {line!r}", lineno)
        try:
            ts, code = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        if ts <= 0:
            raise ParseError(f"timestamp must be positive, got {ts}", lineno)
        symbol = keymap.get(code)
        if symbol is None:
            if strict:
                raise ParseError(f"unmapped keycode {code}", lineno)
            unmapped += 1
            continue
        symbol = normalize_symbol(symbol)
        if symbol in MODIFIER_SYMBOLS:
            continue
        events.append(KeyEvent(ts, symbol))
    if unmapped:
        warnings.warn(f"dropped {unmapped} events with unmapped keycodes", stacklevel=2)
    # stable sort: equal timestamps keep file order
    events.sort(key=lambda e: e.timestamp_ms)
    return events


def parse_rr(source: Source, start_ms: int = 0,
             plausible_ms: tuple[float, float] = RR_PLAUSIBLE_MS) -> RrSeries:
    """Parse one RR interval (ms) per line, anchored at ``start_ms``.

    Values outside ``plausible_ms`` are dropped and counted in
    ``RrSeries.n_dropped``. Only kept intervals advance the clock.
    """
    lo, hi = plausible_ms
    kept = []
    dropped = 0
    for lineno, line in _lines(source):
        try:
            value = float(line)
        except ValueError:
            raise ParseError(f"RR interval is not a number: {line!r}", lineno) from None
        if not np.isfinite(value) or value <= 0:
            raise ParseError(f"RR interval must be positive, got {line!r}", lineno)
        if value < lo or value > hi:
            dropped += 1
            continue
        kept.append(value)
    if dropped:
        warnings.warn(f"dropped {dropped} RR intervals outside [{lo:g}, {hi:g}] ms", stacklevel=2)
    return RrSeries.from_intervals(kept, start_ms, n_dropped=dropped)


def format_keystrokes(events: Iterable[KeyEvent], keymap: Mapping[int, str]) -> str:
    """Serialize events back to the canonical log format using ``keymap`` inverted."""
    inverse = {}
    for code, symbol in sorted(keymap.items()):
        inverse.setdefault(normalize_symbol(symbol), code)
    out = []
    for ev in events:
        try:
            out.append(f"{ev.timestamp_ms},{inverse[ev.symbol]}\n")
        except KeyError:
            raise ValueError(f"symbol {ev.symbol!r} has no keycode in keymap") from None
    return "".join(out)


def format_keymap(keymap: Mapping[int, str]) -> str:
    return "".join(f"{code},{symbol}\n" for code, symbol in sorted(keymap.items()))


def format_rr(series: RrSeries) -> str:
    return "".join(f"{v!r}\n" for v in series.rr_ms.tolist())


def _read(path: str | os.PathLike, parser, *args, **kwargs):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return parser(fh, *args, **kwargs)
        except ParseError as err:
            raise ParseError(err.msg, err.line, str(path)) from None


def load_keymap(path: str | os.PathLike) -> dict[int, str]:
    return _read(path, parse_keymap)


def load_keystrokes(path: str | os.PathLike, keymap: Mapping[int, str], strict: bool = False) -> list[KeyEvent]:
    return _read(path, parse_keystrokes, keymap, strict=strict)


def load_rr(path: str | os.PathLike, start_ms: int = 0,
            plausible_ms: tuple[float, float] = RR_PLAUSIBLE_MS) -> RrSeries:
    return _read(path, parse_rr, start_ms, plausible_ms=plausible_ms)
