"""Parsing and formatting of byte sizes, bandwidths, and times.

Quantities are stored internally in base units: bytes, bytes/second, and
seconds. Size suffixes are decimal (1 KB = 1e3 B, 1 TB = 1e12 B), matching
how vendors quote memory capacity and link bandwidth. Parsing is idempotent:
feeding an already-normalized number back in returns the same value.
"""

from __future__ import annotations

import re

from .errors import ConfigError

_SIZE_FACTORS = {
    "b": 1.0,
    "kb": 1e3,
    "mb": 1e6,
    "gb": 1e9,
    "tb": 1e12,
    "pb": 1e15,
    "eb": 1e18,
}

_TIME_FACTORS = {
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "µs": 1e-6,  # micro sign
    "μs": 1e-6,  # greek mu
    "ns": 1e-9,
}

_QUANTITY_RE = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\s]*)\s*$"
)


def _split(value: str, field: str) -> tuple[float, str]:
    match = _QUANTITY_RE.match(value)
    if match is None:
        raise ConfigError(f"{field}: cannot parse quantity {value!r}")
    return float(match.group(1)), match.group(2)


def parse_bytes(value, field: str = "size") -> float:
    """Parse a byte count: a plain number or a string like '4 TB' or '512GB'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{field}: expected number or string, got {type(value).__name__}")
    number, suffix = _split(value, field)
    factor = _SIZE_FACTORS.get(suffix.lower(), None) if suffix else 1.0
    if factor is None:
        raise ConfigError(f"{field}: unknown size suffix {suffix!r} in {value!r}")
    return number * factor


def parse_rate(value, field: str = "bandwidth") -> float:
    """Parse a bandwidth: a plain number (bytes/s) or a string like '100 GB/s'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{field}: expected number or string, got {type(value).__name__}")
    number, suffix = _split(value, field)
    if suffix.endswith("/s"):
        suffix = suffix[:-2]
    factor = _SIZE_FACTORS.get(suffix.lower(), None) if suffix else 1.0
    if factor is None:
        raise ConfigError(f"{field}: unknown bandwidth suffix in {value!r}")
    return number * factor


def parse_seconds(value, field: str = "latency") -> float:
    """Parse a duration: a plain number (seconds) or a string like '2 us'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{field}: expected number or string, got {type(value).__name__}")
    number, suffix = _split(value, field)
    factor = _TIME_FACTORS.get(suffix.lower(), None) if suffix else 1.0
    if factor is None:
        raise ConfigError(f"{field}: unknown time suffix in {value!r}")
    return number * factor


def fmt_bytes(nbytes: float) -> str:
    """Format a byte count with the largest decimal suffix that keeps it >= 1."""
    for suffix, factor in (("PB", 1e15), ("TB", 1e12), ("GB", 1e9), ("MB", 1e6), ("KB", 1e3)):
        if abs(nbytes) >= factor:
            return f"{nbytes / factor:.4g} {suffix}"
    return f"{nbytes:.4g} B"


def fmt_rate(bps: float) -> str:
    """Format a bandwidth in the same style as fmt_bytes, per second."""
    return fmt_bytes(bps) + "/s"
