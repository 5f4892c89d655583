"""Duration and window parsing/formatting shared by the CLI and reports.

Durations are handled internally as integer milliseconds. The accepted
text forms are `30s`, `7mn` and bare numbers (seconds); position gaps
take an optional `c` suffix (characters).
"""

from __future__ import annotations

import re

_DURATION_RE = re.compile(r"^\s*(\d+)\s*(mn|min|s|ms)?\s*$")
_CHARS_RE = re.compile(r"^\s*(\d+)\s*c?\s*$")

MS_PER_SECOND = 1000
MS_PER_MINUTE = 60_000


def parse_duration_ms(text: str) -> int:
    """Parse `30s`, `7mn`, `900` (bare seconds) or `250ms` to milliseconds."""
    m = _DURATION_RE.match(text)
    if not m:
        raise ValueError(f"invalid duration: {text!r}")
    value = int(m.group(1))
    unit = m.group(2) or "s"
    if unit in ("mn", "min"):
        return value * MS_PER_MINUTE
    if unit == "s":
        return value * MS_PER_SECOND
    return value


def parse_chars(text: str) -> int:
    """Parse a position gap like `10c` or `10` to a character count."""
    m = _CHARS_RE.match(text)
    if not m:
        raise ValueError(f"invalid character distance: {text!r}")
    return int(m.group(1))


def duration_label(ms: int) -> str:
    """Compact label for a duration: 900000 -> `15mn`, 30000 -> `30s`."""
    if ms % MS_PER_MINUTE == 0 and ms >= MS_PER_MINUTE:
        return f"{ms // MS_PER_MINUTE}mn"
    if ms % MS_PER_SECOND == 0:
        return f"{ms // MS_PER_SECOND}s"
    return f"{ms}ms"


def seconds_str(ms: float) -> str:
    """Milliseconds rendered as seconds with two decimals."""
    return f"{ms / MS_PER_SECOND:.2f}"
