"""
Input-hardening helpers for untrusted strings. Centralized so the parsers and
the CLI validate identically.

Two concerns:

- ``sanitize_name`` keeps vertex and generator names inside the token alphabet
  the text formats can round-trip: a name containing ``|``, ``#``, ``^``, ``:``
  or whitespace would be re-read as a different graph or presentation.
- ``scrub`` flattens untrusted text before it is written to a log.
"""

from __future__ import annotations

import re

# Names are opaque symbols. Everything printable is allowed except the format
# delimiters: "|" separates edge fields, "#" opens a comment, "^" introduces an
# exponent, ":" splits --power specs, "," and "*" are reserved by the algebra
# export, and quotes would break the exported string list.
_NAME_RE = re.compile(r"^[^\s|#^:,*\"'\\]{1,64}$")

# ASCII control characters (C0 range plus DEL): a CR/LF lets untrusted input
# forge or split extra log lines ("log injection", CWE-117).
_CONTROL_CHARS = re.compile(r"[\x00-\x1f\x7f]")


def scrub(value: object) -> str:
    """
    Flatten ``value`` into a single line that is safe to write to a log.

    Strips CR/LF and other control characters so a name or path read from a
    file cannot inject newlines and forge additional log entries.
    """
    cleaned = _CONTROL_CHARS.sub(" ", str(value))
    return cleaned.replace("\r", " ").replace("\n", " ")


def is_valid_name(raw: str) -> bool:
    return bool(_NAME_RE.match(raw))


def sanitize_name(raw: str) -> str:
    """Strip and validate a vertex or generator name; raise ``ValueError`` if invalid."""
    name = raw.strip()
    if not _NAME_RE.match(name):
        raise ValueError(f"Invalid name: {scrub(raw)!r}")
    return name


def parse_power_spec(raw: str) -> tuple[str, int]:
    """Split a ``gen:exponent`` flag value, e.g. ``a:3`` -> ("a", 3)."""
    gen, sep, exp = raw.rpartition(":")
    if not sep or not gen:
        raise ValueError(f"Invalid power spec {scrub(raw)!r}; expected gen:exponent")
    try:
        exponent = int(exp)
    except ValueError:
        raise ValueError(f"Invalid exponent in power spec {scrub(raw)!r}") from None
    return sanitize_name(gen), exponent
