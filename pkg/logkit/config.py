"""
Central configuration: named constants for the enumeration and search ceilings,
the ``CliConfig`` dataclass built by the CLI, and logging setup.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

# --- Coset enumeration defaults ----------------------------------------------
# The infinite quotients never close, so every enumeration runs against a
# ceiling. 10^5 cosets keeps a pure-Python table in memory comfortably and is
# far above the largest acceptance group (order 600).
MAX_COSETS = 100_000
MAX_COSETS_ENV = "LOGKIT_MAX_COSETS"
# One step is the processing of one coset; this only bites on resumable runs.
MAX_STEPS = 10_000_000
DEFAULT_STRATEGY = "hlt"  # "hlt" | "felsch"
# After a lookahead the HLT table is compacted and enumeration resumes only when
# at least this share of the ceiling was freed; otherwise it stops as exceeded.
LOOKAHEAD_FREE_FRACTION = 0.1

# --- Small-LOI search defaults -----------------------------------------------
SEARCH_DEFAULT_MAX_VERTICES = 6
# Seven vertices is ~300k oriented intervals before reversal; beyond that a
# pure-Python sweep stops being a desk-scale check.
SEARCH_MAX_VERTICES_CEILING = 7

# --- Family defaults ---------------------------------------------------------
DEFAULT_FAMILY_N = 11
# Smallest n for which the cyclic-shift interval satisfies every hypothesis.
FAMILY_APPLICABLE_FROM = 10

logger = logging.getLogger("logkit.config")


def default_max_cosets() -> int:
    """The coset ceiling: ``LOGKIT_MAX_COSETS`` when it is a positive integer, else 10^5."""
    raw = os.getenv(MAX_COSETS_ENV)
    if not raw:
        return MAX_COSETS
    try:
        value = int(raw)
    except ValueError:
        logger.warning("%s=%r is not an integer; using %d.", MAX_COSETS_ENV, raw, MAX_COSETS)
        return MAX_COSETS
    if value <= 0:
        logger.warning("%s must be positive; using %d.", MAX_COSETS_ENV, MAX_COSETS)
        return MAX_COSETS
    return value


@dataclass
class CliConfig:
    """One parsed CLI invocation: the command, its inputs, and the validated flags."""

    command: str = ""
    inputs: list[str] = field(default_factory=list)

    # Quotient construction.
    powers: list[tuple[str, int]] = field(default_factory=list)  # ("a", 3) from --power a:3
    all_powers: int | None = None
    braid: int | None = None

    # Enumeration.
    max_cosets: int = MAX_COSETS
    max_steps: int = MAX_STEPS
    strategy: str = DEFAULT_STRATEGY

    subgroup: list[str] = field(default_factory=list)  # order: words generating the subgroup
    dump_table: str | None = None  # order: "plain" | "json"

    # Command-specific.
    kernel_n: int | None = None
    kernel_order: bool = False
    family_n: int = DEFAULT_FAMILY_N
    family_range: tuple[int, int] | None = None
    search_max_vertices: int = SEARCH_DEFAULT_MAX_VERTICES
    output_format: str = "plain"  # present: "plain" | "algebra"
    against: str | None = None  # audit-diagram: LOG or presentation to read faces against
    angles: str | None = None  # audit-diagram: angle file; regular-polygon angles when unset
    sphere_kind: str = "power"  # "power" | "edge"
    sphere_gen: str = "a"
    sphere_edge: str = ""
    sphere_n: int = 3
    audit: bool = False

    json_output: bool = False
    strict: bool = False


def setup_logging(level: str = "INFO") -> logging.Logger:
    """Configure root logging once and return the package logger."""
    numeric = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)-7s %(name)s | %(message)s",
        datefmt="%H:%M:%S",
    )
    pkg_logger = logging.getLogger("logkit")
    pkg_logger.setLevel(numeric)
    return pkg_logger
