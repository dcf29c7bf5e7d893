"""
logkit: labeled oriented graphs, their knot-group quotients, and the
combinatorics used to reason about them.

A small, testable package split into focused modules:

- config:       defaults, the CliConfig dataclass, and logging setup
- sanitize:     log scrubbing and vertex-name validation for untrusted text
- log_model:    labeled oriented graphs: parsing, validation, generators, collapse order
- npc:          forbidden edge combinations, the vertex link, its girth, and the verdict
- presentation: words, presentations, LOG-presentations, power and braid quotients
- abelian:      Smith normal form and abelian invariants
- kernel:       Reidemeister-Schreier presentations of the kernel onto Z_n
- coset_enum:   Todd-Coxeter coset enumeration (HLT and Felsch) and table checks
- diagrams:     surface diagrams, exact-rational curvature, canonical spheres, cancellation
- search:       exhaustive sweep over small labeled oriented intervals
- cli:          argparse entry point and orchestration

Everything except the CLI is pure: values are immutable and operations have no
side effects beyond logging, so the library is safe to use from several
threads or processes at once.
"""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]
