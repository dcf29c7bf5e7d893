"""Command-line entry point: argparse, input loading, and one handler per command."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable

import pandas as pd

from . import config
from .abelian import abelianization
from .coset_enum import STRATEGIES, EnumerationLimits, format_table, todd_coxeter
from .diagrams import (
    SurfaceDiagram,
    canonical_edge_sphere,
    canonical_power_sphere,
    curvature_report,
    diagram_presentation,
    dump_diagram,
    edge_sphere_presentation,
    load_angles,
    load_diagram,
    validate_diagram,
)
from .kernel import reidemeister_schreier_kernel
from .log_model import Edge, LabeledOrientedGraph, cyclic_shift_family, parse_log, serialize_log
from .npc import check, verdict
from .presentation import (
    Presentation,
    Word,
    braid_quotient,
    format_presentation,
    log_presentation,
    looks_like_presentation,
    parse_presentation,
    with_all_powers,
    with_power,
)
from .sanitize import parse_power_spec, sanitize_name, scrub
from .search import search_small_lois

logger = logging.getLogger("logkit.cli")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Flags that parse but do not fit together."""


# --- Parser ------------------------------------------------------------------


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _range(raw: str) -> tuple[int, int]:
    lo, sep, hi = raw.partition(":")
    try:
        bounds = (int(lo), int(hi))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {raw!r}") from None
    if not sep or bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"expected A:B with A <= B, got {raw!r}")
    return bounds


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="Emit a machine-readable JSON report")
    p.add_argument(
        "--strict", action="store_true", help="Exit 1 when the analysis comes out negative"
    )
    p.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return p


def _quotient_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("quotient")
    g.add_argument("input", nargs="?", help="LOG or presentation file ('-' for stdin)")
    g.add_argument(
        "--power",
        action="append",
        default=[],
        metavar="GEN:EXP",
        help="Add the relator GEN^EXP (repeatable)",
    )
    g.add_argument("--all-powers", type=_positive_int, metavar="N", help="Add g^N for every g")
    g.add_argument(
        "--braid",
        type=_positive_int,
        metavar="M",
        help="Use the M-strand braid group with s1^N (N from --all-powers) instead of a file",
    )
    return p


def _enumeration_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("enumeration")
    g.add_argument(
        "--max-cosets",
        type=_positive_int,
        default=None,
        help=f"Coset ceiling (default {config.MAX_COSETS}, or ${config.MAX_COSETS_ENV})",
    )
    g.add_argument("--max-steps", type=_positive_int, default=config.MAX_STEPS)
    g.add_argument("--strategy", choices=list(STRATEGIES), default=config.DEFAULT_STRATEGY)
    return p


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logkit",
        description="Labeled oriented graphs, their knot-group quotients, and surface diagrams.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common, quotient, enum = _common(), _quotient_flags(), _enumeration_flags()

    c = sub.add_parser("check", parents=[common], help="Hypotheses, forbidden patterns, link girth")
    c.add_argument("input", help="LOG file ('-' for stdin)")

    pr = sub.add_parser("present", parents=[common, quotient], help="Print the presentation")
    pr.add_argument("--format", choices=["plain", "algebra"], default="plain")

    o = sub.add_parser("order", parents=[common, quotient, enum], help="Todd-Coxeter order")
    o.add_argument(
        "--subgroup",
        action="append",
        default=[],
        metavar="WORD",
        help="Enumerate cosets of the subgroup these words generate (repeatable)",
    )
    o.add_argument("--dump-table", choices=["plain", "json"], help="Print the closed coset table")

    sub.add_parser("abelianize", parents=[common, quotient], help="Abelian invariants")

    k = sub.add_parser(
        "kernel", parents=[common, quotient, enum], help="Reidemeister-Schreier kernel onto Z_n"
    )
    k.add_argument("--n", type=_positive_int, required=True, dest="kernel_n")
    k.add_argument("--order", action="store_true", help="Also enumerate the kernel's order")

    f = sub.add_parser("family", parents=[common], help="The cyclic-shift interval family")
    f.add_argument("kind", choices=["cyclic-shift"])
    f.add_argument("--n", type=_positive_int, default=config.DEFAULT_FAMILY_N, dest="family_n")
    f.add_argument(
        "--range",
        type=_range,
        dest="family_range",
        metavar="A:B",
        help="Print one verdict row per n in A..B instead of the LOG",
    )

    a = sub.add_parser("audit-diagram", parents=[common], help="Validate and audit curvature")
    a.add_argument("diagram", help="Diagram JSON file")
    a.add_argument("--against", metavar="FILE", help="LOG or presentation the faces must read")
    a.add_argument("--power", action="append", default=[], metavar="GEN:EXP")
    a.add_argument("--all-powers", type=_positive_int, metavar="N")
    a.add_argument(
        "--angles", metavar="FILE", help="Angle JSON; regular-polygon angles when omitted"
    )

    s = sub.add_parser("sphere", parents=[common], help="Emit a canonical sphere diagram")
    s.add_argument("kind", choices=["power", "edge"])
    s.add_argument("--gen", default="a", help="Generator of a power sphere")
    s.add_argument("--edge", default="", metavar="A|B|C", help="Edge of an edge sphere")
    s.add_argument("--n", type=int, required=True, dest="sphere_n")
    s.add_argument("--audit", action="store_true", help="Print the curvature audit instead")

    se = sub.add_parser(
        "search",
        parents=[common],
        help="Exhaustive small-LOI sweep",
        description=(
            "Enumerate compressed injective LOIs on the fixed path 0-1-...-(k-1), one per "
            "path-reversal class, and cross-check each verdict against the link girth."
        ),
    )
    se.add_argument(
        "--max-vertices",
        type=_positive_int,
        default=config.SEARCH_DEFAULT_MAX_VERTICES,
        dest="search_max_vertices",
        help=f"Largest vertex count (at most {config.SEARCH_MAX_VERTICES_CEILING})",
    )
    return p


def _config(args: argparse.Namespace) -> config.CliConfig:
    inputs = [v for v in (getattr(args, "input", None), getattr(args, "diagram", None)) if v]
    max_cosets = getattr(args, "max_cosets", None)
    return config.CliConfig(
        command=args.command,
        inputs=inputs,
        powers=[parse_power_spec(raw) for raw in getattr(args, "power", [])],
        all_powers=getattr(args, "all_powers", None),
        braid=getattr(args, "braid", None),
        max_cosets=max_cosets if max_cosets is not None else config.default_max_cosets(),
        max_steps=getattr(args, "max_steps", config.MAX_STEPS),
        strategy=getattr(args, "strategy", config.DEFAULT_STRATEGY),
        subgroup=list(getattr(args, "subgroup", [])),
        dump_table=getattr(args, "dump_table", None),
        kernel_n=getattr(args, "kernel_n", None),
        kernel_order=getattr(args, "order", False),
        family_n=getattr(args, "family_n", config.DEFAULT_FAMILY_N),
        family_range=getattr(args, "family_range", None),
        search_max_vertices=getattr(
            args, "search_max_vertices", config.SEARCH_DEFAULT_MAX_VERTICES
        ),
        output_format=getattr(args, "format", "plain"),
        against=getattr(args, "against", None),
        angles=getattr(args, "angles", None),
        sphere_kind=getattr(args, "kind", "power"),
        sphere_gen=getattr(args, "gen", "a"),
        sphere_edge=getattr(args, "edge", ""),
        sphere_n=getattr(args, "sphere_n", 3),
        audit=getattr(args, "audit", False),
        json_output=args.json,
        strict=args.strict,
    )


# --- Input -------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> LabeledOrientedGraph:
    text = _read_text(path)
    if looks_like_presentation(text):
        raise UsageError(f"{scrub(path)} holds a presentation; this command needs a LOG")
    return parse_log(text)


def _load_presentation(path: str) -> Presentation:
    text = _read_text(path)
    if looks_like_presentation(text):
        return parse_presentation(text)
    return log_presentation(parse_log(text))


def _quotient(cfg: config.CliConfig) -> Presentation:
    if cfg.braid is not None:
        if cfg.inputs:
            raise UsageError("--braid replaces the input file; give one or the other")
        if cfg.all_powers is None:
            raise UsageError("--braid M needs --all-powers N for the power s1^N")
        p = braid_quotient(cfg.braid, cfg.all_powers)
    else:
        if not cfg.inputs:
            raise UsageError("an input file (or --braid) is required")
        p = _load_presentation(cfg.inputs[0])
        if cfg.all_powers is not None:
            p = with_all_powers(p, cfg.all_powers)
    for gen, exp in cfg.powers:
        p = with_power(p, gen, exp)
    logger.debug("quotient: %d generators, %d relators", p.rank, len(p.relators))
    return p


def _emit_json(payload: object) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _limits(cfg: config.CliConfig) -> EnumerationLimits:
    return EnumerationLimits(max_cosets=cfg.max_cosets, max_steps=cfg.max_steps)


def _presentation_dict(p: Presentation) -> dict[str, object]:
    return {"generators": list(p.generators), "relators": [str(r) for r in p.relators]}


# --- Commands ----------------------------------------------------------------


def _cmd_check(cfg: config.CliConfig) -> int:
    report = check(_load_graph(cfg.inputs[0]))
    if cfg.json_output:
        _emit_json(report.as_dict())
    else:
        v = report.validation
        print(f"compressed: {'yes' if v.compressed else 'no'}")
        print(f"injective: {'yes' if v.injective else 'no'}")
        print(f"shape: {v.shape}")
        if report.patterns is not None:
            for name, found in report.patterns.as_dict().items():
                listed = "; ".join(" ".join(f"({e})" for e in hit) for hit in found)
                print(f"{name}: {listed or 'none'}")
        print(f"npc: {str(report.verdict.npc).lower()}")
        print(f"theorem2_applicable: {str(report.verdict.theorem2_applicable).lower()}")
        for reason in report.verdict.reasons:
            print(f"  - {reason.clause}: {reason.witness}")
        girth = "n/a" if report.link_girth is None else report.link_girth
        print(f"link girth: {girth}")
        agrees = report.oracle_agrees
        print(f"oracle: {'n/a' if agrees is None else ('agrees' if agrees else 'DISAGREES')}")
    if cfg.strict and not report.verdict.theorem2_applicable:
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_present(cfg: config.CliConfig) -> int:
    p = _quotient(cfg)
    if cfg.json_output:
        _emit_json(_presentation_dict(p))
    else:
        print(format_presentation(p, cfg.output_format), end="")
    return EXIT_OK


def _cmd_order(cfg: config.CliConfig) -> int:
    p = _quotient(cfg)
    subgroup = [Word.parse(raw) for raw in cfg.subgroup]
    result = todd_coxeter(p, _limits(cfg), cfg.strategy, subgroup)
    if cfg.json_output:
        payload = result.as_dict()
        payload["summary"] = result.describe()
        if result.table is not None and cfg.dump_table:
            payload["table"] = json.loads(format_table(result.table, "json"))
        _emit_json(payload)
    else:
        print(result.describe())
        if result.table is not None and cfg.dump_table:
            print(format_table(result.table, cfg.dump_table), end="")
    if cfg.strict and not result.is_finite:
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_abelianize(cfg: config.CliConfig) -> int:
    invariants = abelianization(_quotient(cfg))
    if cfg.json_output:
        _emit_json(invariants.as_dict())
    else:
        print(invariants)
    return EXIT_OK


def _cmd_kernel(cfg: config.CliConfig) -> int:
    if cfg.kernel_n is None:
        raise UsageError("kernel needs --n")
    kernel = reidemeister_schreier_kernel(_quotient(cfg), cfg.kernel_n)
    result = todd_coxeter(kernel, _limits(cfg), cfg.strategy) if cfg.kernel_order else None
    if cfg.json_output:
        payload: dict[str, object] = {"kernel": _presentation_dict(kernel)}
        if result is not None:
            payload["order"] = result.as_dict()
            payload["summary"] = result.describe()
        _emit_json(payload)
    else:
        print(format_presentation(kernel), end="")
        if result is not None:
            print(f"order: {result.describe()}")
    if cfg.strict and result is not None and not result.is_finite:
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_family(cfg: config.CliConfig) -> int:
    if cfg.family_range is None:
        g = cyclic_shift_family(cfg.family_n)
        if cfg.json_output:
            _emit_json({"n": cfg.family_n, "edges": [str(e) for e in g.edges]})
        else:
            print(serialize_log(g), end="")
        return EXIT_OK

    lo, hi = cfg.family_range
    rows = []
    for n in range(lo, hi + 1):
        v = verdict(cyclic_shift_family(n))
        if v.theorem2_applicable != (n >= config.FAMILY_APPLICABLE_FROM):
            logger.warning(
                "cyclic-shift n=%d: applicability %s disagrees with the threshold n >= %d",
                n,
                v.theorem2_applicable,
                config.FAMILY_APPLICABLE_FROM,
            )
        blocking = [r for r in v.reasons if r.clause in ("fig1", "fig2", "fig3")]
        rows.append(
            {
                "n": n,
                "npc": v.npc,
                "theorem2_applicable": v.theorem2_applicable,
                "witness": f"{blocking[0].clause} {blocking[0].witness}" if blocking else "",
            }
        )
    if cfg.json_output:
        _emit_json(rows)
    else:
        print(pd.DataFrame(rows).set_index("n").to_string())
    if cfg.strict and not all(r["theorem2_applicable"] for r in rows):
        return EXIT_NEGATIVE
    return EXIT_OK


def _audit(s: SurfaceDiagram, p: Presentation, cfg: config.CliConfig) -> int:
    validity = validate_diagram(s, p)
    payload: dict[str, object] = {"validity": validity.as_dict()}
    report = None
    if validity.valid:
        angles = load_angles(_read_text(cfg.angles)) if cfg.angles else "regular"
        report = curvature_report(s, angles)
        payload["curvature"] = report.as_dict()
    if cfg.json_output:
        _emit_json(payload)
    else:
        kind = "closed" if validity.closed else "with boundary"
        print(f"valid: {'yes' if validity.valid else 'no'} ({kind})")
        for failure in validity.failures:
            print(f"  - {failure}")
        if report is not None:
            table = pd.DataFrame([v.as_dict() for v in report.vertices]).set_index("vertex")
            print(table.to_string())
            faces = ", ".join(f"{fid}: {kappa}" for fid, kappa in report.faces.items())
            print(f"face curvature: {faces}")
            for fid, total in report.power_face_sums.items():
                print(f"power face {fid}: sum of shared vertex curvature {total}")
            print(f"chi: {report.euler_characteristic}")
            holds = "yes" if report.gauss_bonnet_holds else "NO"
            print(f"total curvature: {report.total} (= 2 chi: {holds})")
    if cfg.strict and (report is None or not report.gauss_bonnet_holds):
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_audit_diagram(cfg: config.CliConfig) -> int:
    s = load_diagram(_read_text(cfg.inputs[0]))
    if cfg.against:
        p = _load_presentation(cfg.against)
        if cfg.all_powers is not None:
            p = with_all_powers(p, cfg.all_powers)
        for gen, exp in cfg.powers:
            p = with_power(p, gen, exp)
    else:
        p = diagram_presentation(s)
    return _audit(s, p, cfg)


def _parse_edge(raw: str) -> Edge:
    parts = raw.split("|")
    if len(parts) != 3:
        raise UsageError(f"--edge expects A|B|C, got {scrub(raw)!r}")
    return Edge(*(sanitize_name(part) for part in parts))


def _cmd_sphere(cfg: config.CliConfig) -> int:
    n = cfg.sphere_n
    if cfg.sphere_kind == "power":
        gen = sanitize_name(cfg.sphere_gen)
        s = canonical_power_sphere(gen, n)
        p = Presentation((gen,), (Word.power(gen, n),))
    else:
        if not cfg.sphere_edge:
            raise UsageError("sphere edge needs --edge A|B|C")
        edge = _parse_edge(cfg.sphere_edge)
        s = canonical_edge_sphere(edge, n)
        p = edge_sphere_presentation(edge, n)
    if cfg.audit:
        return _audit(s, p, cfg)
    print(dump_diagram(s), end="")
    return EXIT_OK


def _cmd_search(cfg: config.CliConfig) -> int:
    summary = search_small_lois(cfg.search_max_vertices)
    if cfg.json_output:
        _emit_json(summary.as_dict())
    else:
        print(summary.to_frame().to_string())
        print(f"disagreements: {len(summary.disagreements)}")
        for g in summary.disagreements:
            print("  " + ", ".join(f"({e})" for e in g.edges))
    if cfg.strict and not summary.ok:
        return EXIT_NEGATIVE
    return EXIT_OK


_COMMANDS: dict[str, Callable[[config.CliConfig], int]] = {
    "check": _cmd_check,
    "present": _cmd_present,
    "order": _cmd_order,
    "abelianize": _cmd_abelianize,
    "kernel": _cmd_kernel,
    "family": _cmd_family,
    "audit-diagram": _cmd_audit_diagram,
    "sphere": _cmd_sphere,
    "search": _cmd_search,
}


def main(argv: list | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    log = config.setup_logging(args.log_level)

    try:
        cfg = _config(args)
        return _COMMANDS[cfg.command](cfg)
    except (ValueError, OSError) as exc:
        log.error("%s: %s", args.command, scrub(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
