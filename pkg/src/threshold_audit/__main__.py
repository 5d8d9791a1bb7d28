"""CLI entry point for threshold-audit."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import asdict
from typing import Any

import numpy as np
from dotenv import load_dotenv
from rich.console import Console

from . import __version__
from .config import AuditConfig
from .cover import automorphisms, min_cover_cost, q_star, q_threshold
from .errors import BadParameter, Inconclusive, ThresholdError
from .generators import (
    TribesParams,
    dual_tribes,
    hypergraph_matching_family,
    majority,
    random_monotone,
    subcube,
    tribes_closed_forms,
    tribes_regime_report,
)
from .graphs import (
    containment_family,
    expectation_threshold,
    graph_cover_report,
    max_density,
    tree_threshold_bracket,
)
from .io import dumps_canonical, family_to_dict, load_family, load_graph, load_hypergraph
from .logging_utils import get_logger, setup_logging
from .measure import (
    analyze,
    c7_scan,
    critical_probability,
    is_c_p_optimal,
    mu_precise,
    optimal_p_sweep,
    sweep_grid,
)
from .reports import (
    GapAuditRow,
    audit_family,
    format_value,
    hypermatching_report,
    render_audit,
    sweep_points,
    write_sweep_csv,
)
from .simulate import (
    build_property,
    critical_trend,
    empirical_critical_p,
    estimate_mu,
    property_names,
    triangle_factor_scale,
)

COVER_METHODS = ("auto", "dp", "milp")


def _emit(payload: Any) -> None:
    sys.stdout.write(dumps_canonical(payload) + "\n")


def _probabilities(args: argparse.Namespace) -> list[float]:
    points: list[float] = list(args.p or [])
    if args.grid:
        start, stop, count = args.grid
        if count < 1 or int(count) != count:
            raise BadParameter(f"grid point count must be a positive integer, got {count}")
        points.extend(float(p) for p in np.linspace(start, stop, int(count)))
    if not points:
        raise BadParameter("give at least one --p or a --grid")
    return points


def cmd_analyze(args: argparse.Namespace, config: AuditConfig) -> int:
    family = load_family(args.family)
    reports = [analyze(family, p, strict=False, cap=config.enum_cap) for p in _probabilities(args)]
    if args.format == "json":
        rows = []
        for report in reports:
            row: dict[str, Any] = dict(report.as_dict())
            if args.optimal_c is not None and math.isfinite(report.optimality_ratio):
                row["c_p_optimal"] = is_c_p_optimal(
                    family, report.p, args.optimal_c, cap=config.enum_cap
                )
            rows.append(row)
        _emit(rows)
    else:
        write_sweep_csv(reports, sys.stdout)
    return 0


def cmd_pc(args: argparse.Namespace, config: AuditConfig) -> int:
    family = load_family(args.family)
    p_c = critical_probability(family, config.tol_root, cap=config.enum_cap)
    payload: dict[str, Any] = {"n": family.n, "p_c": p_c, "tol": config.tol_root}
    if args.precise:
        payload["mu_at_p_c_precise"] = str(mu_precise(family, p_c, cap=config.enum_cap))
    _emit(payload)
    return 0


def cmd_q(args: argparse.Namespace, config: AuditConfig) -> int:
    family = load_family(args.family)
    if args.at is not None:
        witness = min_cover_cost(family, args.at, cap=config.cover_cap, method=args.method)
        _emit(witness.as_dict())
        return 0
    threshold = q_threshold(family, config.tol_root, cap=config.cover_cap, method=args.method)
    _emit(threshold.witness.as_dict())
    return 0


def cmd_qstar(args: argparse.Namespace, config: AuditConfig) -> int:
    family = load_family(args.family)
    group = automorphisms(family, cap=config.aut_cap)
    threshold = q_star(
        family, config.tol_root, group=group, cap=config.cover_cap, method=args.method
    )
    _emit({**threshold.witness.as_dict(), "aut_order": len(group)})
    return 0


def _audit_inputs(args: argparse.Namespace, config: AuditConfig) -> list[tuple[str, Any]]:
    families = [(path, load_family(path)) for path in args.families]
    for index in range(args.random):
        seed = config.seed + index
        family = random_monotone(args.n, args.sets, seed, cap=config.enum_cap)
        families.append((f"random(n={args.n}, m={args.sets}, seed={seed})", family))
    if args.tribes:
        n, k = args.tribes
        families.append((f"dual_tribes({n},{k})", dual_tribes(TribesParams(n, k))))
    if not families:
        raise BadParameter("nothing to audit: give family files, --random or --tribes")
    return families


def cmd_audit(args: argparse.Namespace, config: AuditConfig) -> int:
    rows: list[GapAuditRow] = [
        audit_family(
            family,
            config,
            family_id=family_id,
            with_q_star=not args.no_qstar,
            boost_size=args.boost_size,
        )
        for family_id, family in _audit_inputs(args, config)
    ]
    if args.format == "json":
        _emit([row.as_dict() for row in rows])
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        fields = ("family_id", "n", "p_c", "q", "q_star", "ratio", "gap_ln", "gap_log2")
        writer.writerow(fields)
        for row in rows:
            values = (getattr(row, name) for name in fields)
            writer.writerow(
                format_value(value) if isinstance(value, float) else value for value in values
            )
    else:
        render_audit(rows, Console())
    return 0


def _require_n(args: argparse.Namespace) -> int:
    if args.n is None:
        raise BadParameter(f"graph {args.graph_command} needs --n")
    return args.n


def cmd_graph(args: argparse.Namespace, config: AuditConfig) -> int:
    graph = load_graph(args.graph)
    command = args.graph_command
    if command == "pe":
        _emit(expectation_threshold(graph).as_dict())
    elif command == "density":
        _emit(max_density(graph).as_dict())
    elif command == "family":
        _emit(family_to_dict(containment_family(graph, _require_n(args))))
    elif command == "q":
        report = graph_cover_report(
            graph, _require_n(args), config.tol_root, cover_cap=config.cover_cap, method=args.method
        )
        _emit(report.as_dict())
    else:
        bracket = tree_threshold_bracket(graph, _require_n(args), config.k1, config.k2)
        _emit(
            {
                "lower": bracket.lower,
                "upper": bracket.upper,
                "max_degree": bracket.max_degree,
                "base": bracket.base,
            }
        )
    return 0


def _property(args: argparse.Namespace, n: int) -> Any:
    params: dict[str, Any] = {}
    if args.pattern:
        params["pattern"] = load_graph(args.pattern)
    if args.k is not None:
        params["k"] = args.k
    if args.min_degree is not None:
        params["min_degree"] = args.min_degree
    return build_property(args.property, n, **params)


def _mc_trend(args: argparse.Namespace, config: AuditConfig) -> int:
    if not args.sizes:
        raise BadParameter("mode trend needs --sizes")
    properties = [_property(args, n) for n in sorted(args.sizes)]
    reference = triangle_factor_scale if args.property == "trianglefactor" else None
    rows = critical_trend(
        properties,
        args.mc_tol,
        config.confidence,
        config.seed,
        max_trials=config.mc_max_trials,
        workers=config.workers,
        reference=reference,
    )
    _emit({"property": args.property, "rows": rows})
    return 0


def cmd_mc(args: argparse.Namespace, config: AuditConfig) -> int:
    logger = get_logger(__name__)
    if args.mode == "trend":
        return _mc_trend(args, config)
    if args.n is None:
        raise BadParameter(f"mode {args.mode} needs --n")
    prop = _property(args, args.n)
    if args.mode == "mu":
        if args.p is None:
            raise BadParameter("mode mu needs --p")
        result = estimate_mu(
            prop,
            args.p,
            config.trials,
            config.seed,
            confidence=config.confidence,
            workers=config.workers,
        )
        _emit({**prop.describe(), **result.as_dict()})
        return 0
    estimate = empirical_critical_p(
        prop,
        args.mc_tol,
        config.confidence,
        config.seed,
        max_trials=config.mc_max_trials,
        workers=config.workers,
    )
    _emit({**prop.describe(), **estimate.as_dict()})
    if estimate.inconclusive and not args.allow_inconclusive:
        logger.error("Bisection query stayed undecided; rerun with a larger THRESHOLD_MC_MAX_TRIALS.")
        return Inconclusive.exit_code
    return 0


def cmd_check(args: argparse.Namespace, _config: AuditConfig) -> int:
    """Decide a property on a given graph or hypergraph file."""
    if args.property == "hypermatching":
        structure = load_hypergraph(args.structure)
        prop = build_property("hypermatching", structure.n, k=structure.k)
    else:
        structure = load_graph(args.structure)
        prop = _property(args, structure.v)
    _emit({**prop.describe(), "holds": prop.checker(structure)})
    return 0


def cmd_hypermatching(args: argparse.Namespace, config: AuditConfig) -> int:
    _emit(hypermatching_report(args.n, args.k, config).as_dict())
    return 0


def cmd_sweep(args: argparse.Namespace, config: AuditConfig) -> int:
    family = load_family(args.family)
    witness = optimal_p_sweep(
        family, config.eps, points=args.points, tol_root=config.tol_root, cap=config.enum_cap
    )
    scan = c7_scan(
        family,
        config.eps,
        args.c7_c if args.c7_c is not None else config.c_opt,
        points=args.points,
        tol_root=config.tol_root,
        cap=config.enum_cap,
    )
    grid = sweep_points(witness.p_c, family.n, config.eps, args.grid_points)
    rows = sweep_grid(family, grid, workers=config.workers, cap=config.enum_cap)
    summary = {
        "eps": config.eps,
        "cpopt": {
            "p": witness.p,
            "C": witness.c_used,
            "p_c": witness.p_c,
            "lower": witness.lower,
            "ratio": witness.ratio,
        },
        "c7": {
            "found": scan.found,
            "p": scan.p,
            "C": scan.c_used,
            "lower": scan.lower,
            "upper": scan.upper,
        },
    }
    if args.format == "json":
        _emit({**summary, "grid": [row.as_dict() for row in rows]})
    else:
        write_sweep_csv(rows, sys.stdout)
        Console(stderr=True).print_json(dumps_canonical(summary))
    return 0


def cmd_gen(args: argparse.Namespace, config: AuditConfig) -> int:
    kind = args.kind
    if kind == "regime":
        _emit(tribes_regime_report(args.n))
        return 0
    if kind == "majority":
        family = majority(args.n)
    elif kind == "subcube":
        family = subcube(args.n, args.set or [])
    elif kind == "tribes":
        params = TribesParams(args.n, args.k or 1)
        if args.p is not None:
            forms = tribes_closed_forms(params, args.p)
            _emit({"n": params.n, "k": params.k, "p": args.p, **asdict(forms)})
            return 0
        family = dual_tribes(params)
    elif kind == "hypermatching":
        family = hypergraph_matching_family(args.n, args.k or 3)
    else:
        family = random_monotone(args.n, args.count, config.seed, cap=config.enum_cap)
    _emit(family_to_dict(family))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshold-audit",
        description="Exact and Monte Carlo threshold analysis of monotone families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tol", type=float, help="root tolerance for p_c and q bisection")
    parser.add_argument("--cap", type=int, help="ground-set enumeration cap (at most 30)")
    parser.add_argument("--seed", type=int, help="base seed for random generation")
    parser.add_argument("--eps", type=float, help="sweep exponent in (0, 1]")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials for mu estimates")
    parser.add_argument("--workers", type=int, help="thread count for sweeps and sampling")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", dest="format", action="store_const", const="json")
    output.add_argument("--csv", dest="format", action="store_const", const="csv")
    parser.set_defaults(format=None)

    commands = parser.add_subparsers(dest="command", required=True)

    analyze_cmd = commands.add_parser("analyze", help="per-p measure report for a family")
    analyze_cmd.add_argument("family")
    analyze_cmd.add_argument("--p", type=float, action="append")
    analyze_cmd.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    analyze_cmd.add_argument(
        "--optimal-c", type=float, help="JSON: flag rows where F is (C, p)-optimal for this C"
    )
    analyze_cmd.set_defaults(handler=cmd_analyze, default_format="csv")

    pc_cmd = commands.add_parser("pc", help="critical probability of a family")
    pc_cmd.add_argument("family")
    pc_cmd.add_argument("--precise", action="store_true", help="recheck mu(p_c) in mpmath")
    pc_cmd.set_defaults(handler=cmd_pc, default_format="json")

    for name, handler, help_text in (
        ("q", cmd_q, "cover threshold q(F) with a witness"),
        ("qstar", cmd_qstar, "symmetric cover threshold q*(F)"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("family")
        sub.add_argument("--method", choices=COVER_METHODS, default="auto")
        if name == "q":
            sub.add_argument("--at", type=float, help="report the cheapest cover at this q")
        sub.set_defaults(handler=handler, default_format="json")

    audit_cmd = commands.add_parser("audit", help="gap audit of p_c against q and q*")
    audit_cmd.add_argument("families", nargs="*")
    audit_cmd.add_argument("--random", type=int, default=0, help="add this many random families")
    audit_cmd.add_argument("--n", type=int, default=6)
    audit_cmd.add_argument("--sets", type=int, default=4)
    audit_cmd.add_argument("--tribes", type=int, nargs=2, metavar=("N", "K"))
    audit_cmd.add_argument("--no-qstar", action="store_true")
    audit_cmd.add_argument("--boost-size", type=int, default=0)
    audit_cmd.set_defaults(handler=cmd_audit, default_format="table")

    graph_cmd = commands.add_parser("graph", help="graph thresholds")
    graph_cmd.add_argument("graph_command", choices=("pe", "density", "family", "q", "tree"))
    graph_cmd.add_argument("graph")
    graph_cmd.add_argument("--n", type=int)
    graph_cmd.add_argument("--method", choices=COVER_METHODS, default="auto")
    graph_cmd.set_defaults(handler=cmd_graph, default_format="json")

    mc_cmd = commands.add_parser("mc", help="Monte Carlo estimates")
    mc_cmd.add_argument("--property", required=True, choices=property_names())
    mc_cmd.add_argument("--n", type=int)
    mc_cmd.add_argument("--sizes", type=int, nargs="+", help="trend: sizes to estimate p_c at")
    mc_cmd.add_argument("--k", type=int)
    mc_cmd.add_argument("--min-degree", type=int)
    mc_cmd.add_argument("--pattern", help="graph JSON for the subgraph property")
    mc_cmd.add_argument("--mode", choices=("mu", "pc", "trend"), default="mu")
    mc_cmd.add_argument("--p", type=float)
    mc_cmd.add_argument("--mc-tol", type=float, default=0.01)
    mc_cmd.add_argument("--allow-inconclusive", action="store_true")
    mc_cmd.set_defaults(handler=cmd_mc, default_format="json")

    check_cmd = commands.add_parser("check", help="decide a property on a graph or hypergraph file")
    check_cmd.add_argument("property", choices=property_names())
    check_cmd.add_argument("structure", help="graph JSON, or hypergraph JSON for hypermatching")
    check_cmd.add_argument("--k", type=int)
    check_cmd.add_argument("--min-degree", type=int)
    check_cmd.add_argument("--pattern", help="graph JSON for the subgraph property")
    check_cmd.set_defaults(handler=cmd_check, default_format="json")

    hyper_cmd = commands.add_parser(
        "hypermatching", help="exact q and q n^(k-1) for hypergraph perfect matchings"
    )
    hyper_cmd.add_argument("--n", type=int, required=True)
    hyper_cmd.add_argument("--k", type=int, default=3)
    hyper_cmd.set_defaults(handler=cmd_hypermatching, default_format="json")

    sweep_cmd = commands.add_parser("sweep", help="optimality sweep below p_c")
    sweep_cmd.add_argument("family")
    sweep_cmd.add_argument("--points", type=int, default=1000, help="witness search resolution")
    sweep_cmd.add_argument("--grid-points", type=int, default=50, help="CSV rows")
    sweep_cmd.add_argument("--c7-c", type=float, help="constant for the narrower scan")
    sweep_cmd.set_defaults(handler=cmd_sweep, default_format="csv")

    gen_cmd = commands.add_parser("gen", help="write a named family as JSON")
    gen_cmd.add_argument(
        "kind", choices=("majority", "subcube", "tribes", "random", "hypermatching", "regime")
    )
    gen_cmd.add_argument("--n", type=int, required=True)
    gen_cmd.add_argument("--k", type=int)
    gen_cmd.add_argument("--set", type=int, nargs="+", help="required elements for subcube")
    gen_cmd.add_argument("--count", type=int, default=4, help="random: minimal sets to draw")
    gen_cmd.add_argument("--p", type=float, help="tribes: print closed forms at p")
    gen_cmd.set_defaults(handler=cmd_gen, default_format="json")

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format

    logger = get_logger(__name__)
    try:
        config = AuditConfig.from_env().with_overrides(
            tol_root=args.tol,
            enum_cap=args.cap,
            seed=args.seed,
            eps=args.eps,
            trials=args.trials,
            workers=args.workers,
            log_level=args.log_level.upper() if args.log_level else None,
        )
        setup_logging(config.log_level)
        logger.debug("Using config: %s", config)
        return args.handler(args, config)
    except ThresholdError as exc:
        if not logging.getLogger().handlers:
            setup_logging()
        logger.error("%s: %s", exc.__class__.__name__, exc)
        return exc.exit_code


def main() -> None:
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logging.getLogger(__name__).warning("Interrupted by user.")
        sys.exit(130)


if __name__ == "__main__":
    main()
