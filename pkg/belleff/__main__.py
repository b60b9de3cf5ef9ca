# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""CLI entry point for belleff.

Every command prints one JSON artifact on stdout and logs to stderr. Exit codes: 0 success,
1 usage or input error, 2 verdict failure (invalid certificate, failed check).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn, TextIO

from belleff import COMMAND_NAMES, get_bound_names
from belleff.bounds import check_efficiency_point, check_partition_point, get_bound
from belleff.bounds.partition import FunctionTable
from belleff.bounds.result import BoundResult
from belleff.certificates import (
    Certificate,
    CertificateKind,
    chsh_functional,
    extract_certificate,
    verify_certificate,
)
from belleff.core.config import OUTPUT_FORMATS, Settings, apply_environment, load_config
from belleff.core.errors import BellEffError, InputError
from belleff.core.exactlp import dump_lp
from belleff.core.formats import (
    bound_result_to_json,
    canonical_json,
    certificate_to_json,
    dist_from_json,
    dist_to_json,
    function_from_json,
    protocol_report_to_json,
    quantum_from_json,
    read_certificate,
    read_dist,
    read_json,
    read_protocol,
    strategy_to_json,
    validate,
    verification_to_json,
    write_json,
)
from belleff.core.log import VERBOSITY_LEVELS, configure_logging, get_logger
from belleff.hidden_matching import (
    degree2_fourier_mass,
    degree2_fourier_mass_pairwise,
    hm_bell,
    hm_distribution,
    hm_objective_check,
    hm_quantum_setup,
    hm_scan_table,
    kkl_scan,
)
from belleff.models.distributions import (
    FUNCTION_NAMES,
    Dist,
    boolean_function,
    chsh_setup,
    from_boolean_function,
    from_quantum,
    is_nonsignaling,
    phi_plus_setup,
    pr_box,
)
from belleff.models.strategies import DetStrategy, StrategyClass
from belleff.protocols import (
    ProtocolMixture,
    Simulator,
    amplify_sm,
    conditional_distribution,
    local_protocol,
    monte_carlo,
    output_distribution,
    pad_protocol,
    pr_protocol,
    protocol_to_partition,
    transcript_reduction,
    validate_protocol,
    xor_transcript_protocol,
)
from belleff.utils import format_rat, to_rat

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT = 2

QUANTUM_PRESETS = ("phi-plus", "chsh", "hm")
PROTOCOL_FIXTURES = ("pr", "pr-padded", "local", "xor")

log = get_logger("cli")

Artifact = tuple[Any, bool]


class ArgumentParser(argparse.ArgumentParser):
    """Raises InputError on usage errors so they exit 1 like every other input error."""

    def error(self, message: str) -> NoReturn:
        raise InputError(f"{self.prog}: {message}")


def rational(text: str) -> Fraction:
    try:
        return to_rat(text)
    except InputError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _add_output(parser: argparse.ArgumentParser, help_text: str) -> None:
    parser.add_argument("--output", "-o", type=Path, default=None, metavar="FILE", help=help_text)


def _add_protocol_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--protocol", type=Path, metavar="FILE", help="Protocol JSON file")
    group.add_argument("--fixture", choices=PROTOCOL_FIXTURES, help="Built-in protocol")
    parser.add_argument(
        "--pad", type=int, default=1, help="Dummy bits appended for the pr-padded fixture"
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="belleff",
        description="belleff - efficiency and partition lower bounds for conditional distributions",
    )
    parser.add_argument("--config", type=Path, default=None, metavar="FILE", help="Settings YAML")
    parser.add_argument("--seed", "-s", type=int, default=None)
    parser.add_argument("--cap", type=int, default=None, help="Strategy enumeration cap")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None, dest="output_format")
    parser.add_argument("--verbosity", "-v", default="warning", choices=VERBOSITY_LEVELS)
    parser.add_argument("--debug", action="store_true", help="Same as -v debug")
    commands = parser.add_subparsers(
        dest="command", required=True, metavar="{" + ",".join(COMMAND_NAMES) + "}"
    )

    # dist
    dist = commands.add_parser("dist", help="Build or check distributions")
    dist_cmds = dist.add_subparsers(dest="action", required=True)
    build = dist_cmds.add_parser("build", help="Build a distribution")
    build.add_argument("family", choices=("pf", "pr", "quantum", "hm"))
    build.add_argument("--fn", choices=FUNCTION_NAMES, help="Named function for pf")
    build.add_argument("--bits", type=int, default=1, help="Input length for pf")
    build.add_argument("--table", type=Path, metavar="FILE", help="Function table JSON for pf")
    build.add_argument("--preset", choices=QUANTUM_PRESETS, help="Quantum preset")
    build.add_argument("--setup", type=Path, metavar="FILE", help="Quantum setup JSON")
    build.add_argument("-n", type=int, default=4, help="Vertex count for hm")
    _add_output(build, "Write the distribution JSON to FILE")
    check = dist_cmds.add_parser("check", help="Report normalization and nonsignaling")
    check.add_argument("file", type=Path)

    # bound
    bound = commands.add_parser("bound", help="Solve a bound LP")
    bound.add_argument("name", choices=get_bound_names())
    bound.add_argument("-p", "--dist", type=Path, metavar="FILE", help="Distribution JSON")
    bound.add_argument("--function", type=Path, metavar="FILE", help="Function table for prt-fn")
    bound.add_argument("--fn", choices=FUNCTION_NAMES, help="Named function for prt-fn")
    bound.add_argument("--bits", type=int, default=1)
    bound.add_argument("--eps", type=rational, default=None)
    bound.add_argument("--eta", type=rational, default=None)
    bound.add_argument("--colgen", action="store_true", help="Column generation for eff bounds")
    bound.add_argument("--dump-lp", type=Path, default=None, metavar="FILE")

    # cert
    cert = commands.add_parser("cert", help="Extract, verify or build certificates")
    cert_cmds = cert.add_subparsers(dest="action", required=True)
    extract = cert_cmds.add_parser("extract", help="Certificate from a bound's dual")
    extract.add_argument("-p", "--dist", type=Path, required=True, metavar="FILE")
    extract.add_argument("--bound", choices=get_bound_names(), default="eff")
    extract.add_argument("--eps", type=rational, default=None)
    extract.add_argument("--eta", type=rational, default=None)
    extract.add_argument("--colgen", action="store_true")
    _add_output(extract, "Write the certificate JSON to FILE")
    verify = cert_cmds.add_parser("verify", help="Verify a certificate on a distribution")
    verify.add_argument("-c", "--cert", type=Path, required=True, metavar="FILE")
    verify.add_argument("-p", "--dist", type=Path, required=True, metavar="FILE")
    chsh = cert_cmds.add_parser("chsh", help="The CHSH functional as a certificate")
    chsh.add_argument("--scale", type=rational, default=Fraction(1, 2))
    chsh.add_argument("--claim", type=rational, default=Fraction(2))
    _add_output(chsh, "Write the certificate JSON to FILE")

    # hm
    hm = commands.add_parser("hm", help="Hidden Matching constructions")
    hm.add_argument("action", choices=("dist", "bell", "objective", "scan", "fourier"))
    hm.add_argument("-n", type=int, default=4)
    hm.add_argument("-C", type=rational, action="append", default=None, dest="C")
    hm.add_argument("--subset", nargs="+", default=None, metavar="BITS")
    _add_output(hm, "Write the distribution or certificate JSON to FILE")

    # sim
    sim = commands.add_parser("sim", help="Protocol reductions and simulation")
    sim_cmds = sim.add_subparsers(dest="action", required=True)
    for name, help_text in (
        ("validate", "Check the rectangle property"),
        ("reduce", "Transcript-guessing abort strategies"),
        ("partition", "Feasible partition solution from protocol leaves"),
    ):
        _add_protocol_source(sim_cmds.add_parser(name, help=help_text))
    amplify = sim_cmds.add_parser("amplify", help="Repeat runs to reach a target efficiency")
    _add_protocol_source(amplify)
    amplify.add_argument("--eta", type=rational, required=True)
    mc = sim_cmds.add_parser("mc", help="Monte Carlo check of a reduction")
    _add_protocol_source(mc)
    mc.add_argument("--samples", type=int, default=100_000)
    mc.add_argument("--eta", type=rational, default=None, help="Amplify to this efficiency first")
    return parser


def resolve_settings(args: argparse.Namespace, environ: Mapping[str, str]) -> Settings:
    """Defaults < config file < environment < command-line flags."""
    settings = load_config(args.config) if args.config else Settings()
    settings = apply_environment(settings, environ)
    return settings.with_overrides(
        seed=args.seed,
        enumeration_cap=args.cap,
        output_format=args.output_format,
        column_generation=True if getattr(args, "colgen", False) else None,
    )


def _rats(values: Mapping[Any, Fraction]) -> dict[str, str]:
    return {str(k): format_rat(v) for k, v in values.items()}


# dist


def _function_table(path: Path) -> FunctionTable:
    return function_from_json(read_json(path), path)


def cmd_dist(args: argparse.Namespace, settings: Settings) -> Artifact:
    if args.action == "check":
        raw = read_json(args.file)
        validate(raw, "dist", args.file)
        try:
            p = dist_from_json(raw, args.file)
        except InputError as e:
            return {"normalized": False, "nonsignaling": None, "error": str(e)}, True
        return {
            "normalized": True,
            "nonsignaling": is_nonsignaling(p),
            "sizes": list(p.sizes),
            "approximate": p.metadata.approximate,
        }, True

    p = build_distribution(args, settings)
    artifact = dist_to_json(p)
    if args.output:
        write_json(artifact, args.output)
        log.info(f"Wrote {args.output}")
    return artifact, True


def build_distribution(args: argparse.Namespace, settings: Settings) -> Dist:
    if args.family == "pr":
        return pr_box()
    if args.family == "hm":
        return hm_distribution(args.n, settings)
    if args.family == "pf":
        if args.table:
            f = _function_table(args.table)
            table = {
                (x, y): f.values[i][j]
                for i, x in enumerate(f.x_labels)
                for j, y in enumerate(f.y_labels)
            }
            return from_boolean_function(table, f"p_f({args.table.name})")
        if not args.fn:
            raise InputError("dist build pf needs --fn NAME or --table FILE")
        return from_boolean_function(boolean_function(args.fn, args.bits), f"p_{args.fn}")
    if args.setup:
        setup = quantum_from_json(read_json(args.setup), settings.denominator_limit, args.setup)
        return from_quantum(setup, f"quantum({args.setup.name})")
    presets: dict[str, Callable[[], Any]] = {
        "phi-plus": phi_plus_setup,
        "chsh": lambda: chsh_setup(settings.denominator_limit),
        "hm": lambda: hm_quantum_setup(args.n),
    }
    if args.preset not in presets:
        raise InputError("dist build quantum needs --preset or --setup FILE")
    return from_quantum(presets[args.preset](), f"quantum({args.preset})")


# bound and cert


def compute_bound(
    name: str,
    args: argparse.Namespace,
    settings: Settings,
) -> tuple[BoundResult, Dist | None]:
    fn = get_bound(name)
    if name == "prt-fn":
        if getattr(args, "function", None):
            f = _function_table(args.function)
        elif getattr(args, "fn", None):
            f = FunctionTable.from_truth_table(boolean_function(args.fn, args.bits))
        else:
            raise InputError("prt-fn needs --function FILE or --fn NAME")
        return fn(f, args.eps if args.eps is not None else Fraction(0), settings), None
    if args.dist is None:
        raise InputError(f"bound {name} needs -p FILE")
    p = read_dist(args.dist)
    if name == "eff-eps":
        if args.eps is None:
            raise InputError("eff-eps needs --eps")
        return fn(p, args.eps, settings), p
    if name in ("eff-eta", "prt"):
        if args.eta is None and name == "eff-eta":
            raise InputError("eff-eta needs --eta")
        return fn(p, args.eta if args.eta is not None else Fraction(1), settings), p
    return fn(p, settings), p


def cmd_bound(args: argparse.Namespace, settings: Settings) -> Artifact:
    result, p = compute_bound(args.name, args, settings)
    if args.dump_lp:
        args.dump_lp.write_text(dump_lp(result.program))
        log.info(f"Wrote LP dump to {args.dump_lp}")
    return bound_result_to_json(result, p), True


def _write_certificate(cert: Certificate, output: Path | None) -> dict[str, Any]:
    artifact = certificate_to_json(cert)
    if output:
        write_json(artifact, output)
        log.info(f"Wrote {output}")
    return artifact


def cmd_cert(args: argparse.Namespace, settings: Settings) -> Artifact:
    if args.action == "extract":
        result, _ = compute_bound(args.bound, args, settings)
        return _write_certificate(extract_certificate(result), args.output), True
    if args.action == "chsh":
        cert = Certificate(
            chsh_functional(args.scale), CertificateKind.INEFFICIENCY_RESISTANT, args.claim
        )
        return _write_certificate(cert, args.output), True
    cert = read_certificate(args.cert)
    p = read_dist(args.dist)
    report = verify_certificate(cert, p, settings.enumeration_cap)
    return verification_to_json(report, p.labels), report.valid


# hm


def cmd_hm(args: argparse.Namespace, settings: Settings) -> Artifact:
    Cs = args.C or [Fraction(1)]
    if args.action == "dist":
        artifact = dist_to_json(hm_distribution(args.n, settings))
        if args.output:
            write_json(artifact, args.output)
        return artifact, True
    if args.action == "bell":
        functional, params = hm_bell(args.n, Cs[0], settings)
        cert = Certificate(
            functional, CertificateKind.INEFFICIENCY_RESISTANT_ONEWAY, params.closed_form
        )
        artifact = _write_certificate(cert, args.output)
        return {"params": _hm_params(params), "certificate": artifact}, True
    if args.action == "objective":
        check = hm_objective_check(args.n, Cs[0], settings)
        return {
            "computed": format_rat(check.computed),
            "closed_form": format_rat(check.closed_form),
            "equal": check.equal,
            "params": _hm_params(check.params),
        }, check.equal
    if args.action == "scan":
        rows = hm_scan_table(args.n, Cs, settings)
        return {
            "n": args.n,
            "rows": [
                {
                    "C": None if row.C is None else format_rat(row.C),
                    "max": format_rat(row.maximum),
                    "max_float": float(row.maximum),
                    "feasible": row.feasible,
                }
                for row in rows
            ],
        }, True
    if args.subset:
        mass = degree2_fourier_mass(args.subset, args.n)
        pairwise = degree2_fourier_mass_pairwise(args.subset, args.n)
        return {
            "n": args.n,
            "subset": sorted(set(args.subset)),
            "mass": format_rat(mass),
            "pairwise_mass": format_rat(pairwise),
            "agree": mass == pairwise,
        }, mass == pairwise
    scan = kkl_scan(args.n)
    return {
        "n": scan.n,
        "subsets": scan.subsets,
        "constant": scan.constant,
        "subset": list(scan.subset),
        "mass": format_rat(scan.mass),
    }, True


def _hm_params(params: Any) -> dict[str, Any]:
    return {
        "n": params.n,
        "C": format_rat(params.C),
        "scale": format_rat(params.scale),
        "scale_error": float(params.scale_error),
        "mu": format_rat(params.mu),
        "phi": format_rat(params.phi),
        "matchings": params.matchings,
        "vertex_encoding": "vertex v as the binary form of v - 1",
    }


# sim


def load_protocol(args: argparse.Namespace) -> ProtocolMixture:
    if args.protocol:
        return read_protocol(args.protocol)
    if args.fixture == "pr":
        return pr_protocol()
    if args.fixture == "pr-padded":
        return pad_protocol(pr_protocol(), args.pad)
    if args.fixture == "xor":
        return xor_transcript_protocol()
    strategy = DetStrategy((0, 0), (1, 1), StrategyClass.NO_ABORT)
    return local_protocol(strategy, (("0", "1"),) * 4)


def _mixture_json(mixture: Mapping[DetStrategy, Fraction], labels: Sequence[Sequence[str]]) -> list:
    entries = [
        {"strategy": strategy_to_json(s, labels), "weight": format_rat(w)}
        for s, w in mixture.items()
    ]
    return sorted(entries, key=lambda e: json.dumps(e["strategy"], sort_keys=True))


def cmd_sim(args: argparse.Namespace, settings: Settings) -> Artifact:
    protocol = load_protocol(args)
    if args.action == "validate":
        report = validate_protocol(protocol)
        return protocol_report_to_json(report), report.valid

    target = output_distribution(protocol)
    reduction = transcript_reduction(protocol)
    if args.action == "reduce":
        conditional = conditional_distribution(reduction.mixture, protocol.labels)
        matches = conditional == _relabel(target, conditional)
        violations = check_efficiency_point(target, reduction.mixture, reduction.zeta)
        return {
            "c": protocol.c,
            "zeta": format_rat(reduction.zeta),
            "class": reduction.strategy_class.value,
            "mixture": _mixture_json(reduction.mixture, protocol.labels),
            "conditional_matches": matches,
            "efficiency_violations": violations,
        }, matches and not violations
    if args.action == "partition":
        point = protocol_to_partition(protocol)
        violations = check_partition_point(target, point.weights, point.etas)
        return {
            "c": protocol.c,
            "objective": format_rat(point.objective),
            "weights": _mixture_json(point.weights, protocol.labels),
            "violations": violations,
        }, not violations
    if args.action == "amplify":
        amp = amplify_sm(reduction.mixture, reduction.zeta, args.eta, target.sizes, settings.seed)
        return _amplification_json(amp), amp.meets_target

    if args.eta is not None:
        amp = amplify_sm(reduction.mixture, reduction.zeta, args.eta, target.sizes, settings.seed)
        simulator = amp.simulator
    else:
        simulator = Simulator(reduction.mixture, target.sizes, seed=settings.seed)
    report = monte_carlo(simulator, target, args.samples, settings.seed)
    return {
        "samples": report.samples,
        "seed": report.seed,
        "runs": simulator.runs,
        "passed": report.passed,
        "inputs": [
            {
                "x": target.x_labels[s.x],
                "y": target.y_labels[s.y],
                "abort_rate": s.abort_rate,
                "expected_abort": format_rat(s.expected_abort),
                "abort_band": s.abort_band,
                "deviation": s.deviation,
                "tolerance": s.tolerance,
                "within": s.within,
                "status": s.status,
            }
            for s in report.inputs
        ],
    }, report.passed


def _relabel(target: Dist, like: Dist) -> Dist:
    """``target`` with the metadata of ``like``, for value comparison."""
    return Dist(*target.labels, target.probs, like.metadata)


def _amplification_json(amp: Any) -> dict[str, Any]:
    return {
        "runs": amp.runs,
        "zeta": format_rat(amp.zeta),
        "eta": format_rat(amp.eta),
        "abort_probability": format_rat(amp.abort_probability),
        "abort_bound": format_rat(1 - amp.eta),
        "meets_target": amp.meets_target,
        "simultaneous_bits": amp.simultaneous_bits,
        "index_bits": amp.index_bits,
    }


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], Artifact]] = {
    "dist": cmd_dist,
    "bound": cmd_bound,
    "cert": cmd_cert,
    "hm": cmd_hm,
    "sim": cmd_sim,
}


def render_table(artifact: Any) -> str:
    """Two-column text form: scalars as-is, nested values as compact JSON."""
    if not isinstance(artifact, dict):
        return json.dumps(artifact) + "\n"
    width = max((len(k) for k in artifact), default=0)
    lines = []
    for key in sorted(artifact):
        value = artifact[key]
        text = json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else str(value)
        lines.append(f"{key:<{width}}  {text}")
    return "\n".join(lines) + "\n"


def run(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    environ: Mapping[str, str] | None = None,
) -> int:
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    environ = os.environ if environ is None else environ
    try:
        args = build_parser().parse_args(argv)
        configure_logging("debug" if args.debug else args.verbosity)
        settings = resolve_settings(args, environ)
        artifact, ok = COMMANDS[args.command](args, settings)
    except BellEffError as e:
        print(f"belleff: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if settings.output_format == "table":
        stdout.write(render_table(artifact))
    else:
        stdout.write(canonical_json(artifact))
    return EXIT_OK if ok else EXIT_VERDICT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
