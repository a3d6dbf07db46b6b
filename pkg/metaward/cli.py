"""Command-line front-end for the metaward checks."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .config import InvalidConfig, RunConfig, load_grid, validate_input
from .const import (
    ALGEBRA_FAMILIES,
    COLLAPSE_TOLERANCE,
    CONTRACTION_TOLERANCE,
    CORRELATOR_FAMILIES,
    CSV_FORMAT,
    DEFAULT_C,
    DEFAULT_GAMMA,
    DEFAULT_LAMBDA,
    DEFAULT_MASS,
    DEFAULT_MU,
    DEFAULT_N_MAX,
    DEFAULT_NU,
    DEFAULT_T,
    DEFAULT_X,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    M2_TOLERANCE,
    OUTPUT_FORMATS,
    ROUNDTRIP_TOLERANCE,
    SPECTRAL_TOLERANCE,
    SUBCOMMANDS,
    SYMMETRY_TOLERANCE,
    TAPER,
    TOOL_NAME,
    WARD_TOLERANCE,
)
from .metawardpy import reps
from .metawardpy.correlators import (
    CorrelatorFamily,
    CorrelatorSpec,
    build_reduced_system,
    check_boundedness,
    check_causality,
    check_non_analyticity,
    check_symmetry,
    contraction_limit_check,
    correlator_for,
    reduced_residual,
    singularity_scan,
    standard_grid,
    w_collapse_check,
    ward_residual,
)
from .metawardpy.diffop import op_commutator
from .metawardpy.errors import MetaWardError
from .metawardpy.hardy import HardyParams, check_m2, dualization_roundtrip, spectral_onesidedness
from .metawardpy.exactalg import select_ring
from .metawardpy.parser import format_op, parse_op_expr, symbols_of

_LOGGER = logging.getLogger(__name__)


@dataclass
class Outcome:
    """Result of one subcommand before rendering."""

    report: Any
    passed: bool
    columns: Optional[list[str]] = None
    rows: Optional[list[list[Any]]] = None
    text: Optional[str] = None

    def report_dict(self) -> Any:
        return self.report.to_dict() if hasattr(self.report, "to_dict") else self.report


@dataclass
class RunResult:
    exit_code: int
    output: str


# Parameter helpers


def _exact(value: float) -> Fraction:
    return Fraction(str(value))


def _algebra_params(config: RunConfig) -> dict[str, Fraction]:
    """Explicit values for formal symbols; unset flags stay symbolic."""
    names = {"x": "x", "gamma": "gamma", "nu1": "nu", "mu": "mu", "c": "c"}
    return {symbol: _exact(getattr(config, key)) for key, symbol in names.items()
            if getattr(config, key) is not None}


def _algebra_family(config: RunConfig, default: str = "meta") -> reps.Family:
    family = config.family or default
    if family not in ALGEBRA_FAMILIES:
        raise InvalidConfig(f"Unknown algebra family {family!r}; expected one of {', '.join(ALGEBRA_FAMILIES)}")
    return reps.Family(family)


def _correlator_spec(config: RunConfig, default_family: str = "meta_naive",
                     default_x: float = DEFAULT_X) -> CorrelatorSpec:
    family = config.family or default_family
    if family not in CORRELATOR_FAMILIES:
        raise InvalidConfig(
            f"Unknown correlator family {family!r}; expected one of {', '.join(CORRELATOR_FAMILIES)}")
    nu = config.get("nu1", DEFAULT_NU)
    return CorrelatorSpec.matched(
        family,
        x=config.get("x", default_x),
        gamma=config.get("gamma", DEFAULT_GAMMA),
        nu1=nu,
        nu2=config.get("nu2", nu),
        mu=config.get("mu", DEFAULT_MU),
        M1=config.get("mass", DEFAULT_MASS),
        c=config.get("c", DEFAULT_C),
        literal_branches=config.literal_branches,
    )


def _nu_sum(config: RunConfig) -> float:
    nu = config.get("nu1", DEFAULT_NU)
    return nu + config.get("nu2", nu)


def _grid(config: RunConfig):
    return load_grid(config.grid) if config.grid else None


def _tol(config: RunConfig, default: float) -> float:
    return default if config.tol is None else config.tol


def _algebra_outcome(report) -> Outcome:
    lines = [f"{pair.lhs} = {pair.rhs}: {'ok' if pair.zero else 'FAIL ' + pair.residual_text}"
             for pair in report.pairs]
    lines.append(f"{report.family}: {'all zero' if report.all_zero else f'{len(report.failures())} failures'}")
    rows = [[pair.lhs, pair.rhs, pair.residual_text, pair.zero] for pair in report.pairs]
    return Outcome(report, report.all_zero, ["lhs", "rhs", "residual", "zero"], rows, "\n".join(lines))


# Subcommands


def _algebra_check(config: RunConfig) -> Outcome:
    family = _algebra_family(config)
    return _algebra_outcome(reps.verify_structure_constants(family, config.nmax, _algebra_params(config)))


def _n_check(config: RunConfig) -> Outcome:
    shift = _exact(config.c) if config.c is not None else 0
    return _algebra_outcome(reps.verify_N_extension(config.nmax, c_shift=shift))


def _dynsym_check(config: RunConfig) -> Outcome:
    return _algebra_outcome(reps.verify_dynamical_symmetry(config.nmax))


def _chiral_check(config: RunConfig) -> Outcome:
    return _algebra_outcome(reps.verify_chiral_isomorphism(config.nmax))


def _contract(config: RunConfig) -> Outcome:
    generators, report = reps.contract_cga(config.nmax)
    outcome = _algebra_outcome(report)
    listing = [f"{name} -> {format_op(op)}" for name, op in generators.items()]
    outcome.text = "\n".join(listing + [outcome.text])
    outcome.report = {"generators": {name: format_op(op) for name, op in generators.items()},
                      "algebra": report.to_dict()}
    return outcome


_WARD_FAMILIES = {
    CorrelatorFamily.META_NAIVE: reps.Family.META,
    CorrelatorFamily.META_FINAL: reps.Family.META,
    CorrelatorFamily.CGA: reps.Family.CGA,
    CorrelatorFamily.DUAL: reps.Family.META_DUAL,
}


def _ward_residual(config: RunConfig) -> Outcome:
    spec = _correlator_spec(config)
    if spec.family not in _WARD_FAMILIES:
        raise InvalidConfig(f"No Ward generators for correlator family {spec.family}")
    generators = reps.ward_generators(_WARD_FAMILIES[spec.family])
    report = ward_residual(generators, spec, grid=_grid(config), tolerance=_tol(config, WARD_TOLERANCE))
    return _residual_outcome(report)


def _residual_outcome(report) -> Outcome:
    rows = [[name, value] for name, value in report.per_generator.items()]
    lines = [f"{name}: {value:.3e}" for name, value in report.per_generator.items()]
    lines.append(f"{report.family} on {report.domain}: max relative {report.max_rel_residual:.3e} "
                 f"({'pass' if report.passed else 'FAIL'})")
    return Outcome(report, report.passed, ["generator", "max_rel_residual"], rows, "\n".join(lines))


def _reduced_system(config: RunConfig) -> Outcome:
    spec = _correlator_spec(config, default_family="dual")
    if spec.family is not CorrelatorFamily.DUAL:
        raise InvalidConfig("The reduced system applies to the dual correlator")
    report = reduced_residual(spec, grid=_grid(config), tolerance=_tol(config, WARD_TOLERANCE))
    outcome = _residual_outcome(report)
    operators = "\n".join(format_op(op) for op in build_reduced_system())
    outcome.text = f"{operators}\n{outcome.text}"
    return outcome


def _w_collapse(config: RunConfig) -> Outcome:
    report = w_collapse_check(_nu_sum(config), config.get("mu", DEFAULT_MU),
                              tolerance=_tol(config, COLLAPSE_TOLERANCE))
    rows = [[s.u, s.v, s.w_re, s.w_im, s.g_re, s.g_im, s.curve_gap,
             "" if s.pair_gap is None else s.pair_gap] for s in report.samples]
    columns = ["u", "v", "w_re", "w_im", "g_re", "g_im", "curve_gap", "pair_gap"]
    text = (f"w collapse nu_sum={report.nu_sum:g} mu={report.mu:g}: curve gap {report.max_curve_gap:.3e}, "
            f"pair gap {report.max_pair_gap:.3e} ({'pass' if report.passed else 'FAIL'})")
    return Outcome(report, report.passed, columns, rows, text)


def _correlator_table(config: RunConfig) -> Outcome:
    spec = _correlator_spec(config)
    correlator = correlator_for(spec)
    points = _grid(config) or standard_grid(with_zeta=spec.family is CorrelatorFamily.DUAL)
    inside = correlator.inside(points)
    if not inside.all():
        _LOGGER.warning("Skipping %d grid points outside %s", int((~inside).sum()), correlator.domain)
    points = points.select(inside)
    values = correlator.evaluate(points)
    columns = ["family", "x1", "gamma1", "mu", "t", "r", "re", "im"]
    rows = [[str(spec.family), spec.x1, spec.gamma1, spec.mu, float(t), float(r), v.real, v.imag]
            for t, r, v in zip(points.t, points.r, values)]
    report = {"family": str(spec.family), "params": spec.params(), "rows": [dict(zip(columns, row)) for row in rows]}
    text = "\n".join(f"t={t:<6g} r={r:<6g} {complex(re, im):.12g}" for *_, t, r, re, im in rows)
    return Outcome(report, True, columns, rows, text)


def _properties(config: RunConfig) -> Outcome:
    grid = _grid(config)
    x = config.get("x", DEFAULT_X)
    gamma = config.get("gamma", DEFAULT_GAMMA)
    mu = config.get("mu", DEFAULT_MU)
    reports = {}
    for family in (CorrelatorFamily.META_FINAL, CorrelatorFamily.CGA, CorrelatorFamily.ORTHO):
        spec = CorrelatorSpec.matched(family, x=x, gamma=gamma, mu=mu)
        reports[f"symmetry:{family}"] = check_symmetry(spec, grid, _tol(config, SYMMETRY_TOLERANCE))
        reports[f"boundedness:{family}"] = check_boundedness(spec)
    schr = CorrelatorSpec.matched(CorrelatorFamily.SCHR_EXT, x=x, M1=config.get("mass", DEFAULT_MASS))
    reports["causality"] = check_causality(schr, grid)
    final = CorrelatorSpec.matched(CorrelatorFamily.META_FINAL, x=x, gamma=gamma, mu=mu)
    reports["contraction-limit"] = contraction_limit_check(final, tolerance=_tol(config, CONTRACTION_TOLERANCE))
    reports["non-analyticity"] = check_non_analyticity(final, t=config.get("t", DEFAULT_T))
    passed = all(report.passed for report in reports.values())
    rows = [[name, report.passed] for name, report in reports.items()]
    text = "\n".join(f"{name}: {'pass' if report.passed else 'FAIL'}" for name, report in reports.items())
    return Outcome({name: report.to_dict() for name, report in reports.items()}, passed,
                   ["check", "passed"], rows, text)


def _hardy_m2(config: RunConfig) -> Outcome:
    params = HardyParams(_nu_sum(config), config.get("lam", DEFAULT_LAMBDA), config.get("v", 0.0))
    report = check_m2(params, _tol(config, M2_TOLERANCE))
    text = (f"M2 numeric {report.value:.15g} closed {report.closed_form:.15g} gap {report.rel_gap:.3e} "
            f"({'pass' if report.passed else 'FAIL'})")
    return Outcome(report, report.passed, text=text)


def _hardy_spectrum(config: RunConfig) -> Outcome:
    size, window = config.spectrum_shape()
    report = spectral_onesidedness(_nu_sum(config), config.get("lam", DEFAULT_LAMBDA), size, window,
                                   config.taper, _tol(config, SPECTRAL_TOLERANCE))
    verdict = "inconclusive" if report.inconclusive else ("pass" if report.passed else "FAIL")
    text = f"wrong-side energy fraction {report.wrong_side_fraction:.3e} ({verdict})"
    return Outcome(report, report.passed, text=text)


def _roundtrip(config: RunConfig) -> Outcome:
    size, window = config.spectrum_shape()
    report = dualization_roundtrip(_nu_sum(config), config.get("lam", DEFAULT_LAMBDA), size, window,
                                   config.taper, mu=config.get("mu", DEFAULT_MU),
                                   gamma0=config.get("gamma", DEFAULT_GAMMA),
                                   tolerance=_tol(config, ROUNDTRIP_TOLERANCE))
    text = (f"shape gap {report.shape_gap:.3e}, amplitude gap {report.amplitude_gap:.3e}, "
            f"reconstruction gap {report.reconstruction_gap:.3e}, bridge {report.bridge_value:.15g} "
            f"({'pass' if report.passed else 'FAIL'})")
    return Outcome(report, report.passed, text=text)


def _singularity_demo(config: RunConfig) -> Outcome:
    spec = _correlator_spec(config, default_family="meta_naive", default_x=0.0)
    report = singularity_scan(spec, t=config.get("t", DEFAULT_T))
    rows = [[d, r, value] for d, r, value in zip(report.distances, report.r_values, report.values)]
    text = "\n".join(f"r={r:.17g} |C|={value:.6g}" for _, r, value in rows)
    text += f"\nlocus r={report.locus_r:g}: {'diverges' if report.diverges else 'bounded'}"
    return Outcome(report, report.diverges, ["distance", "r", "value"], rows, text)


def _commutator(config: RunConfig) -> Outcome:
    ring = select_ring(symbols_of(config.expressions))
    left, right = (parse_op_expr(text, ring) for text in config.expressions)
    result = format_op(op_commutator(left, right))
    report = {"lhs": config.expressions[0], "rhs": config.expressions[1], "commutator": result}
    return Outcome(report, True, ["commutator"], [[result]], result)


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "algebra-check": _algebra_check,
    "n-check": _n_check,
    "dynsym-check": _dynsym_check,
    "chiral-check": _chiral_check,
    "contract": _contract,
    "ward-residual": _ward_residual,
    "reduced-system": _reduced_system,
    "w-collapse": _w_collapse,
    "correlator-table": _correlator_table,
    "properties": _properties,
    "hardy-m2": _hardy_m2,
    "hardy-spectrum": _hardy_spectrum,
    "roundtrip": _roundtrip,
    "singularity-demo": _singularity_demo,
    "commutator": _commutator,
}


# Rendering


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return CSV_FORMAT % value
    return str(value)


def _flatten(report: Any, prefix: str = "") -> list[list[Any]]:
    rows = []
    if isinstance(report, dict):
        for key in sorted(report):
            rows += _flatten(report[key], f"{prefix}{key}.")
    elif not isinstance(report, list):
        rows.append([prefix.rstrip("."), report])
    return rows


def render(config: RunConfig, outcome: Outcome) -> str:
    if config.format == "json":
        envelope = {
            "tool": TOOL_NAME,
            "version": __version__,
            "subcommand": config.subcommand,
            "config": config.as_dict(),
            "report": outcome.report_dict(),
        }
        return json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    if config.format == "csv":
        columns, rows = outcome.columns, outcome.rows
        if columns is None:
            columns, rows = ["field", "value"], _flatten(outcome.report_dict())
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_csv_cell(cell) for cell in row] for row in rows)
        return buffer.getvalue()
    if outcome.text is not None:
        return outcome.text + "\n"
    return "\n".join(f"{key}: {value}" for key, value in _flatten(outcome.report_dict())) + "\n"


def run(config: RunConfig) -> RunResult:
    """Execute one subcommand. Exit code 0 pass, 1 failed check, 2 usage or domain error."""
    _LOGGER.info("Running %s", config.subcommand)
    try:
        outcome = HANDLERS[config.subcommand](config)
    except (MetaWardError, ValueError) as err:
        _LOGGER.error("%s failed: %s", config.subcommand, err)
        return RunResult(EXIT_USAGE, f"error: {err}\n")
    exit_code = EXIT_OK if outcome.passed else EXIT_FAILURE
    _LOGGER.info("Finished %s with exit code %d", config.subcommand, exit_code)
    return RunResult(exit_code, render(config, outcome))


_SHORT_FLAGS = ("-v", "-q", "-h")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Exact and numeric checks of meta-conformal "
                                                                 "representations and their two-point functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="warnings and errors only")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("expressions", nargs="*", help="operator expressions (commutator only)")
    parser.add_argument("--family")
    parser.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    for name in ("x", "gamma", "nu1", "nu2", "mu", "c", "mass", "t"):
        parser.add_argument(f"--{name}", type=float)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--v", type=float)
    parser.add_argument("--N", dest="size", type=int, help="transform size")
    parser.add_argument("--L", dest="window", type=float, help="transform window length")
    parser.add_argument("--taper", type=float, default=TAPER)
    parser.add_argument("--literal-branches", action="store_true",
                        help="allow negative rapidities in the bounded meta-conformal form")
    parser.add_argument("--grid", help="CSV file with header t,r,zeta1,zeta2")
    parser.add_argument("--tol", type=float, help="override the subcommand's tolerance")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    parser.add_argument("--out", help="write the report here instead of stdout")
    return parser


def split_expressions(argv: Sequence[str]) -> tuple[list[str], list[str]]:
    """Take the operator expressions that follow ``commutator`` out of argv.

    Tokens after the subcommand up to the first ``--option`` (or -v, -q, -h)
    are expressions and never reach argparse, which reads ``-dr`` as a flag.
    """
    argv = list(argv)
    if "commutator" not in argv:
        return argv, []
    start = argv.index("commutator") + 1
    end = start
    while end < len(argv) and not argv[end].startswith("--") and argv[end] not in _SHORT_FLAGS:
        end += 1
    return argv[:start] + argv[end:], argv[start:end]


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv, expressions = split_expressions(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.expressions = expressions + args.expressions
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        config = validate_input(vars(args))
    except InvalidConfig as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    result = run(config)
    if config.out and result.exit_code != EXIT_USAGE:
        Path(config.out).write_text(result.output, encoding="utf-8")
    else:
        stream = sys.stderr if result.exit_code == EXIT_USAGE else sys.stdout
        stream.write(result.output)
    return result.exit_code
