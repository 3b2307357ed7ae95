"""Command-line front end.

Subcommands: scan, spectrum, asympt, weyl, pmatrix, reconstruct, validate.
Exit codes: 0 success, 1 problem-file validation failure, 2 numerical
failure, 3 I/O failure. All floating-point output is printed with 17
significant digits so results round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asymptotics, problem_io, spectrum, weyl
from .errors import DegenerateLeadingCoefficient, DiracSpectralError
from .problem import DiracProblem, validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    command: str
    problem: str
    problem2: str | None = None
    window: tuple[float, float] | None = None
    grid: int = 400
    tol: float = 1e-10
    out: str | None = None
    format: str = "csv"
    seed: int = 0


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _emit(config: RunConfig, columns: list[str], rows: list[list],
          extra: dict | None = None) -> None:
    if config.format == "json":
        payload: dict = {
            "columns": columns,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        if extra:
            payload.update(
                {k: ({kk: _fmt(vv) for kk, vv in v.items()} if isinstance(v, dict) else v)
                 for k, v in extra.items()}
            )
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> DiracProblem:
    problem = problem_io.load_problem(path)
    report = validate(problem)
    if not report.ok:
        raise problem_io.ProblemFileError("; ".join(report.failures))
    return problem


def _require_window(config: RunConfig) -> tuple[float, float]:
    if config.window is None:
        raise problem_io.ProblemFileError(
            f"--window is required for the {config.command} command"
        )
    lo, hi = config.window
    if not lo < hi:
        raise problem_io.ProblemFileError(f"empty window [{lo}, {hi}]")
    return lo, hi


def _cmd_validate(config: RunConfig) -> int:
    problem = problem_io.load_problem(config.problem)
    report = validate(problem)
    if report.ok:
        print("ok")
        return EXIT_OK
    for failure in report.failures:
        print(failure, file=sys.stderr)
    return EXIT_VALIDATION


def _cmd_scan(config: RunConfig) -> int:
    problem = _load(config.problem)
    lo, hi = _require_window(config)
    lams = np.linspace(lo, hi, config.grid)
    d = np.real(spectrum.delta_many(problem, lams))
    try:
        lead = np.asarray(asymptotics.delta_leading(problem, lams), dtype=float)
    except DegenerateLeadingCoefficient:
        lead = np.full_like(lams, np.nan)
    rows = [[lam, dv, lv] for lam, dv, lv in zip(lams, d, lead)]
    _emit(config, ["lambda", "delta", "delta_leading"], rows)
    return EXIT_OK


def _cmd_spectrum(config: RunConfig) -> int:
    problem = _load(config.problem)
    lo, hi = _require_window(config)
    opts = spectrum.SearchOptions(tol=config.tol, norming=True)
    result = spectrum.find_eigenvalues(problem, lo, hi, opts)
    rows = [
        [k, lam, res, br[0], br[1], mu]
        for k, (lam, res, br, mu) in enumerate(
            zip(result.eigenvalues, result.residuals, result.brackets, result.norming)
        )
    ]
    _emit(
        config,
        ["index", "eigenvalue", "residual", "bracket_lo", "bracket_hi", "mu"],
        rows,
        extra={"suspected": [_fmt(v) for v in result.suspected]},
    )
    return EXIT_OK


def _cmd_asympt(config: RunConfig) -> int:
    problem = _load(config.problem)
    lo, hi = _require_window(config)
    lams = np.linspace(lo, hi, config.grid)
    report = asymptotics.compare_asymptotics(problem, lams)
    rows = [[lam, dev] for lam, dev in zip(report.lams, report.deviations)]
    extra = {
        "dropped": report.dropped,
        "window_max": [
            {"lo": _fmt(lo_), "hi": _fmt(hi_), "max": _fmt(m)}
            for lo_, hi_, m in report.window_max
        ],
    }
    _emit(config, ["lambda", "relative_deviation"], rows, extra=extra)
    return EXIT_OK


def _cmd_weyl(config: RunConfig) -> int:
    problem = _load(config.problem)
    lo, hi = _require_window(config)
    lams = np.linspace(lo, hi, config.grid)
    rows = []
    for lam in lams:
        d = spectrum.delta(problem, lam)
        if abs(d) < config.tol:
            continue  # too close to an eigenvalue; M has a pole there
        m = spectrum.delta1(problem, lam) / d
        rows.append([lam, np.real(m), np.imag(m)])
    _emit(config, ["lambda", "re_m", "im_m"], rows)
    return EXIT_OK


def _cmd_pmatrix(config: RunConfig) -> int:
    problem = _load(config.problem)
    if config.problem2 is None:
        raise problem_io.ProblemFileError("--problem2 is required for pmatrix")
    problem2 = _load(config.problem2)
    lo, hi = config.window or (0.2, 5.2)
    lams = np.linspace(lo, hi, max(2, config.grid // 20))
    xs = np.linspace(problem.a, problem.b, 7)[1:-1]
    # At a transmission point the two fundamental solutions carry opposite
    # one-sided limits, so skip sample points near any breakpoint.
    breakpoints = set(problem.breakpoints) | set(problem2.breakpoints)
    gap = 1e-6 * (problem.b - problem.a)
    xs = [x for x in xs if all(abs(x - xi) > gap for xi in breakpoints)]
    worst = 0.0
    used = 0
    for lam in lams:
        if abs(spectrum.delta(problem, lam)) < 1e-8:
            continue
        if abs(spectrum.delta(problem2, lam)) < 1e-8:
            continue
        for x in xs:
            p = weyl.p_matrix(problem, problem2, float(x), float(lam), check=False)
            worst = max(worst, float(np.max(np.abs(p - np.eye(2)))))
            used += 1
    _emit(config, ["max_deviation_from_identity", "points"], [[worst, used]])
    return EXIT_OK


def _cmd_reconstruct(config: RunConfig) -> int:
    doc = problem_io.load_document(config.problem)
    problem = problem_io.parse_problem(doc)
    report = validate(problem)
    if not report.ok:
        raise problem_io.ProblemFileError("; ".join(report.failures))
    spec = problem_io.parse_reconstruction(doc, problem)
    opts = weyl.ReconstructOptions(seed=config.seed)
    result = weyl.reconstruct(spec, opts)
    rows = [[f"param_{i}", v] for i, v in enumerate(result.values)]
    extra = {
        "residual": _fmt(result.residual),
        "mismatch_main": [_fmt(v) for v in result.mismatch_main],
        "mismatch_aux": [_fmt(v) for v in result.mismatch_aux],
        "start": [_fmt(v) for v in result.start],
        "n_evaluations": result.n_evaluations,
    }
    _emit(config, ["parameter", "value"], rows, extra=extra)
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "scan": _cmd_scan,
    "spectrum": _cmd_spectrum,
    "asympt": _cmd_asympt,
    "weyl": _cmd_weyl,
    "pmatrix": _cmd_pmatrix,
    "reconstruct": _cmd_reconstruct,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac-spectral",
        description="Forward/inverse spectral solver for 1-D Dirac systems "
        "with transmission conditions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--problem", required=True)
        p.add_argument("--problem2")
        p.add_argument("--window", nargs=2, type=float, metavar=("MIN", "MAX"))
        p.add_argument("--grid", type=int, default=400)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
    return parser


def run(config: RunConfig) -> int:
    try:
        return _COMMANDS[config.command](config)
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (problem_io.ProblemFileError, tomllib.TOMLDecodeError) as exc:
        print(f"invalid problem: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DiracSpectralError as exc:
        print(f"numerical failure in {config.command}: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        problem=args.problem,
        problem2=args.problem2,
        window=tuple(args.window) if args.window else None,
        grid=args.grid,
        tol=args.tol,
        out=args.out,
        format=args.format,
        seed=args.seed,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
