"""Command-line entry point: ``holonomy <command> [flags]``.

Commands: gen-series, guess, analyze, factor, desingularize, oracle.
Settings come from flags and, optionally, a ``key=value`` file given with
``--config``; flags win.  Exit codes: 0 success, 2 no result, 3 bad input
or violated precondition, 4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence


EXIT_OK = 0
EXIT_NO_RESULT = 2
EXIT_PRECONDITION = 3
EXIT_INCONSISTENT = 4

log = logging.getLogger("holonomy")


class UsageError(ValueError):
    """Bad flags, config values or input files (exit code 3)."""


@dataclass
class JobConfig:
    order: int | None = None
    threads: int = 1
    series: str | None = None
    op: str | None = None
    max_order: int = 4
    degrees: str | None = None
    min_surplus: int = 10
    out: str | None = None
    tol: float = 1e-9
    w: list = field(default_factory=list)
    logderiv: list = field(default_factory=list)
    adjoint: bool = False
    points: str | None = None

    def degree_schedule(self):
        if self.degrees is None:
            return None
        parts = [p for p in self.degrees.replace(",", " ").split() if p]
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise UsageError(f"bad --degrees value {self.degrees!r}") from exc
        if not vals:
            raise UsageError("empty --degrees")
        return vals[0] if len(vals) == 1 else vals


_TYPES = {f.name: f.type for f in fields(JobConfig)}


def read_config_file(path: str) -> dict:
    """``key=value`` lines; ``#`` starts a comment; keys use ``_`` or ``-``."""
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file {path} not found")
    out: dict = {}
    for n, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key=value")
        key = key.strip().replace("-", "_")
        if key not in _TYPES:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _coerce(key: str, value):
    kind = _TYPES[key]
    try:
        if kind in ("int", "int | None"):
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "bool":
            return str(value).lower() in ("1", "true", "yes", "on")
        if kind == "list":
            return [v.strip() for v in str(value).split(";") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad value {value!r} for {key}") from exc
    return value


def build_config(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig()
    if getattr(args, "config", None):
        for k, v in read_config_file(args.config).items():
            setattr(cfg, k, _coerce(k, v))
    for f in fields(JobConfig):
        v = getattr(args, f.name, None)
        if v is None or v == [] or v is False:
            continue
        setattr(cfg, f.name, v)
    if cfg.threads < 1:
        raise UsageError("--threads must be >= 1")
    return cfg


def _need_file(path: str | None, flag: str) -> Path:
    if not path:
        raise UsageError(f"{flag} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: {path} does not exist")
    return p


def _out_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    if not p.parent.exists():
        raise UsageError(f"--out: directory {p.parent} does not exist")
    return p


# -- commands -------------------------------------------------------------------
def cmd_gen_series(cfg: JobConfig) -> int:
    from .lattice import chi3_series
    from .lattice.cache import ResidueStore, default_cache_dir, read_series, write_series

    if cfg.order is None or cfg.order < 9:
        raise UsageError("--order must be at least 9")
    cache = default_cache_dir()
    out = _out_path(cfg.out) or cache / f"chi3_{cfg.order}.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.exists():
        series, _ = read_series(out)  # raises on a bad checksum
        if series.order >= cfg.order:
            print(f"{out}: already holds {series.order + 1} verified coefficients")
            return EXIT_OK
    store = ResidueStore(cache / "checkpoints")
    result = chi3_series(
        cfg.order,
        threads=cfg.threads,
        store=store,
        progress=lambda k, n: log.info("prime %d of %d done", k, n),
    )
    write_series(out, result.series, result.normalization)
    print(f"{out}: wrote coefficients through w^{cfg.order}")
    return EXIT_OK


def cmd_guess(cfg: JobConfig) -> int:
    from .diffop import write_operator
    from .guesser import GuessConfig, InsufficientData, guess_ode
    from .lattice.cache import read_series

    series, _ = read_series(_need_file(cfg.series, "--series"))
    out = _out_path(cfg.out)
    try:
        gc = GuessConfig(max_order=cfg.max_order, degrees=cfg.degree_schedule(), min_surplus=cfg.min_surplus)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        res = guess_ode(series, gc)
    except InsufficientData as exc:
        raise UsageError(str(exc)) from exc
    if res is None:
        print("no differential equation found within the ansatz schedule")
        return EXIT_NO_RESULT
    print(f"order: {res.order}")
    print(f"degrees: {' '.join(str(d) for d in res.degrees)}")
    print(f"coefficients used: through w^{res.used_through}")
    print(f"surplus verified: {res.surplus_verified}")
    if out is not None:
        write_operator(out, res.operator)
        print(f"operator written to {out}")
    else:
        from .diffop import format_operator

        sys.stdout.write(format_operator(res.operator))
    return EXIT_OK


def cmd_analyze(cfg: JobConfig) -> int:
    from .diffop import read_operator
    from .frobenius import analyze, format_report, fuchsian_check

    L = read_operator(_need_file(cfg.op, "--op"))
    text = format_report(analyze(L), fuchsian_check(L))
    sys.stdout.write(text)
    out = _out_path(cfg.out)
    if out is not None:
        out.write_text(text)
    return EXIT_OK


def cmd_factor(cfg: JobConfig) -> int:
    from .diffop import (
        DiffOp,
        RatFunc,
        first_order_from_solution,
        hyperexponential_closed_form,
        hyperexponential_series,
        left_divide,
        parse_ratfunc,
        projection_constant,
        read_operator,
        right_divide,
        write_operator,
    )
    from .frobenius import rational_solutions
    from .lattice.cache import read_series

    L = read_operator(_need_file(cfg.op, "--op"))
    series = read_series(_need_file(cfg.series, "--series"))[0] if cfg.series else None
    out = _out_path(cfg.out)
    if not cfg.logderiv and not cfg.adjoint:
        raise UsageError("give at least one --logderiv or --adjoint")
    lines = []
    emitted = None
    all_zero = True
    for text in cfg.logderiv:
        u = parse_ratfunc(text)
        R = first_order_from_solution(u)
        Q, rem = right_divide(L, R)
        ok = rem.is_zero()
        all_zero &= ok
        lines.append(f"right factor {R}: remainder {'0' if ok else 'NONZERO'}")
        if ok:
            qc = Q.primitive()
            lines.append(f"  quotient order {qc.order}")
            emitted = emitted or qc
    if cfg.adjoint:
        sols = rational_solutions(L.adjoint())
        lines.append(f"adjoint rational solutions: {len(sols)}")
        monic = L.monic()
        for r in sols:
            # r solves the adjoint of L; r * a_q solves the adjoint of the monic operator
            z = r * RatFunc.lift(L.leading)
            lines.append(f"  numerator: {z.num.primitive()}")
            lines.append(f"  denominator: {z.den.primitive()}")
            M = DiffOp([z.derivative() / z, RatFunc.lift(1)])
            Q, rem = left_divide(monic, M)
            ok = rem.is_zero()
            all_zero &= ok
            lines.append(f"  monic operator = (d + z'/z) * quotient: remainder {'0' if ok else 'NONZERO'}")
            if ok:
                qc = Q.primitive()
                emitted = emitted or qc
                for t in cfg.logderiv:
                    u = parse_ratfunc(t)
                    R = first_order_from_solution(u)
                    rem2 = right_divide(qc, R).remainder
                    lines.append(
                        f"  quotient (order {qc.order}) right factor {R}: remainder {'0' if rem2.is_zero() else 'NONZERO'}"
                    )
                    hf = hyperexponential_closed_form(u) if series is not None else None
                    if hf is not None and not rem2.is_zero():
                        # the quotient kills series - alpha * solution for at most one alpha
                        s = hyperexponential_series(hf, series.order)
                        alpha = projection_constant(qc, series, s)
                        lines.append(f"  projection on the solution of {R}: alpha = {alpha}")
    sys.stdout.write("\n".join(lines) + "\n")
    if out is not None and emitted is not None:
        write_operator(out, emitted)
    return EXIT_OK if all_zero else EXIT_NO_RESULT


def cmd_desingularize(cfg: JobConfig) -> int:
    from .desing import desingularize
    from .diffop import format_operator, read_operator, write_operator
    from .frobenius import analyze

    L = read_operator(_need_file(cfg.op, "--op"))
    out = _out_path(cfg.out)
    pts = [r.location for r in analyze(L, with_monodromy=False) if r.is_apparent]
    if not pts:
        print("no apparent singularities; operator unchanged")
    res = desingularize(L, pts)
    print(f"order: {L.order} -> {res.operator.order}")
    for pt in res.removed_points:
        print(f"removed: {pt}")
    factors = ", ".join(f"({f})^{e}" for f, e in res.leading_factorization)
    print("leading coefficient factors: " + (factors or "none (constant)"))
    if res.new_apparent:
        print("new factors in the leading coefficient: " + ", ".join(str(f) for f in res.new_apparent))
    if out is not None:
        write_operator(out, res.operator)
    else:
        sys.stdout.write(format_operator(res.operator))
    return EXIT_OK


def cmd_oracle(cfg: JobConfig) -> int:
    from .lattice.cache import read_series
    from .lattice.quadrature import chi3_quadrature, series_partial_sum

    if not cfg.w:
        raise UsageError("--w is required")
    try:
        ws = [float(v) for v in cfg.w]
    except ValueError as exc:
        raise UsageError("--w takes numbers") from exc
    series = read_series(_need_file(cfg.series, "--series"))[0] if cfg.series else None
    status = EXIT_OK
    for w in ws:
        try:
            q = chi3_quadrature(w, rel_tol=max(min(cfg.tol, 1e-10), 1e-12))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        line = f"w={w!r} quadrature={q!r}"
        if series is not None:
            s = series_partial_sum(series.c, w)
            rel = abs(s - q) / abs(q) if q else abs(s - q)
            line += f" series={s!r} rel_diff={rel:.3e}"
            if rel > cfg.tol:
                line += " MISMATCH"
                status = EXIT_INCONSISTENT
        print(line)
    return status


COMMANDS = {
    "gen-series": cmd_gen_series,
    "guess": cmd_guess,
    "analyze": cmd_analyze,
    "factor": cmd_factor,
    "desingularize": cmd_desingularize,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holonomy", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--out")
        return p

    p = common(sub.add_parser("gen-series", help="generate the chi3 series cache"))
    p.add_argument("--order", type=int)
    p.add_argument("--threads", type=int)

    p = common(sub.add_parser("guess", help="find an ODE annihilating a cached series"))
    p.add_argument("--series")
    p.add_argument("--max-order", dest="max_order", type=int)
    p.add_argument("--degrees", help="uniform degree or list, highest derivative first")
    p.add_argument("--min-surplus", dest="min_surplus", type=int)

    p = common(sub.add_parser("analyze", help="singular points, exponents and monodromy"))
    p.add_argument("--op")

    p = common(sub.add_parser("factor", help="check factorizations from known solutions"))
    p.add_argument("--op")
    p.add_argument("--logderiv", action="append", default=[], help="log-derivative of a solution, e.g. '1/(w*(1-4*w))'")
    p.add_argument("--adjoint", action="store_true", help="also use rational solutions of the adjoint")
    p.add_argument("--series")

    p = common(sub.add_parser("desingularize", help="remove apparent singularities"))
    p.add_argument("--op")

    p = common(sub.add_parser("oracle", help="chi3 by direct quadrature"))
    p.add_argument("--w", action="append", default=[])
    p.add_argument("--tol", type=float)
    p.add_argument("--series")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PRECONDITION if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    from .desing import DesingularizationError, PreconditionError
    from .diffop import OperatorFormatError
    from .frobenius import IrregularSingularity, UnresolvedExponents
    from .lattice.cache import CacheError

    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, CacheError, OperatorFormatError, PreconditionError, IrregularSingularity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DesingularizationError, UnresolvedExponents) as exc:
        print(f"no result: {exc}", file=sys.stderr)
        return EXIT_NO_RESULT
    except ArithmeticError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
