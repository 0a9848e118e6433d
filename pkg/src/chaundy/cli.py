"""Command-line front end: identity suites, numeric checks, Monte Carlo, rendering.

Every report is written as one JSON object per line, followed by a summary
object.  Exit status is 0 when every report passes, 1 when any check fails
and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

from . import hyper, multivar, onevar, paths, simplex
from .errors import UsageError
from .exact import pochhammer, to_rational
from .multivar import build_f, cyclic_shifts, lauricella_coeffs, permuted_f
from .onevar import build_p, reflect
from .report import VerifyReport, format_complex

WORKERS_ENV = "CHAUNDY_WORKERS"

# suites driven by an (m, n) grid of nonnegative integers
GRID_SUITES: dict[str, Callable[..., VerifyReport]] = {
    "onevar": onevar.verify_onevar,
    "homogeneous": onevar.verify_homogeneous,
    "truncation": onevar.verify_truncation,
    "descent": onevar.verify_derivative_descent,
    "ode": onevar.verify_ode_onevar,
    "bezout": onevar.verify_bezout,
    "pfaff-limit": onevar.verify_pfaff_limit,
    "paths": paths.verify_paths,
}
# suites driven by exponent vectors a
VECTOR_SUITES: dict[str, Callable[..., VerifyReport]] = {
    "multivar": multivar.verify_cyclic,
    "pde": multivar.verify_pde_suite,
    "dirichlet": simplex.verify_split,
}
SWEEP_SUITES = ("onevar", "homogeneous", "truncation", "descent", "ode", "paths")


@dataclass
class SuiteConfig:
    suite: str
    tuples: list[tuple] = field(default_factory=list)
    seed: int | None = None
    out: str | None = None
    fmt: str = "json"
    timing: bool = True
    inject_fault: bool = False

    def validate(self):
        if self.suite not in GRID_SUITES and self.suite not in VECTOR_SUITES and self.suite not in (
            "numeric-ext", "threeterm", "numeric-ode", "mc",
        ):
            raise UsageError(f"unknown suite {self.suite!r}")
        if not self.tuples:
            raise UsageError("parameter range is empty")
        if self.suite == "mc" and self.seed is None:
            raise UsageError("--seed is required for the Monte Carlo suite")
        if self.fmt not in ("json", "text"):
            raise UsageError(f"reports support --format json or text, not {self.fmt!r}")


# -- argument parsing helpers ------------------------------------------------


def parse_range(text: str) -> list[int]:
    """``"3"`` or an inclusive ``"lo:hi"``."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":", 1))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise UsageError(f"expected an integer or lo:hi range, got {text!r}") from None


def parse_vectors(text: str) -> list[tuple[int, ...]]:
    """``"1,2,0"`` or with per-entry ranges, e.g. ``"0:2,0:2,1"``."""
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise UsageError(f"malformed exponent list {text!r}")
    return [tuple(v) for v in itertools.product(*(parse_range(p) for p in parts))]


def _complex_arg(text: str) -> complex:
    try:
        return hyper.parse_complex(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _single(values: list[int], flag: str) -> int:
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value here")
    return values[0]


def _grid(args) -> list[tuple[int, int]]:
    if args.max_mn is not None:
        ms = ns = list(range(args.max_mn + 1))
    else:
        if args.m is None or args.n is None:
            raise UsageError("give --m and --n (or --max-mn)")
        ms, ns = parse_range(args.m), parse_range(args.n)
    if any(v < 0 for v in ms + ns):
        raise UsageError("m and n must be nonnegative")
    return sorted(itertools.product(ms, ns))


def _suite_grid(suite: str, args) -> list[tuple[int, int]]:
    grid = _grid(args)
    if suite == "descent" and args.max_mn is not None:
        # derivative descent starts at m = 1
        grid = [(m, n) for m, n in grid if m >= 1]
    return grid


# -- execution ---------------------------------------------------------------


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if count < 1:
        raise UsageError(f"{WORKERS_ENV} must be at least 1")
    return count


def _task(cfg: SuiteConfig) -> Callable[[tuple], VerifyReport]:
    s = cfg.suite
    if s == "onevar" and cfg.inject_fault:
        return partial(_call, partial(onevar.verify_onevar, perturb=Fraction(1, 7)))
    if s in GRID_SUITES:
        return partial(_call, GRID_SUITES[s])
    if s in VECTOR_SUITES:
        return partial(_call_vector, VECTOR_SUITES[s])
    if s == "numeric-ext":
        return _run_extension
    if s == "threeterm":
        return partial(_call_threeterm, hyper.verify_threeterm)
    if s == "numeric-ode":
        return partial(_call_threeterm, hyper.verify_ode_numeric)
    return partial(_run_mc, cfg.seed)


def _call(fn, args):
    return [fn(*args)]


def _call_vector(fn, a):
    return [fn(a)]


def _run_extension(args):
    p = hyper.ExtensionParams(*args)
    return [hyper.verify_extension_equivalence(p), hyper.verify_extension_unity(p)]


def _call_threeterm(fn, args):
    return [fn(hyper.ThreeTermParams(*args))]


def _run_mc(seed, args):
    x, m, n, trials = args
    return [paths.verify_mc(x, m, n, trials, seed)]


def run_suite(cfg: SuiteConfig) -> tuple[int, list[dict]]:
    """Run every tuple; returns (exit status, report objects plus the summary)."""
    cfg.validate()
    task = _task(cfg)
    workers = min(worker_count(), len(cfg.tuples))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(task, cfg.tuples))
    else:
        batches = [task(t) for t in cfg.tuples]
    reports = [r for batch in batches for r in batch]
    failed = sum(not r.passed for r in reports)
    objects = [r.to_json(timing=cfg.timing) for r in reports]
    objects.append({
        "summary": True,
        "suite": cfg.suite,
        "reports": len(reports),
        "passed": len(reports) - failed,
        "failed": failed,
        "status": "pass" if failed == 0 else "fail",
    })
    return (0 if failed == 0 else 1), objects


def dumps(obj) -> str:
    """Canonical one-line JSON: sorted keys, no spaces."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _text_line(obj: dict) -> str:
    if obj.get("summary"):
        return f"# {obj['suite']}: {obj['passed']}/{obj['reports']} passed"
    params = " ".join(f"{k}={v}" for k, v in sorted(obj["params"].items()))
    line = f"{obj['identity']:<14} {params:<32} {obj['status']:<13} residual={obj['residual']}"
    if "witness" in obj:
        line += f" witness={obj['witness']}"
    return line


# -- rendering ---------------------------------------------------------------


def _latex_names(n: int) -> list[str]:
    return [f"x_{{{i + 1}}}" for i in range(n)]


def emit_latex(identity: str, params: dict) -> str:
    """Deterministic LaTeX for an expanded instance of the named identity."""
    if identity == "onevar":
        m, n = params["m"], params["n"]
        left, right = build_p(m, n), reflect(build_p(n, m))
        return "\n".join([
            rf"p_{{{m},{n}}}(x) = {left.to_latex()}",
            rf"p_{{{n},{m}}}(1-x) = {right.to_latex()}",
            rf"p_{{{m},{n}}}(x) + p_{{{n},{m}}}(1-x) = {(left + right).to_latex()}",
        ])
    if identity == "multivar":
        a = tuple(params["a"])
        n = len(a)
        names = _latex_names(n)
        terms = [permuted_f(a, sigma, homogeneous=True).to_latex(names)
                 for sigma in cyclic_shifts(n)]
        total = "+".join(f"x_{i + 1}" for i in range(n))
        return (" + ".join(f"({t})" if len(terms) > 1 and " " in t else t for t in terms)
                + rf" = ({total})^{{{sum(a) + 1}}} \qquad ({total}=1)")
    if identity == "threeterm":
        return _threeterm_latex(params)
    raise UsageError(f"no LaTeX rendering for {identity!r}")


def _num(v) -> str:
    if isinstance(v, complex):
        return format_complex(v)
    return repr(float(v)) if not float(v).is_integer() else str(int(v))


def _threeterm_latex(params: dict) -> str:
    al, m, n = params["alpha"], params["m"], params["n"]
    aq = Fraction(al)
    c1 = float(pochhammer(n + 1, m + 1) / pochhammer(n + aq + 1, m + 1))
    c2 = float(pochhammer(m + 1, n + 1) / pochhammer(m + aq + 1, n + 1))
    twist = rf"(1-z)^{{{-n - 1}}}(1-z^{{-1}})^{{{_num(-al)}}}"
    lines = [
        rf"{twist}\,{{}}_2F_1\left({m + 1},{_num(-al)};{n + m + 2};z^{{-1}}\right)"
        rf" = {c1!r}\,z^{{{m + 1}}}{twist}\,{{}}_2F_1\left({-n},{m + 1};{_num(-n - al)};1-z\right)"
        rf" + {c2!r}\,{{}}_2F_1\left({-m},{n + 1};{_num(-m - al)};z\right)"
    ]
    if params.get("z") is not None:
        z = params["z"]
        lhs, r1, r2 = hyper.threeterm_terms(hyper.ThreeTermParams(al, m, n, z))
        lines.append(rf"z = {format_complex(z)}:\quad {format_complex(lhs)} = "
                     rf"({format_complex(r1)}) + ({format_complex(r2)})")
    return "\n".join(lines)


def emit_text(identity: str, params: dict) -> str:
    if identity == "onevar":
        m, n = params["m"], params["n"]
        left, right = build_p(m, n), reflect(build_p(n, m))
        return "\n".join([
            f"p[{m},{n}](x) = {left.to_text()}",
            f"p[{n},{m}](1-x) = {right.to_text()}",
            f"sum = {(left + right).to_text()}",
        ])
    if identity == "multivar":
        a = tuple(params["a"])
        return "\n".join(f"f{list(sigma)} = {permuted_f(a, sigma).to_text()}"
                         for sigma in cyclic_shifts(len(a)))
    if identity == "threeterm":
        return _threeterm_latex(params)
    raise UsageError(f"no text rendering for {identity!r}")


def emit_json(identity: str, params: dict) -> dict:
    if identity == "lauricella":
        a = tuple(params["a"])
        return {"identity": "lauricella", "params": {"a": list(a)},
                "table": lauricella_coeffs(a).to_json()}
    if identity == "dirichlet":
        a = tuple(params["a"])
        n = len(a) - 1
        pieces = [simplex.subsimplex_integral(i, a).value.to_text() for i in range(1, n + 2)]
        return {"identity": "dirichlet", "params": {"a": list(a)},
                "normalizer": str(simplex.dirichlet(a)), "pieces": pieces}
    if identity == "onevar":
        m, n = params["m"], params["n"]
        return {"identity": "onevar", "params": {"m": m, "n": n},
                "p": build_p(m, n).to_text(), "p_reflected": reflect(build_p(n, m)).to_text()}
    if identity == "multivar":
        a = tuple(params["a"])
        return {"identity": "multivar", "params": {"a": list(a)},
                "f": build_f(a).to_text(), "f_simplex": build_f(a, homogeneous=False).to_text()}
    raise UsageError(f"no JSON rendering for {identity!r}")


# -- argparse wiring ---------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--m", help="integer or inclusive lo:hi range (complex for 'numeric ext')")
    p.add_argument("--n", help="integer or inclusive lo:hi range (complex for 'numeric ext')")
    p.add_argument("--max-mn", type=int, help="shorthand for m, n in 0..MAX")
    p.add_argument("--a", help="exponents k1,k2,...; entries may be lo:hi ranges")
    p.add_argument("--x", help="rational p/q or decimal")
    p.add_argument("--alpha", help="positive real")
    p.add_argument("--z", help="complex number a+bi")
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", default="json", choices=["json", "latex", "text"])
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaundy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="exact identity suites")
    verify.add_argument("suite", choices=sorted(GRID_SUITES) + sorted(VECTOR_SUITES))
    _common(verify)

    numeric = sub.add_parser("numeric", help="floating-point checks")
    numeric.add_argument("suite", choices=["ext", "threeterm", "ode"])
    _common(numeric)

    mc = sub.add_parser("mc", help="coin-tossing Monte Carlo")
    _common(mc)

    emit = sub.add_parser("emit", help="render an identity instance")
    emit.add_argument("identity", choices=["onevar", "multivar", "threeterm", "lauricella",
                                           "dirichlet"])
    _common(emit)

    sweep = sub.add_parser("sweep", help="every (m, n) suite over one grid")
    _common(sweep)
    return parser


def _config_from(args) -> list[SuiteConfig]:
    base = dict(seed=args.seed, out=args.out, fmt=args.fmt, timing=not args.no_timing,
                inject_fault=args.inject_fault)
    if args.command == "verify":
        if args.suite in GRID_SUITES:
            return [SuiteConfig(args.suite, _suite_grid(args.suite, args), **base)]
        if not args.a:
            raise UsageError(f"verify {args.suite} needs --a")
        return [SuiteConfig(args.suite, parse_vectors(args.a), **base)]
    if args.command == "sweep":
        return [SuiteConfig(s, _suite_grid(s, args), **base) for s in SWEEP_SUITES]
    if args.command == "mc":
        if args.x is None or args.m is None or args.n is None:
            raise UsageError("mc needs --x, --m and --n")
        x = to_rational(args.x)
        m, n = _single(parse_range(args.m), "--m"), _single(parse_range(args.n), "--n")
        return [SuiteConfig("mc", [(x, m, n, args.trials)], **base)]
    # numeric
    if args.suite == "ext":
        if args.m is None or args.n is None or args.x is None:
            raise UsageError("numeric ext needs --m, --n and --x")
        xs = [float(to_rational(v)) for v in args.x.split(",")]
        tuples = [(_complex_arg(args.m), _complex_arg(args.n), x) for x in xs]
        return [SuiteConfig("numeric-ext", tuples, **base)]
    if args.alpha is None or args.z is None:
        raise UsageError(f"numeric {args.suite} needs --alpha and --z")
    alpha = float(to_rational(args.alpha))
    grid = _grid(args)
    tuples = [(alpha, m, n, _complex_arg(args.z)) for m, n in grid]
    return [SuiteConfig("threeterm" if args.suite == "threeterm" else "numeric-ode", tuples, **base)]


def _emit(args) -> str:
    params: dict = {}
    if args.identity == "onevar":
        if args.m is None or args.n is None:
            raise UsageError("emit onevar needs --m and --n")
        params = {"m": _single(parse_range(args.m), "--m"), "n": _single(parse_range(args.n), "--n")}
    elif args.identity == "threeterm":
        if args.alpha is None or args.m is None or args.n is None:
            raise UsageError("emit threeterm needs --alpha, --m and --n")
        params = {"alpha": float(to_rational(args.alpha)),
                  "m": _single(parse_range(args.m), "--m"),
                  "n": _single(parse_range(args.n), "--n"),
                  "z": _complex_arg(args.z) if args.z else None}
        hyper.ThreeTermParams(params["alpha"], params["m"], params["n"], params["z"] or -1)
    else:
        if not args.a:
            raise UsageError(f"emit {args.identity} needs --a")
        vectors = parse_vectors(args.a)
        params = {"a": _single(vectors, "--a")}
    if args.fmt == "latex":
        return emit_latex(args.identity, params)
    if args.fmt == "text":
        return emit_text(args.identity, params)
    return dumps(emit_json(args.identity, params))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on malformed flags
    try:
        if args.command == "emit":
            text = _emit(args) + "\n"
            status = 0
        else:
            lines = []
            status = 0
            for cfg in _config_from(args):
                code, objects = run_suite(cfg)
                status = max(status, code)
                render = dumps if cfg.fmt == "json" else _text_line
                lines.extend(render(o) for o in objects)
            text = "\n".join(lines) + "\n"
    except ValueError as exc:  # UsageError, DomainError, malformed numbers
        print(f"chaundy: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
