"""kuostab command line: eigenvalues, contour grids, the stability boundary,
growth-rate maps and self-checks, written as CSV or JSON.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric failure.
"""
import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import closedform as cf
from .errors import ContourAmbiguous, KuoStabError
from .profiles import PROFILES, get_profile
from .slsolver import INFINITY, Finite, SLProblem, solve, speed_from_ctilde

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------------- parsing

def parse_range(text):
    """'a:b:n' -> n points from a to b inclusive ('a' alone is one point)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected a:b:n") from None
    if n < 1:
        raise UsageError(f"range {text!r} needs n >= 1")
    if n == 1:
        return [a]
    return [float(v) for v in np.linspace(a, b, n)]


def parse_grid(text):
    try:
        a, b = text.lower().split("x")
        nb, na = int(a), int(b)
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected AxB") from None
    if nb < 1 or na < 1:
        raise UsageError("grid sizes must be positive")
    return nb, na


def thread_count(requested):
    env = os.environ.get("KUO_STAB_THREADS")
    if env is not None and env.strip():
        try:
            requested = int(env)
        except ValueError:
            raise UsageError(f"KUO_STAB_THREADS={env!r} is not an integer") from None
    if requested < 0:
        raise UsageError("threads must be >= 0")
    return requested or (os.cpu_count() or 1)


def ordered_map(fn, items, threads):
    """Map preserving input order; results are written by a single caller."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ----------------------------------------------------------------------------- output

def fmt_value(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.9g" % v
    return str(v)


def json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if not math.isfinite(v) else float("%.9g" % v)
    return v


def render_table(columns, rows, fmt):
    if fmt == "json":
        doc = {"columns": list(columns),
               "rows": [[json_value(v) for v in r] for r in rows]}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    lines = [",".join(columns)]
    lines.extend(",".join(fmt_value(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


def write_text(text, out, stdout):
    if out is None or out == "-":
        stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def plot_script(command, csv_path):
    """gnuplot script reading the emitted CSV."""
    head = [f"# gnuplot script for `kuostab {command}`",
            "set datafile separator ','",
            "set key autotitle columnhead"]
    body = {
        "contour": ["set xlabel 'beta'", "set ylabel 'ctilde'", "set view map",
                    "set pm3d map", "set contour base",
                    f"splot '{csv_path}' using 1:2:(-$4) with pm3d title '-lambda_1'"],
        "boundary": ["set xlabel 'beta'", "set ylabel 'alpha'",
                     f"plot '{csv_path}' using 1:2 with linespoints title 'sqrt(Lambda)', \\",
                     f"     '' using 1:4 with lines title 'SNM curve'"],
        "growthmap": ["set xlabel 'beta'", "set ylabel 'alpha'", "set view map",
                      f"splot '{csv_path}' using 2:1:($5 == 1 ? $4 : 0) with points pt 5 palette "
                      "title 'Im c'"],
        "eigen": ["set xlabel 'n'", "set ylabel 'lambda'",
                  f"plot '{csv_path}' using 1:2 with points pt 7 title 'lambda_n'"],
    }[command]
    return "\n".join(head + body) + "\n"


# ----------------------------------------------------------------------------- commands

def _endpoint_closed_form(profile, beta, c, n):
    """Closed-form lambda_n at c = 0 or 1 for the Sinus flow, else None."""
    if profile.name != "sinus" or c not in (0.0, 1.0):
        return None
    # both formulas reduce to the regular value where c = U_beta
    return cf.lambda_c0(beta, n) if c == 0.0 else cf.lambda_c1(beta, n)


def _speed_from_args(args, profile):
    chosen = [x for x in (args.c is not None, args.ctilde is not None, args.c_inf, args.c_ubeta) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --c, --ctilde, --c-inf, --c-ubeta")
    if args.c_inf:
        return INFINITY, math.inf
    if args.c_ubeta:
        ub = profile.u_beta(args.beta)
        return Finite(ub), ub
    if args.c is not None:
        return Finite(args.c), args.c
    sp = speed_from_ctilde(args.ctilde)
    c = math.inf if sp is INFINITY else profile.midpoint + 1.0 / args.ctilde
    return sp, c


def cmd_eigen(args, profile, threads):
    if args.nmax < 1:
        raise UsageError("--nmax must be >= 1")
    speed, c = _speed_from_args(args, profile)
    on_regular = (profile.upp_min <= args.beta <= profile.upp_max
                  and math.isfinite(c) and abs(c - profile.u_beta(args.beta)) <= 1e-13)
    ns = range(1, args.nmax + 1)
    closed = None
    if math.isinf(c):
        closed = [cf.lambda_infinity(n) for n in ns] if profile.name == "sinus" else None
    elif on_regular and profile.name == "sinus":
        closed = [cf.lambda_regular(n) for n in ns]
    elif profile.name == "sinus" and c in (0.0, 1.0):
        closed = [_endpoint_closed_form(profile, args.beta, c, n) for n in ns]
        rows = [(n, v, 0.0, v) for n, v in zip(ns, closed)]
        return ["n", "lambda", "est_error", "closed_form"], rows
    sol = solve(SLProblem(profile, args.beta, speed), args.nmax, args.tol)
    if closed is None:
        return (["n", "lambda", "est_error"],
                [(n, v, e) for n, v, e in zip(ns, sol.lambdas, sol.est_errors)])
    return (["n", "lambda", "est_error", "closed_form"],
            [(n, v, e, k) for n, v, e, k in zip(ns, sol.lambdas, sol.est_errors, closed)])


def contour_cell(profile, beta, ct, tol):
    """(c, lambda_1) at one (beta, ctilde) cell; nan inside Ran(U) off U_beta."""
    sinus = profile.name == "sinus"
    if sinus and ct in (-2.0, 2.0):
        c = 0.0 if ct < 0 else 1.0
        return c, _endpoint_closed_form(profile, beta, c, 1)
    if ct == 0:
        if sinus:
            return math.inf, cf.lambda_infinity(1)
        return math.inf, solve(SLProblem(profile, beta, INFINITY), 1, tol).lambdas[0]
    c = profile.midpoint + 1.0 / ct
    try:
        return c, solve(SLProblem(profile, beta, speed_from_ctilde(ct)), 1, tol).lambdas[0]
    except KuoStabError as exc:
        if isinstance(exc, ValueError):
            return c, math.nan
        raise


def cmd_contour(args, profile, threads):
    betas = parse_range(args.beta_range)
    cts = parse_range(args.ctilde_range)
    cells = [(b, t) for b in betas for t in cts]
    res = ordered_map(lambda bt: contour_cell(profile, bt[0], bt[1], args.tol), cells, threads)
    rows = [(b, t, c, lam) for (b, t), (c, lam) in zip(cells, res)]
    return ["beta", "ctilde", "c", "lambda1"], rows


def cmd_boundary(args, profile, threads):
    from .stability.boundary import TABLE1_BETAS, capital_lambda
    if args.table1:
        betas = list(TABLE1_BETAS)
    elif args.beta_range:
        betas = parse_range(args.beta_range)
    else:
        raise UsageError("boundary needs --beta-range or --table1")
    tol = min(args.tol, 1e-9)
    pts = ordered_map(lambda b: capital_lambda(b, tol, profile), betas, threads)
    rows = [(p.beta, p.alpha_lower, p.c_star, p.snm_alpha, p.difference, p.case) for p in pts]
    return ["beta", "sqrt_lambda", "c_star", "snm_alpha", "difference", "case"], rows


def growth_cell(profile, alpha, beta):
    from .stability.dispersion import count_unstable, find_unstable_mode
    if alpha > 0:
        try:
            if count_unstable(alpha, beta, profile) == 0:
                return alpha, beta, math.nan, math.nan, 0
        except ContourAmbiguous:
            return alpha, beta, math.nan, math.nan, "boundary"
    mode = find_unstable_mode(alpha, beta, profile)
    if mode is None:
        return alpha, beta, math.nan, math.nan, 0
    return alpha, beta, mode.c.real, mode.c.imag, 1


def cmd_growthmap(args, profile, threads):
    alphas = parse_range(args.alpha_range)
    betas = parse_range(args.beta_range)
    if any(a < 0 for a in alphas):
        raise UsageError("alpha must be >= 0")
    cells = [(a, b) for a in alphas for b in betas]
    rows = ordered_map(lambda ab: growth_cell(profile, *ab), cells, threads)
    return ["alpha", "beta", "c_re", "c_im", "found"], rows


def cmd_verify(args, stdout):
    from .verify import SUITES, run_suite
    grid = parse_grid(args.grid) if args.grid else None
    names = list(SUITES) if args.suite in (None, "all") else [args.suite]
    if args.suite not in (None, "all") and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    reports = [run_suite(n, grid) for n in names]
    if len(reports) == 1:
        doc = reports[0]
    else:
        details = [dict(d, name=f"{r['suite']}: {d['name']}") for r in reports for d in r["details"]]
        doc = {"suite": "all", "passed": sum(r["passed"] for r in reports),
               "failed": sum(r["failed"] for r in reports), "details": details}
    write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out, stdout)
    return EXIT_OK if doc["failed"] == 0 else EXIT_VERIFY


# ----------------------------------------------------------------------------- driver

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--profile", default="sinus", choices=sorted(PROFILES))
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", default="csv", choices=("csv", "json"))
    common.add_argument("--threads", type=int, default=1, help="0 = one per CPU")
    common.add_argument("--emit-plot", action="store_true",
                        help="also write a gnuplot script next to --out")

    p = _Parser(prog="kuostab", description="Rayleigh-Kuo stability computations")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eigen", parents=[common], help="eigenvalues lambda_n(beta, c)")
    e.add_argument("--beta", type=float, required=True)
    e.add_argument("--c", type=float)
    e.add_argument("--ctilde", type=float)
    e.add_argument("--c-inf", action="store_true")
    e.add_argument("--c-ubeta", action="store_true")
    e.add_argument("--nmax", type=int, default=1)

    c = sub.add_parser("contour", parents=[common], help="lambda_1 over a (beta, ctilde) grid")
    c.add_argument("--beta-range", required=True)
    c.add_argument("--ctilde-range", required=True)

    b = sub.add_parser("boundary", parents=[common], help="stability boundary sqrt(Lambda_beta)")
    b.add_argument("--beta-range")
    b.add_argument("--table1", action="store_true", help="the 14 tabulated beta values")

    g = sub.add_parser("growthmap", parents=[common], help="unstable roots over an (alpha, beta) grid")
    g.add_argument("--alpha-range", required=True)
    g.add_argument("--beta-range", required=True)

    v = sub.add_parser("verify", parents=[common], help="run self-check suites")
    v.add_argument("--suite", default=None)
    v.add_argument("--grid", default=None, help="AxB cells for the grid suites")
    return p


COMMANDS = {"eigen": cmd_eigen, "contour": cmd_contour, "boundary": cmd_boundary,
            "growthmap": cmd_growthmap}


RANGE_FLAGS = ("--beta-range", "--ctilde-range", "--alpha-range")


def _glue_ranges(argv):
    # argparse reads '-2:2:5' as an option; bind range values to their flag
    out, i = [], 0
    while i < len(argv):
        if argv[i] in RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv, stdout):
    args = build_parser().parse_args(_glue_ranges(argv))
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.command == "verify":
        return cmd_verify(args, stdout)
    if args.emit_plot and (args.out is None or args.out == "-"):
        raise UsageError("--emit-plot needs --out")
    threads = thread_count(args.threads)
    profile = get_profile(args.profile)
    columns, rows = COMMANDS[args.command](args, profile, threads)
    write_text(render_table(columns, rows, args.format), args.out, stdout)
    if args.emit_plot:
        base, _ = os.path.splitext(args.out)
        write_text(plot_script(args.command, os.path.basename(args.out)), base + ".gp", stdout)
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return run(sys.argv[1:] if argv is None else list(argv), stdout)
    except UsageError as exc:
        print(f"kuostab: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"kuostab: invalid input: {exc}", file=stderr)
        return EXIT_USAGE
    except (ArithmeticError, KuoStabError) as exc:
        print(f"kuostab: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
