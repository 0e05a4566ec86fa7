"""Command-line front end.

Exit codes: 0 success, 1 verification failure or violated map precondition,
2 usage error. Errors are written to stderr, machine-readable name first.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence, TextIO

from . import oracle, sampling, tables
from .bijections import MarkedPermutation, Mode, phi, phi_inv, psi, psi_inv
from .errors import CombError, RangeError, SizeTooLarge, TooFewSamples
from .perm import parse_cycles, to_permutation

FORMATS = ("text", "csv", "json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default="text")

    parser = _Parser(prog="derangements", description="Exact fixed-point statistics of permutations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", parents=[fmt], help="emit the a- or b-triangle")
    p.add_argument("which", choices=("a", "b"))
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("count", parents=[fmt], help="one exact value")
    p.add_argument("which", choices=("d", "alpha", "beta", "e"))
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("bij", parents=[fmt], help="apply a bijection to cycle notation")
    p.add_argument("which", choices=("phi", "phi-inv", "psi", "psi-inv"))
    p.add_argument("cycles")

    p = sub.add_parser("verify", parents=[fmt], help="brute-force sweep and bijection checks")
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("series", parents=[fmt], help="derangement EGF checks")
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("sample", parents=[fmt], help="Monte Carlo limit estimates")
    p.add_argument("which", choices=("largest", "beta", "poisson"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _table(args, out: TextIO) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    t = tables.a_triangle(args.max_n) if args.which == "a" else tables.b_triangle(args.max_n)
    render = {"csv": t.to_csv, "json": t.to_json, "text": t.to_text}[args.format]
    out.write(render())
    return 0


def _count(args, out: TextIO) -> int:
    n = args.n
    if args.which == "d":
        if n < 0:
            raise UsageError("--n must be non-negative")
        value = tables.derangements_up_to(n)[n]
    elif args.which == "e":
        value = tables.e_count(n)
    else:
        if n < 1:
            raise UsageError("--n must be at least 1")
        if args.which == "alpha":
            value = tables.alpha(n, tables.a_triangle(n))
        else:
            value = tables.beta(n, tables.b_triangle(n))
    if args.format == "json":
        out.write(json.dumps({"quantity": args.which, "n": n, "value": value}) + "\n")
    elif args.format == "csv":
        out.write(f"quantity,n,value\n{args.which},{n},{value}\n")
    else:
        out.write(f"{value}\n")
    return 0


def _bij(args, out: TextIO) -> int:
    if args.which == "phi":
        result = str(phi(to_permutation(parse_cycles(args.cycles))))
    elif args.which == "psi":
        result = str(psi(to_permutation(parse_cycles(args.cycles))))
    elif args.which == "phi-inv":
        result = str(phi_inv(MarkedPermutation.parse(args.cycles, Mode.L)))
    else:
        result = str(psi_inv(MarkedPermutation.parse(args.cycles, Mode.S)))
    if args.format == "json":
        out.write(json.dumps({"map": args.which, "input": args.cycles, "output": result}) + "\n")
    else:
        out.write(result + "\n")
    return 0


def _verify(args, out: TextIO) -> int:
    if not 1 <= args.max_n <= oracle.MAX_ORACLE_SIZE:
        raise UsageError(f"--max-n must be in 1..{oracle.MAX_ORACLE_SIZE}")
    reports = oracle.full_sweep(args.max_n)
    for m in range(2, args.max_n + 1):
        reports += oracle.verify_bijection(m, "phi")
        reports += oracle.verify_bijection(m, "psi")
    failed = [r for r in reports if not r.agrees]
    if args.format == "csv":
        out.write(oracle.reports_to_csv(reports))
    elif args.format == "json":
        rows = [
            {"quantity": r.quantity, "n": r.n, "k": r.k, "brute": r.brute_value,
             "formula": r.formula_value, "agrees": r.agrees}
            for r in reports
        ]
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        for r in failed:
            k = "" if r.k is None else f",{r.k}"
            out.write(f"MISMATCH {r.quantity}({r.n}{k}): brute={r.brute_value} formula={r.formula_value}\n")
        out.write(f"{len(reports) - len(failed)}/{len(reports)} checks agree\n")
    return 1 if failed else 0


def _series(args, out: TextIO) -> int:
    N = args.degree
    if N < 1:
        raise UsageError("--degree must be at least 1")
    d = tables.derangements_up_to(N)
    counts = tables.egf_derangements(N).egf_counts()
    ok = tables.egf_identity_check(N)
    rows = [(n, counts[n], d[n]) for n in range(N + 1)]
    all_match = all(c == v for _, c, v in rows)
    if args.format == "json":
        payload = {
            "degree": N,
            "coefficients": [{"n": n, "n_factorial_c_n": str(c), "d_n": v} for n, c, v in rows],
            "identity_holds": ok,
        }
        out.write(json.dumps(payload, indent=2) + "\n")
    elif args.format == "csv":
        out.write("n,n_factorial_c_n,d_n\n")
        for n, c, v in rows:
            out.write(f"{n},{c},{v}\n")
    else:
        width = len(str(d[N]))
        out.write(f"{'n':>3}  {'n!*c_n':>{width}}  {'d_n':>{width}}\n")
        for n, c, v in rows:
            out.write(f"{n:>3}  {str(c):>{width}}  {v:>{width}}\n")
        out.write(f"identity D(x)*(x e^x - e^x + 1) = D(x) - 1 up to degree {N}: {'true' if ok else 'false'}\n")
    return 0 if ok and all_match else 1


def _sample(args, out: TextIO) -> int:
    rng = sampling.RngSpec(args.seed)
    if args.which == "poisson":
        summary = sampling.poisson_conditioned_max(args.samples, rng)
    else:
        if args.n is None or args.n < 1:
            raise UsageError("--n (at least 1) is required")
        if args.which == "largest":
            summary = sampling.estimate_largest_fp_mean(args.n, args.samples, rng)
        else:
            summary = sampling.estimate_beta_fraction(args.n, args.samples, rng)
    if args.format == "json":
        out.write(summary.to_json())
    elif args.format == "csv":
        z = "" if summary.z_score is None else repr(summary.z_score)
        out.write("samples,mean,std_error,target,z_score\n")
        out.write(f"{summary.samples},{summary.mean!r},{summary.std_error!r},{summary.target!r},{z}\n")
    else:
        out.write(summary.to_text())
    return 0


_COMMANDS = {
    "table": _table,
    "count": _count,
    "bij": _bij,
    "verify": _verify,
    "series": _series,
    "sample": _sample,
}


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write(f"UsageError\n{e}\n")
        return 2
    except (RangeError, SizeTooLarge, TooFewSamples) as e:
        err.write(f"{e.name}\n{e}\n")
        return 2
    except CombError as e:
        err.write(f"{e.name}\n{e}\n")
        return 1
    except ValueError as e:
        err.write(f"UsageError\n{e}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
