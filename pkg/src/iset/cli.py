"""Batch command line surface.

Every command emits machine-readable output with an embedded run
manifest: structured key/value text by default, ``--json-lines`` or
``--csv`` where they make sense. Exact values print as fraction
strings; inexact ones carry an explicit precision field. Exit codes:
0 success, 2 usage error, 3 domain error, 4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from fractions import Fraction

from .bell import (
    DEFAULT_SEED,
    ExperimentConfig,
    Orientation,
    run_chsh_experiment,
)
from .cantor import (
    cantor_distance,
    cantor_encode,
    cantor_membership,
    construct_iterate,
    hausdorff_dimension,
    hausdorff_dimension_bits,
)
from .errors import BudgetError, DomainError, IsetError
from .manifest import RunManifest, write_csv, write_json_line, write_text_block
from .padic import (
    PAdicInteger,
    PAdicRational,
    padic_add,
    padic_distance,
    padic_mul,
    padic_norm,
)
from .trig import (
    PhaseAngle,
    angular_snap_error,
    incompatibility_search,
    is_rational,
    snap_cosine,
    snap_phase,
    third_side,
)

PROG = "iset"


class UsageError(IsetError):
    """Malformed command-line value; maps to exit code 2."""


def parse_ratio(text: str) -> Fraction:
    """Accept '1/3', '0.25' or '3' as an exact rational."""
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise DomainError(f"zero denominator: {text!r}") from exc
    except ValueError as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_range(text: str) -> range:
    """Inclusive integer range written as 'A..B'."""
    parts = text.split("..")
    if len(parts) != 2:
        raise UsageError(f"range must look like 4..12, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise UsageError(f"range bounds must be integers, got {text!r}") from exc
    return range(lo, hi + 1)


@contextlib.contextmanager
def open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def format_padic(x: PAdicRational) -> str:
    if x.is_zero:
        return "0"
    sep = "." if x.prime > 10 else ""
    body = sep.join(str(d) for d in reversed(x.digits))
    return f"{x.prime}^{x.valuation}*({body})_{x.prime}"


def emit_scalar(args, manifest: RunManifest, fields: dict) -> None:
    with open_out(getattr(args, "output", None)) as out:
        if getattr(args, "json_lines", False):
            write_json_line(fields, manifest, out)
        else:
            write_text_block(fields, manifest, out)


# ---------------------------------------------------------------------------
# padic
# ---------------------------------------------------------------------------


def cmd_padic(args) -> int:
    q = [parse_ratio(s) for s in args.operands]
    want = {"norm": 1, "dist": 2, "add": 2, "mul": 2}[args.op]
    if len(q) != want:
        raise UsageError(f"padic {args.op} takes {want} operand(s), got {len(q)}")
    values = [PAdicRational.from_fraction(v, args.p, args.precision) for v in q]
    fields: dict = {"op": args.op, "p": args.p, "K": args.precision}
    fields["operands"] = " ".join(str(v) for v in q)
    if args.op == "norm":
        fields["result"] = padic_norm(values[0]).value
    elif args.op == "dist":
        fields["result"] = padic_distance(values[0], values[1]).value
    else:
        result = (padic_add if args.op == "add" else padic_mul)(values[0], values[1])
        fields["valuation"] = "none" if result.is_zero else result.valuation
        fields["digits_lsb"] = ",".join(str(d) for d in result.digits)
        fields["result"] = format_padic(result)
    manifest = RunManifest.create(f"padic.{args.op}", _manifest_params(fields))
    emit_scalar(args, manifest, fields)
    return 0


def _manifest_params(fields: dict) -> dict:
    return {k: v for k, v in fields.items() if k != "result"}


# ---------------------------------------------------------------------------
# cantor
# ---------------------------------------------------------------------------


def cmd_cantor(args) -> int:
    if args.op == "iterate":
        return _cantor_iterate(args)
    fields: dict = {"op": args.op, "p": args.p}
    if args.op == "encode":
        x = PAdicInteger.from_int(args.value_int, args.p, max(args.depth, 1))
        y = cantor_encode(x)
        fields["preimage"] = args.value_int
        fields["depth"] = args.depth
        fields["address_lsb"] = ",".join(str(d) for d in y.address)
        fields["result"] = y.coordinate
    elif args.op == "member":
        m = cantor_membership(parse_ratio(args.coordinate), args.p, args.depth)
        fields["coordinate"] = args.coordinate
        fields["depth"] = args.depth
        fields["result"] = (
            f"inside_at_depth({m.depth})" if m.inside else f"excluded_at_depth({m.excluded_at})"
        )
    elif args.op == "dist":
        k = max(args.depth, 1)
        y1 = cantor_encode(PAdicInteger.from_int(args.value_int, args.p, k))
        y2 = cantor_encode(PAdicInteger.from_int(args.value_int2, args.p, k))
        fields["preimages"] = f"{args.value_int} {args.value_int2}"
        fields["depth"] = k
        fields["result"] = cantor_distance(y1, y2).value
    elif args.op == "dim":
        d = hausdorff_dimension(args.p, digits=args.digits)
        fields["precision_dps"] = args.digits
        fields[f"dimension_{args.digits}dp"] = str(d)
        if args.bit_form is not None:
            fields["bit_form"] = str(hausdorff_dimension_bits(args.bit_form, args.digits))
        fields["result"] = f"{float(d):.6f}"
    manifest = RunManifest.create(f"cantor.{args.op}", _manifest_params(fields))
    emit_scalar(args, manifest, fields)
    return 0


def _cantor_iterate(args) -> int:
    intervals = construct_iterate(args.p, args.depth, budget=args.budget)
    params = {"op": "iterate", "p": args.p, "depth": args.depth}
    manifest = RunManifest.create("cantor.iterate", params)
    header = ["level", "interval_index", "lo_num", "lo_den", "hi_num", "hi_den"]
    rows = [
        [args.depth, i, lo.numerator, lo.denominator, hi.numerator, hi.denominator]
        for i, (lo, hi) in enumerate(intervals)
    ]
    with open_out(args.output) as out:
        if args.csv:
            write_csv(header, rows, manifest, out)
        elif args.json_lines:
            for i, (lo, hi) in enumerate(intervals):
                write_json_line(
                    {"level": args.depth, "interval_index": i, "lo": lo, "hi": hi},
                    manifest,
                    out,
                )
        else:
            fields = {
                "op": "iterate",
                "p": args.p,
                "depth": args.depth,
                "count": len(intervals),
            }
            for i, (lo, hi) in enumerate(intervals):
                fields[f"interval_{i}"] = f"{lo} .. {hi}"
            write_text_block(fields, manifest, out)
    if args.plot:
        from .plotting import render_cantor

        render_cantor(args.p, args.depth, args.plot, budget=args.budget)
    return 0


# ---------------------------------------------------------------------------
# triangle
# ---------------------------------------------------------------------------


def cmd_triangle(args) -> int:
    if args.op == "search":
        return _triangle_search(args)
    phase = PhaseAngle(parse_ratio(args.phase))
    ca, cb = parse_ratio(args.cosines[0]), parse_ratio(args.cosines[1])
    fields: dict = {
        "op": args.op,
        "cos_ac": ca,
        "cos_bc": cb,
        "phase_fraction": phase.fraction,
    }
    side = third_side(ca, cb, phase)
    value = is_rational(side)
    if args.op == "third":
        fields["r1"] = side.r1
        fields["r2"] = side.r2
        if value is not None:
            fields["result"] = value
        else:
            fields["approx_float"] = side.value_float()
            fields["precision"] = "float64 midpoint of certified enclosure"
            fields["result"] = "irrational"
    else:  # check
        fields["N"] = args.n_level
        from .trig import admissible_third_side

        ok = admissible_third_side(ca, cb, phase, args.n_level)
        fields["value"] = "irrational" if value is None else value
        fields["result"] = "admissible" if ok else "inadmissible"
    manifest = RunManifest.create(f"triangle.{args.op}", _manifest_params(fields))
    emit_scalar(args, manifest, fields)
    return 0


def _triangle_search(args) -> int:
    report = incompatibility_search(
        args.n_level,
        include_upper=args.include_half,
        budget=args.budget,
    )
    params = {
        "op": "search",
        "N": args.n_level,
        "include_half": args.include_half,
        "budget": args.budget,
    }
    manifest = RunManifest.create("triangle.search", params)
    records = report.records()
    header = ["cos_ac", "cos_bc", "phase_fraction", "verdict", "value"]
    rows = [[r.cos_ac, r.cos_bc, r.phase_fraction, r.verdict, r.value] for r in records]
    with open_out(args.output) as out:
        if args.csv:
            write_csv(header, rows, manifest, out)
        elif args.json_lines:
            for r in records:
                write_json_line(
                    {
                        "cos_ac": r.cos_ac,
                        "cos_bc": r.cos_bc,
                        "phase_fraction": r.phase_fraction,
                        "verdict": r.verdict,
                        "value": r.value,
                    },
                    manifest,
                    out,
                )
        else:
            fields = dict(report.summary())
            fields["result"] = (
                f"{len(report.admissible_triples)} admissible non-degenerate triple(s)"
            )
            write_text_block(fields, manifest, out)
    return 0


# ---------------------------------------------------------------------------
# chsh
# ---------------------------------------------------------------------------


def cmd_chsh(args) -> int:
    if args.angles is not None:
        fractions = [parse_ratio(s) for s in args.angles]
        config = ExperimentConfig(
            a1=Orientation(fractions[0]),
            a2=Orientation(fractions[1]),
            b1=Orientation(fractions[2]),
            b2=Orientation(fractions[3]),
            n_level=args.n_level,
            realized_pair=tuple(args.realized),
            snap=not args.no_snap,
            use_is_rule=not args.no_is_rule,
        )
    else:
        config = ExperimentConfig.standard(
            args.n_level,
            realized_pair=tuple(args.realized),
            snap=not args.no_snap,
            use_is_rule=not args.no_is_rule,
        )
    report = run_chsh_experiment(config, n_trials=args.n_trials, seed=args.seed)
    params = {
        "angles": report.angles,
        "N": report.n_level,
        "realized_pair": list(report.realized_pair),
        "is_rule": not args.no_is_rule,
        "snap": not args.no_snap,
        "n_trials": args.n_trials,
    }
    manifest = RunManifest.create("chsh", params, seed=args.seed)
    if args.json_lines:
        with open_out(args.output) as out:
            write_json_line(report.to_dict(), manifest, out)
    else:
        fields: dict = {
            "N": report.n_level,
            **{f"angle_{k}": v for k, v in report.angles.items()},
            "realized_pair": f"a{report.realized_pair[0]}b{report.realized_pair[1]}",
            "A_status": report.a_status.describe(),
            "A_prime_exact": report.a_prime_exact,
            "A_prime_float": float(report.a_prime_exact),
            "violation": str(report.violation).lower(),
            "n_trials": report.n_trials,
            "seed": report.seed,
        }
        for r in report.records:
            fields[f"corr_{r.label}"] = (
                f"exact={r.exact_correlation} estimate={float(r.estimate):.6f} "
                f"stderr={r.standard_error:.2e}"
            )
        if report.a_prime_mc is not None:
            fields["A_prime_mc"] = f"{report.a_prime_mc:.6f}"
            fields["mc_stderr"] = f"{report.mc_stderr:.2e}"
        with open_out(args.output) as out:
            write_text_block(fields, manifest, out)
    if args.records:
        header = [
            "pair",
            "n_trials",
            "sum_products",
            "estimate",
            "exact_correlation",
            "standard_error",
            "alice_plus",
        ]
        rows = [
            [
                r.label,
                r.n_trials,
                r.sum_products,
                r.estimate,
                r.exact_correlation,
                r.standard_error,
                r.alice_plus,
            ]
            for r in report.records
        ]
        with open(args.records, "w", encoding="utf-8") as fh:
            write_csv(header, rows, manifest, fh)
    return 0


# ---------------------------------------------------------------------------
# snap
# ---------------------------------------------------------------------------


def cmd_snap(args) -> int:
    chosen = [v for v in (args.cosine, args.theta, args.phase) if v is not None]
    if len(chosen) != 1:
        raise UsageError("exactly one of --cosine, --theta, --phase is required")
    n = args.n_level
    fields: dict = {"N": n}
    if args.cosine is not None:
        t = parse_ratio(args.cosine)
        d = snap_cosine(t, n)
        fields["op"] = "cosine"
        fields["target"] = t
        fields["error"] = abs(d.value - t)
        fields["result"] = d.value
    elif args.phase is not None:
        t = parse_ratio(args.phase)
        ph = snap_phase(t, n)
        fields["op"] = "phase"
        fields["target"] = t
        fields["error"] = abs(ph.fraction - t)
        fields["result"] = ph.fraction
    else:
        try:
            theta = float(args.theta)
        except ValueError as exc:
            raise UsageError(f"--theta takes a float, got {args.theta!r}") from exc
        if not 0 < theta < math.pi:
            raise DomainError(f"theta must lie in (0, pi), got {theta}")
        c = Fraction(math.cos(theta))
        c = max(min(c, Fraction(1)), Fraction(-1))
        d = snap_cosine(c, n)
        fields["op"] = "theta"
        fields["target_radians"] = theta
        fields["angular_error_radians"] = angular_snap_error(theta, n)
        fields["precision"] = "float64 angles"
        fields["result"] = d.value
    manifest = RunManifest.create("snap", _manifest_params(fields))
    emit_scalar(args, manifest, fields)
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_rows(args) -> tuple[list[str], list[list]]:
    span = parse_range(args.range)
    if args.experiment == "chsh-vs-N":
        header = ["n", "a_prime_exact", "a_prime_float", "gap_to_2sqrt2", "bound"]
        target = 2 * math.sqrt(2)
        rows = []
        for n in span:
            if n < 1:
                raise DomainError(f"chsh-vs-N needs N >= 1, got {n}")
            from .bell import chsh_A_prime

            a_prime = chsh_A_prime(*ExperimentConfig.standard(n).four_pairs(), n)
            rows.append(
                [
                    n,
                    a_prime,
                    float(a_prime),
                    abs(float(a_prime) - target),
                    2.0 ** -(n - 2),
                ]
            )
        return header, rows
    if args.experiment == "dim-vs-p":
        header = ["p", "dimension"]
        return header, [
            [p, f"{float(hausdorff_dimension(p)):.12f}"] for p in span
        ]
    if args.experiment == "snap-error-vs-N":
        header = ["n", "max_angular_error", "bound"]
        thetas = [k * math.pi / (args.grid + 1) for k in range(1, args.grid + 1)]
        rows = []
        for n in span:
            worst = max(angular_snap_error(t, n) for t in thetas)
            rows.append([n, worst, 2 * 2 ** (-(n - 1) / 2)])
        return header, rows
    raise UsageError(f"unknown sweep experiment {args.experiment!r}")


def cmd_sweep(args) -> int:
    header, rows = _sweep_rows(args)
    params = {
        "experiment": args.experiment,
        "range": args.range,
        "grid": args.grid if args.experiment == "snap-error-vs-N" else None,
    }
    manifest = RunManifest.create("sweep", params)
    with open_out(args.output) as out:
        write_csv(header, rows, manifest, out)
    if args.output and not args.no_plot and rows:
        from .plotting import render_sweep

        stem = args.output.rsplit(".", 1)[0] if "." in args.output else args.output
        render_sweep(args.experiment, header, rows, stem + ".png")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_format_flags(p: argparse.ArgumentParser, csv: bool = False) -> None:
    p.add_argument("--json-lines", action="store_true", help="emit JSON lines")
    if csv:
        p.add_argument("--csv", action="store_true", help="emit CSV")
    p.add_argument("-o", "--output", default=None, help="write to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Exact p-adic, Cantor-set and Bell/CHSH calculations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_padic = sub.add_parser("padic", help="p-adic norms, distances and arithmetic")
    p_padic.add_argument("op", choices=["norm", "dist", "add", "mul"])
    p_padic.add_argument("operands", nargs="+", help="rational operands, e.g. 1/3")
    p_padic.add_argument("--p", dest="p", type=int, required=True, help="prime base")
    p_padic.add_argument("--K", dest="precision", type=int, default=32)
    _add_format_flags(p_padic)
    p_padic.set_defaults(func=cmd_padic)

    p_cantor = sub.add_parser("cantor", help="Cantor set construction and metrics")
    cantor_sub = p_cantor.add_subparsers(dest="op", required=True)

    c_it = cantor_sub.add_parser("iterate", help="kept intervals of C_k(p)")
    c_it.add_argument("--p", type=int, required=True)
    c_it.add_argument("--depth", type=int, required=True)
    c_it.add_argument("--budget", type=int, default=None, help="max interval count")
    c_it.add_argument("--plot", default=None, help="render the interval ladder to PNG")
    _add_format_flags(c_it, csv=True)
    c_it.set_defaults(func=cmd_cantor)

    c_en = cantor_sub.add_parser("encode", help="digit map of a p-adic integer")
    c_en.add_argument("value_int", type=int)
    c_en.add_argument("--p", type=int, required=True)
    c_en.add_argument("--depth", type=int, required=True, help="digits to retain")
    _add_format_flags(c_en)
    c_en.set_defaults(func=cmd_cantor)

    c_me = cantor_sub.add_parser("member", help="membership of a rational coordinate")
    c_me.add_argument("coordinate")
    c_me.add_argument("--p", type=int, required=True)
    c_me.add_argument("--depth", type=int, required=True)
    _add_format_flags(c_me)
    c_me.set_defaults(func=cmd_cantor)

    c_di = cantor_sub.add_parser("dist", help="invariant-set distance of two preimages")
    c_di.add_argument("value_int", type=int)
    c_di.add_argument("value_int2", type=int)
    c_di.add_argument("--p", type=int, required=True)
    c_di.add_argument("--depth", type=int, default=32, help="digits to compare")
    _add_format_flags(c_di)
    c_di.set_defaults(func=cmd_cantor)

    c_dm = cantor_sub.add_parser("dim", help="Hausdorff dimension of C(p)")
    c_dm.add_argument("--p", type=int, required=True)
    c_dm.add_argument("--digits", type=int, default=30, help="decimal precision")
    c_dm.add_argument(
        "--bit-form",
        type=int,
        default=None,
        help="also report the N-bit form log(2^N)/log(2^(N+1)-1)",
    )
    _add_format_flags(c_dm)
    c_dm.set_defaults(func=cmd_cantor)

    p_tri = sub.add_parser("triangle", help="cosine rule admissibility tools")
    tri_sub = p_tri.add_subparsers(dest="op", required=True)

    t_th = tri_sub.add_parser("third", help="third side from two cosines and a phase")
    t_th.add_argument("cosines", nargs=2)
    t_th.add_argument("--phase", required=True, help="phase as a fraction of pi")
    _add_format_flags(t_th)
    t_th.set_defaults(func=cmd_triangle)

    t_ch = tri_sub.add_parser("check", help="is the triple admissible at level N")
    t_ch.add_argument("cosines", nargs=2)
    t_ch.add_argument("--phase", required=True)
    t_ch.add_argument("--N", dest="n_level", type=int, required=True)
    _add_format_flags(t_ch)
    t_ch.set_defaults(func=cmd_triangle)

    t_se = tri_sub.add_parser("search", help="exhaustive level-N triple search")
    t_se.add_argument("--N", dest="n_level", type=int, required=True)
    t_se.add_argument(
        "--include-half",
        action="store_true",
        help="include the phase fraction 1/2 endpoint",
    )
    t_se.add_argument("--budget", type=int, default=None)
    _add_format_flags(t_se, csv=True)
    t_se.set_defaults(func=cmd_triangle)

    p_chsh = sub.add_parser("chsh", help="CHSH A vs A' evaluation")
    geo = p_chsh.add_mutually_exclusive_group()
    geo.add_argument(
        "--standard", action="store_true", help="quantum-optimal geometry (default)"
    )
    geo.add_argument(
        "--angles",
        nargs=4,
        default=None,
        metavar=("A1", "A2", "B1", "B2"),
        help="orientation fractions of pi",
    )
    p_chsh.add_argument("--N", dest="n_level", type=int, default=10)
    p_chsh.add_argument("--n", dest="n_trials", type=int, default=0)
    p_chsh.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_chsh.add_argument(
        "--realized", nargs=2, type=int, default=[1, 1], metavar=("I", "J")
    )
    p_chsh.add_argument("--no-is-rule", action="store_true")
    p_chsh.add_argument("--no-snap", action="store_true")
    p_chsh.add_argument("--records", default=None, help="write correlation CSV here")
    _add_format_flags(p_chsh)
    p_chsh.set_defaults(func=cmd_chsh)

    p_snap = sub.add_parser("snap", help="nearest admissible value at level N")
    p_snap.add_argument("--cosine", default=None)
    p_snap.add_argument("--theta", default=None, help="angle in radians")
    p_snap.add_argument("--phase", default=None, help="phase fraction of pi")
    p_snap.add_argument("--N", dest="n_level", type=int, required=True)
    _add_format_flags(p_snap)
    p_snap.set_defaults(func=cmd_snap)

    p_sweep = sub.add_parser("sweep", help="parameter sweeps to CSV (+ figure)")
    p_sweep.add_argument(
        "experiment", choices=["chsh-vs-N", "dim-vs-p", "snap-error-vs-N"]
    )
    p_sweep.add_argument("range", help="inclusive integer range, e.g. 4..12")
    p_sweep.add_argument("--grid", type=int, default=10000, help="theta grid points")
    p_sweep.add_argument(
        "--no-plot", action="store_true", help="skip the companion figure"
    )
    p_sweep.add_argument("-o", "--output", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{PROG}: usage error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"{PROG}: budget exceeded: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"{PROG}: domain error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
