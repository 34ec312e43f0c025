"""Command-line front end: ``ultradyn <verb> --p P --ell L [...]``.

Exit status: 0 ok, 2 usage error, 3 domain error, 4 internal inconsistency
(including a failing selftest).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import checks
from .errors import DomainError, EmptyGrid, InternalInconsistency
from .julia import band_index, julia_classify, limit_log_radius, radii_sequence
from .newton import difference_points, lower_hull, predicted_polygon, root_valuation_multiset
from .reduction import cutoffs, fixed_point_valuation
from .tower import Mode, RootPointSpec, classify_extension, is_wildly_ramified, tower_trace
from .valcore import INF, ExtRat, decompose

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 2, 3, 4

SWEEP_COLUMNS = ("vc", "nu_infty", "nu_good", "julia_verdict", "rho_limit", "extension_verdict")


@dataclass
class Output:
    """One verb's result: a JSON object plus a flat table for csv/table output."""

    obj: dict
    columns: tuple
    rows: list
    summary: list = field(default_factory=list)   # (key, value) lines shown above a table
    status: int = EXIT_OK


# -- argument types ---------------------------------------------------------------

def ext_rat(text: str) -> ExtRat:
    try:
        return ExtRat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def grid_spec(text: str) -> tuple:
    """``start:stop:count`` with rational endpoints; ``count`` evenly spaced values, inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}")
    start, stop = ext_rat(parts[0]), ext_rat(parts[1])
    if not (start.is_finite and stop.is_finite):
        raise argparse.ArgumentTypeError("grid endpoints must be finite")
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 0:
        raise argparse.ArgumentTypeError("grid count must be nonnegative")
    return start.to_fraction(), stop.to_fraction(), count


def expand_grid(spec: tuple) -> list:
    start, stop, count = spec
    if count == 0:
        raise EmptyGrid("grid has no points")
    values = checks.linspace(start, stop, count)
    return [ExtRat(v) for v in sorted(set(values))]


# -- verbs --------------------------------------------------------------------------

def _params(args):
    return decompose(args.p, args.ell)


def _params_json(params) -> dict:
    return {"p": params.p, "ell": params.ell, "N": params.bigN, "k": params.k}


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.verb} requires {', '.join(missing)}")


class UsageError(Exception):
    pass


def cmd_cutoffs(args) -> Output:
    params = _params(args)
    cut = cutoffs(params)
    obj = {"params": _params_json(params), **cut.to_json()}
    row = [params.p, params.ell, params.bigN, params.k, str(cut.nu_infty), str(cut.nu_good)]
    return Output(obj, ("p", "ell", "N", "k", "nu_infty", "nu_good"), [row])


def cmd_polygon(args) -> Output:
    _require(args, "vy", "vd")
    params = _params(args)
    hull = lower_hull(difference_points(params, args.vy, args.vd))
    pred = predicted_polygon(params, args.vy, args.vd)
    agree = (tuple(hull.vertex_xs) == tuple(pred.vertex_xs)
             and hull.first_slope == pred.m1 and hull.last_slope == pred.m_ell)
    if not agree:
        raise InternalInconsistency(
            f"hull {hull.to_json()} disagrees with closed form {pred.to_json()}"
        )
    obj = {
        "params": _params_json(params),
        "v_y": str(args.vy),
        "v_d": str(args.vd),
        **hull.to_json(),
        "predicted": pred.to_json(),
        "root_valuations": [
            {"valuation": str(v), "multiplicity": m} for v, m in root_valuation_multiset(hull)
        ],
    }
    rows = []
    for ((x0, y0), (x1, y1)), (slope, width) in zip(zip(hull.vertices, hull.vertices[1:]),
                                                    hull.segments):
        rows.append([x0, str(y0), x1, str(y1), str(slope), width, str(-slope)])
    columns = ("x0", "y0", "x1", "y1", "slope", "width", "root_valuation")
    summary = [("vertices", " ".join(str(x) for x in hull.vertex_xs)), ("n0", str(pred.n0))]
    return Output(obj, columns, rows, summary)


def cmd_radii(args) -> Output:
    _require(args, "vc")
    params = _params(args)
    trace = radii_sequence(params, args.vc, args.steps)
    obj = {"params": _params_json(params), **trace.to_json()}
    rows = [[m, str(r)] for m, r in enumerate(trace.rho_seq)]
    summary = [("rho_limit", str(trace.rho_limit)), ("band_n", str(trace.band_n))]
    return Output(obj, ("m", "rho"), rows, summary)


def _rho_limit_text(params, v_c) -> str:
    # good reduction: the Julia set is the Gauss point, the unit disk (log-radius 0)
    if band_index(params, v_c) is None:
        return "0"
    return str(limit_log_radius(params, v_c))


def cmd_julia(args) -> Output:
    _require(args, "vc")
    params = _params(args)
    verdict = julia_classify(params, args.vc)
    band = band_index(params, args.vc)
    rho = _rho_limit_text(params, args.vc)
    obj = {"params": _params_json(params), "v_c": str(args.vc), "verdict": str(verdict),
           "band_n": band, "rho_limit": rho}
    return Output(obj, ("vc", "verdict", "band_n", "rho_limit"),
                  [[str(args.vc), str(verdict), "" if band is None else band, rho]])


def _root(args, v_c, params) -> Optional[RootPointSpec]:
    if args.valpha is not None:
        return RootPointSpec(args.valpha, args.valphab)
    if args.valphab is not None:
        v_b = fixed_point_valuation(params, v_c)
        return RootPointSpec(min(args.valphab, v_b), args.valphab)
    return None


def cmd_tower(args) -> Output:
    _require(args, "vc")
    params = _params(args)
    root = _root(args, args.vc, params)
    if root is None:
        root = RootPointSpec(fixed_point_valuation(params, args.vc), INF)   # alpha = b
    trace = tower_trace(params, args.vc, root, args.mode, args.steps)
    try:
        verdict = classify_extension(params, args.vc, root)
    except DomainError:
        verdict = None
    obj = {"params": _params_json(params), "v_c": str(args.vc), **trace.to_json(verdict)}
    lag = trace.lag
    rows = [[n, str(trace.v_alpha_seq[n + lag]), str(d), den]
            for n, (d, den) in enumerate(zip(trace.v_d_seq, trace.den_p_val_seq))]
    summary = [("mode", str(trace.mode)), ("ambiguous", str(trace.ambiguous).lower()),
               ("verdict", "none" if verdict is None else str(verdict.kind))]
    if len(trace.v_d_seq) >= 3:
        summary.append(("wildly_ramified", str(is_wildly_ramified(trace)).lower()))
    return Output(obj, ("n", "v_alpha", "v_d", "den_p_val"), rows, summary)


def cmd_classify(args) -> Output:
    _require(args, "vc")
    params = _params(args)
    verdict = classify_extension(params, args.vc, _root(args, args.vc, params))
    obj = {"params": _params_json(params), "v_c": str(args.vc), **verdict.to_json()}
    return Output(obj, ("vc", "kind", "reason"), [[str(args.vc), str(verdict.kind), verdict.reason]])


def _sweep_root(args, params, v_c) -> RootPointSpec:
    root = _root(args, v_c, params)
    if root is None:
        # no root point given: take alpha = b, so v(alpha - b) = +inf
        return RootPointSpec(fixed_point_valuation(params, v_c), INF)
    return root


def cmd_sweep(args) -> Output:
    if args.grid is None:
        raise UsageError("sweep requires --grid start:stop:count")
    params = _params(args)
    cut = cutoffs(params)
    rows, status = [], EXIT_OK
    for v_c in expand_grid(args.grid):
        verdict = julia_classify(params, v_c)
        try:
            ext = str(classify_extension(params, v_c, _sweep_root(args, params, v_c)).kind)
        except DomainError as exc:
            ext, status = type(exc).__name__, EXIT_DOMAIN
        rows.append([str(v_c), str(cut.nu_infty), str(cut.nu_good), str(verdict),
                     _rho_limit_text(params, v_c), ext])
    obj = {"params": _params_json(params), "columns": list(SWEEP_COLUMNS),
           "rows": [dict(zip(SWEEP_COLUMNS, r)) for r in rows]}
    return Output(obj, SWEEP_COLUMNS, rows, status=status)


def cmd_selftest(args) -> Output:
    started = time.perf_counter()
    results = checks.run_suites(args.depth, fault=args.inject_fault)
    elapsed = time.perf_counter() - started
    ok = all(r.ok for r in results)
    obj = {
        "depth": args.depth,
        "fault": args.inject_fault,
        "passed": ok,
        "suites": [
            {"name": r.name, "cases": r.cases, "failures": r.n_failed,
             "counterexamples": [repr(c) for c in r.failures]}
            for r in results
        ],
    }
    rows = [[r.name, "PASS" if r.ok else "FAIL", r.cases, r.n_failed] for r in results]
    summary = [("depth", args.depth), ("fault", args.inject_fault or "none"),
               ("elapsed_s", f"{elapsed:.1f}")]
    for r in results:
        for c in r.failures:
            summary.append((f"counterexample {r.name}", repr(c)))
    return Output(obj, ("suite", "status", "cases", "failures"), rows, summary,
                  EXIT_OK if ok else EXIT_INTERNAL)


VERBS = {
    "cutoffs": (cmd_cutoffs, "cutoffs nu_infty and nu_good"),
    "polygon": (cmd_polygon, "Newton polygon of (z+y)^ell - y^ell - d"),
    "radii": (cmd_radii, "log-radii of the nested disks U_m around 0"),
    "julia": (cmd_julia, "shape of the Berkovich Julia set"),
    "tower": (cmd_tower, "valuation trace of the preimage tower"),
    "classify": (cmd_classify, "finite / finitely ramified / wildly ramified"),
    "sweep": (cmd_sweep, "regime table over a grid of v(c)"),
    "selftest": (cmd_selftest, "run the oracle-equivalence property suites"),
}


# -- rendering --------------------------------------------------------------------

def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.obj, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.columns)
        writer.writerows(out.rows)
        return buf.getvalue()
    lines = [f"{key}: {value}" for key, value in out.summary]
    table = [list(map(str, out.columns))] + [[str(c) for c in row] for row in out.rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(out.columns))]
    for row in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


# -- parser -------------------------------------------------------------------------

VALUE_FLAGS = ("--p", "--ell", "--vc", "--vy", "--vd", "--valpha", "--valphab", "--steps",
               "--mode", "--format", "--grid", "--out", "--depth", "--inject-fault")


def _glue_values(argv: list) -> list:
    """Attach values like ``-3/8`` or ``-5:1:13`` to their flag so argparse does not read them as options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultradyn",
        description="Exact valuation-level dynamics of z^ell - c over p-adic fields.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--out", help="write output to this file instead of stdout")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--p", type=int, required=True, help="residue characteristic (prime)")
    params.add_argument("--ell", type=int, required=True, help="degree ell >= 2")
    params.add_argument("--vc", type=ext_rat, help="v(c)")
    params.add_argument("--vy", type=ext_rat, help="v(y) for polygon")
    params.add_argument("--vd", type=ext_rat, help="v(d) for polygon; inf means d = 0")
    params.add_argument("--valpha", type=ext_rat, help="v(alpha) of the root point")
    params.add_argument("--valphab", type=ext_rat, help="v(alpha - b) for a fixed point b")
    params.add_argument("--steps", type=positive_int, default=None,
                        help="number of steps (radii default 10, tower default 40)")
    params.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.HYBRID.value)
    params.add_argument("--grid", type=grid_spec, help="start:stop:count, inclusive")

    for name, (_, help_text) in VERBS.items():
        parents = [common] if name == "selftest" else [common, params]
        sp = sub.add_parser(name, parents=parents, help=help_text, description=help_text)
        if name == "selftest":
            sp.add_argument("--depth", choices=("quick", "full"), default="quick")
            sp.add_argument("--inject-fault", choices=checks.FAULTS, default=None,
                            help="deliberately break the closed-form polygon")
    return parser


def run(argv: list) -> tuple:
    """Parse and execute; returns ``(exit_status, text, error_message)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(list(argv)))
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), "", None
    if args.verb != "selftest" and args.steps is None:
        args.steps = 10 if args.verb == "radii" else 40
    handler = VERBS[args.verb][0]
    try:
        out = handler(args)
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}"
    except InternalInconsistency as exc:
        return EXIT_INTERNAL, "", f"internal inconsistency: {exc}"
    except DomainError as exc:
        return EXIT_DOMAIN, "", f"domain error ({type(exc).__name__}): {exc}"
    text = render(out, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        text = ""
    message = None
    if out.status == EXIT_DOMAIN:
        message = "domain error: some rows could not be classified (see extension_verdict)"
    elif out.status == EXIT_INTERNAL:
        message = "selftest failed"
    return out.status, text, message


def main(argv: Optional[list] = None) -> int:
    status, text, message = run(sys.argv[1:] if argv is None else argv)
    if text:
        sys.stdout.write(text)
    if message:
        print(f"ultradyn: {message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
