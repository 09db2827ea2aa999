"""Command-line surface for the three routes and the Eisenstein fit.

Subcommands: ``integral`` (coefficient or q-series of one graph),
``invariant`` (assembled descendant invariants by either route, with
``--compare`` cross-checking them), ``fock`` (operator-route values and
sweeps), ``fit`` (match a q-series against Q[E2, E4, E6]).

Exit codes: 0 success, 2 parse error, 3 validation error, 4 route
mismatch, 5 fit failure.  All rationals are printed as "num/den"
strings; JSON output is byte-deterministic for a given query regardless
of thread count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from . import __version__
from .covers import cover_count, descendant_contribution, invariant_series
from .fock import (
    double_hurwitz,
    elliptic_hurwitz_disconnected,
    fock_cover_count,
)
from .graphs import (
    FeynmanGraph,
    all_orders,
    automorphism_count,
    enumerate_labeled_graphs,
    graph_from_json_dict,
    identity_order,
    validate_assignment,
)
from .integrals import (
    integral_series_q,
    integral_series_all_orders,
    multidegrees,
    refined_coeff,
)
from .quasimodular import fit as quasimodular_fit
from .quasimodular import monomial_weight

PARSE_ERROR = 2
VALIDATION_ERROR = 3
MISMATCH_ERROR = 4
FIT_ERROR = 5


class CliError(Exception):
    def __init__(self, exit_code: int, message: str) -> None:
        super().__init__(message)
        self.exit_code = exit_code


# -- small parsers -------------------------------------------------------


def _format_rational(value: Any) -> str:
    f = Fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(PARSE_ERROR, f"not a rational number: {text!r}") from exc


def _parse_int_vector(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise CliError(PARSE_ERROR, f"{what} must be comma-separated integers") from exc


def _parse_orders(text: str, n: int) -> list[tuple[int, ...]]:
    if text == "id":
        return [identity_order(n)]
    if text == "all":
        return list(all_orders(n))
    order = _parse_int_vector(text, "order")
    if sorted(order) != list(range(1, n + 1)):
        raise CliError(
            VALIDATION_ERROR, f"order must be a permutation of 1..{n}, got {text!r}"
        )
    return [order]


def _load_graph(path: str) -> tuple[FeynmanGraph, tuple[int, ...] | None, list[int] | None]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CliError(PARSE_ERROR, f"cannot read graph file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(PARSE_ERROR, f"graph file is not valid JSON: {exc}") from exc
    try:
        graph, gf, relabeling = graph_from_json_dict(data)
    except ValueError as exc:
        raise CliError(PARSE_ERROR, f"bad graph file: {exc}") from exc
    if relabeling is not None:
        print(
            "warning: loop edges moved to the front; per-edge data (--a) "
            f"follows the new order, original positions {relabeling}",
            file=sys.stderr,
        )
    return graph, gf, relabeling


def _thread_count(args: argparse.Namespace) -> int:
    env = os.environ.get("TROFEY_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise CliError(PARSE_ERROR, "TROFEY_THREADS must be an integer") from exc
    return max(1, args.threads)


def _run_tasks(tasks: Sequence[Callable[[], Any]], threads: int) -> list[Any]:
    """Run independent tasks, returning results in task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


# -- output --------------------------------------------------------------


def _report(
    query: dict[str, Any],
    results: list[dict[str, Any]],
    *,
    edge_relabeling: list[int] | None = None,
    extra_meta: dict[str, Any] | None = None,
) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "version": __version__,
        "edge_relabeling": edge_relabeling,
    }
    if extra_meta:
        meta.update(extra_meta)
    return {"query": query, "results": results, "meta": meta}


def _emit(report: dict[str, Any], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    results = report["results"]
    if fmt == "csv":
        keys = sorted({key for row in results for key in row["labels"]})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(keys + ["value"])
        for row in results:
            writer.writerow([str(row["labels"].get(k, "")) for k in keys] + [row["value"]])
        sys.stdout.write(buffer.getvalue())
        return
    # plain: one value per line, labels prefixed when there are several rows
    for row in results:
        labels = row["labels"]
        if len(results) == 1 and not row.get("force_labels"):
            sys.stdout.write(f"{row['value']}\n")
        else:
            prefix = " ".join(f"{k}={labels[k]}" for k in sorted(labels))
            sys.stdout.write(f"{prefix} {row['value']}\n".lstrip())


# -- integral ------------------------------------------------------------


def cmd_integral(args: argparse.Namespace) -> int:
    graph, file_gf, relabeling = _load_graph(args.graph)
    gf = _parse_int_vector(args.gf, "--gf") if args.gf else file_gf
    orders = _parse_orders(args.order, graph.n)
    if args.k:
        k = _parse_int_vector(args.k, "--k")
        reasons = validate_assignment(graph, gf if gf else (0,) * graph.n, k)
        if reasons:
            raise CliError(VALIDATION_ERROR, "; ".join(reasons))
    leaks = _parse_int_vector(args.l, "--l") if args.l else None
    if args.a is None and args.q_order is None:
        raise CliError(PARSE_ERROR, "need --a or --q-order")

    query = {
        "command": "integral",
        "graph": args.graph,
        "gf": list(gf) if gf else None,
        "order": args.order,
        "a": args.a,
        "l": args.l,
        "q_order": args.q_order,
    }
    results: list[dict[str, Any]] = []
    try:
        if args.a is not None:
            a = _parse_int_vector(args.a, "--a")
            total: Any = 0
            for order in orders:
                total += refined_coeff(graph, order, a, l=leaks, gf=gf)
            results.append(
                {"labels": {"order": args.order, "a": args.a}, "value": _format_rational(total)}
            )
        else:
            if leaks is not None:
                raise CliError(VALIDATION_ERROR, "leaks only combine with --a")
            if args.order == "all":
                series = integral_series_all_orders(graph, gf, args.q_order)
            else:
                series = {}
                for order in orders:
                    for d, c in integral_series_q(graph, gf, order, args.q_order).items():
                        series[d] = series.get(d, 0) + c
            for d in range(args.q_order + 1):
                results.append(
                    {
                        "labels": {"order": args.order, "d": d},
                        "value": _format_rational(series.get(d, 0)),
                        "force_labels": True,
                    }
                )
    except ValueError as exc:
        raise CliError(VALIDATION_ERROR, str(exc)) from exc
    report = _report(query, results, edge_relabeling=relabeling)
    _strip_private(report)
    _emit(report, args.format)
    return 0


def _strip_private(report: dict[str, Any]) -> None:
    for row in report["results"]:
        row.pop("force_labels", None)


# -- invariant -----------------------------------------------------------


def _compare_tasks(
    k: tuple[int, ...], dmax: int
) -> list[Callable[[], tuple[dict[int, Fraction], tuple | None]]]:
    tasks = []
    for assignment in enumerate_labeled_graphs(k):
        graph, gf = assignment.graph, assignment.gf
        aut = automorphism_count(graph, gf, "vertex_labeled")
        for order in all_orders(graph.n):

            def task(graph=graph, gf=gf, order=order, aut=aut):
                part: dict[int, Fraction] = {}
                for a in multidegrees(graph, [dmax] * graph.num_edges, dmax):
                    covers_value = descendant_contribution(graph, gf, order, a, k)
                    integral_value = refined_coeff(graph, order, a, gf=gf)
                    if covers_value != integral_value:
                        witness = (graph.edges, gf, order, a, covers_value, integral_value)
                        return part, witness
                    if covers_value != 0:
                        d = sum(a)
                        part[d] = part.get(d, Fraction(0)) + Fraction(covers_value, aut)
                return part, None

            tasks.append(task)
    return tasks


def cmd_invariant(args: argparse.Namespace) -> int:
    k = _parse_int_vector(args.k, "--k")
    if args.dmax < 1:
        raise CliError(VALIDATION_ERROR, "--dmax must be >= 1")
    query = {
        "command": "invariant",
        "k": list(k),
        "dmax": args.dmax,
        "route": "compare" if args.compare else args.route,
    }
    try:
        if args.compare:
            tasks = _compare_tasks(k, args.dmax)
            totals: dict[int, Fraction] = {}
            for part, witness in _run_tasks(tasks, _thread_count(args)):
                for d, c in part.items():
                    totals[d] = totals.get(d, Fraction(0)) + c
                if witness is not None:
                    edges, gf, order, a, cv, iv = witness
                    print(
                        "route mismatch: edges=%s gf=%s order=%s a=%s covers=%s integral=%s"
                        % (edges, gf, order, a, _format_rational(cv), _format_rational(iv)),
                        file=sys.stderr,
                    )
                    return MISMATCH_ERROR
            series = {d: totals.get(d, Fraction(0)) for d in range(1, args.dmax + 1)}
        elif args.route == "integrals":
            from .integrals import mirror_total_series

            series = mirror_total_series(k, args.dmax)
        else:
            series = invariant_series(k, args.dmax)
    except ValueError as exc:
        raise CliError(VALIDATION_ERROR, str(exc)) from exc
    results = [
        {
            "labels": {"d": d},
            "value": _format_rational(series.get(d, 0)),
            "force_labels": True,
        }
        for d in range(1, args.dmax + 1)
    ]
    report = _report(query, results)
    _strip_private(report)
    _emit(report, args.format)
    return 0


# -- fock ----------------------------------------------------------------


def cmd_fock(args: argparse.Namespace) -> int:
    try:
        if args.fock_command == "double":
            mu = _parse_int_vector(args.mu, "--mu")
            nu = _parse_int_vector(args.nu, "--nu")
            value = double_hurwitz(mu, nu, args.n)
            query = {"command": "fock double", "mu": list(mu), "nu": list(nu), "n": args.n}
            results = [
                {
                    "labels": {"mu": args.mu, "nu": args.nu, "n": args.n},
                    "value": _format_rational(value),
                }
            ]
            _emit(_report(query, results), args.format)
            return 0
        if args.fock_command == "elliptic":
            value = elliptic_hurwitz_disconnected(args.g, 2 * args.g - 2, args.d)
            query = {"command": "fock elliptic", "g": args.g, "d": args.d}
            results = [
                {"labels": {"g": args.g, "d": args.d}, "value": _format_rational(value)}
            ]
            _emit(_report(query, results), args.format)
            return 0
        # fock check
        graph, _, relabeling = _load_graph(args.graph)
        orders = list(all_orders(graph.n))
        amax = args.amax

        def task(order):
            checked = 0
            for a in multidegrees(graph, [amax] * graph.num_edges, amax):
                lhs = fock_cover_count(graph, order, a)
                rhs = cover_count(graph, order, a)
                if lhs != rhs:
                    return checked, (order, a, lhs, rhs)
                checked += 1
            return checked, None

        tasks = [lambda order=order: task(order) for order in orders]
        total_checked = 0
        for checked, witness in _run_tasks(tasks, _thread_count(args)):
            total_checked += checked
            if witness is not None:
                order, a, lhs, rhs = witness
                print(
                    "operator/cover mismatch: order=%s a=%s fock=%s covers=%s"
                    % (order, a, _format_rational(lhs), _format_rational(rhs)),
                    file=sys.stderr,
                )
                return MISMATCH_ERROR
        query = {"command": "fock check", "graph": args.graph, "amax": amax}
        results = [
            {"labels": {"instances": total_checked}, "value": _format_rational(total_checked)}
        ]
        _emit(_report(query, results, edge_relabeling=relabeling), args.format)
        return 0
    except ValueError as exc:
        raise CliError(VALIDATION_ERROR, str(exc)) from exc


# -- fit -----------------------------------------------------------------


def _series_from_json(path: str) -> dict[int, Fraction]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CliError(PARSE_ERROR, f"cannot read series file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(PARSE_ERROR, f"series file is not valid JSON: {exc}") from exc
    try:
        rows = data["results"]
        series: dict[int, Fraction] = {}
        for row in rows:
            if "d" not in row["labels"]:
                raise KeyError("d")
            series[int(row["labels"]["d"])] = _parse_rational(row["value"])
    except (KeyError, TypeError) as exc:
        raise CliError(
            PARSE_ERROR,
            "series file must be a prior integral/invariant JSON output with d-labeled rows",
        ) from exc
    return series


def cmd_fit(args: argparse.Namespace) -> int:
    if (args.coeffs is None) == (args.series is None):
        raise CliError(PARSE_ERROR, "need exactly one of --coeffs or --from")
    if args.coeffs is not None:
        values = [_parse_rational(part) for part in args.coeffs.split(",")]
        series = {d: c for d, c in enumerate(values)}
        known_order = None  # a finite polynomial: exact at every order
    else:
        series = _series_from_json(args.series)
        known_order = max(series) if series else 0

    from .quasimodular import OVERDETERMINATION_MARGIN, basis

    n_basis = len(basis(args.max_weight, 0))
    q_order = args.q_order
    if q_order is None:
        q_order = known_order if known_order is not None else n_basis + OVERDETERMINATION_MARGIN
    try:
        result = quasimodular_fit(series, args.max_weight, q_order)
    except ValueError as exc:
        raise CliError(FIT_ERROR, str(exc)) from exc
    if not result.residual_ok:
        raise CliError(
            FIT_ERROR,
            f"no polynomial of weight <= {args.max_weight} matches the series "
            f"through q^{q_order}",
        )
    query = {
        "command": "fit",
        "max_weight": args.max_weight,
        "q_order": q_order,
        "source": args.series or "inline",
    }
    rows = []
    ordered = sorted(
        result.coefficients.items(),
        key=lambda kv: (monomial_weight(kv[0]), -kv[0][0], -kv[0][1]),
    )
    for (a, b, c), value in ordered:
        name = "*".join(
            f"{nm}^{e}" if e > 1 else nm
            for nm, e in (("E2", a), ("E4", b), ("E6", c))
            if e > 0
        ) or "1"
        rows.append({"labels": {"monomial": name}, "value": _format_rational(value)})
    extra = {
        "weight_profile": sorted(result.weight_profile),
        "homogeneous": result.is_homogeneous,
        "polynomial": result.format_polynomial(),
    }
    report = _report(query, rows, extra_meta=extra)
    if args.format == "plain":
        flag = "homogeneous" if result.is_homogeneous else "mixed"
        profile = ",".join(str(w) for w in sorted(result.weight_profile))
        sys.stdout.write(f"{result.format_polynomial()}\n")
        sys.stdout.write(f"weights {{{profile}}} {flag}\n")
        return 0
    _emit(report, args.format)
    return 0


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trofey",
        description="Exact tropical descendant invariants of the elliptic curve",
    )
    parser.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    parser.add_argument("--threads", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("integral", help="coefficients of one graph's edge-factor product")
    p_int.add_argument("--graph", required=True, help="graph JSON file")
    p_int.add_argument("--k", help="descendant vector (validates against --gf)")
    p_int.add_argument("--gf", help="genus per vertex; omit for the undressed integral")
    p_int.add_argument("--order", default="id", help='"id", "all", or a permutation like 2,1,3')
    p_int.add_argument("--a", help="one multidegree, e.g. 0,0,3")
    p_int.add_argument("--l", help="leak vector (with --a only)")
    p_int.add_argument("--q-order", dest="q_order", type=int, help="emit the q-series instead")
    p_int.set_defaults(func=cmd_integral)

    p_inv = sub.add_parser("invariant", help="assembled descendant invariants")
    p_inv.add_argument("--k", required=True)
    p_inv.add_argument("--dmax", type=int, required=True)
    p_inv.add_argument("--route", choices=("covers", "integrals"), default="covers")
    p_inv.add_argument(
        "--compare", action="store_true", help="run both routes, exit 4 on any mismatch"
    )
    p_inv.set_defaults(func=cmd_invariant)

    p_fock = sub.add_parser("fock", help="operator-route values and checks")
    fock_sub = p_fock.add_subparsers(dest="fock_command", required=True)
    p_double = fock_sub.add_parser("double", help="double Hurwitz number")
    p_double.add_argument("--mu", required=True)
    p_double.add_argument("--nu", required=True)
    p_double.add_argument("--n", type=int, required=True)
    p_elliptic = fock_sub.add_parser("elliptic", help="disconnected elliptic Hurwitz number")
    p_elliptic.add_argument("--g", type=int, required=True)
    p_elliptic.add_argument("--d", type=int, required=True)
    p_check = fock_sub.add_parser("check", help="operator route vs cover route sweep")
    p_check.add_argument("--graph", required=True)
    p_check.add_argument("--amax", type=int, required=True)
    for p in (p_double, p_elliptic, p_check):
        p.set_defaults(func=cmd_fock)

    p_fit = sub.add_parser("fit", help="match a q-series against Q[E2,E4,E6]")
    p_fit.add_argument("--from", dest="series", help="prior JSON output with d-labeled rows")
    p_fit.add_argument("--coeffs", help="inline polynomial coefficients from q^0, e.g. 1,0,240")
    p_fit.add_argument("--max-weight", dest="max_weight", type=int, required=True)
    p_fit.add_argument("--q-order", dest="q_order", type=int)
    p_fit.set_defaults(func=cmd_fit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
