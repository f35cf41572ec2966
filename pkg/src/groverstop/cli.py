"""Command-line front end: rule | search | orbit | table | experiment | pad | diagnose.

Every command's output is a pure function of its flags (plus the seed where
one applies); no environment variables are consulted.  Exit codes are a
stable contract: 0 success, 1 input error, 2 not applicable, 64 usage.

CSV output is UTF-8 with LF line endings; reals are written with 17
significant digits so parsing the file back reproduces the exact doubles.
JSON uses the same field names, with null where CSV leaves a cell empty.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Any, Iterable, Sequence, TextIO

from .core_model import angles_of, make_instance
from .diophantine import (
    default_horizon,
    minimal_odd_l,
    relaxed_score,
    strict_distance,
    torus_point,
)
from .statevector import FULL_SIM_CAP, RNG_ALGORITHM, run_discrimination
from .stopping_rule import (
    DEFAULT_EPSILON,
    GammaTooLarge,
    NotApplicable,
    check_applicability,
    certify,
    construct_rule,
)
from .transforms import PremiseViolated, iteration_bound, pad_for_ratio

__all__ = ["main", "entry", "TABLE_FIELDS"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_APPLICABLE = 2
EXIT_USAGE = 64

TABLE_FIELDS = [
    "N",
    "M",
    "K",
    "theta_M",
    "theta_K",
    "gamma",
    "applicable",
    "p",
    "s",
    "l_constructive",
    "l_minimal",
    "l_bound",
    "fail_K",
    "fail_M",
]


class _Parser(argparse.ArgumentParser):
    """argparse with the BSD-style usage exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_real(x: float) -> str:
    return format(x, ".17g")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_real(value)
    return str(value)


def _write_csv(fieldnames: Sequence[str], rows: Iterable[dict], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_csv_cell(row[name]) for name in fieldnames])


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_range(spec: str) -> range:
    """START:STOP[:STEP] with inclusive STOP, or a single integer."""
    parts = spec.split(":")
    if len(parts) == 1:
        start = int(parts[0])
        return range(start, start + 1)
    if len(parts) == 2:
        return range(int(parts[0]), int(parts[1]) + 1)
    if len(parts) == 3:
        return range(int(parts[0]), int(parts[1]) + 1, int(parts[2]))
    raise ValueError(f"bad range spec {spec!r}; expected START:STOP[:STEP]")


def _error_bound(epsilon: float) -> float:
    return math.sin(2.0 * math.pi * epsilon) ** 2


def _instance_json(instance) -> dict:
    return {
        "N": instance.N,
        "M": instance.M,
        "K": instance.K,
        "strict_regime": instance.strict_regime,
    }


def _applicability_json(app) -> dict:
    return {
        "ordering_ok": app.ordering_ok,
        "size_condition_ok": app.size_condition_ok,
        "gamma_small_ok": app.gamma_small_ok,
        "epsilon_bound": app.epsilon_bound,
        "all_ok": app.all_ok,
    }


def _rule_json(rule) -> dict:
    return {
        "p": rule.p,
        "s": rule.s,
        "l": rule.l,
        "m": rule.m,
        "residual_K": rule.residual_K,
        "residual_M": rule.residual_M,
        "l_bound": rule.l_bound,
        "m_bound": rule.m_bound,
    }


def _certificate_json(cert) -> dict:
    return {
        "epsilon": cert.epsilon,
        "error_bound": cert.error_bound,
        "fail_K": cert.fail_K,
        "fail_M": cert.fail_M,
        "l_odd": cert.l_odd,
        "residual_K_ok": cert.residual_K_ok,
        "residual_M_ok": cert.residual_M_ok,
        "epsilon_covers_gamma": cert.epsilon_covers_gamma,
        "fail_K_ok": cert.fail_K_ok,
        "fail_M_ok": cert.fail_M_ok,
        "l_within_bound": cert.l_within_bound,
        "certified": cert.certified,
    }


def _search_json(report) -> dict:
    return {
        "found": report.found,
        "l": report.l,
        "score": report.score,
        "fail_K": report.fail_K,
        "fail_M": report.fail_M,
        "horizon": report.horizon,
        "mode": report.mode,
        "threshold": report.threshold,
    }


def cmd_rule(args: argparse.Namespace) -> int:
    instance = make_instance(args.N, args.M, args.K)
    app = check_applicability(instance)
    report: dict[str, Any] = {
        "instance": _instance_json(instance),
        "applicability": _applicability_json(app),
        "epsilon": args.epsilon,
    }
    if instance.M == 0:
        # Degenerate hypothesis pair (0 vs K): plain Grover, answered by search.
        search = minimal_odd_l(
            angles_of(instance), _error_bound(args.epsilon), default_horizon(instance)
        )
        report["path"] = "plain-grover"
        report["search"] = _search_json(search)
        _emit(_json_dump(report), args.out)
        return EXIT_OK
    report["path"] = "constructive"
    try:
        rule = construct_rule(instance, best_effort=args.best_effort)
    except (NotApplicable, GammaTooLarge) as exc:
        if not app.ordering_ok:
            reason = "ordering"
        elif not app.size_condition_ok:
            reason = "size_condition"
        else:
            reason = "gamma_too_large"
        report["reason"] = reason
        report["error"] = str(exc)
        _emit(_json_dump(report), args.out)
        return EXIT_NOT_APPLICABLE
    report["rule"] = _rule_json(rule)
    report["certificate"] = _certificate_json(certify(rule, instance, args.epsilon))
    _emit(_json_dump(report), args.out)
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    instance = make_instance(args.N, args.M, args.K)
    horizon = args.horizon if args.horizon is not None else default_horizon(instance)
    report = minimal_odd_l(angles_of(instance), args.tol, horizon, args.mode)
    _emit(
        _json_dump({"instance": _instance_json(instance), "search": _search_json(report)}),
        args.out,
    )
    return EXIT_OK


def cmd_orbit(args: argparse.Namespace) -> int:
    if args.l_max < 1 or args.l_max % 2 == 0:
        raise ValueError(f"--l-max must be odd and >= 1, got {args.l_max}")
    instance = make_instance(args.N, args.M, args.K)
    angles = angles_of(instance)
    rows = []
    for l in range(1, args.l_max + 1, 2):
        pt = torus_point(l, angles)
        rows.append(
            {
                "l": l,
                "x_K": pt.x_K,
                "x_M": pt.x_M,
                "strict_distance": strict_distance(pt),
                "relaxed_score": relaxed_score(l, angles),
            }
        )
    import io

    buf = io.StringIO()
    _write_csv(["l", "x_K", "x_M", "strict_distance", "relaxed_score"], rows, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_table_row(
    N: int, M: int, K: int, epsilon: float, horizon: int | None = None
) -> dict:
    """One table row; constructive fields present only when fully certified."""
    instance = make_instance(N, M, K)
    angles = angles_of(instance)
    row: dict[str, Any] = {
        "N": N,
        "M": M,
        "K": K,
        "theta_M": angles.theta_M,
        "theta_K": angles.theta_K,
        "gamma": angles.gamma,
        "applicable": check_applicability(instance).all_ok,
        "p": None,
        "s": None,
        "l_constructive": None,
        "l_minimal": None,
        "l_bound": iteration_bound(instance).l_bound,
        "fail_K": None,
        "fail_M": None,
    }
    if M > 0:
        rule = construct_rule(instance, best_effort=True)
        if certify(rule, instance, epsilon).certified:
            row["p"], row["s"], row["l_constructive"] = rule.p, rule.s, rule.l
    scan_horizon = horizon if horizon is not None else default_horizon(instance)
    if row["l_constructive"] is not None:
        scan_horizon = max(scan_horizon, row["l_constructive"])
    search = minimal_odd_l(angles, _error_bound(epsilon), scan_horizon)
    if search.found:
        row["l_minimal"] = search.l
        row["fail_K"], row["fail_M"] = search.fail_K, search.fail_M
    elif row["l_constructive"] is not None:
        from .core_model import failure_probabilities

        fails = failure_probabilities(row["l_constructive"], angles)
        row["fail_K"], row["fail_M"] = fails.fail_K, fails.fail_M
    return row


def _iter_grid(args: argparse.Namespace) -> Iterable[tuple[int, int, int]]:
    if args.triples:
        with open(args.triples, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                n, m, k = (int(tok) for tok in line.replace(",", " ").split())
                yield n, m, k
        return
    if not (args.N_range and args.M_range and args.K_range):
        raise ValueError("provide --triples or all of --N-range/--M-range/--K-range")
    for n in _parse_range(args.N_range):
        for m in _parse_range(args.M_range):
            for k in _parse_range(args.K_range):
                yield n, m, k


def cmd_table(args: argparse.Namespace) -> int:
    rows = []
    seen_scaled: set[tuple[int, int, int]] = set()
    any_triple = False
    for n, m, k in _iter_grid(args):
        any_triple = True
        if not (0 <= m < k <= n):
            continue  # grid products include invalid corners; skip them
        if args.reduced:
            g = math.gcd(m, k, n)
            key = (m // g, k // g, n // g)
            if key in seen_scaled:
                continue
            seen_scaled.add(key)
        rows.append(build_table_row(n, m, k, args.epsilon, args.horizon))
    if not any_triple:
        raise ValueError("empty grid")
    if args.format == "json":
        _emit(_json_dump(rows), args.out)
    else:
        import io

        buf = io.StringIO()
        _write_csv(TABLE_FIELDS, rows, buf)
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    instance = make_instance(args.N, args.M, args.K)
    if instance.N > FULL_SIM_CAP:
        raise ValueError(
            f"N={instance.N} exceeds the full-simulation cap {FULL_SIM_CAP}; "
            "use the subspace model (rule/search commands) instead"
        )
    outcomes = {}
    for truth in ("M", "K"):
        outcome = run_discrimination(
            instance, truth, args.l, args.trials, args.seed, args.epsilon
        )
        outcomes[truth] = {
            "truth": outcome.truth,
            "trials": outcome.trials,
            "errors": outcome.errors,
            "empirical_error": outcome.empirical_error,
            "bound": outcome.bound,
            "seed": outcome.seed,
        }
    from .core_model import failure_probabilities

    fails = failure_probabilities(args.l, angles_of(instance))
    _emit(
        _json_dump(
            {
                "instance": _instance_json(instance),
                "l": args.l,
                "trials": args.trials,
                "seed": args.seed,
                "epsilon": args.epsilon,
                "rng_algorithm": RNG_ALGORITHM,
                "expected": {"fail_K": fails.fail_K, "fail_M": fails.fail_M},
                "outcomes": outcomes,
            }
        ),
        args.out,
    )
    return EXIT_OK


def cmd_pad(args: argparse.Namespace) -> int:
    padded = pad_for_ratio(args.M, args.N, args.a, args.epsilon)
    _emit(
        _json_dump(
            {
                "r": padded.r,
                "M_prime": padded.M_prime,
                "K_prime": padded.K_prime,
                "N_prime": padded.N_prime,
                "original": _instance_json(padded.original),
                "gamma_prime": padded.gamma_prime,
                "gamma_prime_lower": padded.gamma_prime_lower,
                "gamma_gap_ok": padded.gamma_gap_ok,
                "size_condition_ok": padded.size_condition_ok,
                "m_bound_padded": padded.m_bound_padded,
            }
        ),
        args.out,
    )
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    entries = []
    for m in _parse_range(args.M_range):
        for k in _parse_range(args.K_range):
            if not (0 <= m < k <= args.N):
                continue
            instance = make_instance(args.N, m, k)
            horizon = args.horizon if args.horizon is not None else default_horizon(instance)
            search = minimal_odd_l(
                angles_of(instance), _error_bound(args.epsilon), horizon
            )
            l_bound = iteration_bound(instance).l_bound
            # Exhausted scans get their lower-bound ratio from the horizon itself.
            ratio = (search.l if search.found else search.horizon) / l_bound
            if not search.found or ratio > args.threshold:
                entries.append(
                    {
                        "N": args.N,
                        "M": m,
                        "K": k,
                        "l_minimal": search.l,
                        "l_bound": l_bound,
                        "ratio": ratio,
                        "exhausted": not search.found,
                        "horizon": search.horizon,
                    }
                )
    entries.sort(key=lambda e: (-e["ratio"], e["M"], e["K"]))
    _emit(_json_dump(entries), args.out)
    return EXIT_OK


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, required=True)
    parser.add_argument("--M", type=int, required=True)
    parser.add_argument("--K", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groverstop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rule = sub.add_parser("rule", help="constructive stopping rule with certificate")
    _add_instance_flags(p_rule)
    p_rule.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_rule.add_argument("--best-effort", action="store_true")
    p_rule.add_argument("--out")
    p_rule.set_defaults(func=cmd_rule)

    p_search = sub.add_parser("search", help="exhaustive minimal odd-l search")
    _add_instance_flags(p_search)
    p_search.add_argument("--tol", type=float, default=0.25)
    p_search.add_argument("--horizon", type=int)
    p_search.add_argument("--mode", choices=["relaxed", "strict"], default="relaxed")
    p_search.add_argument("--out")
    p_search.set_defaults(func=cmd_search)

    p_orbit = sub.add_parser("orbit", help="torus orbit trace as CSV")
    _add_instance_flags(p_orbit)
    p_orbit.add_argument("--l-max", type=int, required=True, dest="l_max")
    p_orbit.add_argument("--out")
    p_orbit.set_defaults(func=cmd_orbit)

    p_table = sub.add_parser("table", help="stopping-rule table over a grid")
    p_table.add_argument("--triples", help="file of 'N M K' lines")
    p_table.add_argument("--N-range", dest="N_range", help="START:STOP[:STEP], inclusive")
    p_table.add_argument("--M-range", dest="M_range")
    p_table.add_argument("--K-range", dest="K_range")
    p_table.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_table.add_argument("--horizon", type=int)
    p_table.add_argument("--reduced", action="store_true", help="skip proportional triples")
    p_table.add_argument("--format", choices=["csv", "json"], default="csv")
    p_table.add_argument("--out")
    p_table.set_defaults(func=cmd_table)

    p_exp = sub.add_parser("experiment", help="Monte Carlo discrimination experiment")
    _add_instance_flags(p_exp)
    p_exp.add_argument("--l", type=int, required=True)
    p_exp.add_argument("--trials", type=int, required=True)
    p_exp.add_argument("--seed", type=int, required=True)
    p_exp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_exp.add_argument("--out")
    p_exp.set_defaults(func=cmd_experiment)

    p_pad = sub.add_parser("pad", help="pad the database to shrink the size ratio")
    p_pad.add_argument("--M", type=int, required=True)
    p_pad.add_argument("--N", type=int, required=True)
    p_pad.add_argument("--a", type=float, default=2.0, help="ratio K = a*M")
    p_pad.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_pad.add_argument("--out")
    p_pad.set_defaults(func=cmd_pad)

    p_diag = sub.add_parser("diagnose", help="find slow (small-divisor) instances")
    p_diag.add_argument("--N", type=int, required=True)
    p_diag.add_argument("--M-range", dest="M_range", required=True)
    p_diag.add_argument("--K-range", dest="K_range", required=True)
    p_diag.add_argument("--threshold", type=float, required=True,
                        help="report rows with l_minimal/l_bound above this")
    p_diag.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_diag.add_argument("--horizon", type=int)
    p_diag.add_argument("--out")
    p_diag.set_defaults(func=cmd_diagnose)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, PremiseViolated, OSError) as exc:
        print(f"groverstop: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
