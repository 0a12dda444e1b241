"""Command-line front end.

Four subcommands: ``check`` validates a drift Hamiltonian and reports
whether it can entangle the whole register, ``compile`` turns a target
into a pulse schedule, ``verify`` measures a schedule against its
target, and ``bound`` prints a step plan without compiling anything.

Exit codes: 0 success, 2 malformed input, 3 structurally impossible
(not entangling, pair not coupled, no route), 4 infeasible or register
too large for dense work, 5 verification failure.  The dense-evaluation
cap can be raised with the ``HAMRC_DENSE_CAP`` environment variable.
All output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import decouple as _decouple
from . import routing as _routing
from . import synth as _synth
from .bounds import GLOBAL_BOUND_C, coupling_ratio, plan_steps
from .dense import dense_of_expansion, distance, expm_hermitian
from .errors import (
    DimMismatch,
    HamrcError,
    Infeasible,
    InvalidStep,
    InvalidTerm,
    NotConnected,
    NotCoupled,
    NotEntangling,
    NotHermitian,
    NotTwoBody,
    ParseError,
    TooLarge,
    VerificationFailure,
)
from .hamio import format_report, parse_hamfile, parse_schedule, serialize_schedule
from .pauli import HamExpansion, coupling_graph, embed, is_entangling
from .schedule import Schedule, evaluate_schedule

_EXIT_CODES = (
    (VerificationFailure, 5),
    ((Infeasible, TooLarge), 4),
    ((NotEntangling, NotConnected, NotCoupled), 3),
    ((ParseError, NotTwoBody, NotHermitian, InvalidTerm, InvalidStep, DimMismatch), 2),
    (HamrcError, 1),
)


def _dense_cap() -> int | None:
    raw = os.environ.get("HAMRC_DENSE_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidTerm(f"HAMRC_DENSE_CAP must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _resolve_order(args) -> int:
    if args.order is not None:
        return args.order
    return 2 if getattr(args, "gate", None) else 1


def _schedule_stats(sched: Schedule) -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = [
        ("qubits", sched.n),
        ("instructions", len(sched.instructions)),
        ("drift_periods", sched.drift_count()),
    ]
    if sched.raw_drift_periods is not None:
        items.append(("raw_drift_periods", sched.raw_drift_periods))
    items.append(("total_drift_time", sched.total_drift_time()))
    items.append(("phase", sched.phase))
    if sched.plan is not None:
        plan = sched.plan
        items += [
            ("bound", plan.bound),
            ("order", plan.order),
            ("steps", plan.steps),
            ("delta", plan.delta),
        ]
    if sched.predicted_error is not None:
        items.append(("predicted_error", sched.predicted_error))
    return items


# ----------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    ham = parse_hamfile(_read(args.hamfile))
    graph = coupling_graph(ham)
    verdict = is_entangling(ham)
    edges = " ".join(f"{k}:{l}" for k, l in graph.edge_pairs()) or "none"
    comps = "|".join(",".join(str(q) for q in grp) for grp in verdict.components)
    report = format_report(
        [
            ("command", "check"),
            ("qubits", ham.n),
            ("terms", len(ham)),
            ("edges", edges),
            ("entangling", verdict.entangling),
            ("components", comps),
        ]
    )
    _emit(report, args.report)
    return 0 if verdict else 3


def _target_schedule(args, drift: HamExpansion, cap: int | None) -> Schedule:
    target = parse_hamfile(_read(args.target))
    order = _resolve_order(args)
    if args.pair is not None:
        p, q = args.pair
        if target.n != 2:
            raise InvalidTerm("a pair target must be a two-qubit expansion")
        graph = coupling_graph(drift)
        adjacent = (min(p, q), max(p, q)) in graph.edge_pairs()
        if adjacent:
            return _decouple.compile_on_pair(
                drift, (p, q), target, args.t,
                steps=args.steps, epsilon=args.epsilon,
                order=order, bound=args.bound or "chained", dense_cap=cap,
            )
        if args.epsilon is None:
            raise InvalidStep("routing between uncoupled qubits needs --epsilon")
        return _routing.compile_remote(
            drift, p, q, target, args.t,
            epsilon=args.epsilon, order=order,
            bound=args.bound or "empirical",
            dense_cap=cap,
        )
    return _synth.compile_schedule(
        drift, target, args.t,
        steps=args.steps, epsilon=args.epsilon,
        order=order, bound=args.bound or "chained", dense_cap=cap,
    )


def _cmd_compile(args) -> int:
    cap = _dense_cap()
    drift = parse_hamfile(_read(args.hamfile))
    if args.gate:
        sched = _synth.compile_cnot(
            drift,
            steps=args.steps,
            epsilon=args.epsilon,
            order=_resolve_order(args),
            dense_cap=cap,
        )
    else:
        sched = _target_schedule(args, drift, cap)

    text = serialize_schedule(sched)
    if args.out is not None:
        _emit(text, args.out)
        summary = format_report([("command", "compile")] + _schedule_stats(sched))
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
    if args.report is not None:
        _emit(format_report([("command", "compile")] + _schedule_stats(sched)),
              args.report)
    return 0


def _goal_matrix(args, drift: HamExpansion):
    if args.gate:
        if drift.n != 2:
            raise InvalidTerm("the built-in gate target lives on two qubits")
        return _synth.CNOT_MATRIX
    target = parse_hamfile(_read(args.target))
    if args.pair is not None:
        if target.n != 2:
            raise InvalidTerm("a pair target must be a two-qubit expansion")
        target = embed(target, drift.n, tuple(args.pair))
    if target.n != drift.n:
        raise DimMismatch(
            f"target on {target.n} qubits, drift on {drift.n}"
        )
    return expm_hermitian(dense_of_expansion(target), args.t)


def _cmd_verify(args) -> int:
    cap = _dense_cap()
    drift = parse_hamfile(_read(args.hamfile))
    sched = parse_schedule(_read(args.schedule))
    goal = _goal_matrix(args, drift)
    w = evaluate_schedule(sched, drift, dense_cap=cap)
    err = distance(goal, w, phase_align=not args.strict)

    tolerance = args.tolerance
    if tolerance is None:
        tolerance = sched.predicted_error
    if tolerance is None:
        raise InvalidStep(
            "schedule carries no error budget; pass --tolerance"
        )
    ok = err <= tolerance
    report = format_report(
        [
            ("command", "verify"),
            ("qubits", sched.n),
            ("measured_error", err),
            ("tolerance", float(tolerance)),
            ("phase_aligned", not args.strict),
            ("pass", ok),
        ]
    )
    _emit(report, args.report)
    if not ok:
        raise VerificationFailure(
            f"measured error {err:.3e} exceeds tolerance {tolerance:.3e}"
        )
    return 0


def _cmd_bound(args) -> int:
    cap = _dense_cap()
    drift = parse_hamfile(_read(args.hamfile))
    order = _resolve_order(args)
    if args.gate:
        kind = "first_order_cnot" if order == 1 else "second_order_cnot"
        plan = plan_steps(kind, args.epsilon, _synth.CNOT_TIME)
    else:
        target = parse_hamfile(_read(args.target))
        if args.pair is not None:
            model = _decouple.pair_step_model(drift, tuple(args.pair), target)
            target_full = embed(target, drift.n, tuple(args.pair))
        else:
            model = _synth.step_model(drift, target)
            target_full = target
        if args.bound == "global":
            plan = plan_steps(
                "global", args.epsilon, args.t,
                D=coupling_ratio(drift, target_full), C=args.C,
            )
        else:
            plan = _synth.plan_for_model(
                model, drift, target_full, args.t,
                args.epsilon, order, args.bound or "chained", cap,
            )
    items: list[tuple[str, object]] = [
        ("command", "bound"),
        ("bound", plan.bound),
        ("order", plan.order),
        ("analytic", plan.analytic),
        ("steps", plan.steps),
        ("delta", plan.delta),
        ("t", plan.t),
        ("epsilon", args.epsilon),
        ("predicted_error", plan.predicted_error),
    ]
    for key in sorted(plan.constants):
        items.append((key, plan.constants[key]))
    _emit(format_report(items), args.report)
    return 0


# ----------------------------------------------------------------------
# argument plumbing


def _add_target_opts(
    sub: argparse.ArgumentParser, *, with_steps: bool, with_order: bool = True
) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--gate", choices=["cnot"], help="built-in gate target")
    group.add_argument("--target", metavar="HAMFILE",
                       help="target interaction as a Hamiltonian file")
    sub.add_argument("--t", type=float, default=None,
                     help="evolution time for --target")
    sub.add_argument("--pair", type=int, nargs=2, metavar=("K", "L"),
                     help="register sites the two-qubit target acts on")
    if with_order:
        sub.add_argument("--order", type=int, choices=[1, 2], default=None,
                         help="product-formula order (default: 2 for --gate, else 1)")
    if with_steps:
        count = sub.add_mutually_exclusive_group(required=True)
        count.add_argument("--epsilon", type=float, help="error budget")
        count.add_argument("--steps", type=int, help="explicit step count")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamrc",
        description="compile two-qubit interactions out of a fixed drift "
        "Hamiltonian and local control",
    )
    subs = parser.add_subparsers(dest="cmd", required=True)

    p_check = subs.add_parser("check", help="validate a drift Hamiltonian")
    p_check.add_argument("hamfile")
    p_check.add_argument("--report", default=None, help="write the report here")
    p_check.set_defaults(fn=_cmd_check)

    p_comp = subs.add_parser("compile", help="compile a schedule")
    p_comp.add_argument("hamfile")
    _add_target_opts(p_comp, with_steps=True)
    p_comp.add_argument("--bound", default=None,
                        choices=["chained", "global", "empirical"],
                        help="bound kind used to plan steps from --epsilon "
                        "(default: chained, or empirical when routing)")
    p_comp.add_argument("--out", default=None, help="write the schedule here")
    p_comp.add_argument("--report", default=None, help="write a report here")
    p_comp.set_defaults(fn=_cmd_compile)

    p_ver = subs.add_parser("verify", help="measure a schedule against a target")
    p_ver.add_argument("hamfile")
    p_ver.add_argument("schedule")
    _add_target_opts(p_ver, with_steps=False, with_order=False)
    p_ver.add_argument("--tolerance", type=float, default=None,
                       help="acceptance threshold (default: the schedule's budget)")
    p_ver.add_argument("--strict", action="store_true",
                       help="compare without aligning the global phase")
    p_ver.add_argument("--report", default=None, help="write the report here")
    p_ver.set_defaults(fn=_cmd_verify)

    p_bnd = subs.add_parser("bound", help="plan a step count without compiling")
    p_bnd.add_argument("hamfile")
    _add_target_opts(p_bnd, with_steps=False)
    p_bnd.add_argument("--epsilon", type=float, required=True, help="error budget")
    p_bnd.add_argument("--bound", default=None,
                       choices=["chained", "global", "empirical"],
                       help="bound kind (default chained; ignored for --gate)")
    p_bnd.add_argument("--C", type=float, default=GLOBAL_BOUND_C,
                       help="constant of the coarse global bound")
    p_bnd.add_argument("--report", default=None, help="write the report here")
    p_bnd.set_defaults(fn=_cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "target", None) is not None and getattr(args, "t", None) is None:
        print("error: --target needs --t", file=sys.stderr)
        return 2
    if getattr(args, "gate", None) and getattr(args, "t", None) is not None:
        print("error: --gate fixes its own duration; drop --t", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except HamrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for kinds, code in _EXIT_CODES:
            if isinstance(exc, kinds):
                return code
        return 1  # pragma: no cover


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    run()
