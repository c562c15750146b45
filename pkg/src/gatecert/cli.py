"""Command-line frontend: parameter sweeps over the benchmark error models
(CSV), protocol-simulation runs, single-point moment queries, and the
self-verification suite.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
failure. All CSV output uses fixed column order, '.' decimals, 17 significant
digits, and LF line endings, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .certify import certificate_bundle
from .estimate import certify_from_estimates, run_protocol
from .gates import build_model_error, model_dimension
from .linalg import EigensolverError
from .moments import fd_from_unitary, pq_from_fd
from .verify import run_verification

SWEEP_COLUMNS = (
    "model,n,param,F,D,r,d_exact,b_fidelity_only,b_ru_at_u,b_fd,b_hybrid,flags,"
    "b_fidelity_only_raw,b_ru_at_u_raw"
)
ESTIMATE_COLUMNS = "model,n,param,M,N,seed,F_hat,D_hat,truncated,b_fidelity_only,b_fd"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _qubits(model: str, n: int | None) -> int:
    if model == "cz":
        return 2
    if model == "toffoli":
        return 3
    if n is None:
        raise _UsageError("--n is required for the qft model")
    if not 2 <= n <= 10:
        raise _UsageError(f"qft qubit count must be in [2, 10], got {n}")
    return n


def _grid(lo: float, hi: float, steps: int, log: bool) -> np.ndarray:
    if steps < 2:
        raise _UsageError(f"--steps must be at least 2, got {steps}")
    if not hi > lo:
        raise _UsageError(f"--max must exceed --min, got [{lo}, {hi}]")
    if log:
        if lo <= 0:
            raise _UsageError("--log-grid requires a positive --min")
        return np.geomspace(lo, hi, steps)
    return np.linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    n = _qubits(args.model, args.n)
    grid = _grid(args.min, args.max, args.steps, args.log_grid)
    d = model_dimension(args.model, n)
    lines = [SWEEP_COLUMNS]
    for param in grid:
        x = build_model_error(args.model, float(param), n)
        s = fd_from_unitary(x)
        bundle = certificate_bundle(d, s.F, s.D, u=args.unitarity, x=x)
        lines.append(
            ",".join(
                [
                    args.model,
                    str(n),
                    _fmt(param),
                    _fmt(s.F),
                    _fmt(s.D),
                    _fmt(s.r),
                    _fmt(bundle.d_exact),
                    _fmt(bundle.b_fidelity_only),
                    _fmt(bundle.b_ru),
                    _fmt(bundle.b_fd),
                    _fmt(bundle.b_hybrid),
                    str(int(bundle.flags)),
                    _fmt(bundle.b_fidelity_only_raw),
                    _fmt(bundle.b_ru_raw),
                ]
            )
        )
    _write_lines(args.out, lines)
    return 0


def cmd_estimate(args) -> int:
    if args.samples < 2 or args.shots < 2:
        raise _UsageError("--samples and --shots must both be at least 2")
    if args.repeats < 1:
        raise _UsageError("--repeats must be at least 1")
    if args.seed < 0:
        raise _UsageError("--seed must be nonnegative")
    n = _qubits(args.model, args.n)
    d = model_dimension(args.model, n)
    x = build_model_error(args.model, args.param, n)
    lines = [ESTIMATE_COLUMNS]
    for rep in range(args.repeats):
        seed = args.seed + rep
        result = run_protocol(x, args.samples, args.shots, seed)
        bundle = certify_from_estimates(result, d)
        lines.append(
            ",".join(
                [
                    args.model,
                    str(n),
                    _fmt(args.param),
                    str(args.samples),
                    str(args.shots),
                    str(seed),
                    _fmt(result.F_hat),
                    _fmt(result.D_hat),
                    str(int(result.truncated)),
                    _fmt(bundle.b_fidelity_only),
                    _fmt(bundle.b_fd),
                ]
            )
        )
    _write_lines(args.out, lines)
    return 0


def cmd_moments(args) -> int:
    n = _qubits(args.model, args.n)
    d = model_dimension(args.model, n)
    x = build_model_error(args.model, args.param, n)
    s = fd_from_unitary(x)
    pq = pq_from_fd(s.F, s.D, d)
    bundle = certificate_bundle(d, s.F, s.D, u=args.unitarity, x=x)
    if args.csv:
        print(SWEEP_COLUMNS)
        print(
            ",".join(
                [
                    args.model,
                    str(n),
                    _fmt(args.param),
                    _fmt(s.F),
                    _fmt(s.D),
                    _fmt(s.r),
                    _fmt(bundle.d_exact),
                    _fmt(bundle.b_fidelity_only),
                    _fmt(bundle.b_ru),
                    _fmt(bundle.b_fd),
                    _fmt(bundle.b_hybrid),
                    str(int(bundle.flags)),
                    _fmt(bundle.b_fidelity_only_raw),
                    _fmt(bundle.b_ru_raw),
                ]
            )
        )
        return 0
    rows = [
        ("model", args.model),
        ("n_qubits", n),
        ("dim", d),
        ("param", _fmt(args.param)),
        ("F", _fmt(s.F)),
        ("D", _fmt(s.D)),
        ("r", _fmt(s.r)),
        ("P2", _fmt(pq.P2)),
        ("Q2", _fmt(pq.Q2)),
        ("c_FD", _fmt(bundle.c_value)),
        ("d_exact", _fmt(bundle.d_exact)),
        ("b_fidelity_only", _fmt(bundle.b_fidelity_only)),
        (f"b_ru_at_u={args.unitarity:g}", _fmt(bundle.b_ru)),
        ("b_fd", _fmt(bundle.b_fd)),
        ("b_hybrid", _fmt(bundle.b_hybrid)),
        ("hybrid_winner", bundle.hybrid_winner),
        ("flags", int(bundle.flags)),
    ]
    for key, value in rows:
        print(f"{key}: {value}")
    return 0


def cmd_verify(args) -> int:
    return 0 if run_verification(full=args.full) else 3


def _write_lines(path: str, lines: list[str]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise _UsageError(f"cannot write {path}: {exc}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="gatecert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gatecert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="parameter sweep over an error model, CSV output")
    sweep.add_argument("--model", required=True, choices=("cz", "toffoli", "qft"))
    sweep.add_argument("--n", type=int, default=None, help="qubit count (qft only)")
    sweep.add_argument("--min", type=float, default=1e-3)
    sweep.add_argument("--max", type=float, default=1.0)
    sweep.add_argument("--steps", type=int, default=50)
    sweep.add_argument("--log-grid", action="store_true", help="geometric parameter spacing")
    sweep.add_argument("--unitarity", type=float, default=1.0, help="u for the (r,u) bound")
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=cmd_sweep)

    est = sub.add_parser("estimate", help="simulate the randomized estimation protocol")
    est.add_argument("--model", required=True, choices=("cz", "toffoli", "qft"))
    est.add_argument("--n", type=int, default=None)
    est.add_argument("--param", type=float, required=True)
    est.add_argument("--samples", type=int, default=500, help="random input states M")
    est.add_argument("--shots", type=int, default=1000, help="shots per state N")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--repeats", type=int, default=1, help="rows with seeds seed, seed+1, ...")
    est.add_argument("--out", required=True)
    est.set_defaults(func=cmd_estimate)

    mom = sub.add_parser("moments", help="moments and certificates at one parameter point")
    mom.add_argument("--model", required=True, choices=("cz", "toffoli", "qft"))
    mom.add_argument("--n", type=int, default=None)
    mom.add_argument("--param", type=float, required=True)
    mom.add_argument("--unitarity", type=float, default=1.0)
    mom.add_argument("--csv", action="store_true", help="emit a machine-readable CSV row")
    mom.set_defaults(func=cmd_moments)

    ver = sub.add_parser("verify", help="run the self-verification suite")
    ver.add_argument("--full", action="store_true", help="acceptance-grade sample sizes")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"gatecert: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gatecert: error: {exc}", file=sys.stderr)
        return 1
    except EigensolverError as exc:
        print(f"gatecert: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
