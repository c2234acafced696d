"""Command-line front end: ``run``, ``verify``, ``bases`` and ``resources``.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
usage or input error.
"""
from __future__ import annotations

import argparse
import enum
import json
import logging
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import bases, protocol, verify
from .bases import InvalidParams, TargetParams
from .statevec import JRSPError, Sample

log = logging.getLogger("jrsp")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SILENT_NORM_TOL = 1e-9
TOL_ENV = "JRSP_TOL"


class UsageError(Exception):
    pass


class SuccessProbability(str, enum.Enum):
    LESS_THAN_ONE = "<1"
    ONE = "=1"


@dataclass(frozen=True)
class SchemeResources:
    name: str
    qubits_channel: int
    qubits_ancilla: int
    classical_bits: int
    cnot_sender: int
    cnot_receiver: int
    success_probability: SuccessProbability

    @property
    def qubits_total(self) -> int:
        return self.qubits_channel + self.qubits_ancilla

    @property
    def cnot_total(self) -> int:
        return self.cnot_sender + self.cnot_receiver

    def cells(self) -> str:
        return " | ".join(
            [
                f"{self.qubits_total}({self.qubits_channel}+{self.qubits_ancilla})",
                str(self.classical_bits),
                f"{self.cnot_total}({self.cnot_sender}+{self.cnot_receiver})",
                self.success_probability.value,
            ]
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "qubits_total": self.qubits_total,
            "qubits_channel": self.qubits_channel,
            "qubits_ancilla": self.qubits_ancilla,
            "classical_bits": self.classical_bits,
            "cnot_total": self.cnot_total,
            "cnot_sender": self.cnot_sender,
            "cnot_receiver": self.cnot_receiver,
            "success_probability": self.success_probability.value,
        }


_LT1 = SuccessProbability.LESS_THAN_ONE

# Published figures for the five earlier cluster-state schemes (Zhan et al.
# 2011, An et al. 2011, Wang et al. 2012 and 2013, Hou 2013). Shown for
# comparison only; those protocols are not simulated here.
REFERENCE_SCHEMES = (
    SchemeResources("ZHM11", 12, 0, 8, 0, 0, _LT1),
    SchemeResources("ABD11", 6, 2, 4, 0, 2, _LT1),
    SchemeResources("WY12", 8, 1, 4, 6, 0, _LT1),
    SchemeResources("WY13", 6, 4, 4, 0, 4, _LT1),
    SchemeResources("H13", 6, 3, 4, 2, 2, _LT1),
)
EXPECTED_OUR_ROW = "8(6+2) | 6 | 2(0+2) | =1"
OUR_SCHEME = "Our scheme"


def canonical_json(obj) -> str:
    """Serialize with sorted keys and floats at 17 significant digits."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}:{canonical_json(obj[k])}" for k in sorted(obj))
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite float {x!r}")
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _floats(text: str, count: int, what: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {count} comma-separated numbers, got {text!r}") from None
    if len(values) != count:
        raise UsageError(f"{what} needs {count} values, got {len(values)}")
    if not all(math.isfinite(v) for v in values):
        raise UsageError(f"{what} must be finite, got {text!r}")
    return values


def parse_params(coeffs: str, phases: str, degrees: bool = False) -> TargetParams:
    """Build :class:`TargetParams` from CLI strings, renormalizing if needed."""
    c = _floats(coeffs, 4, "--coeffs")
    t = _floats(phases, 3, "--phases")
    if degrees:
        t = [math.radians(v) for v in t]
    norm2 = math.fsum(v * v for v in c)
    if norm2 == 0.0:
        raise UsageError("--coeffs must not all be zero")
    if abs(norm2 - 1.0) > SILENT_NORM_TOL:
        log.warning("coefficients have squared norm %.6g; renormalizing", norm2)
    try:
        return TargetParams.normalized(c, t)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from None


def parse_force(text: str) -> protocol.ForcedBranch:
    try:
        m, n = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--force expects m,n, got {text!r}") from None
    if not (0 <= m <= 3 and 0 <= n <= 3):
        raise UsageError(f"--force outcomes must be in 0..3, got {text!r}")
    return protocol.ForcedBranch(m, n)


def resolve_tolerance(flag: float | None) -> float:
    if flag is not None:
        tol = flag
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise UsageError(f"{TOL_ENV} must be a number, got {os.environ[TOL_ENV]!r}") from None
    else:
        tol = verify.DEFAULT_TOL
    if not (math.isfinite(tol) and tol > 0):
        raise UsageError(f"tolerance must be positive, got {tol!r}")
    return tol


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.6f}{z.imag:+.6f}i"


def cmd_run(args, out) -> int:
    p = parse_params(args.coeffs, args.phases, args.degrees)
    tol = resolve_tolerance(args.tolerance)
    policy = parse_force(args.force) if args.force else Sample(args.seed)
    t = protocol.run_protocol(p, policy)
    ok = t.final_fidelity >= 1 - tol
    if args.format == "json":
        out.write(canonical_json(t.to_dict()) + "\n")
    else:
        out.write(f"params      a={_fmt(p.a)} b={_fmt(p.b)} c={_fmt(p.c)} d={_fmt(p.d)} "
                  f"theta=({', '.join(_fmt(v) for v in p.thetas)})\n")
        for msg in t.messages:
            to = ", ".join(r.value for r in msg.receivers)
            out.write(f"message     {msg.sender.value} -> {to}: {msg.payload} ({msg.bit_cost} bits)\n")
        out.write(f"outcomes    m={t.m} (p={_fmt(t.p_m)})  n={t.n} (p={_fmt(t.p_n_given_m)})\n")
        out.write(f"correction  {t.correction}\n")
        out.write(f"fidelity    {t.final_fidelity:.12f}\n")
        lg = t.ledger
        out.write(f"resources   qubits {lg.total_qubits}({lg.channel_qubits}+{lg.ancilla_qubits}), "
                  f"classical bits {lg.classical_bits}, CNOTs {lg.cnot_count}\n")
        if t.seed is not None:
            out.write(f"seed        {t.seed}\n")
        out.write(f"result      {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    tol = resolve_tolerance(args.tolerance)
    if args.trials < 1:
        raise UsageError(f"--trials must be at least 1, got {args.trials}")
    if args.coeffs is not None or args.phases is not None:
        p = parse_params(args.coeffs or "0.5,0.5,0.5,0.5", args.phases or "0,0,0", args.degrees)
        params = [p]
        mode = "single"
    else:
        params = verify.sweep_params(args.trials, args.seed)
        mode = "sweep"
    summary = verify.sweep(params, tol)
    payload = summary.to_dict()
    payload["mode"] = mode
    if mode == "sweep":
        payload["trials"] = args.trials
        payload["seed"] = args.seed
    if args.format == "json":
        out.write(canonical_json(payload) + "\n")
    else:
        out.write(f"parameter sets        {summary.parameter_sets}\n")
        out.write(f"tolerance             {tol:g}\n")
        out.write(f"p_suc (min)           {summary.min_p_suc:.12f}\n")
        out.write(f"min fidelity          {summary.min_fidelity:.12f}\n")
        out.write(f"max |p - 1/4|         {summary.max_prob_deviation:.3e}\n")
        out.write(f"channel residual      {summary.max_channel_residual:.3e}\n")
        out.write(f"L_m residual          {summary.max_l_residual:.3e}\n")
        out.write(f"basis residual        {summary.max_basis_residual:.3e}\n")
        out.write(f"table 1 audit         {'pass' if summary.table1_pass else 'FAIL'}\n")
        for failure in summary.failures:
            out.write(f"FAILED {canonical_json(failure)}\n")
        out.write(f"result                {'PASS' if summary.passed else 'FAIL'}\n")
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_bases(args, out) -> int:
    p = parse_params(args.coeffs, args.phases, args.degrees)
    if args.m is not None and args.which != "bob":
        raise UsageError("--m only applies with --which bob")
    if args.which == "alice":
        mats = [("U", bases.alice_basis(p))]
    else:
        ms = [args.m] if args.m is not None else range(4)
        mats = [(f"G({m})", bases.bob_basis(m, p)) for m in ms]
    if args.format == "json":
        doc = {
            name: [[[z.real, z.imag] for z in row] for row in b.matrix.tolist()]
            for name, b in mats
        }
        out.write(canonical_json(doc) + "\n")
    else:
        for name, b in mats:
            out.write(f"{name}:\n")
            for row in b.matrix:
                out.write("  " + "  ".join(f"{_fmt_complex(z):>22}" for z in row) + "\n")
    return EXIT_OK


def our_scheme_resources() -> SchemeResources:
    """Build the comparison row from a live protocol run."""
    p = verify.edge_cases()[-1]
    t = protocol.run_protocol(p, protocol.ForcedBranch(0, 0))
    report = verify.enumerate_branches(p)
    lg = t.ledger
    success = SuccessProbability.ONE if report.p_suc >= 1 - 1e-12 else SuccessProbability.LESS_THAN_ONE
    return SchemeResources(
        OUR_SCHEME,
        qubits_channel=lg.channel_qubits,
        qubits_ancilla=lg.ancilla_qubits,
        classical_bits=lg.classical_bits,
        # every CNOT in the protocol is Charlie's
        cnot_sender=0,
        cnot_receiver=lg.cnot_count,
        success_probability=success,
    )


def cmd_resources(args, out) -> int:
    ours = our_scheme_resources()
    rows = list(REFERENCE_SCHEMES) + [ours]
    ok = ours.cells() == EXPECTED_OUR_ROW
    if args.format == "json":
        doc = {"schemes": [r.to_dict() for r in rows], "matches_expected": ok}
        out.write(canonical_json(doc) + "\n")
    else:
        out.write(f"{'scheme':<12}| qubits | classical bits | CNOTs | success\n")
        for r in rows:
            out.write(f"{r.name:<12}| {r.cells()}\n")
        if not ok:
            out.write(f"live row {ours.cells()!r} differs from expected {EXPECTED_OUR_ROW!r}\n")
    return EXIT_OK if ok else EXIT_FAIL


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jrsp",
        description="Deterministic joint remote preparation of a four-qubit cluster-type state.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def params_flags(p, required_defaults=True):
        default_c = "0.5,0.5,0.5,0.5" if required_defaults else None
        default_t = "0,0,0" if required_defaults else None
        p.add_argument("--coeffs", default=default_c, help="a,b,c,d (renormalized if needed)")
        p.add_argument("--phases", default=default_t, help="theta1,theta2,theta3 in radians")
        p.add_argument("--degrees", action="store_true", help="read --phases in degrees")

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--tolerance", type=float, default=None,
                       help=f"fidelity tolerance (default {verify.DEFAULT_TOL:g}, or ${TOL_ENV})")

    run = sub.add_parser("run", help="execute the protocol once")
    params_flags(run)
    common(run)
    run.add_argument("--force", help="force outcomes m,n instead of sampling")
    run.add_argument("--seed", type=_u64, default=0)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="exhaustively verify every branch")
    params_flags(ver, required_defaults=False)
    common(ver)
    ver.add_argument("--trials", type=int, default=100)
    ver.add_argument("--seed", type=_u64, default=0)
    ver.set_defaults(func=cmd_verify)

    bas = sub.add_parser("bases", help="print the measurement bases")
    params_flags(bas)
    bas.add_argument("--format", choices=("text", "json"), default="text")
    bas.add_argument("--which", choices=("alice", "bob"), default="alice")
    bas.add_argument("--m", type=int, choices=range(4), default=None)
    bas.set_defaults(func=cmd_bases)

    res = sub.add_parser("resources", help="resource comparison table")
    res.add_argument("--format", choices=("text", "json"), default="text")
    res.set_defaults(func=cmd_resources)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, JRSPError, InvalidParams) as exc:
        print(f"jrsp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
