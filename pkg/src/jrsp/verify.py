"""Exhaustive checks of the protocol's algebra and its success probability.

Closed forms from :mod:`jrsp.bases` are compared against the measurement
engine, which never consults them, so each check is a genuine cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import bases
from .bases import PauliCorrection, TargetParams
from .protocol import ForcedBranch, run_protocol
from .statevec import Forced, StateVector, fidelity, measure_pair, permute, tensor

DEFAULT_TOL = 1e-10
PROB_TOL = 1e-12


@dataclass(frozen=True)
class BranchResult:
    m: int
    n: int
    p_m: float
    p_n_given_m: float
    correction: PauliCorrection
    fidelity: float

    @property
    def joint_prob(self) -> float:
        return self.p_m * self.p_n_given_m

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "joint_prob": self.joint_prob,
            "correction": {"q3": list(self.correction.ops_q3), "q6": list(self.correction.ops_q6)},
            "fidelity": self.fidelity,
        }


@dataclass(frozen=True)
class Table1Row:
    m: int
    n: int
    collapse_fidelity: float
    correction_fidelity: float
    passed: bool


@dataclass(frozen=True)
class Table1Audit:
    passed: bool
    rows: tuple[Table1Row, ...]

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class VerificationReport:
    params: TargetParams
    tol: float
    branches: tuple[BranchResult, ...]
    channel_residual: float
    l_residuals: tuple[float, float, float, float]
    table1_pass: bool
    basis_residual: float

    @property
    def min_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches)

    @property
    def p_suc(self) -> float:
        return math.fsum(b.joint_prob for b in self.branches if b.fidelity >= 1 - self.tol)

    @property
    def total_prob(self) -> float:
        return math.fsum(b.joint_prob for b in self.branches)

    @property
    def max_prob_deviation(self) -> float:
        return max(
            max(abs(b.p_m - 0.25), abs(b.p_n_given_m - 0.25)) for b in self.branches
        )

    def failures(self) -> list[str]:
        """Human-readable reasons this parameter set fails, empty if it passes."""
        out = []
        for b in self.branches:
            if b.fidelity < 1 - self.tol:
                out.append(f"branch (m={b.m}, n={b.n}) fidelity {b.fidelity!r}")
        if self.max_prob_deviation >= PROB_TOL:
            out.append(f"outcome probability off 1/4 by {self.max_prob_deviation:.3e}")
        if abs(self.total_prob - 1) >= PROB_TOL:
            out.append(f"branch probabilities sum to {self.total_prob!r}")
        if self.channel_residual >= 1e-12:
            out.append(f"channel decomposition residual {self.channel_residual:.3e}")
        for m, r in enumerate(self.l_residuals):
            if r >= 1e-12:
                out.append(f"L_{m} decomposition residual {r:.3e}")
        if not self.table1_pass:
            out.append("Table 1 audit failed")
        if self.basis_residual >= 1e-12:
            out.append(f"basis unitarity residual {self.basis_residual:.3e}")
        return out

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {"a": p.a, "b": p.b, "c": p.c, "d": p.d, "theta": list(p.thetas)},
            "branches": [b.to_dict() for b in self.branches],
            "min_fidelity": self.min_fidelity,
            "channel_residual": self.channel_residual,
            "l_residuals": list(self.l_residuals),
            "table1_pass": self.table1_pass,
            "basis_residual": self.basis_residual,
            "p_suc": self.p_suc,
            "passed": self.passed,
        }


def random_params(rng: np.random.Generator) -> TargetParams:
    """Normalized |Gaussian| amplitudes and uniform phases in [0, 2*pi)."""
    v = np.abs(rng.standard_normal(4))
    v /= np.linalg.norm(v)
    thetas = rng.uniform(0.0, 2 * math.pi, 3)
    return TargetParams(*v.tolist(), *thetas.tolist())


def edge_cases() -> list[TargetParams]:
    """The four one-hot amplitude vectors and the balanced one."""
    cases = [TargetParams(*np.eye(4)[k].tolist()) for k in range(4)]
    cases.append(TargetParams(0.5, 0.5, 0.5, 0.5, math.pi / 3, math.pi / 4, math.pi / 5))
    return cases


def sweep_params(trials: int, seed: int) -> list[TargetParams]:
    rng = np.random.default_rng(seed)
    return edge_cases() + [random_params(rng) for _ in range(trials)]


def check_channel_decomposition(p: TargetParams) -> float:
    """Max amplitude gap between the channel and half the sum of u_m (x) L_m."""
    alice = bases.alice_basis(p)
    recon = np.zeros(64, dtype=np.complex128)
    for m in range(4):
        u_m = StateVector(alice.row(m), bases.ALICE_PAIR)
        term = permute(tensor(u_m, bases.l_state(m, p)), bases.CHANNEL_LABELS)
        recon += 0.5 * term.amplitudes
    return float(np.max(np.abs(recon - bases.channel_state().amplitudes)))


def check_l_decomposition(m: int, p: TargetParams) -> float:
    """Max amplitude gap between L_m and half the sum of v_n (x) D_mn."""
    bob = bases.bob_basis(m, p)
    recon = np.zeros(16, dtype=np.complex128)
    for n in range(4):
        v_n = StateVector(bob.row(n), bases.BOB_PAIR)
        term = tensor(v_n, bases.d_state(m, n, p))
        recon += 0.5 * permute(term, bases.L_LABELS).amplitudes
    return float(np.max(np.abs(recon - bases.l_state(m, p).amplitudes)))


def brute_force_collapse(m: int, n: int, p: TargetParams) -> StateVector:
    """Charlie's pair after two forced measurements on the raw channel."""
    _, _, residual = measure_pair(
        bases.channel_state(), bases.ALICE_PAIR, bases.alice_basis(p), Forced(m)
    )
    _, _, collapsed = measure_pair(residual, bases.BOB_PAIR, bases.bob_basis(m, p), Forced(n))
    return permute(collapsed, bases.CHARLIE_PAIR)


def check_table1(p: TargetParams, tol: float = DEFAULT_TOL, collapsed=None) -> Table1Audit:
    """Audit all sixteen rows: collapse state and restoring correction.

    ``collapsed`` optionally maps ``(m, n)`` to Charlie's engine-produced pair
    (e.g. from protocol transcripts); missing rows are measured afresh.
    """
    collapsed = collapsed or {}
    target = bases.intermediate_target(p)
    rows = []
    for m in range(4):
        for n in range(4):
            d = bases.d_state(m, n, p)
            engine = collapsed.get((m, n))
            if engine is None:
                engine = brute_force_collapse(m, n, p)
            f_collapse = fidelity(permute(engine, bases.CHARLIE_PAIR), d)
            f_correct = fidelity(bases.correction(m, n).apply(d), target)
            ok = f_collapse >= 1 - tol and f_correct >= 1 - tol
            rows.append(Table1Row(m, n, f_collapse, f_correct, ok))
    return Table1Audit(all(r.passed for r in rows), tuple(rows))


def basis_unitarity_suite(p: TargetParams) -> float:
    mats = [bases.alice_basis(p).matrix] + [bases.bob_basis(m, p).matrix for m in range(4)]
    return float(max(np.max(np.abs(b @ b.conj().T - np.eye(4))) for b in mats))


def enumerate_branches(p: TargetParams, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Force all sixteen outcome pairs and audit every algebraic identity."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    branches = []
    collapsed = {}
    for m in range(4):
        for n in range(4):
            t = run_protocol(p, ForcedBranch(m, n))
            collapsed[m, n] = t.states["after_bob"]
            branches.append(
                BranchResult(m, n, t.p_m, t.p_n_given_m, t.correction, t.final_fidelity)
            )
    return VerificationReport(
        params=p,
        tol=tol,
        branches=tuple(branches),
        channel_residual=check_channel_decomposition(p),
        l_residuals=tuple(check_l_decomposition(m, p) for m in range(4)),
        table1_pass=check_table1(p, tol, collapsed).passed,
        basis_residual=basis_unitarity_suite(p),
    )


@dataclass
class SweepSummary:
    """Aggregate of many :class:`VerificationReport` objects."""

    tol: float
    parameter_sets: int = 0
    min_fidelity: float = 1.0
    min_p_suc: float = 1.0
    max_prob_deviation: float = 0.0
    max_channel_residual: float = 0.0
    max_l_residual: float = 0.0
    max_basis_residual: float = 0.0
    table1_pass: bool = True
    failures: list = field(default_factory=list)

    def add(self, report: VerificationReport) -> None:
        self.parameter_sets += 1
        self.min_fidelity = min(self.min_fidelity, report.min_fidelity)
        self.min_p_suc = min(self.min_p_suc, report.p_suc)
        self.max_prob_deviation = max(self.max_prob_deviation, report.max_prob_deviation)
        self.max_channel_residual = max(self.max_channel_residual, report.channel_residual)
        self.max_l_residual = max(self.max_l_residual, *report.l_residuals)
        self.max_basis_residual = max(self.max_basis_residual, report.basis_residual)
        self.table1_pass = self.table1_pass and report.table1_pass
        reasons = report.failures()
        if reasons:
            p = report.params
            bad = [(b.m, b.n) for b in report.branches if b.fidelity < 1 - self.tol]
            self.failures.append(
                {
                    "params": {"a": p.a, "b": p.b, "c": p.c, "d": p.d, "theta": list(p.thetas)},
                    "branches": [list(mn) for mn in bad],
                    "reasons": reasons,
                }
            )

    @property
    def passed(self) -> bool:
        return self.parameter_sets > 0 and not self.failures

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tol,
            "parameter_sets": self.parameter_sets,
            "min_fidelity": self.min_fidelity,
            "p_suc": self.min_p_suc,
            "max_prob_deviation": self.max_prob_deviation,
            "max_channel_residual": self.max_channel_residual,
            "max_l_residual": self.max_l_residual,
            "max_basis_residual": self.max_basis_residual,
            "table1_pass": self.table1_pass,
            "failures": self.failures,
            "passed": self.passed,
        }


def sweep(params: Iterable[TargetParams], tol: float = DEFAULT_TOL) -> SweepSummary:
    summary = SweepSummary(tol)
    for p in params:
        summary.add(enumerate_branches(p, tol))
    return summary
