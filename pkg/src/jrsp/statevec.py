"""Dense state-vector engine over labelled qubit registers.

A :class:`StateVector` pairs a complex amplitude array with an ordered tuple
of qubit labels. The first label is the most significant bit of the amplitude
index, so ``a|0011>`` on labels ``(3, 7, 6, 8)`` sits at index ``0b0011``.

All operations are pure: they return new states and never touch their inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

from . import kernels

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
IMPOSSIBLE_PROB = 1e-15
MAX_QUBITS = 12


class JRSPError(ValueError):
    """Base class for every error raised by this package."""


class LabelCollision(JRSPError):
    pass


class UnknownQubit(JRSPError):
    pass


class NotUnitary(JRSPError):
    pass


class NotNormalized(JRSPError):
    pass


class SameQubit(JRSPError):
    pass


class ImpossibleOutcome(JRSPError):
    pass


class RegisterMismatch(JRSPError):
    pass


class BadPermutation(JRSPError):
    pass


class BadOutcomeIndex(JRSPError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over an ordered register of labelled qubits."""

    amplitudes: np.ndarray
    labels: tuple

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        labels = tuple(self.labels)
        n = len(labels)
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"register must hold 1..{MAX_QUBITS} qubits, got {n}")
        if len(set(labels)) != n:
            raise LabelCollision(f"duplicate labels in {labels}")
        if amps.shape[0] != 1 << n:
            raise ValueError(f"{amps.shape[0]} amplitudes for {n} qubits")
        norm2 = float(np.vdot(amps, amps).real)
        # any NaN or infinite amplitude makes the squared norm non-finite
        if not math.isfinite(norm2):
            raise ValueError("amplitudes must be finite")
        if abs(norm2 - 1.0) >= NORM_TOL:
            raise NotNormalized(f"squared norm {norm2!r} deviates from 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def _wrap(cls, amps: np.ndarray, labels: tuple) -> "StateVector":
        # kernel outputs are fresh arrays over an already validated register
        norm2 = float(np.vdot(amps, amps).real)
        if not abs(norm2 - 1.0) < NORM_TOL:
            raise NotNormalized(f"squared norm {norm2!r} deviates from 1")
        amps.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitudes", amps)
        object.__setattr__(obj, "labels", labels)
        return obj

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def position(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownQubit(f"qubit {label!r} not in register {self.labels}") from None

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis ket written as a bit string in label order."""
        if len(bits) != self.num_qubits:
            raise ValueError(f"expected {self.num_qubits} bits, got {bits!r}")
        return complex(self.amplitudes[int(bits, 2)])

    def __repr__(self):
        terms = [
            f"({a.real:+.6f}{a.imag:+.6f}j)|{i:0{self.num_qubits}b}>"
            for i, a in enumerate(self.amplitudes)
            if abs(a) > 1e-12
        ]
        return f"StateVector(labels={self.labels}, {' + '.join(terms)})"


@dataclass(frozen=True)
class Sample:
    """Draw the measurement outcome from the exact distribution."""

    seed: int | None = None


@dataclass(frozen=True)
class Forced:
    """Take the given outcome and report its exact probability."""

    outcome: int


def basis_state(bits: str, labels: Sequence[Hashable]) -> StateVector:
    amps = np.zeros(1 << len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps, tuple(labels))


def ghz(labels: Sequence[Hashable]) -> StateVector:
    """(|0...0> + |1...1>) / sqrt(2) on the given labels."""
    amps = np.zeros(1 << len(labels), dtype=np.complex128)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(amps, tuple(labels))


def tensor(s1: StateVector, s2: StateVector) -> StateVector:
    overlap = set(s1.labels) & set(s2.labels)
    if overlap:
        raise LabelCollision(f"labels {sorted(overlap, key=str)} appear in both factors")
    if s1.num_qubits + s2.num_qubits > MAX_QUBITS:
        raise ValueError(f"product would exceed {MAX_QUBITS} qubits")
    amps = np.outer(s1.amplitudes, s2.amplitudes).reshape(-1)
    return StateVector._wrap(amps, s1.labels + s2.labels)


@lru_cache(maxsize=4096)
def _unitarity_defect(raw: bytes, dim: int) -> float:
    m = np.frombuffer(raw, dtype=np.complex128).reshape(dim, dim)
    return float(np.max(np.abs(m @ m.conj().T - np.eye(dim))))


def check_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``matrix`` as complex128, raising :class:`NotUnitary` if it is not."""
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {m.shape}")
    dev = _unitarity_defect(m.tobytes(), m.shape[0])
    if not dev < tol:
        raise NotUnitary(f"max |M M^dagger - I| entry is {dev:.3e}")
    return m


def apply_one_qubit(state: StateVector, qubit: Hashable, gate) -> StateVector:
    pos = state.position(qubit)
    g = check_unitary(gate)
    if g.shape != (2, 2):
        raise NotUnitary(f"single-qubit gate must be 2x2, got {g.shape}")
    out = kernels.apply_1q(state.amplitudes, state.num_qubits, pos, g)
    return StateVector._wrap(out, state.labels)


def apply_cnot(state: StateVector, control: Hashable, target: Hashable) -> StateVector:
    if control == target:
        raise SameQubit(f"control and target are both {control!r}")
    cpos, tpos = state.position(control), state.position(target)
    out = kernels.apply_cnot(state.amplitudes, state.num_qubits, cpos, tpos)
    return StateVector._wrap(out, state.labels)


def permute(state: StateVector, new_label_order: Sequence[Hashable]) -> StateVector:
    order = tuple(new_label_order)
    if len(order) != state.num_qubits or set(order) != set(state.labels):
        raise BadPermutation(f"{order} is not a permutation of {state.labels}")
    if order == state.labels:
        return state
    perm = [state.labels.index(lbl) for lbl in order]
    out = kernels.permute(state.amplitudes, state.num_qubits, perm)
    return StateVector._wrap(out, order)


def fidelity(s1: StateVector, s2: StateVector) -> float:
    """|<s1|s2>|^2; both registers must list the same labels in the same order."""
    if s1.labels != s2.labels:
        raise RegisterMismatch(f"registers differ: {s1.labels} vs {s2.labels}")
    f = abs(np.vdot(s1.amplitudes, s2.amplitudes)) ** 2
    return float(min(f, 1.0))


def _basis_rows(basis) -> np.ndarray:
    rows = getattr(basis, "matrix", basis)
    return check_unitary(rows)


def _projection(state: StateVector, pos_a: int, pos_b: int, row: np.ndarray) -> np.ndarray:
    bra = np.ascontiguousarray(row.conj())
    return kernels.project_pair(state.amplitudes, state.num_qubits, pos_a, pos_b, bra)


def outcome_probabilities(state: StateVector, pair, basis) -> np.ndarray:
    """Exact probabilities of the four outcomes of measuring ``pair`` in ``basis``."""
    rows = _basis_rows(basis)
    pos_a, pos_b = _pair_positions(state, pair)
    probs = np.empty(4)
    for k in range(4):
        r = _projection(state, pos_a, pos_b, rows[k])
        probs[k] = np.vdot(r, r).real
    return probs


def _pair_positions(state: StateVector, pair) -> tuple[int, int]:
    qa, qb = pair
    if qa == qb:
        raise SameQubit(f"cannot measure qubit {qa!r} twice")
    if state.num_qubits < 3:
        raise ValueError("a pair measurement must leave at least one qubit")
    return state.position(qa), state.position(qb)


def _draw(probs: np.ndarray, rng: np.random.Generator) -> int:
    u = rng.random()
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    k = min(k, 3)
    # never land on a zero-probability outcome through rounding at the CDF tail
    while probs[k] < IMPOSSIBLE_PROB:
        k -= 1
    return k


def measure_pair(state: StateVector, pair, basis, policy, rng=None):
    """Projectively measure two qubits in a four-row orthonormal basis.

    ``basis`` is a 4x4 unitary (or anything with a ``matrix`` attribute) whose
    row ``k`` is the ket for outcome ``k``, indexed by ``2 * bit_a + bit_b``.
    ``policy`` is :class:`Sample` or :class:`Forced`. For :class:`Sample` an
    explicit ``rng`` takes precedence over the policy seed, so several
    measurements can share one generator.

    Returns ``(outcome, probability, post_state)`` where ``post_state`` is the
    renormalized residual on the unmeasured qubits.
    """
    rows = _basis_rows(basis)
    if rows.shape != (4, 4):
        raise NotUnitary(f"pair basis must be 4x4, got {rows.shape}")
    pos_a, pos_b = _pair_positions(state, pair)
    rest = tuple(l for i, l in enumerate(state.labels) if i not in (pos_a, pos_b))

    if isinstance(policy, Forced):
        k = policy.outcome
        if k not in (0, 1, 2, 3):
            raise BadOutcomeIndex(f"outcome must be 0..3, got {k!r}")
        residual = _projection(state, pos_a, pos_b, rows[k])
    elif isinstance(policy, Sample):
        if rng is None:
            rng = np.random.default_rng(policy.seed)
        residuals = [_projection(state, pos_a, pos_b, rows[j]) for j in range(4)]
        probs = np.array([np.vdot(r, r).real for r in residuals])
        k = _draw(probs, rng)
        residual = residuals[k]
    else:
        raise TypeError(f"unknown measurement policy {policy!r}")

    prob = float(np.vdot(residual, residual).real)
    if prob < IMPOSSIBLE_PROB:
        raise ImpossibleOutcome(f"outcome {k} has probability {prob:.3e}")
    post = StateVector._wrap(residual / np.sqrt(prob), rest)
    return k, prob, post
