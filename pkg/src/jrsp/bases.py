"""Closed-form states, measurement bases and corrections of the protocol.

Qubit labels follow the protocol's numbering: the channel is two GHZ triples
on (1, 2, 3) and (4, 5, 6); Alice holds 1 and 4, Bob 2 and 5, Charlie 3 and 6
plus the ancillas 7 and 8.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .statevec import (
    BadOutcomeIndex,
    NotUnitary,
    StateVector,
    apply_one_qubit,
    check_unitary,
    ghz,
    tensor,
)

PARAM_TOL = 1e-12
TWO_PI = 2 * math.pi

CHANNEL_LABELS = (1, 2, 3, 4, 5, 6)
ALICE_PAIR = (1, 4)
BOB_PAIR = (2, 5)
CHARLIE_PAIR = (3, 6)
L_LABELS = (2, 5, 3, 6)
TARGET_LABELS = (3, 7, 6, 8)

# sign pattern shared by every G^(m); column phases are chosen per outcome m
_BOB_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
        [1, 1, -1, -1],
    ],
    dtype=float,
)


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class TargetParams:
    """Real amplitudes ``a, b, c, d`` and phases ``theta1..3`` of the target.

    Phases are canonicalized into ``[0, 2*pi)``.
    """

    a: float
    b: float
    c: float
    d: float
    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0

    def __post_init__(self):
        values = [self.a, self.b, self.c, self.d, self.theta1, self.theta2, self.theta3]
        if not all(math.isfinite(v) for v in values):
            raise InvalidParams(f"parameters must be finite, got {values}")
        norm2 = self.a**2 + self.b**2 + self.c**2 + self.d**2
        if abs(norm2 - 1.0) >= PARAM_TOL:
            raise InvalidParams(f"a^2+b^2+c^2+d^2 = {norm2!r}, expected 1")
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("theta1", "theta2", "theta3"):
            t = float(getattr(self, name)) % TWO_PI
            # x % 2pi can round up to exactly 2pi for tiny negative x
            object.__setattr__(self, name, 0.0 if t >= TWO_PI else t)

    @classmethod
    def normalized(cls, coeffs, phases=(0.0, 0.0, 0.0)) -> "TargetParams":
        """Build params after rescaling ``coeffs`` to unit norm."""
        v = np.asarray(coeffs, dtype=float)
        if v.shape != (4,):
            raise InvalidParams(f"need four coefficients, got {len(v)}")
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.0:
            raise InvalidParams(f"coefficients {tuple(coeffs)} cannot be normalized")
        a, b, c, d = (v / norm).tolist()
        return cls(a, b, c, d, *phases)

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def thetas(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def phased(self) -> np.ndarray:
        """``(a, b e^{i theta1}, c e^{i theta2}, d e^{i theta3})``, read-only."""
        cached = self.__dict__.get("_phased")
        if cached is None:
            cached = self._compute_phased()
            cached.flags.writeable = False
            self.__dict__["_phased"] = cached
        return cached

    def _compute_phased(self) -> np.ndarray:
        return np.array(
            [
                self.a,
                self.b * np.exp(1j * self.theta1),
                self.c * np.exp(1j * self.theta2),
                self.d * np.exp(1j * self.theta3),
            ],
            dtype=np.complex128,
        )


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Four orthonormal two-qubit kets, one per row of ``matrix``.

    Row ``k`` is the ket for outcome ``k`` written over ``|00>, |01>, |10>,
    |11>``. ``owner`` is ``"Alice"`` or ``"Bob"``; Bob's bases also carry the
    Alice outcome ``m`` they were built for.
    """

    matrix: np.ndarray
    owner: str
    m: int | None = None

    def __post_init__(self):
        mat = check_unitary(self.matrix)
        if mat.shape != (4, 4):
            raise NotUnitary(f"two-qubit basis must be 4x4, got {mat.shape}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def row(self, k: int) -> np.ndarray:
        return self.matrix[_check_index(k)]


PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class PauliCorrection:
    """Receiver's Pauli products on qubits 3 and 6.

    Each tuple reads as an operator product, so ``("Z", "X")`` applies X first
    and then Z.
    """

    ops_q3: tuple[str, ...]
    ops_q6: tuple[str, ...]

    def __post_init__(self):
        for ops in (self.ops_q3, self.ops_q6):
            if not 1 <= len(ops) <= 2 or any(op not in PAULI for op in ops):
                raise ValueError(f"bad Pauli product {ops!r}")

    def matrix(self, which: int) -> np.ndarray:
        ops = {3: self.ops_q3, 6: self.ops_q6}[which]
        out = PAULI["I"]
        for op in ops:
            out = out @ PAULI[op]
        return out

    def apply(self, state: StateVector) -> StateVector:
        for label, ops in ((3, self.ops_q3), (6, self.ops_q6)):
            for op in reversed(ops):
                if op != "I":
                    state = apply_one_qubit(state, label, PAULI[op])
        return state

    def __str__(self):
        return f"{''.join(self.ops_q3)}_3 (x) {''.join(self.ops_q6)}_6"


def _check_index(k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k <= 3:
        raise BadOutcomeIndex(f"outcome index must be 0..3, got {k!r}")
    return int(k)


def target_state(p: TargetParams) -> StateVector:
    """The four-qubit cluster-type state on labels (3, 7, 6, 8)."""
    amps = np.zeros(16, dtype=np.complex128)
    amps[[0b0000, 0b0011, 0b1100, 0b1111]] = p.phased()
    return StateVector(amps, TARGET_LABELS)


@lru_cache(maxsize=None)
def channel_state() -> StateVector:
    return tensor(ghz((1, 2, 3)), ghz((4, 5, 6)))


@lru_cache(maxsize=256)
def alice_basis(p: TargetParams) -> MeasurementBasis:
    a, b, c, d = p.coeffs
    u = np.array(
        [
            [a, b, c, d],
            [b, -a, d, -c],
            [c, -d, -a, b],
            [d, c, -b, -a],
        ]
    )
    return MeasurementBasis(u, "Alice")


@lru_cache(maxsize=1024)
def bob_basis(m: int, p: TargetParams) -> MeasurementBasis:
    """Bob's phase basis for Alice's outcome ``m``.

    Only the phases of ``p`` are read. Column ``k`` carries ``e^{-i theta_j}``
    with ``j = m XOR k`` and ``theta_0 = 0``.
    """
    m = _check_index(m)
    phases = np.exp(-1j * np.array((0.0,) + p.thetas))
    cols = [m ^ k for k in range(4)]
    return MeasurementBasis(0.5 * _BOB_SIGNS * phases[cols], "Bob", m)


# |L_m> on (2, 5, 3, 6): coefficient on each of |0000>, |0101>, |1010>, |1111>
# given as (sign, index into (a, b, c, d))
_L_TABLE = {
    0: ((+1, 0), (+1, 1), (+1, 2), (+1, 3)),
    1: ((+1, 1), (-1, 0), (+1, 3), (-1, 2)),
    2: ((+1, 2), (-1, 3), (-1, 0), (+1, 1)),
    3: ((+1, 3), (+1, 2), (-1, 1), (-1, 0)),
}


def l_state(m: int, p: TargetParams) -> StateVector:
    """Residual of Bob's and Charlie's qubits after Alice reports ``m``."""
    coeffs = p.coeffs
    amps = np.zeros(16, dtype=np.complex128)
    for idx, (sign, j) in zip((0b0000, 0b0101, 0b1010, 0b1111), _L_TABLE[_check_index(m)]):
        amps[idx] = sign * coeffs[j]
    return StateVector(amps, L_LABELS)


# |D_mn> on (3, 6) over |00>, |01>, |10>, |11>, as (sign, index into the
# phased amplitudes (a, b', c', d'))
_D_TABLE = {
    (0, 0): ((+1, 0), (+1, 1), (+1, 2), (+1, 3)),
    (0, 1): ((+1, 0), (-1, 1), (+1, 2), (-1, 3)),
    (0, 2): ((+1, 0), (-1, 1), (-1, 2), (+1, 3)),
    (0, 3): ((+1, 0), (+1, 1), (-1, 2), (-1, 3)),
    (1, 0): ((+1, 1), (-1, 0), (+1, 3), (-1, 2)),
    (1, 1): ((+1, 1), (+1, 0), (+1, 3), (+1, 2)),
    (1, 2): ((+1, 1), (+1, 0), (-1, 3), (-1, 2)),
    (1, 3): ((+1, 1), (-1, 0), (-1, 3), (+1, 2)),
    (2, 0): ((+1, 2), (-1, 3), (-1, 0), (+1, 1)),
    (2, 1): ((+1, 2), (+1, 3), (-1, 0), (-1, 1)),
    (2, 2): ((+1, 2), (+1, 3), (+1, 0), (+1, 1)),
    (2, 3): ((+1, 2), (-1, 3), (+1, 0), (-1, 1)),
    (3, 0): ((+1, 3), (+1, 2), (-1, 1), (-1, 0)),
    (3, 1): ((+1, 3), (-1, 2), (-1, 1), (+1, 0)),
    (3, 2): ((+1, 3), (-1, 2), (+1, 1), (-1, 0)),
    (3, 3): ((+1, 3), (+1, 2), (+1, 1), (+1, 0)),
}

_R_TABLE = {
    (0, 0): ("I", "I"),
    (0, 1): ("I", "Z"),
    (0, 2): ("Z", "Z"),
    (0, 3): ("Z", "I"),
    (1, 0): ("I", "ZX"),
    (1, 1): ("I", "X"),
    (1, 2): ("Z", "X"),
    (1, 3): ("Z", "ZX"),
    (2, 0): ("ZX", "Z"),
    (2, 1): ("ZX", "I"),
    (2, 2): ("X", "I"),
    (2, 3): ("X", "Z"),
    (3, 0): ("ZX", "X"),
    (3, 1): ("ZX", "ZX"),
    (3, 2): ("X", "ZX"),
    (3, 3): ("X", "X"),
}


def d_state(m: int, n: int, p: TargetParams) -> StateVector:
    """Charlie's pair (3, 6) once Alice reported ``m`` and Bob ``n``."""
    key = (_check_index(m), _check_index(n))
    phased = p.phased()
    amps = np.array([sign * phased[j] for sign, j in _D_TABLE[key]])
    return StateVector(amps, CHARLIE_PAIR)


def intermediate_target(p: TargetParams) -> StateVector:
    return StateVector(p.phased(), CHARLIE_PAIR)


_CORRECTIONS = {key: PauliCorrection(tuple(q3), tuple(q6)) for key, (q3, q6) in _R_TABLE.items()}


def correction(m: int, n: int) -> PauliCorrection:
    return _CORRECTIONS[(_check_index(m), _check_index(n))]
