"""The four-step joint remote preparation run by Alice, Bob and Charlie.

Alice measures qubits (1, 4) in a basis built from the real amplitudes and
tells Bob and Charlie her outcome ``m``. Bob measures (2, 5) in a phase basis
chosen by ``m`` and tells Charlie ``n``. Charlie applies the Pauli correction
for ``(m, n)`` to (3, 6), then copies both qubits onto fresh ancillas 7 and 8
with two CNOTs, ending with the target state on (3, 7, 6, 8).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import bases
from .bases import PauliCorrection, TargetParams
from .statevec import (
    BadOutcomeIndex,
    Forced,
    Sample,
    StateVector,
    apply_cnot,
    basis_state,
    fidelity,
    measure_pair,
    permute,
    tensor,
)

ANCILLAS = (7, 8)
CNOTS = ((3, 7), (6, 8))
BITS_PER_OUTCOME = 2


class Party(str, enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"
    CHARLIE = "Charlie"


@dataclass(frozen=True)
class ClassicalMessage:
    sender: Party
    receivers: tuple[Party, ...]
    payload: int

    def __post_init__(self):
        if self.payload not in (0, 1, 2, 3):
            raise BadOutcomeIndex(f"payload must be 0..3, got {self.payload!r}")

    @property
    def bit_cost(self) -> int:
        # a two-bit outcome is sent separately to every receiver
        return BITS_PER_OUTCOME * len(self.receivers)

    def to_dict(self) -> dict:
        return {
            "from": self.sender.value,
            "to": [r.value for r in self.receivers],
            "payload": self.payload,
            "bits": self.bit_cost,
        }


@dataclass(frozen=True)
class ResourceLedger:
    channel_qubits: int = 0
    ancilla_qubits: int = 0
    classical_bits: int = 0
    cnot_count: int = 0

    def __post_init__(self):
        if min(self.channel_qubits, self.ancilla_qubits, self.classical_bits, self.cnot_count) < 0:
            raise ValueError(f"negative resource count in {self}")

    @property
    def total_qubits(self) -> int:
        return self.channel_qubits + self.ancilla_qubits

    def to_dict(self) -> dict:
        return {
            "channel_qubits": self.channel_qubits,
            "ancilla_qubits": self.ancilla_qubits,
            "classical_bits": self.classical_bits,
            "cnot_count": self.cnot_count,
        }


@dataclass(frozen=True)
class ForcedBranch:
    """Force Alice's outcome ``m`` and Bob's outcome ``n``."""

    m: int
    n: int


class AliceResult(NamedTuple):
    m: int
    p_m: float
    residual: StateVector
    message: ClassicalMessage


class BobResult(NamedTuple):
    n: int
    p_n: float
    collapsed: StateVector
    message: ClassicalMessage


@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    params: TargetParams
    m: int
    n: int
    p_m: float
    p_n_given_m: float
    correction: PauliCorrection
    messages: tuple[ClassicalMessage, ...]
    states: dict = field(repr=False)
    ledger: ResourceLedger = field(default_factory=ResourceLedger)
    final_fidelity: float = 0.0
    seed: int | None = None

    @property
    def final_state(self) -> StateVector:
        return self.states["final"]

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {
                "a": p.a,
                "b": p.b,
                "c": p.c,
                "d": p.d,
                "theta": list(p.thetas),
            },
            "m": self.m,
            "n": self.n,
            "p_m": self.p_m,
            "p_n_given_m": self.p_n_given_m,
            "correction": {
                "q3": list(self.correction.ops_q3),
                "q6": list(self.correction.ops_q6),
            },
            "final_fidelity": self.final_fidelity,
            "ledger": self.ledger.to_dict(),
            "messages": [msg.to_dict() for msg in self.messages],
            "seed": self.seed,
        }


def step1_alice(state: StateVector, p: TargetParams, policy, rng=None) -> AliceResult:
    m, p_m, residual = measure_pair(state, bases.ALICE_PAIR, bases.alice_basis(p), policy, rng)
    msg = ClassicalMessage(Party.ALICE, (Party.BOB, Party.CHARLIE), m)
    return AliceResult(m, p_m, residual, msg)


def step2_bob(residual: StateVector, m: int, p: TargetParams, policy, rng=None) -> BobResult:
    basis = bases.bob_basis(m, p)
    n, p_n, collapsed = measure_pair(residual, bases.BOB_PAIR, basis, policy, rng)
    msg = ClassicalMessage(Party.BOB, (Party.CHARLIE,), n)
    return BobResult(n, p_n, collapsed, msg)


def step3_correct(collapsed: StateVector, m: int, n: int) -> StateVector:
    return bases.correction(m, n).apply(collapsed)


def step4_expand(t: StateVector) -> StateVector:
    """Copy (3, 6) onto fresh ancillas and return the register (3, 7, 6, 8)."""
    state = tensor(t, basis_state("00", ANCILLAS))
    for control, target in CNOTS:
        state = apply_cnot(state, control, target)
    return permute(state, bases.TARGET_LABELS)


def run_protocol(p: TargetParams, policy) -> ProtocolTranscript:
    """Execute all four steps.

    ``policy`` is :class:`~jrsp.statevec.Sample` (one generator seeded once
    drives both measurements) or :class:`ForcedBranch`.
    """
    if isinstance(policy, ForcedBranch):
        alice_policy, bob_policy, rng, seed = Forced(policy.m), Forced(policy.n), None, None
    elif isinstance(policy, Sample):
        seed = policy.seed
        alice_policy = bob_policy = policy
        rng = np.random.default_rng(seed)
    else:
        raise TypeError(f"unknown protocol policy {policy!r}")

    channel = bases.channel_state()
    alice = step1_alice(channel, p, alice_policy, rng)
    # Bob only learns m from Alice's message
    bob = step2_bob(alice.residual, alice.message.payload, p, bob_policy, rng)
    m, n = alice.message.payload, bob.message.payload
    corrected = step3_correct(bob.collapsed, m, n)
    final = step4_expand(corrected)

    messages = (alice.message, bob.message)
    ledger = ResourceLedger(
        channel_qubits=channel.num_qubits,
        ancilla_qubits=len(ANCILLAS),
        classical_bits=sum(msg.bit_cost for msg in messages),
        cnot_count=len(CNOTS),
    )
    states = {
        "channel": channel,
        "after_alice": alice.residual,
        "after_bob": bob.collapsed,
        "after_correction": corrected,
        "final": final,
    }
    return ProtocolTranscript(
        params=p,
        m=m,
        n=n,
        p_m=alice.p_m,
        p_n_given_m=bob.p_n,
        correction=bases.correction(m, n),
        messages=messages,
        states=states,
        ledger=ledger,
        final_fidelity=fidelity(final, bases.target_state(p)),
        seed=seed,
    )
