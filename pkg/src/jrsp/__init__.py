"""Simulation and verification of deterministic joint remote preparation of a
four-qubit cluster-type state over two GHZ channels."""
from .bases import (
    InvalidParams,
    MeasurementBasis,
    PauliCorrection,
    TargetParams,
    alice_basis,
    bob_basis,
    channel_state,
    correction,
    d_state,
    intermediate_target,
    l_state,
    target_state,
)
from .kernels import BACKEND
from .protocol import ForcedBranch, ProtocolTranscript, ResourceLedger, run_protocol
from .statevec import Forced, JRSPError, Sample, StateVector, fidelity
from .verify import VerificationReport, enumerate_branches

__version__ = "0.1.0"
