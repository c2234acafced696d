"""Pure numpy implementation of the state-vector kernels.

Every kernel takes a contiguous complex128 amplitude vector over ``n`` qubits
and refers to qubits by *position*, where position 0 is the most significant
bit of the amplitude index. Inputs are never modified.
"""
import numpy as np


def apply_1q(amps, n, pos, gate):
    psi = amps.reshape((2,) * n)
    out = np.tensordot(gate, psi, axes=([1], [pos]))
    return np.ascontiguousarray(np.moveaxis(out, 0, pos)).reshape(-1)


def apply_cnot(amps, n, cpos, tpos):
    psi = amps.reshape((2,) * n).copy()
    idx = [slice(None)] * n
    idx[cpos] = 1
    sub = psi[tuple(idx)]
    # control axis removed, so the target axis shifts left when it sat after it
    t = tpos - 1 if tpos > cpos else tpos
    psi[tuple(idx)] = np.flip(sub, axis=t)
    return psi.reshape(-1)


def project_pair(amps, n, pos_a, pos_b, bra):
    """Contract positions ``pos_a``, ``pos_b`` with the 4-vector ``bra``.

    ``bra`` is indexed as ``2 * bit_a + bit_b`` and is used as given (callers
    pass the conjugated basis row). The result lives on the remaining
    ``n - 2`` qubits in their original relative order.
    """
    psi = amps.reshape((2,) * n)
    out = np.tensordot(bra.reshape(2, 2), psi, axes=([0, 1], [pos_a, pos_b]))
    return np.ascontiguousarray(out).reshape(-1)


def permute(amps, n, perm):
    """Reorder qubits; new position ``j`` holds old position ``perm[j]``."""
    psi = amps.reshape((2,) * n)
    return np.ascontiguousarray(np.transpose(psi, perm)).reshape(-1)
