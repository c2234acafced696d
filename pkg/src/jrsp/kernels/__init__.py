"""State-vector kernels, compiled when available.

The Cython build is preferred; if it is missing (or ``JRSP_PURE_PYTHON`` is
set to a non-empty value) the numpy implementation is used instead. Both
expose ``apply_1q``, ``apply_cnot``, ``project_pair`` and ``permute`` with
identical semantics. ``BACKEND`` names the one in use.
"""
import os

from . import _pykernels

if os.environ.get("JRSP_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
project_pair = _impl.project_pair
permute = _impl.permute

__all__ = ["BACKEND", "apply_1q", "apply_cnot", "project_pair", "permute"]
