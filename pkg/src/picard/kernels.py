"""Kernel dispatch: compiled Cython module when importable, else pure Python.

Set ``PICARD_PURE_PYTHON=1`` to force the fallback.
"""
import os

from picard import _pykernels

if os.environ.get("PICARD_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from picard import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

compose_signed = _impl.compose_signed
closure = _impl.closure
mat_mul = _impl.mat_mul
mat_inv = _impl.mat_inv
scan_normalizer = _impl.scan_normalizer
