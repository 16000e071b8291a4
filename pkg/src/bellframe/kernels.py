"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``BELLFRAME_PURE_PYTHON=1`` before import to force the fallback.
Inputs outside the compiled limits (more than 64 histories, or total weight
too large for exact 64-bit products) always take the Python path.
"""

import os

from . import _kernels_py as python_impl

try:
    from . import _kernels as compiled_impl
except ImportError:  # extension not built
    compiled_impl = None

if compiled_impl is not None and os.environ.get("BELLFRAME_PURE_PYTHON") != "1":
    BACKEND = "cython"
    _impl = compiled_impl
else:
    BACKEND = "python"
    _impl = python_impl

_WEIGHT_LIMIT = 1 << 31


def _fits(weights):
    return len(weights) <= 64 and sum(weights) < _WEIGHT_LIMIT


def mask_weight(weights, mask):
    if _impl is python_impl or not _fits(weights):
        return python_impl.mask_weight(weights, mask)
    return _impl.mask_weight(weights, mask)


def refine(nbits, masks):
    if _impl is python_impl or nbits > 64 or len(masks) > 64:
        return python_impl.refine(nbits, masks)
    return _impl.refine(nbits, masks)


def screen(weights, conds, lefts, rights):
    if (_impl is python_impl or not _fits(weights)
            or len(lefts) > 64 or len(rights) > 64):
        return python_impl.screen(weights, conds, lefts, rights)
    return _impl.screen(weights, conds, lefts, rights)
