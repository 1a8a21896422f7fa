"""Selects the compiled kernels when available, else the pure-Python ones.

Set ``QUANTPDFA_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("QUANTPDFA_PURE_PYTHON"):
    from . import _pykernels as impl
else:
    try:
        from . import _ckernels as impl
    except ImportError:
        from . import _pykernels as impl

refine = impl.refine
hk_labels = impl.hk_labels
hk_tolerance = impl.hk_tolerance
first_far_row = impl.first_far_row
first_inconsistency = impl.first_inconsistency
BACKEND = impl.NAME
