"""Backend selection for the numerical kernels.

The compiled extension is used when it has been built; setting
``QORTHO_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _pykernels

if os.environ.get("QORTHO_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

phi_sum = _impl.phi_sum
recurrence_table = _impl.recurrence_table
log_qpoch_inf = _impl.log_qpoch_inf
gram_accumulate = _impl.gram_accumulate

__all__ = ["BACKEND", "phi_sum", "recurrence_table", "log_qpoch_inf", "gram_accumulate"]
