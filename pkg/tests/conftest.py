import sys
from pathlib import Path

import pytest

from qortho import _pykernels, kernels

try:
    from qortho import _ckernels
except ImportError:  # extension not built
    _ckernels = None

sys.path.insert(0, str(Path(__file__).parent))

BACKENDS = ["python"] + (["cython"] if _ckernels is not None else [])
KERNEL_NAMES = ("phi_sum", "recurrence_table", "log_qpoch_inf", "gram_accumulate")


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    impl = _pykernels if request.param == "python" else _ckernels
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    monkeypatch.setattr(kernels, "BACKEND", request.param)
    return request.param
