import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qortho import _pykernels as P

try:
    from qortho import _ckernels as C
except ImportError:  # extension not built
    C = None

needs_c = pytest.mark.skipif(C is None, reason="compiled kernels not built")
reals = st.floats(-2, 2, allow_nan=False)


@needs_c
@settings(max_examples=200)
@given(num=st.lists(reals, max_size=3), den=st.lists(st.floats(-0.9, 0.9), max_size=2),
       pair=st.tuples(reals, reals), z=reals, n=st.integers(0, 12), q=st.sampled_from([0.3, 0.5, 0.8]),
       balance=st.integers(-2, 2))
def test_phi_sum_agrees(num, den, pair, z, n, q, balance):
    args = (num, den, [pair], [], z, n, q, balance)
    s_py, a_py = P.phi_sum(*args)
    s_c, a_c = C.phi_sum(*args)
    assert abs(s_py - s_c) <= 4e-16 * a_py
    assert a_c == pytest.approx(a_py, rel=1e-14, abs=1e-300)


@needs_c
@given(x=st.lists(st.floats(-3, 3), min_size=1, max_size=8), seed=st.integers(0, 2**32 - 1))
def test_recurrence_table_bitwise(x, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.5, 2, 15)
    b = rng.uniform(-1, 1, 15)
    c = rng.uniform(-1, 1, 15)
    np.testing.assert_array_equal(P.recurrence_table(np.array(x), a, b, c), C.recurrence_table(np.array(x), a, b, c))


@needs_c
@pytest.mark.parametrize("a", [-3.0, -0.5, 0.0, 0.3, 0.9, 2.5, 4.0])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.95])
def test_log_qpoch_inf_agrees(a, q):
    py = P.log_qpoch_inf(a, q, 1e-12, 4096)
    c = C.log_qpoch_inf(a, q, 1e-12, 4096)
    # sign, factors used and convergence flag match exactly
    assert (py[1], py[3], py[4]) == (c[1], c[3], c[4])
    assert c[2] == pytest.approx(py[2], rel=1e-12, abs=1e-300)
    if math.isfinite(py[0]):
        assert c[0] == pytest.approx(py[0], rel=1e-14, abs=1e-15)


@needs_c
def test_gram_accumulate_agrees():
    rng = np.random.default_rng(7)
    log_w = rng.uniform(-40, 5, 200)
    sign_w = rng.choice([-1.0, 1.0], 200)
    vals = rng.normal(size=(200, 6)) * np.exp(rng.uniform(-5, 5, (200, 1)))
    Gp, Ap = P.gram_accumulate(log_w, sign_w, vals)
    Gc, Ac = C.gram_accumulate(log_w, sign_w, vals)
    assert np.all(np.abs(Gp - Gc) <= 4e-16 * Ap)
    np.testing.assert_allclose(Ac, Ap, rtol=1e-14)


def test_phi_sum_pole():
    with pytest.raises(ZeroDivisionError):
        P.phi_sum([0.25], [2.0], [], [], 0.5, 2, 0.5, 0)
    if C is not None:
        with pytest.raises(ZeroDivisionError):
            C.phi_sum([0.25], [2.0], [], [], 0.5, 2, 0.5, 0)


def test_log_qpoch_inf_nonconvergent():
    *_, used, ok = P.log_qpoch_inf(10.0, 0.999, 1e-12, 64)
    assert not ok and used == 64


def test_pure_python_switch():
    env = dict(os.environ, QORTHO_PURE_PYTHON="1")
    code = "import qortho.kernels as k, qortho._pykernels as p; print(k.BACKEND, k.phi_sum is p.phi_sum)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split() == ["python", "True"]


def test_pure_python_cli_matches():
    argv = [sys.executable, "-m", "qortho", "gram", "--relation", "c-full", "--no-timestamp"]
    env = dict(os.environ, QORTHO_PURE_PYTHON="1")
    runs = [json.loads(subprocess.run(argv, env=e, capture_output=True, text=True, check=True).stdout)
            for e in (None, env)]
    assert runs[1]["config"]["backend"] == "python"
    ra, rb = (r["results"][0] for r in runs)
    assert ra["pass"] and rb["pass"]
    np.testing.assert_allclose(np.diag(ra["entries"]), np.diag(rb["entries"]), rtol=1e-13)
