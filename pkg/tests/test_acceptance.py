"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL <summary>`` line
straight to the terminal (also when pytest captures output), so a plain
``pytest -v`` log records the verdicts. Run this file directly for the
nine lines alone.
"""
import subprocess
import sys
import time

import mpmath as mp
import pytest

from qortho.identities import (
    check_cross_method,
    check_favard,
    check_favard_outside,
    check_limit_grid,
    check_mixed_parity,
    check_normalization_witness,
    check_parity,
    run_identity,
)
from qortho.ortho import RELATION_IDS, default_grid, default_nmax, default_tol, gram, make_relation, verify
from qortho.qcore import QContext

QS = (0.3, 0.5, 0.8)


@pytest.fixture
def report(request, capsys):
    def emit(ok: bool, summary: str):
        n = request.node.name.split("_")[1]
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {summary}")
        assert ok, summary

    return emit


def test_1_qbinomial_oracle(report):
    worst = 0.0
    cases = 0
    for q in QS:
        for alpha in (0.5, 1.5, 3.0):
            if not alpha < q**-2:
                continue
            g00 = gram(make_relation("c-even", {"alpha": alpha}, QContext(q)), 0).entries[0][0]
            Q = mp.mpf(q)
            closed = mp.qp(alpha * Q**3, Q * Q) / mp.qp(Q, Q * Q)
            worst = max(worst, abs(g00 / float(closed) - 1))
            cases += 1
    report(worst <= 1e-10, f"c-even k=0 diagonal vs (alpha q^3; q^2)_inf / (q; q^2)_inf: "
                           f"max rel err {worst:.2e} over {cases} (q, alpha) points")


def test_2_orthogonality_suite(report):
    failed = []
    worst = {}
    runs = 0
    for q in QS:
        for rid in RELATION_IDS:
            for params in default_grid(rid, q):
                rep = verify(make_relation(rid, params, QContext(q)), default_nmax(rid), default_tol(rid))
                runs += 1
                worst[rid] = max(worst.get(rid, 0.0), rep.max_offdiag_rel, rep.max_diag_rel_err)
                if not rep.passed:
                    failed.append((q, rep.relation, params))
    top = max(worst, key=worst.get)
    report(not failed, f"{runs} Gram runs over {len(RELATION_IDS)} relations x 3 params x q in {QS}; "
                       f"{len(failed)} failed; largest deviation {worst[top]:.2e} ({top})")


def test_3_normalization_witness(report):
    parts = []
    ok = True
    for tilde, rid in ((False, "c-full"), (True, "ct-full")):
        w = check_normalization_witness(0.5, 0.5, 8, tilde=tilde)
        corrected = verify(make_relation(rid, {"alpha": 0.5}, QContext(0.5)), 8, 1e-8)
        ratios = w.details["printed_ratio"]
        ok = ok and w.passed and corrected.passed
        parts.append(f"{rid}: printed ratio in [{min(ratios):.9f}, {max(ratios):.9f}], "
                     f"corrected diag err {corrected.max_diag_rel_err:.1e}")
    report(ok, "; ".join(parts))


def test_4_identity_suite(report):
    runs = [("prop1", {"alpha": 0.5}), ("prop2", {"alpha": 0.5}), ("singh15", {}), ("eq16", {}),
            ("eq19", {"alpha": 0.5}), ("lattice39", {"a": 1.0, "d": 0.5})]
    runs += [("eq36", {"a": 0.8, "c_shift": c}) for c in (0.5, 1.0, 1.3, 2.0)]
    worst, bad = 0.0, []
    for iid, opts in runs:
        r = run_identity(iid, 0.5, **opts)
        worst = max(worst, r.residual)
        if not r.residual <= 1e-9:
            bad.append(iid)
    report(not bad, f"{len(runs)} identity runs at q=0.5, max residual {worst:.2e}, failing: {bad or 'none'}")


def test_5_cross_method(report):
    worst = 0.0
    for q in QS:
        r = check_cross_method(q, 12)
        worst = max(worst, r.residual)
    report(worst <= 1e-10, f"series vs recurrence for c, ctilde, d, dtilde, qmp, n <= 12, q in {QS}: "
                           f"max rel dev {worst:.2e}")


def test_6_favard(report):
    q = 0.5
    checks = [check_favard("c", g["alpha"], q, 200) for g in default_grid("c-even", q)]
    checks += [check_favard("ctilde", al, q, 200) for al in (0.5, 2.0, 10.0)]
    checks += [check_favard("qmp", a, q, 200) for a in (-3.0, 0.5, 5.0)]
    outside = check_favard("c", 1.01 * q**-2, q, 200)
    ok = all(c.passed for c in checks) and not outside.passed and check_favard_outside(q).passed
    report(ok, f"{sum(c.passed for c in checks)}/{len(checks)} in-domain cases positive for n <= 200; "
               f"alpha = 1.01 q^-2 fails first at n = {outside.details['first_violation']}")


def test_7_limit(report):
    t0 = time.perf_counter()
    r = check_limit_grid()
    dt = time.perf_counter() - t0
    last = max(e[-1] for e in r.details["errors"].values())
    report(r.passed, f"{r.cases} (n, alpha_exp, x) points, monotone decrease along q = 0.9, 0.99, 0.999, "
                     f"max error at 0.999 = {last:.2e}; runtime {dt:.3f} s")


def test_8_parity(report):
    par = max(check_parity(al, q).residual for q in QS for al in (0.5, 1.5))
    mixed = [check_mixed_parity(0.5, 0.5, 8, tilde=t) for t in (False, True)]
    canc = max(m.details["cancellation_residual"] for m in mixed)
    wit = min(m.details["single_sign_witness"] for m in mixed)
    ok = par <= 1e-12 and canc <= 1e-12 and wit > 1e-3
    report(ok, f"parity residual {par:.1e}, signed even-odd cancellation {canc:.1e}, "
               f"single-sign witness {wit:.3f} (> 1e-3)")


def test_9_determinism(report):
    argv = [sys.executable, "-m", "qortho", "report", "--all", "--no-timestamp"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    same = a.stdout == b.stdout and len(a.stdout) > 0
    report(same and a.returncode == 0, f"two report --all runs: {len(a.stdout)} bytes, identical={same}, "
                                       f"exit {a.returncode}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
