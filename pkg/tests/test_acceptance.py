"""Acceptance criteria 1-10, each at its stated tolerance and runtime budget.

Every test prints one summary line (visible with ``pytest -s`` or in the
captured output of ``pytest -v``), e.g.

    [criterion  3] PASS  functional equation of additive twists  20/20  worst 3.1e-15  (0.1 s / 10 s)
"""

import time

import pytest

from shiftconv import verify

pytestmark = pytest.mark.slow

CRITERIA = [
    (1, "Kloosterman route vs closed form (classical coefficients)", verify.check_lemma, 30),
    (2, "double Dirichlet series: direct vs c-sum", verify.check_dds_routes, 120),
    (3, "functional equation of additive twists", verify.check_functional_equation, 10),
    (4, "modular symbols: Lambda route vs Eichler integral", verify.check_modular_symbols, 10),
    (5, "Hecke identity and Ramanujan bound", verify.check_hecke, 5),
    (6, "Euler-ratio identity", verify.check_euler_ratio, 30),
    (7, "phi*(-1, 3): c-sum vs Fourier extraction of E*", verify.check_theorem_chain, 600),
    (8, "completion E* = G - F E and automorphy", verify.check_completion, 120),
    (9, "K-transform closed form and scaling", verify.check_k_transform, 30),
    (10, "weighted-sum decomposition", verify.check_decomposition, 120),
]


def _worst(reports):
    return max(reports, key=lambda r: r.abs_diff / r.tolerance if r.tolerance else (0 if r.abs_diff == 0 else 1e300))


@pytest.mark.parametrize("number,title,check,budget", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, budget, capsys):
    start = time.perf_counter()
    reports = check()
    elapsed = time.perf_counter() - start
    passed = sum(r.passed for r in reports)
    ok = passed == len(reports) and elapsed <= budget
    w = _worst(reports)
    line = (f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {passed}/{len(reports)}  "
            f"worst {w.abs_diff:.1e} (tol {w.tolerance:.1e}, {w.identity_id})  ({elapsed:.1f} s / {budget} s)")
    with capsys.disabled():
        print("\n" + line)
    failing = [f"{r.identity_id}: |diff| {r.abs_diff:.3e} > {r.tolerance:.3e}" for r in reports if not r.passed]
    assert not failing, "\n".join(failing)
    assert elapsed <= budget, f"runtime {elapsed:.1f} s over the {budget} s budget"
