import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftconv.cuspform import (
    CuspFormCoefficients,
    divisor_count_table,
    eta_product_coeffs,
    eval_F,
    eval_f,
    hecke_identity_check,
    hecke_recursion_coeffs,
    qseries_terms_needed,
    ramanujan_bound_holds,
)
from shiftconv.lfun import _primes_upto, modular_symbol
from shiftconv.policy import PrecisionPolicy, TruncationError


def _eta_bruteforce(M):
    # q prod (1 - q^n)^2 (1 - q^{11n})^2 with plain Python integers
    poly = [0] * (M + 1)
    poly[0] = 1
    for n in range(1, M + 1):
        for step, power in ((n, 2), (11 * n, 2)):
            if step > M:
                continue
            for _ in range(power):
                for k in range(M, step - 1, -1):
                    poly[k] -= poly[k - step]
    return [0] + poly[:M]


def test_eta_matches_bruteforce():
    M = 300
    a = eta_product_coeffs(M)
    assert list(a.coeffs[: M + 1]) == _eta_bruteforce(M)


def test_small_coefficients(form):
    assert [form[n] for n in range(1, 13)] == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2]
    assert form[6] == form[2] * form[3]
    assert form[11] == 1 and form[121] == 1 and form[1331] == 1


def test_hecke_examples(form):
    assert hecke_identity_check(form, 2, 3)
    assert hecke_identity_check(form, 2, 2)
    assert form[4] == form[2] ** 2 - 2 * form[1]
    for k in range(1, 50):
        assert hecke_identity_check(form, 1, k)


def test_hecke_all_small_pairs(form):
    for m in range(1, 201):
        for n in range(1, 200 // m + 1):
            assert hecke_identity_check(form, m, n)


def test_level_condition_matters(form):
    # without (d, N) = 1 the identity fails at the level prime
    assert not hecke_identity_check(form, 11, 11, coprime_to_level=False)
    assert hecke_identity_check(form, 11, 11)


def test_out_of_range(form):
    with pytest.raises(IndexError):
        hecke_identity_check(form, 100, 100)


def test_ramanujan_bound(form):
    a = eta_product_coeffs(10_000)
    assert ramanujan_bound_holds(a)


def test_divisor_counts():
    d = divisor_count_table(100)
    for n in range(1, 101):
        assert d[n] == sum(1 for k in range(1, n + 1) if n % k == 0)


def test_hecke_recursion_backend_matches_eta(form):
    ap = {p: form[p] for p in _primes_upto(1000).tolist()}
    b = hecke_recursion_coeffs(11, ap, 1000)
    assert np.array_equal(b.coeffs[1:1001], form.coeffs[1:1001])


def test_csv_roundtrip(form):
    a = form.upto(50)
    b = CuspFormCoefficients.from_csv(a.to_csv(), level=11)
    assert np.array_equal(a.coeffs, b.coeffs)


def test_f_real_on_imaginary_axis(form):
    for y in (0.1, 0.5, 2.0):
        assert abs(eval_f(form, 1j * y).imag) < 1e-14


def test_periodicity(form):
    z = 0.3 + 0.8j
    assert abs(eval_f(form, z + 1) - eval_f(form, z)) < 1e-12
    assert abs(eval_F(form, z + 1) - eval_F(form, z)) < 1e-12


def test_fricke_sign(form):
    # measured: f(-1/(11 z)) = -11 z^2 f(z)
    for z in (0.1 + 0.4j, -0.2 + 0.35j):
        lhs = eval_f(form, -1 / (11 * z))
        assert abs(lhs + 11 * z * z * eval_f(form, z)) < 1e-11
    z0 = 1j / math.sqrt(11)
    ratio = eval_f(form, -1 / (11 * z0)) * (math.sqrt(11) * z0) ** -2 / eval_f(form, z0)
    assert abs(ratio + 1) < 1e-12


def test_F_decays(form):
    assert abs(eval_F(form, 50j)) < 1e-100


@pytest.mark.parametrize("z", [0.2 + 0.9j, -0.3 + 0.5j, 0.05 + 1.4j])
def test_eichler_difference_is_modular_symbol(form, z):
    g = (1, 0, 11, 1)
    gz = z / (11 * z + 1)
    diff = eval_F(form, gz) - eval_F(form, z)
    assert abs(diff - modular_symbol(form, g)) < 1e-9


def test_vectorized_eval(form):
    zs = np.array([0.1 + 0.3j, 0.2 + 1.0j, -0.4 + 0.05j])
    vec = eval_f(form, zs)
    assert np.allclose(vec, [eval_f(form, z) for z in zs], atol=1e-14)


def test_truncation_budget(form):
    tight = PrecisionPolicy(cutoff_qseries=1000)
    with pytest.raises(TruncationError):
        eval_f(form, 1e-4j, tight)
    with pytest.raises(ValueError):
        eval_f(form, 0.5 - 0.1j)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0))
def test_tail_budget_is_conservative(y):
    # compare the sharp truncation against twice as many terms
    eps = 1e-14
    M = qseries_terms_needed(y, eps, integrated=False)
    a = eta_product_coeffs(2 * M + 10)
    n = np.arange(M + 1, 2 * M + 11)
    tail = abs(np.sum(a.coeffs[n] * np.exp(-2 * np.pi * n * y)))
    assert tail < eps
