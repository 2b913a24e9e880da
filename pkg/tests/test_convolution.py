import math

import numpy as np
import pytest

from shiftconv import eisenstein as eis
from shiftconv.chars import sigma_chi
from shiftconv.context import twist_cache
from shiftconv.convolution import (
    ConvolutionQuery,
    L_shift,
    L_weighted,
    dds_csum,
    dds_direct,
    dds_partial_sum,
    dds_prefactor,
    shift_to_phi_star_factor,
    tail_series,
    twist_character_sum,
    weight_factor,
)
from shiftconv.specfun import TestFunctionHx, k_transform_hx_closed, k_transform_numeric

L_SHIFT_M1_25 = 1.0807494363057717 + 0.8937129046695643j
TAIL_M1_25_X4 = 0.31630564163189 + 0.38180773136905j
DDS_M1_25_17 = 0.9348370695389423 + 1.0459599342470953j


def close(a, b, rel=1e-9):
    return abs(a - b) <= rel * abs(b)


def test_query_validation():
    with pytest.raises(ValueError):
        ConvolutionQuery(0, 2.5)
    q = ConvolutionQuery(-1, 2.5)
    assert q.t == 1 and isinstance(q.s, complex)


def test_direct_vs_csum(form, chi):
    q = ConvolutionQuery(-1, 2.5, 1.7)
    d = dds_direct(q, form, chi, detailed=True)
    c = dds_csum(q, form, chi, detailed=True)
    assert abs(d.value - c.value) <= 1e-5 * abs(c.value)
    assert close(d.value, DDS_M1_25_17, 1e-8)


def test_direct_region(chi):
    with pytest.raises(ValueError):
        dds_direct(ConvolutionQuery(-1, 2.5, 1.4), chi=chi)
    with pytest.raises(ValueError):
        dds_direct(ConvolutionQuery(-1, 2.0, 1.7), chi=chi)


def test_direct_truncation_consistent(form, chi):
    q = ConvolutionQuery(2, 2.5, 1.8)
    a = dds_direct(q, form, chi, M=1 << 15, detailed=True)
    b = dds_direct(q, form, chi, M=1 << 16, detailed=True)
    assert abs(a.value - b.value) <= a.err_est


def test_shift_excludes_zero_m(form, chi):
    # n = 3: the l = 3 term has m = 0 and is left out
    q = ConvolutionQuery(3, 2.5, 1.8)
    total = dds_partial_sum(q, form, chi, L=5)
    manual = 0
    for l in (1, 2, 4, 5):
        m = abs(l - 3)
        manual += form[l] * sigma_chi(chi, 4.0, m) / (l**1.8 * m**4.0)
    assert abs(total - manual) < 1e-14


def test_single_modulus_csum(form, chi):
    q = ConvolutionQuery(-1, 2.5, 1.0)
    one = dds_csum(q, form, chi, c_max=11)
    lam = twist_cache(form).table(1.0, 11)
    inner = sum(chi(d).conjugate() * np.exp(-2j * np.pi * d / 11) * lam[d] for d in range(1, 11))
    ref = dds_prefactor(chi, q.s, 1.0) * 11 ** (-2 * q.s - 1) * inner
    assert close(one, ref, 1e-13)
    assert close(twist_character_sum(-1, chi, 11), inner, 1e-13)


def test_L_shift_pinned(form, chi):
    assert close(L_shift(-1, 2.5, form, chi), L_SHIFT_M1_25)


def test_L_shift_phi_star_relation(form, chi):
    res = L_shift(-1, 2.5, form, chi, detailed=True)
    assert close(res.meta["phi_star_from_L"], res.meta["phi_star"], 1e-12)


def test_L_shift_vs_extraction(form, chi):
    L = L_shift(-1, 3.0, form, chi)
    ext = eis.phi_star_extract(-1, 3.0, chi)
    implied = L / shift_to_phi_star_factor(-1, 3.0, chi)
    assert abs(implied - ext.value) <= 1e-3 * abs(ext.value)


def test_L_shift_sign_of_shift(form, chi):
    assert abs(L_shift(1, 2.5, form, chi) - L_shift(-1, 2.5, form, chi)) > 1e-3


def test_continuation_is_smooth(form, chi):
    ts = np.round(np.arange(1.0, 1.61, 0.1), 10)
    vals = np.array([dds_csum(ConvolutionQuery(-1, 2.5, t), form, chi) for t in ts])
    second = np.abs(np.diff(vals, 2))
    assert np.all(second < 0.2 * np.max(np.abs(vals)))


def test_tail_series_routes(form, chi):
    a = tail_series(-1, 4.0, 2.5, form, chi, detailed=True)
    b = tail_series(-1, 4.0, 2.5, form, chi, route="divisor_pairs", detailed=True)
    assert abs(a.value - b.value) < 1e-12
    assert close(a.value, TAIL_M1_25_X4, 1e-10)


def test_tail_series_first_term(form, chi):
    # the smoothed sum with M = 1 keeps l = 1 with weight 1, so compare terms directly
    s, x, n = 2.5, 3.5, -1
    first = form[1] * sigma_chi(chi, 2 * s - 1, 2) / 2 ** (s - 1 + x)
    total = tail_series(n, x, s, form, chi)
    assert abs(total - first) < abs(first)
    assert np.isfinite(abs(total))


def test_tail_series_decays_in_x(form, chi):
    vals = [abs(tail_series(-1, x, 2.5, form, chi)) for x in (3.5, 5, 7, 10)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_tail_series_region(chi):
    with pytest.raises(ValueError):
        tail_series(1, 4.0, 2.5, chi=chi)
    with pytest.raises(ValueError):
        tail_series(-1, 2.9, 2.5, chi=chi)


def test_weighted_decomposition(form, chi):
    res = L_weighted(-1, 4.0, 2.5, form, chi, detailed=True)
    assert abs(res.value + res.meta["tail"] - res.meta["L_shift"]) < 1e-15


def test_weighted_monotone(form, chi):
    base = L_shift(-1, 2.5, form, chi)
    gaps = [abs(L_weighted(-1, x, 2.5, form, chi) - base) for x in (4, 6, 8, 10)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_weighted_cross_difference(form, chi):
    n, s = -1, 2.5
    x1, x2 = 4.0, 6.0
    lhs = L_weighted(n, x1, s, form, chi) - L_weighted(n, x2, s, form, chi)
    t1 = tail_series(n, x1, s, form, chi, route="divisor_pairs")
    t2 = tail_series(n, x2, s, form, chi, route="divisor_pairs")
    rhs = abs(n) ** (x2 - s) * t2 - abs(n) ** (x1 - s) * t1
    assert abs(lhs - rhs) <= 1e-5 * abs(rhs)


@pytest.mark.parametrize("n,l,x,s", [(-2, 3, 3.0, 0.4), (-1, 5, 2.5, 0.3), (-3, 1, 4.0, 0.2j)])
def test_weight_matches_k_scaling(n, l, x, s):
    m = l - n
    h = TestFunctionHx(x)
    r = abs(n) / abs(m)
    htilde = lambda y: h(r * y) * np.exp(-l * y / abs(m))  # noqa: E731
    num, _ = k_transform_numeric(htilde, s)
    scale = num / k_transform_hx_closed(x, s)
    assert abs(scale - r**x) < 1e-9
    assert abs(weight_factor(n, m, s, x) - (1 - scale * (abs(m) / abs(n)) ** s)) < 1e-9
