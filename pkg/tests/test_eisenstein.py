import math

import numpy as np
import pytest

from shiftconv import eisenstein as eis
from shiftconv.chars import gauss_sum, totient
from shiftconv.context import twist_cache
from shiftconv.cuspform import eval_F
from shiftconv.lfun import modular_symbol
from shiftconv.specfun import TestFunctionHx, gamma

PHI_STAR_M1_3 = -4.3172373649e-07 + 6.4740803347e-06j
PHI_STAR_M1_25 = -3.9764446128e-06 + 5.9995266715e-05j
PHI_STAR_CONST_3 = 3.3932115455e-07
PHI_STAR_CONST_25 = 4.0647265533e-06
KLOOSTERMAN_STAR_1_11 = -0.17828705355269292 - 0.5678747459755024j


def close(a, b, rel=1e-9):
    return abs(a - b) <= rel * abs(b)


# --- cosets ---------------------------------------------------------------


def test_cosets_level_11():
    reps = eis.enumerate_cosets(11, 11)
    assert len(reps) == 11
    assert reps[0].matrix() == (1, 0, 0, 1)
    assert sorted(r.d for r in reps[1:]) == list(range(1, 11))
    for r in reps:
        assert r.in_gamma0(11)
        a, b, c, d = r.matrix()
        assert a * d - b * c == 1
        assert c == 0 or 0 <= a < c


def test_coset_count_matches_totients():
    C = 330
    reps = eis.enumerate_cosets(11, C)
    assert len(reps) == 1 + sum(totient(c) for c in range(11, C + 1, 11))


def test_cosets_distinct_by_bruteforce():
    # two matrices lie in the same Gamma_infty coset iff their bottom rows agree up to sign
    reps = eis.enumerate_cosets(11, 44)
    rows = set()
    for r in reps:
        key = (r.c, r.d % r.c) if r.c else (0, 1)
        assert key not in rows
        rows.add(key)


def test_coset_rep_validation():
    with pytest.raises(ValueError):
        eis.CosetRep(1, 1, 1, 1)
    with pytest.raises(ValueError):
        eis.CosetRep.from_bottom_row(22, 4)
    assert eis.CosetRep.from_bottom_row(-11, -3) == eis.CosetRep.from_bottom_row(11, 3)


# --- Kloosterman sums -----------------------------------------------------


def test_kloosterman_examples(chi):
    assert abs(eis.kloosterman_chi(0, 0, chi, 11)) < 1e-13
    W = gauss_sum(chi.conj())
    for n in (1, 2, 7):
        assert abs(eis.kloosterman_chi(n, 0, chi, 11) - chi(n) * W) < 1e-13
    with pytest.raises(ValueError):
        eis.kloosterman_chi(1, 0, chi, 12)


def test_kloosterman_bruteforce(chi):
    import cmath

    c, n, m = 33, 2, 5
    ref = 0
    for d in range(c):
        if math.gcd(d, c) == 1:
            a = pow(d, -1, c)
            ref += chi(d).conjugate() * cmath.exp(2j * math.pi * (n * d + m * a) / c)
    assert abs(eis.kloosterman_chi(n, m, chi, c) - ref) < 1e-12
    # relabelling d -> d + c changes nothing
    assert abs(eis.kloosterman_chi(n + c, m, chi, c) - ref) < 1e-12


def test_kloosterman_star_pinned(chi, form):
    assert close(eis.kloosterman_star(1, 0, chi, 11), KLOOSTERMAN_STAR_1_11, 1e-12)
    # assembled from the modular symbols <f, gamma> = (i/c) Lambda(f, 1, -d/c)
    ref = 0
    for d in range(1, 11):
        g = eis.CosetRep.from_bottom_row(11, d).matrix()
        ref += chi(d).conjugate() * modular_symbol(form, g) * np.exp(2j * np.pi * d / 11)
    assert abs(eis.kloosterman_star(1, 0, chi, 11) - ref) < 1e-13


def test_kloosterman_star_conjugate_character(chi, form):
    lam = twist_cache(form).table(1.0, 22)
    ref = 0
    for d in range(22):
        if math.gcd(d, 22) == 1:
            ref += chi(d) * lam[d] * np.exp(2j * np.pi * 3 * d / 22)
    ref *= 1j / 22
    assert abs(eis.kloosterman_star(3, 0, chi.conj(), 22) - ref) < 1e-13


# --- classical coefficients -----------------------------------------------


def test_lemma_routes_agree(chi):
    k = eis.phi_classical(1, 1.5, chi, eis.KLOOSTERMAN_SUM)
    c = eis.phi_classical(1, 1.5, chi, eis.CLOSED_FORM)
    assert abs(k.value - c.value) <= 1e-5 + k.err_est


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("s", [1.5, 2.0, 2.5 + 0.5j])
def test_lemma_grid(chi, m, s):
    k = eis.phi_classical(m, s, chi, eis.KLOOSTERMAN_SUM, c_max=2000)
    c = eis.phi_classical(m, s, chi, eis.CLOSED_FORM)
    assert abs(k.value - c.value) <= 1e-5 + k.err_est


def test_classical_symmetric_in_sign(chi):
    for route in (eis.KLOOSTERMAN_SUM, eis.CLOSED_FORM):
        assert eis.phi_classical(2, 2.0, chi, route).value == eis.phi_classical(-2, 2.0, chi, route).value


def test_closed_form_prime(chi):
    s = 2.0
    p = 7
    v1 = eis.phi_classical(1, s, chi, eis.CLOSED_FORM).value
    vp = eis.phi_classical(p, s, chi, eis.CLOSED_FORM).value
    assert close(vp, v1 * (1 + chi(p) * p ** (2 * s - 1)) / p**s, 1e-13)


def test_classical_tail_doubling(chi):
    a = eis.phi_classical(1, 1.5, chi, c_max=500)
    b = eis.phi_classical(1, 1.5, chi, c_max=1000)
    assert abs(a.value - b.value) <= a.err_est


def test_classical_extraction(chi):
    ext = eis.phi_classical_extract(1, 2.0, chi, y=1.0)
    ref = eis.phi_classical(1, 2.0, chi, eis.CLOSED_FORM).value
    assert abs(ext.value - ref) <= 1e-6 * abs(ref)


# --- starred coefficients -------------------------------------------------


def test_phi_star_pinned(chi):
    assert close(eis.phi_star(-1, 3.0, chi).value, PHI_STAR_M1_3)
    assert close(eis.phi_star(-1, 2.5, chi).value, PHI_STAR_M1_25)
    assert close(eis.phi_star_constant(3.0, chi).value, PHI_STAR_CONST_3)
    assert close(eis.phi_star_constant(2.5, chi).value, PHI_STAR_CONST_25)


def test_phi_star_doubling_within_tail(chi):
    a = eis.phi_star(-1, 2.5, chi, c_max=550)
    b = eis.phi_star(-1, 2.5, chi, c_max=1100)
    assert abs(a.value - b.value) <= a.err_est
    a = eis.phi_star_constant(2.5, chi, c_max=550)
    b = eis.phi_star_constant(2.5, chi, c_max=1100)
    assert abs(a.value - b.value) <= a.err_est


def test_phi_star_sign_matters(chi):
    assert abs(eis.phi_star(1, 2.5, chi).value - eis.phi_star(-1, 2.5, chi).value) > 1e-6


def test_phi_star_prefactor(chi):
    s = 2.5 + 0j
    n = -3
    cs = eis.star_csum(n, s, chi, 1.0)
    full = eis.phi_star(n, s, chi)
    assert close(full.value, math.pi**s / gamma(s) * abs(n) ** (s - 1) * cs.value, 1e-13)


def test_phi_star_region(chi):
    with pytest.raises(ValueError):
        eis.phi_star(-1, 2.0, chi)
    with pytest.raises(ValueError):
        eis.phi_star(0, 3.0, chi)


def test_constant_prefactor():
    v = eis.constant_prefactor(2.5)
    assert abs(v - math.sqrt(math.pi) * math.gamma(2.0) / math.gamma(2.5)) < 1e-14
    assert abs(v - 4 / 3) < 1e-14  # Gamma(5/2) = 3 sqrt(pi) / 4


def test_constant_single_modulus(chi, form):
    s = 2.5
    one = eis.phi_star_constant(s, chi, c_max=11)
    lam = twist_cache(form).table(1.0, 11)
    inner = sum(chi(d).conjugate() * lam[d] for d in range(1, 11))
    ref = eis.constant_prefactor(s) * 11 ** (-2 * s) * (1j / 11) * inner
    assert close(one.value, ref, 1e-13)


def test_constant_diagnostics(chi):
    res = eis.phi_star_constant(3.0, chi, diagnostics=True)
    for row in res.meta["weight_t_rows"]:
        a = complex(*row["csum_route"])
        b = complex(*row["euler_ratio_route"])
        assert abs(a - b) <= 1e-8 * abs(b)
    extrap = complex(*res.meta["richardson_phi_star_constant"])
    assert abs(extrap - res.value) <= 1e-2 * abs(res.value)


# --- series evaluation ----------------------------------------------------


def test_E_automorphy(chi):
    g = eis.CosetRep(1, 0, 11, 1)
    z = 0.3 + 1.2j
    lhs = eis.eval_E(g.act(z), 3.0, chi)
    rhs = chi(g.d) * eis.eval_E(z, 3.0, chi)
    assert abs(lhs - rhs) <= 1e-6 * abs(rhs)


def test_E_leading_term(chi):
    for Y in (5.0, 20.0):
        assert abs(eis.eval_E(1j * Y, 3.0, chi) / Y**3 - 1) < 1e-4 / Y


def test_E_tail_estimate(chi):
    z = 0.2 + 0.4j
    small = eis.eval_E(z, 2.0, chi, c_max=220, detailed=True)
    big = eis.eval_E(z, 2.0, chi, c_max=2200, detailed=True)
    assert abs(small.value - big.value) <= small.err_est


def test_completion_identity_single_point(chi, form):
    z, s = 0.3 + 1.0j, 3.0
    E = eis.eval_E(z, s, chi, c_max=88, term_eps=eis.G_TERM_EPS)
    Es = eis.eval_E_star(z, s, chi, c_max=88, term_eps=eis.G_TERM_EPS)
    G = eis.eval_G(z, s, chi)
    assert abs(Es - (G - eval_F(form, z) * E)) < 1e-10


def test_per_coset_completion(chi, form):
    z, s = 0.3 + 1.0j, 3.0
    for rep in eis.enumerate_cosets(11, 33)[1:]:
        a, b, c, d = rep.matrix()
        gz = rep.act(z)
        im = gz.imag**s
        lhs = chi(d).conjugate() * modular_symbol(form, rep.matrix()) * im
        rhs = chi(d).conjugate() * eval_F(form, gz) * im - eval_F(form, z) * chi(d).conjugate() * im
        assert abs(lhs - rhs) < 1e-15


def test_eval_P(chi):
    h = TestFunctionHx(3.0)
    assert eis.eval_P(1, lambda y: 0 * y, 0.2 + 0.8j, chi) == 0
    g = eis.CosetRep(6, 1, 11, 2)
    z = 0.1 + 0.9j
    lhs = eis.eval_P(-1, h, g.act(z), chi)
    rhs = chi(g.d) * eis.eval_P(-1, h, z, chi)
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_extraction_nodes_agree(chi):
    a = eis.phi_star_extract(-1, 3.0, chi, y=0.5, nodes=64)
    b = eis.phi_star_extract(-1, 3.0, chi, y=0.5, nodes=128)
    assert abs(a.value - b.value) <= 1e-9 * abs(b.value)


def test_extraction_factor_two(chi):
    # the raw Fourier coefficient is 2 phi* W_s; the constant term has no factor
    ext = eis.phi_star_extract(-1, 3.0, chi, y=0.5)
    assert abs(ext.value - PHI_STAR_M1_3) <= 1e-3 * abs(PHI_STAR_M1_3)
    const = eis.phi_star_extract(0, 3.0, chi, y=0.5)
    assert abs(const.value - PHI_STAR_CONST_3) <= 1e-3 * abs(PHI_STAR_CONST_3)
    assert eis.NONCONSTANT_FACTOR == 2.0


def test_coefficient_json(chi):
    doc = eis.phi_star(-1, 2.5, chi).to_json()
    assert doc["route"] == "kloosterman_sum"
    assert len(doc["value"]) == 2 and doc["c_max"] == 1100
