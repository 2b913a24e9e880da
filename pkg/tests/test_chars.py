import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftconv.chars import (
    DirichletCharacter,
    divisors,
    factorize,
    gauss_sum,
    make_character,
    moebius,
    primitive_root,
    principal_character,
    sigma_chi,
    sigma_chi_normalized_table,
    totient,
)


def test_default_character_values(chi):
    assert primitive_root(11) == 2
    assert chi(2) == pytest.approx(cmath.exp(4j * math.pi / 10), abs=1e-15)
    assert chi.parity == 1
    assert chi.order == 5
    assert chi.is_primitive
    assert chi(1) == 1
    assert chi(22) == 0
    assert chi(-1) == 1


def test_exact_rotations(chi):
    # chi(2)^5 = chi(32) = chi(-1) is exactly trivial
    assert chi.rotation(32) == 0
    assert chi.rotation(11) is None


def test_trivial_index_rejected():
    with pytest.raises(ValueError):
        make_character(11, 0)
    with pytest.raises(ValueError):
        make_character(11, 10)
    with pytest.raises(ValueError):
        gauss_sum(principal_character(11))


def test_noncyclic_modulus_rejected():
    with pytest.raises(ValueError):
        make_character(15, 1)


def test_multiplicative_on_all_pairs(chi):
    N = chi.modulus
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-14


@pytest.mark.parametrize("index", range(1, 10))
def test_orthogonality_and_gauss_sum(index):
    chi = make_character(11, index)
    assert abs(sum(chi(a) for a in range(11))) < 1e-13
    W = gauss_sum(chi.conj())
    assert abs(abs(W) ** 2 - 11) / 11 < 1e-12
    assert chi.is_primitive


def test_gauss_sum_product(chi):
    W = gauss_sum(chi.conj())
    assert abs(W * gauss_sum(chi) - chi(-1) * 11) < 1e-12


def test_json_roundtrip(chi):
    doc = json.loads(json.dumps(chi.to_json()))
    assert doc == {"modulus": 11, "generator": 2, "index": 2, "parity": 1}
    assert DirichletCharacter.from_json(doc) == chi


def test_arithmetic_helpers():
    assert moebius(1) == 1
    assert moebius(12) == 0
    assert moebius(30) == -1
    assert sum(moebius(d) for d in divisors(30)) == 0
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert totient(121) == 110
    assert primitive_root(121) == 2


def test_sigma_examples(chi):
    t = 1.3 + 0.2j
    assert sigma_chi(chi, t, 1) == 1
    assert abs(sigma_chi(chi, t, 7) - (1 + chi(7) * 7**t)) < 1e-12
    assert abs(sigma_chi(chi, t, 6) - sigma_chi(chi, t, 2) * sigma_chi(chi, t, 3)) < 1e-12
    with pytest.raises(ValueError):
        sigma_chi(chi, t, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 1000), st.integers(1, 1000))
def test_sigma_multiplicative(m, n):
    chi = make_character(11, 2)
    if math.gcd(m, n) != 1:
        return
    t = 1.3 + 0.2j
    lhs = sigma_chi(chi, t, m * n)
    rhs = sigma_chi(chi, t, m) * sigma_chi(chi, t, n)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_normalized_table_matches_definition(chi):
    w = 2.0 + 0.5j
    T = sigma_chi_normalized_table(chi, w, 200)
    for m in (1, 2, 11, 12, 60, 121, 199):
        assert abs(T[m] - sigma_chi(chi, w, m) / m**w) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(-500, 500), st.integers(-500, 500))
def test_character_property(index, a, b):
    chi = make_character(11, index)
    assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-13
    assert abs(chi(a + 11) - chi(a)) == 0
    assert abs(chi.conj()(a) - np.conj(chi(a))) < 1e-15
