"""Shifted convolution sums

    D(n, t; s) = sum_{l >= 1, m = l - n != 0} a(l) sigma^chi_{2s-1}(|m|) / (l^t |m|^{2s-1}),

their value L(n, chi; s) at t = 1 through the c-sum of additive twists, and
the x-weighted version L(n, chi, x; s) for n < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chars import DirichletCharacter, gauss_sum, sigma_chi_normalized_table
from .context import default_form, twist_cache
from .cuspform import CuspFormCoefficients
from .eisenstein import CONVEXITY_EXPONENT, _convexity_constant, _star_sums_all_n, convexity_tail, phi_star
from .lfun import SeriesValue, dirichlet_l_detailed
from .policy import DEFAULT_POLICY, PrecisionPolicy
from .specfun import gamma, rgamma
from .summation import block_sum, smooth_cutoff


@dataclass(frozen=True)
class ConvolutionQuery:
    """Shift n != 0, spectral parameter s, deformation t (1 gives L(n, chi; s)),
    optional weight exponent x."""

    n: int
    s: complex
    t: complex = 1.0
    x: complex | None = None

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("shift n must be nonzero")
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "t", complex(self.t))
        if self.x is not None:
            object.__setattr__(self, "x", complex(self.x))


def _form(a):
    return default_form() if a is None else a


def _sigma_table(chi, s, size):
    # T[m] = sigma^chi_{2s-1}(m) / m^{2s-1}
    return sigma_chi_normalized_table(chi, 2 * s - 1, size)


def _dds_smoothed(a, chi, n, s, t, M, table):
    L = 2 * M
    l = np.arange(1, L + 1)
    m = np.abs(l - n)
    keep = m != 0
    l, m = l[keep], m[keep]
    w = smooth_cutoff(l / M)
    terms = a.coeffs[l] * table[m] * np.exp(-t * np.log(l)) * w
    return block_sum(terms)


def dds_direct(
    q: ConvolutionQuery,
    a: CuspFormCoefficients | None = None,
    chi: DirichletCharacter | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    M: int = 1 << 17,
    detailed: bool = False,
):
    """The double Dirichlet series summed over l, Re t > 3/2, Re s > 2.

    Terms are weighted by a smooth cutoff in l (1 up to M, 0 past 2M); the
    error estimate is the change from M to 2M. The plain partial sum converges
    only like M^{1/2 - Re t} and is available through ``dds_partial_sum``.
    """
    if q.t.real <= 1.5:
        raise ValueError("direct summation needs Re t > 3/2")
    if q.s.real <= 2:
        raise ValueError("direct summation needs Re s > 2")
    chi = chi if chi is not None else _default_chi()
    a = _form(a).upto(4 * M)
    table = _sigma_table(chi, q.s, 4 * M + abs(q.n) + 1)
    v1 = _dds_smoothed(a, chi, q.n, q.s, q.t, M, table)
    v2 = _dds_smoothed(a, chi, q.n, q.s, q.t, 2 * M, table)
    res = SeriesValue(complex(v2), abs(v2 - v1), 4 * M, "direct", {"M": 2 * M, "smoothing": "C-infinity"})
    return res if detailed else res.value


def dds_partial_sum(q: ConvolutionQuery, a=None, chi=None, L: int = 1 << 16) -> complex:
    """Plain sum over 1 <= l <= L, l != n."""
    chi = chi if chi is not None else _default_chi()
    a = _form(a).upto(L)
    table = _sigma_table(chi, q.s, L + abs(q.n) + 1)
    l = np.arange(1, L + 1)
    m = np.abs(l - q.n)
    keep = m != 0
    l, m = l[keep], m[keep]
    return block_sum(a.coeffs[l] * table[m] * np.exp(-q.t * np.log(l)))


def _default_chi():
    from .chars import make_character

    return make_character(11, 2)


def dds_prefactor(chi: DirichletCharacter, s: complex, t: complex, policy=DEFAULT_POLICY) -> complex:
    """N^{2s} L(conj chi, 2s) / W(conj chi) * (2 pi)^t / Gamma(t)."""
    N = chi.modulus
    lbar = dirichlet_l_detailed(chi.conj(), 2 * s, policy).value
    return complex(N ** (2 * s) * lbar / gauss_sum(chi.conj()) * (2 * math.pi) ** t * rgamma(t))


def twist_character_sum(n: int, chi: DirichletCharacter, c: int, t: complex = 1.0,
                        policy: PrecisionPolicy = DEFAULT_POLICY, a=None) -> complex:
    """sum_{d mod c, (d, c) = 1} conj(chi(d)) e(n d / c) Lambda(f, t, -d/c)."""
    cache = twist_cache(a, policy)
    star = _star_sums_all_n(chi, c, complex(t), cache, np.array([n]))[0]
    return complex(star * c ** complex(t) / 1j)


def dds_csum(
    q: ConvolutionQuery,
    a: CuspFormCoefficients | None = None,
    chi: DirichletCharacter | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    detailed: bool = False,
):
    """N^{2s} L(conj chi, 2s) / W(conj chi) (2 pi)^t / Gamma(t)
    sum_{N | c <= c_max} c^{-2s-t} sum_d conj(chi(d)) e(nd/c) Lambda(f, t, -d/c).

    Valid on the continuation region (Re s > 2, Re t > 1 - delta); the tail
    uses the convexity bound |Lambda| <= K c^{3/2 + 0.1} with K measured on
    the computed moduli.
    """
    if q.s.real <= 2:
        raise ValueError("c-sum needs Re s > 2")
    chi = chi if chi is not None else _default_chi()
    c_max = policy.cutoff_csum if c_max is None else c_max
    cache = twist_cache(a, policy)
    N = chi.modulus
    cs = list(range(N, c_max + 1, N))
    terms = []
    for c in cs:
        star = _star_sums_all_n(chi, c, q.t, cache, np.array([q.n]))[0]  # i c^{-t} * inner sum
        terms.append(c ** (-2 * q.s) * star / 1j)
    total = complex(np.sum(terms))
    pref = dds_prefactor(chi, q.s, q.t, policy)
    K = _convexity_constant(cache, q.t, cs)
    alpha = 2 * q.s.real + q.t.real - CONVEXITY_EXPONENT - 1
    tail = abs(pref) * convexity_tail(K, alpha, N, c_max)
    res = SeriesValue(pref * total, tail, len(cs), "csum", {"c_max": c_max, "K": K})
    return res if detailed else res.value


def L_shift(
    n: int,
    s: complex,
    a: CuspFormCoefficients | None = None,
    chi: DirichletCharacter | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    detailed: bool = False,
):
    """L(n, chi; s): the c-sum at t = 1. ``detailed`` adds the Eisenstein
    coefficient phi*(n, s, chi) implied by the relation
    L = 2 Gamma(s) N^{2s} L(conj chi, 2s) / (i W(conj chi) (pi |n|)^{s-1}) phi*."""
    chi = chi if chi is not None else _default_chi()
    res = dds_csum(ConvolutionQuery(n, s, 1.0), a, chi, policy, c_max, detailed=True)
    if not detailed:
        return res.value
    phi = phi_star(n, s, chi, policy, c_max, a)
    implied = res.value / shift_to_phi_star_factor(n, s, chi, policy)
    meta = dict(res.meta)
    meta.update({"phi_star": phi.value, "phi_star_from_L": implied})
    return SeriesValue(res.value, res.err_est, res.terms, "csum", meta)


def shift_to_phi_star_factor(n: int, s: complex, chi: DirichletCharacter, policy=DEFAULT_POLICY) -> complex:
    """2 Gamma(s) N^{2s} L(conj chi, 2s) / (i W(conj chi) (pi |n|)^{s-1})."""
    s = complex(s)
    N = chi.modulus
    lbar = dirichlet_l_detailed(chi.conj(), 2 * s, policy).value
    return complex(2 * gamma(s) * N ** (2 * s) * lbar / (1j * gauss_sum(chi.conj()) * (math.pi * abs(n)) ** (s - 1)))


# ---------------------------------------------------------------------------
# x-weighted sums, n < 0


def _check_weighted(n, s, x):
    if n >= 0:
        raise ValueError("weighted sums are implemented for n < 0 only")
    if complex(x).real <= complex(s).real + 0.5:
        raise ValueError("need Re x > Re s + 1/2")


def _tail_by_l(a, chi, n, x, s, M, table):
    L = 2 * M
    l = np.arange(1, L + 1)
    m = l - n
    w = smooth_cutoff(l / M)
    terms = a.coeffs[l] / l * table[m] * np.exp((s - x) * np.log(m)) * w
    return block_sum(terms)


def _tail_by_divisor_pairs(a, chi, n, x, s, M):
    """Same series regrouped over m = e k: sum_{e, k} chi(e) k^{1-2s} (e k)^{s-x}
    a(ek - |n|) / (ek - |n|), smooth cutoff in m. Pairs with e k <= 2M are
    visited hyperbola-style: small e against all k, then small k against e > R."""
    s, x = complex(s), complex(x)
    Mtot = 2 * M
    R = math.isqrt(Mtot)
    parts = []

    def block(e, k):
        m = e * k
        l = m + n
        ok = l >= 1
        e, k, m, l = e[ok], k[ok], m[ok], l[ok]
        return (chi.values(e) * np.exp((1 - 2 * s) * np.log(k) + (s - x) * np.log(m))
                * a.coeffs[l] / l * smooth_cutoff(m / M))

    for e in range(1, R + 1):
        k = np.arange(1, Mtot // e + 1)
        parts.append(np.sum(block(np.full(k.shape, e), k)))
    for k in range(1, R + 1):
        e = np.arange(R + 1, Mtot // k + 1)
        if e.size:
            parts.append(np.sum(block(e, np.full(e.shape, k))))
    return block_sum(np.array(parts))


def tail_series(
    n: int,
    x: complex,
    s: complex,
    a: CuspFormCoefficients | None = None,
    chi: DirichletCharacter | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    M: int = 1 << 16,
    route: str = "by_l",
    detailed: bool = False,
):
    """T(x) = sum_{l >= 1} a(l)/l sigma^chi_{2s-1}(l - n) / (l - n)^{s-1+x}, n < 0,
    Re x > Re s + 1/2.

    route="by_l" sums over l with a smooth cutoff in l; route="divisor_pairs"
    expands sigma^chi and sums over pairs (e, k), m = l - n = e k, with the
    smooth cutoff in m. Both report the change from M to 2M.
    """
    _check_weighted(n, s, x)
    s, x = complex(s), complex(x)
    chi = chi if chi is not None else _default_chi()
    a = _form(a).upto(4 * M + abs(n) + 1)
    if route == "by_l":
        table = _sigma_table(chi, s, 4 * M + abs(n) + 1)
        v1 = _tail_by_l(a, chi, n, x, s, M, table)
        v2 = _tail_by_l(a, chi, n, x, s, 2 * M, table)
    elif route == "divisor_pairs":
        v1 = _tail_by_divisor_pairs(a, chi, n, x, s, M)
        v2 = _tail_by_divisor_pairs(a, chi, n, x, s, 2 * M)
    else:
        raise ValueError(f"unknown route {route!r}")
    res = SeriesValue(complex(v2), abs(v2 - v1), 4 * M, route)
    return res if detailed else res.value


def L_weighted(
    n: int,
    x: complex,
    s: complex,
    a: CuspFormCoefficients | None = None,
    chi: DirichletCharacter | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    M: int = 1 << 16,
    detailed: bool = False,
):
    """L(n, chi, x; s) = L(n, chi; s) - |n|^{x-s} T(x), n < 0."""
    _check_weighted(n, s, x)
    if complex(s).real <= 2:
        raise ValueError("need Re s > 2")
    base = L_shift(n, s, a, chi, policy, c_max, detailed=True)
    tail = tail_series(n, x, s, a, chi, policy, M, detailed=True)
    val = base.value - abs(n) ** (complex(x) - complex(s)) * tail.value
    res = SeriesValue(val, base.err_est + abs(abs(n) ** (complex(x) - complex(s))) * tail.err_est,
                      tail.terms, "decomposition", {"L_shift": base.value, "tail": tail.value})
    return res if detailed else res.value


def weight_factor(n: int, m: int, s: complex, x: complex) -> complex:
    """1 - |m/n|^{s-x}."""
    return complex(1 - (abs(m) / abs(n)) ** (complex(s) - complex(x)))
