"""Dirichlet L-functions, L-series of the cusp form, and the additive twists
Lambda(f, t, -d/c) = (c / 2 pi)^t Gamma(t) sum_n a(n) e(-nd/c) n^{-t}
with their entire continuation; modular symbols built from them."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .chars import DirichletCharacter, factorize, sigma_chi_normalized_table
from .cuspform import CuspFormCoefficients
from .policy import DEFAULT_POLICY, PrecisionPolicy, TruncationError
from .specfun import gamma, inc_gamma_upper
from .summation import block_sum, smooth_cutoff


@dataclass(frozen=True)
class SeriesValue:
    """A truncated-series result with its error estimate and truncation data."""

    value: complex
    err_est: float
    terms: int
    method: str = "direct"
    meta: dict = field(default_factory=dict, compare=False)

    def __complex__(self):
        return complex(self.value)


def _primes_upto(P: int) -> np.ndarray:
    sieve = np.ones(P + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(P) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


# ---------------------------------------------------------------------------
# Dirichlet L-functions


def _char_partial_sum_bound(chi: DirichletCharacter) -> float:
    return float(np.max(np.abs(np.cumsum(chi.table))))


def dirichlet_l_detailed(
    chi: DirichletCharacter, s: complex, policy: PrecisionPolicy = DEFAULT_POLICY, M: int | None = None
) -> SeriesValue:
    """sum_{n>=1} chi(n) n^{-s} for Re s > 1, truncated at M.

    For nontrivial chi the tail after M is at most B M^{-sigma} (1 + |s|/sigma)
    by partial summation, B the largest partial character sum; for the
    principal character the integral bound M^{1-sigma}/(sigma-1) is used.
    """
    s = complex(s)
    sig = s.real
    if sig <= 1:
        raise ValueError("dirichlet_l needs Re s > 1")
    eps = policy.epsilon_abs
    if chi.principal:
        bound = lambda m: m ** (1 - sig) / (sig - 1)  # noqa: E731
    else:
        B = _char_partial_sum_bound(chi)
        bound = lambda m: B * m ** (-sig) * (1 + abs(s) / sig)  # noqa: E731
    if M is None:
        M = 16
        while bound(M) > eps and M < 10**7:
            M *= 2
    n = np.arange(1, M + 1)
    terms = chi.values(n) * np.exp(-s * np.log(n))
    return SeriesValue(block_sum(terms), float(bound(M)), M)


def dirichlet_l(chi: DirichletCharacter, s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """L(chi, s) for nontrivial chi; the principal character is only reachable
    through ``dirichlet_l_detailed`` (diagnostic mode)."""
    if chi.principal:
        raise ValueError("trivial character rejected")
    return complex(dirichlet_l_detailed(chi, s, policy).value)


def dirichlet_l_euler(chi: DirichletCharacter, s: complex, P: int = 10_000) -> complex:
    """prod_{p <= P} (1 - chi(p) p^{-s})^{-1}."""
    p = _primes_upto(P)
    factors = 1.0 - chi.values(p) * np.exp(-complex(s) * np.log(p))
    return complex(np.prod(1.0 / factors))


# ---------------------------------------------------------------------------
# L-series of f and of f twisted by chi


def _l_series(
    a: CuspFormCoefficients,
    weights,
    s: complex,
    M: int,
    method: str,
) -> complex:
    if method == "smooth":
        a = a.upto(2 * M)
        n = np.arange(1, 2 * M + 1)
        cut = smooth_cutoff(n / M)
    elif method == "sharp":
        a = a.upto(M)
        n = np.arange(1, M + 1)
        cut = 1.0
    else:
        raise ValueError(f"unknown method {method!r}")
    w = weights(n) if callable(weights) else 1.0
    terms = a.coeffs[n] * w * np.exp(-complex(s) * np.log(n)) * cut
    return block_sum(terms)


def _divisor_tail_estimate(M: int, sig: float) -> float:
    # sum_{n>M} d(n) n^{1/2 - sig} with d(n) replaced by its mean log n + 2 gamma
    e = sig - 1.5
    return M ** (-e) * ((math.log(M) + 2 * 0.5772156649) / e + 1 / e**2)


def l_series_detailed(
    a: CuspFormCoefficients,
    s: complex,
    chi: DirichletCharacter | None = None,
    M: int = 1 << 17,
    method: str = "smooth",
) -> SeriesValue:
    """sum a(n) chi(n) n^{-s} (chi = None for the untwisted series), Re s > 3/2.

    method="smooth" weights the terms by a C-infinity cutoff equal to 1 up to
    M and 0 beyond 2M; because the continuation is entire the error decays
    faster than any power of M and is estimated from the M vs 2M change.
    method="sharp" is the plain partial sum with the Ramanujan-bound tail
    estimate (mean divisor count in place of d(n)).
    """
    s = complex(s)
    if s.real <= 1.5:
        raise ValueError("L-series of f only evaluated for Re s > 3/2")
    weights = chi.values if chi is not None else None
    v = _l_series(a, weights, s, M, method)
    if method == "smooth":
        v2 = _l_series(a, weights, s, 2 * M, method)
        return SeriesValue(v2, abs(v2 - v), 4 * M, method)
    return SeriesValue(v, _divisor_tail_estimate(M, s.real), M, method)


def l_f(a: CuspFormCoefficients, s: complex, M: int = 1 << 17, method: str = "smooth") -> complex:
    return complex(l_series_detailed(a, s, None, M, method).value)


def l_f_chi(
    a: CuspFormCoefficients, chi: DirichletCharacter, s: complex, M: int = 1 << 17, method: str = "smooth"
) -> complex:
    return complex(l_series_detailed(a, s, chi, M, method).value)


def l_f_euler(a: CuspFormCoefficients, s: complex, P: int = 100) -> complex:
    """Euler product of L(f, s) over primes p <= P."""
    s = complex(s)
    out = 1.0 + 0j
    for p in _primes_upto(P).tolist():
        ap = a[p]
        if a.level % p == 0:
            out /= 1 - ap * p ** (-s)
        else:
            out /= 1 - ap * p ** (-s) + p ** (1 - 2 * s)
    return out


# ---------------------------------------------------------------------------
# additive twists


@dataclass(frozen=True)
class TwistParams:
    t: complex
    d: int
    c: int

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if math.gcd(self.d, self.c) != 1:
            raise ValueError(f"gcd(d, c) = gcd({self.d}, {self.c}) != 1")


def inverse_mod(d: int, c: int) -> int:
    return pow(d % c, -1, c) if c > 1 else 0


def twist_terms_needed(c: int, eps: float) -> int:
    """n_max with tail of either sum below eps.

    With |a(n)| <= 2n and |Gamma(t, x)| <= 2 x^{Re t - 1} e^{-x} (x past the
    peak) both tails are at most (c / pi)^2 e^{-2 pi n_max / c} / ... ; the
    Re t dependence cancels between n^{-t} and x^{t-1}.
    """
    return int(math.ceil(c / (2 * math.pi) * math.log(2 * c * c / (math.pi**2 * eps)))) + 8


def _twist_tail(c: int, M: int) -> float:
    return 2 * c * c / math.pi**2 * math.exp(-2 * math.pi * M / c)


def _twist_check(a: CuspFormCoefficients, c: int):
    if c % a.level:
        raise ValueError(f"level {a.level} must divide c = {c}")


def lambda_twist_detailed(
    a: CuspFormCoefficients, p: TwistParams, policy: PrecisionPolicy = DEFAULT_POLICY
) -> SeriesValue:
    """Lambda(f, t, -d/c) by the two incomplete-gamma sums from splitting
    c^t int_0^inf f(-d/c + ix) x^{t-1} dx at x = 1/c:

        c^t (2 pi)^{-t} sum a(n) n^{-t} e(-nd/c) Gamma(t, 2 pi n / c)
      - c^{2-t} (2 pi)^{t-2} sum a(n) n^{t-2} e(n a/c) Gamma(2-t, 2 pi n / c),

    where a d = 1 mod c.
    """
    _twist_check(a, p.c)
    t = complex(p.t)
    c = p.c
    M = twist_terms_needed(c, policy.epsilon_abs)
    a = a.upto(M)
    n = np.arange(1, M + 1)
    an = a.coeffs[1 : M + 1].astype(float)
    x = 2 * np.pi * n / c
    ainv = inverse_mod(p.d, c)
    lg = np.log(n)
    e1 = np.exp(-2j * np.pi * np.mod(n * p.d, c) / c)
    e2 = np.exp(2j * np.pi * np.mod(n * ainv, c) / c)
    s1 = block_sum(an * np.exp(-t * lg) * e1 * inc_gamma_upper(t, x))
    s2 = block_sum(an * np.exp((t - 2) * lg) * e2 * inc_gamma_upper(2 - t, x))
    val = c**t * (2 * np.pi) ** (-t) * s1 - c ** (2 - t) * (2 * np.pi) ** (t - 2) * s2
    return SeriesValue(complex(val), _twist_tail(c, M), M, "two-sum")


def lambda_twist(a: CuspFormCoefficients, p: TwistParams, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    return complex(lambda_twist_detailed(a, p, policy).value)


class TwistCache:
    """Memo of Lambda(f, t, -d/c) for all d mod c at once, keyed by (t, c).

    Both incomplete-gamma sums are folded by n mod c and evaluated for every
    residue with one FFT each. Safe for concurrent use: a lock guards inserts
    and a value, once stored, is never replaced.
    """

    def __init__(self, a: CuspFormCoefficients, policy: PrecisionPolicy = DEFAULT_POLICY):
        self.a = a
        self.policy = policy
        self._store: dict[tuple[complex, int], tuple[np.ndarray, float]] = {}
        self._lock = threading.Lock()

    def table(self, t: complex, c: int) -> np.ndarray:
        """Array L with L[d] = Lambda(f, t, -d/c) for gcd(d, c) = 1, NaN elsewhere."""
        return self._get(complex(t), int(c))[0]

    def tail(self, t: complex, c: int) -> float:
        return self._get(complex(t), int(c))[1]

    def _get(self, t: complex, c: int):
        key = (t, c)
        hit = self._store.get(key)
        if hit is not None:
            return hit
        val = self._compute(t, c)
        with self._lock:
            return self._store.setdefault(key, val)

    def _compute(self, t: complex, c: int):
        _twist_check(self.a, c)
        M = twist_terms_needed(c, self.policy.epsilon_abs)
        a = self.a.upto(M)
        n = np.arange(1, M + 1)
        an = a.coeffs[1 : M + 1].astype(float)
        x = 2 * np.pi * n / c
        lg = np.log(n)
        if t == 1:
            g1 = g2 = np.exp(-x)
        else:
            g1 = inc_gamma_upper(t, x)
            g2 = inc_gamma_upper(2 - t, x)
        A1 = an * np.exp(-t * lg) * g1
        A2 = an * np.exp((t - 2) * lg) * g2
        H1 = _fold(A1, n, c)
        H2 = _fold(A2, n, c)
        # sum_r H1[r] e(-r d / c) = fft(H1)[d];  sum_r H2[r] e(r a / c) = c ifft(H2)[a]
        S1 = np.fft.fft(H1)
        S2 = c * np.fft.ifft(H2)
        d = np.arange(c)
        unit = np.array([math.gcd(int(v), c) == 1 for v in d])
        ainv = np.zeros(c, dtype=np.int64)
        ainv[unit] = [inverse_mod(int(v), c) for v in d[unit]]
        val = c**t * (2 * np.pi) ** (-t) * S1 - c ** (2 - t) * (2 * np.pi) ** (t - 2) * S2[ainv]
        val = np.where(unit, val, np.nan + 0j)
        val.flags.writeable = False
        return val, _twist_tail(c, M)


def _fold(A: np.ndarray, n: np.ndarray, c: int) -> np.ndarray:
    """H[r] = sum_{n = r mod c} A[n], summed over a fixed (k, r) grid."""
    size = -(-(len(A) + 1) // c) * c
    buf = np.zeros(size, dtype=complex)
    buf[n] = A
    return buf.reshape(-1, c).sum(axis=0)


# ---------------------------------------------------------------------------
# modular symbols


def modular_symbol(
    a: CuspFormCoefficients,
    gamma_: tuple[int, int, int, int],
    policy: PrecisionPolicy = DEFAULT_POLICY,
    cache: TwistCache | None = None,
) -> complex:
    """<f, gamma> = int_{i infty}^{gamma(i infty)} f(w) dw = (i/c) Lambda(f, 1, -d/c).

    Uses the functional equation Lambda(f, 1, a/c) = -Lambda(f, 1, -d/c); only
    the bottom row matters. Translations (c = 0) give 0.
    """
    ga, gb, gc, gd = (int(v) for v in gamma_)
    if ga * gd - gb * gc != 1:
        raise ValueError(f"matrix {gamma_} is not unimodular")
    if gc % a.level:
        raise ValueError(f"matrix {gamma_} not in Gamma_0({a.level})")
    if gc == 0:
        return 0j
    if gc < 0:
        gc, gd = -gc, -gd
    if cache is not None:
        lam = cache.table(1.0, gc)[gd % gc]
    else:
        lam = lambda_twist(a, TwistParams(1.0, gd, gc), policy)
    return complex(1j / gc * lam)


# ---------------------------------------------------------------------------
# Euler-product ratio for the twisted divisor series


def euler_ratio_identity(
    a: CuspFormCoefficients,
    chi: DirichletCharacter,
    s: complex,
    t: complex,
    M: int = 1 << 18,
    policy: PrecisionPolicy = DEFAULT_POLICY,
) -> tuple[complex, complex]:
    """(LHS, RHS) of
        sum_l a(l) sigma^chi_{2s-1}(l) l^{-t-2s+1}
          = L(f x chi, t) L(f, t + 2s - 1) / L(chi, 2t + 2s - 2).

    Both slowly convergent series (LHS and L(f x chi, t)) use the smooth cutoff
    at M; the other two converge absolutely fast.
    """
    s, t = complex(s), complex(t)
    if t.real <= 1.5 or s.real < 1:
        raise ValueError("need Re t > 3/2 and Re s >= 1")
    w = 2 * s - 1
    a2 = a.upto(4 * M)
    sig = sigma_chi_normalized_table(chi, w, 4 * M)
    lhs = _l_series(a2, lambda n: sig[n], t, 2 * M, "smooth")
    lfchi = _l_series(a2, chi.values, t, 2 * M, "smooth")
    lf = _l_series(a2, None, t + w, 2 * M, "smooth")
    lchi = dirichlet_l_detailed(chi, 2 * t + w - 1, policy).value
    return complex(lhs), complex(lfchi * lf / lchi)
