"""Fourier coefficients of the weight-2 newform, evaluation of f and of its
Eichler integral F(z) = int_{i infty}^z f(w) dw."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chars import factorize, moebius
from .policy import DEFAULT_POLICY, PrecisionPolicy, TruncationError

ETA_PRODUCT = "eta_product"
HECKE_RECURSION = "hecke_recursion"


@dataclass(frozen=True, eq=False)
class CuspFormCoefficients:
    """a(1..M) of a normalized weight-2 eigenform on Gamma_0(level).

    ``coeffs[n] == a(n)``; ``coeffs[0]`` is a placeholder 0. ``extend`` is a
    callable returning a larger table of the same form, when the source can
    produce one.
    """

    level: int
    coeffs: np.ndarray
    source: str
    weight: int = 2
    extend: Callable[[int], "CuspFormCoefficients"] | None = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        if self.weight != 2:
            raise ValueError("only weight 2 is supported")
        if self.coeffs.dtype != np.int64:
            raise TypeError("coefficients must be int64")
        if self.M >= 1 and self.coeffs[1] != 1:
            raise ValueError("form is not normalized: a(1) != 1")

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.M:
            raise IndexError(f"a({n}) outside stored range 1..{self.M}")
        return int(self.coeffs[n])

    def upto(self, M: int) -> "CuspFormCoefficients":
        """A table holding at least a(1..M)."""
        if M <= self.M:
            return self
        if self.extend is None:
            raise TruncationError(f"need a(n) up to {M}, only {self.M} stored and no extension")
        return self.extend(M)

    def as_float(self, M: int | None = None) -> np.ndarray:
        tab = self.upto(M) if M is not None else self
        return tab.coeffs[: (M if M is not None else tab.M) + 1].astype(float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "a(n)"])
        for n in range(1, self.M + 1):
            w.writerow([n, int(self.coeffs[n])])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, level: int, source: str = HECKE_RECURSION) -> "CuspFormCoefficients":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and not rows[0][0].strip().lstrip("-").isdigit():
            rows = rows[1:]
        vals = {int(r[0]): int(r[1]) for r in rows if r}
        M = max(vals)
        if sorted(vals) != list(range(1, M + 1)):
            raise ValueError("CSV must list n = 1..M without gaps")
        arr = np.zeros(M + 1, dtype=np.int64)
        for n, v in vals.items():
            arr[n] = v
        return cls(level=level, coeffs=arr, source=source)


# ---------------------------------------------------------------------------
# eta product for level 11:  q prod (1-q^n)^2 (1-q^{11n})^2


def _euler_function(M: int) -> np.ndarray:
    """Coefficients of prod_{n>=1} (1 - q^n) up to q^M (pentagonal number theorem)."""
    e = np.zeros(M + 1, dtype=np.int64)
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            p = kk * (3 * kk - 1) // 2
            if p <= M:
                e[p] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return e


def _int_convolve(x: np.ndarray, y: np.ndarray, M: int) -> np.ndarray:
    """Exact product of two integer power series, truncated at q^M."""
    x = x[: M + 1]
    y = y[: M + 1]
    if M <= 1 << 13:
        return np.convolve(x, y)[: M + 1].astype(np.int64)
    size = 1 << int(math.ceil(math.log2(2 * M + 2)))
    prod = np.fft.irfft(np.fft.rfft(x.astype(float), size) * np.fft.rfft(y.astype(float), size), size)
    prod = prod[: M + 1]
    out = np.rint(prod)
    resid = float(np.max(np.abs(prod - out)))
    if resid > 0.05:
        raise ArithmeticError(f"FFT convolution lost integrality (residual {resid:.3g})")
    if np.max(np.abs(out)) > 2**62:
        raise OverflowError("coefficient exceeds int64 range")
    return out.astype(np.int64)


_ETA_CACHE: dict[int, np.ndarray] = {}


def eta_product_coeffs(M: int) -> CuspFormCoefficients:
    """a(1..M) of the level-11 newform q prod (1-q^n)^2 (1-q^{11n})^2."""
    if M < 1:
        raise ValueError("M must be >= 1")
    have = max(_ETA_CACHE) if _ETA_CACHE else 0
    if have >= M:
        arr = _ETA_CACHE[have][: M + 1]
    else:
        # grow in powers of two so repeated requests reuse one table
        size = max(M, 1 << max(10, int(math.ceil(math.log2(M)))))
        L = size - 1
        e = _euler_function(L)
        e2 = _int_convolve(e, e, L)
        e2_11 = np.zeros(L + 1, dtype=np.int64)
        e2_11[::11] = e2[: L // 11 + 1]
        prod = _int_convolve(e2, e2_11, L)
        full = np.zeros(size + 1, dtype=np.int64)
        full[1:] = prod
        full.flags.writeable = False
        _ETA_CACHE.clear()
        _ETA_CACHE[size] = full
        arr = full[: M + 1]
    return CuspFormCoefficients(level=11, coeffs=arr, source=ETA_PRODUCT, extend=eta_product_coeffs)


def hecke_recursion_coeffs(level: int, ap: dict[int, int], M: int) -> CuspFormCoefficients:
    """Coefficients from prime eigenvalues via multiplicativity and
    a(p^{k+1}) = a(p) a(p^k) - [p does not divide level] p a(p^{k-1})."""
    arr = np.zeros(M + 1, dtype=np.int64)
    arr[1] = 1
    for n in range(2, M + 1):
        f = factorize(n)
        val = 1
        for p, e in f.items():
            if p not in ap:
                raise KeyError(f"a({p}) not supplied")
            val *= _prime_power_coeff(p, e, ap[p], level)
        arr[n] = val
    return CuspFormCoefficients(level=level, coeffs=arr, source=HECKE_RECURSION)


def _prime_power_coeff(p: int, e: int, a_p: int, level: int) -> int:
    prev, cur = 1, a_p
    if e == 0:
        return 1
    for _ in range(e - 1):
        nxt = a_p * cur - (0 if level % p == 0 else p) * prev
        prev, cur = cur, nxt
    return cur


def divisor_count_table(M: int) -> np.ndarray:
    d = np.zeros(M + 1, dtype=np.int64)
    r = math.isqrt(M)
    for k in range(1, r + 1):
        # pairs (k, m/k) with k <= m/k
        mult = np.arange(k * k, M + 1, k)
        d[mult] += 2
        d[k * k] -= 1
    return d


def hecke_identity_check(
    a: CuspFormCoefficients, m: int, n: int, coprime_to_level: bool = True
) -> bool:
    """a(mn) == sum_{d | (m,n), (d, level) = 1} mu(d) d a(m/d) a(n/d), exactly.

    With ``coprime_to_level=False`` the level condition on d is dropped; that
    form fails whenever a prime dividing the level divides gcd(m, n), e.g.
    a(121) = 1 but a(11)^2 - 11 a(1)^2 = -10 at level 11.
    """
    if m < 1 or n < 1 or m * n > a.M:
        raise IndexError(f"(m, n) = ({m}, {n}) outside stored range")
    g = math.gcd(m, n)
    rhs = 0
    for d in range(1, g + 1):
        if g % d == 0:
            if coprime_to_level and math.gcd(d, a.level) != 1:
                continue
            mu = moebius(d)
            if mu:
                rhs += mu * d * a[m // d] * a[n // d]
    return a[m * n] == rhs


def ramanujan_bound_holds(a: CuspFormCoefficients, M: int | None = None) -> bool:
    M = a.M if M is None else M
    d = divisor_count_table(M)
    n = np.arange(1, M + 1)
    return bool(np.all(np.abs(a.coeffs[1 : M + 1]) <= d[1:] * np.sqrt(n) * (1 + 1e-12)))


# ---------------------------------------------------------------------------
# evaluation


def qseries_terms_needed(y: float, eps: float, integrated: bool) -> int:
    """Smallest M with sum_{n>M} |a(n)| w(n) e^{-2 pi n y} < eps, using d(n) <= 2 sqrt(n)
    so |a(n)| <= 2n; w(n) = 1 for f and 1/(2 pi n) for F."""
    r = math.exp(-2 * math.pi * y)
    if r >= 1.0:
        raise ValueError("y must be positive")
    lo = 1
    while _qtail(lo, r, integrated) >= eps:
        lo *= 2
    hi = lo
    lo = max(1, lo // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if _qtail(mid, r, integrated) < eps:
            hi = mid
        else:
            lo = mid + 1
    return hi


def _qtail(M: int, r: float, integrated: bool) -> float:
    rM = r ** (M + 1)
    if integrated:
        return rM / (math.pi * (1 - r))
    return 2 * rM * ((M + 1) * (1 - r) + r) / (1 - r) ** 2


def _qsum(a: CuspFormCoefficients, z: np.ndarray, policy: PrecisionPolicy, integrated: bool):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z.imag <= 0):
        raise ValueError("points must lie in the upper half-plane")
    Ms = np.array([qseries_terms_needed(float(y), policy.epsilon_abs, integrated) for y in z.imag])
    Mmax = int(Ms.max())
    if Mmax > policy.cutoff_qseries:
        raise TruncationError(
            f"q-series needs {Mmax} terms at Im z = {z.imag.min():.3g} (> {policy.cutoff_qseries})"
        )
    a = a.upto(Mmax)
    w = a.coeffs[: Mmax + 1].astype(complex)
    if integrated:
        n = np.arange(1, Mmax + 1)
        w[1:] = w[1:] / (2j * np.pi * n)
    out = np.zeros(z.shape, dtype=complex)
    order = np.argsort(Ms, kind="stable")
    # process points in blocks of similar truncation, n in chunks
    chunk_elems = 4_000_000
    start = 0
    while start < len(order):
        Mb = int(Ms[order[start]])
        stop = start + 1
        while stop < len(order) and Ms[order[stop]] <= 2 * Mb:
            stop += 1
        idx = order[start:stop]
        Mblk = int(Ms[idx].max())
        zz = z[idx]
        acc = np.zeros(len(idx), dtype=complex)
        step = max(1, chunk_elems // len(idx))
        for n0 in range(1, Mblk + 1, step):
            n = np.arange(n0, min(Mblk, n0 + step - 1) + 1)
            # reduce the phase n*x mod 1 before exponentiating
            ph = np.mod(np.outer(zz.real, n), 1.0)
            mag = np.exp(-2 * np.pi * np.outer(zz.imag, n))
            acc += (mag * np.exp(2j * np.pi * ph)) @ w[n]
        out[idx] = acc
        start = stop
    return out


def eval_f(a: CuspFormCoefficients, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """f(z) = sum a(n) e^{2 pi i n z}; scalar in, scalar out."""
    out = _qsum(a, z, policy, integrated=False)
    return complex(out[0]) if np.ndim(z) == 0 else out


def eval_F(a: CuspFormCoefficients, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Eichler integral F(z) = sum a(n)/(2 pi i n) e^{2 pi i n z}."""
    out = _qsum(a, z, policy, integrated=True)
    return complex(out[0]) if np.ndim(z) == 0 else out
