"""Cosets of Gamma_infty in Gamma_0(N), twisted Kloosterman sums, the
Eisenstein series E, E* (weighted by modular symbols), G and the Poincare
series P, together with their Fourier coefficients.

Characters act on matrices through the lower-right entry, chi(gamma) = chi(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chars import DirichletCharacter, divisors, gauss_sum, sigma_chi
from .context import default_form, twist_cache
from .cuspform import CuspFormCoefficients, eval_F
from .lfun import SeriesValue, dirichlet_l_detailed, inverse_mod
from .policy import DEFAULT_POLICY, PrecisionPolicy, TruncationError
from .specfun import bessel_k, gamma, rgamma

CONVEXITY_EXPONENT = 1.6  # 3/2 + epsilon with epsilon = 0.1

KLOOSTERMAN_SUM = "kloosterman_sum"
CLOSED_FORM = "closed_form"
QUADRATURE_EXTRACTION = "quadrature_extraction"


# ---------------------------------------------------------------------------
# cosets


@dataclass(frozen=True)
class CosetRep:
    """Integer matrix (a, b; c, d), det 1, N | c, canonical up to Gamma_infty:
    c > 0 and 0 <= a < c, or the identity when c = 0."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"({self.a}, {self.b}; {self.c}, {self.d}) has determinant != 1")

    @classmethod
    def from_bottom_row(cls, c: int, d: int) -> "CosetRep":
        """The canonical representative of the coset with bottom row +-(c, d)."""
        if c < 0 or (c == 0 and d < 0):
            c, d = -c, -d
        if c == 0:
            if d != 1:
                raise ValueError("bottom row (0, d) needs d = +-1")
            return cls(1, 0, 0, 1)
        if math.gcd(c, d) != 1:
            raise ValueError(f"gcd({c}, {d}) != 1")
        a = inverse_mod(d, c) if c > 1 else 0
        b = (a * d - 1) // c
        return cls(a, b, c, d)

    def matrix(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def act(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def in_gamma0(self, N: int) -> bool:
        return self.c % N == 0


def enumerate_cosets(N: int, c_max: int) -> list[CosetRep]:
    """Identity plus one representative for each bottom row (c, d mod c),
    N | c <= c_max, gcd(c, d) = 1.

    Each such coset of Gamma_infty \\ Gamma_0(N) / Gamma_infty-translates is
    listed once with 0 <= d < c.
    """
    if c_max < N:
        raise ValueError("c_max must be at least N")
    out = [CosetRep(1, 0, 0, 1)]
    for c in range(N, c_max + 1, N):
        for d in range(c):
            if math.gcd(c, d) == 1:
                out.append(CosetRep.from_bottom_row(c, d))
    return out


def _unit_residues(c: int) -> np.ndarray:
    d = np.arange(c)
    return d[np.gcd(d, c) == 1]


def _inverses(d: np.ndarray, c: int) -> np.ndarray:
    return np.array([inverse_mod(int(v), c) for v in d.tolist()], dtype=np.int64)


# ---------------------------------------------------------------------------
# Kloosterman sums


def _require_multiple(chi: DirichletCharacter, c: int):
    if c <= 0 or c % chi.modulus:
        raise ValueError(f"c = {c} must be a positive multiple of {chi.modulus}")


def kloosterman_chi(n: int, m: int, chi: DirichletCharacter, c: int) -> complex:
    """sum_{d mod c, (d, c) = 1} conj(chi(d)) e((n d + m a) / c), a d = 1 mod c."""
    _require_multiple(chi, c)
    d = _unit_residues(c)
    a = _inverses(d, c)
    ph = np.mod(n * d + m * a, c) / c
    return complex(np.sum(np.conj(chi.values(d)) * np.exp(2j * np.pi * ph)))


def kloosterman_star(
    n: int,
    m: int,
    chi: DirichletCharacter,
    c: int,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    form: CuspFormCoefficients | None = None,
    t: complex = 1.0,
) -> complex:
    """(i / c^t) sum_{d mod c, (d, c) = 1} conj(chi(d)) Lambda(f, t, -d/c) e((n d + m a) / c).

    At t = 1 this is the Kloosterman sum weighted by the modular symbols
    <f, gamma> = (i/c) Lambda(f, 1, -d/c).
    """
    _require_multiple(chi, c)
    lam = twist_cache(form, policy).table(t, c)
    d = _unit_residues(c)
    a = _inverses(d, c) if m else 0
    ph = np.mod(n * d + m * a, c) / c
    terms = np.conj(chi.values(d)) * lam[d] * np.exp(2j * np.pi * ph)
    return complex(1j * c ** (-complex(t)) * np.sum(terms))


def _star_sums_all_n(chi, c, t, cache, n_values) -> np.ndarray:
    """S*(n, 0; c) at weight t for every n in n_values, via one FFT over d."""
    lam = cache.table(t, c)
    v = np.zeros(c, dtype=complex)
    d = _unit_residues(c)
    v[d] = np.conj(chi.values(d)) * lam[d]
    # sum_d v[d] e(n d / c) = c * ifft(v)[n mod c]
    spec = c * np.fft.ifft(v)
    return 1j * c ** (-complex(t)) * spec[np.mod(n_values, c)]


# ---------------------------------------------------------------------------
# Fourier coefficients


@dataclass(frozen=True)
class EisensteinCoefficient:
    n: int
    s: complex
    value: complex
    route: str
    err_est: float = 0.0
    c_max: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": [complex(self.s).real, complex(self.s).imag],
            "value": [self.value.real, self.value.imag],
            "route": self.route,
            "err_est": self.err_est,
            "c_max": self.c_max,
        }


@lru_cache(maxsize=16)
def _classical_sums(modulus: int, index: int, c_max: int, m_max: int) -> np.ndarray:
    """T[k, m] = sum_{0 <= d < Nk, (d, Nk) = 1} conj(chi(d)) e(m d / (Nk)),
    for k = 1..c_max and m = 0..m_max."""
    chi = DirichletCharacter(modulus, index)
    out = np.zeros((c_max + 1, m_max + 1), dtype=complex)
    for k in range(1, c_max + 1):
        C = modulus * k
        d = np.arange(C)
        v = np.where(np.gcd(d, C) == 1, np.conj(chi.values(d)), 0.0)
        spec = C * np.fft.ifft(v)
        out[k] = spec[np.mod(np.arange(m_max + 1), C)]
    out.flags.writeable = False
    return out


def _classical_tail(m: int, sig: float, N: int, c_max: int) -> float:
    # |S_{Nc}(m)| <= sqrt(N) r for the divisors r | m, r | c; sum the delta = c/r tail
    tot = 0.0
    for r in divisors(abs(m)):
        X = c_max / r
        tot += r ** (1 - 2 * sig) * (X ** (1 - 2 * sig) / (2 * sig - 1) + X ** (-2 * sig))
    return math.sqrt(N) * tot


def phi_classical(
    m: int,
    s: complex,
    chi: DirichletCharacter,
    route: str = KLOOSTERMAN_SUM,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int = 2000,
) -> EisensteinCoefficient:
    """m-th coefficient of W_s(mz) in E(z, s; chi), Re s > 1.

    route="kloosterman_sum": pi^s |m|^{s-1} / (Gamma(s) N^{2s}) sum_{c <= c_max}
    c^{-2s} sum_{d mod Nc}^* conj(chi(d)) e(|m| d / Nc) (here c indexes the moduli Nc).
    route="closed_form": (pi/N^2)^s W(conj chi) / (Gamma(s) L(conj chi, 2s))
    sigma^chi_{2s-1}(|m|) / |m|^s.
    """
    s = complex(s)
    if m == 0:
        raise ValueError("m must be nonzero")
    if s.real <= 1:
        raise ValueError("phi_classical needs Re s > 1")
    N = chi.modulus
    am = abs(m)
    if route == KLOOSTERMAN_SUM:
        if am <= 64:
            T = _classical_sums(N, chi.index, c_max, 64)[1:, am]
        else:
            T = np.array([_classical_single(chi, N * k, am) for k in range(1, c_max + 1)])
        k = np.arange(1, c_max + 1)
        csum = np.sum(np.exp(-2 * s * np.log(k)) * T)
        pref = math.pi**s * am ** (s - 1) * rgamma(s) * N ** (-2 * s)
        tail = abs(pref) * _classical_tail(am, s.real, N, c_max)
        return EisensteinCoefficient(m, s, complex(pref * csum), route, tail, c_max)
    if route == CLOSED_FORM:
        lval = dirichlet_l_detailed(chi.conj(), 2 * s, policy)
        W = gauss_sum(chi.conj())
        val = (math.pi / N**2) ** s * W * rgamma(s) / lval.value * sigma_chi(chi, 2 * s - 1, am) / am**s
        err = abs(val) * lval.err_est / abs(lval.value)
        return EisensteinCoefficient(m, s, complex(val), route, err, None)
    raise ValueError(f"unknown route {route!r}")


def _classical_single(chi, C, m):
    d = _unit_residues(C)
    return complex(np.sum(np.conj(chi.values(d)) * np.exp(2j * np.pi * np.mod(m * d, C) / C)))


def _csum_multiples(chi, c_max):
    N = chi.modulus
    if c_max < N:
        raise ValueError("c_max must be at least N")
    return list(range(N, c_max + 1, N))


def _convexity_constant(cache, t, cs) -> float:
    """Largest |Lambda(f, t, -d/c)| / c^{3/2 + 0.1} over the computed moduli."""
    K = 0.0
    for c in cs:
        lam = cache.table(t, c)
        K = max(K, float(np.nanmax(np.abs(lam))) / c**CONVEXITY_EXPONENT)
    return K


def convexity_tail(K: float, alpha: float, N: int, c_max: int) -> float:
    """Bound for sum_{c > c_max, N | c} K c^{-alpha} (alpha > 1)."""
    if alpha <= 1:
        raise TruncationError(f"c-sum tail exponent {alpha:.3g} <= 1: no convergence")
    X = c_max / N
    return K * N ** (-alpha) * (X ** (1 - alpha) / (alpha - 1) + X ** (-alpha))


def star_csum(
    n: int,
    s: complex,
    chi: DirichletCharacter,
    t: complex = 1.0,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    form: CuspFormCoefficients | None = None,
) -> SeriesValue:
    """sum_{N | c <= c_max} c^{-2s} S*(n, 0; c) at weight t (c^{-t} inside S*).

    Tail: |S*| <= phi(c) c^{-Re t} max_d |Lambda| <= K c^{1.6 + 1 - Re t}, K the
    empirical convexity constant over the computed range.
    """
    s, t = complex(s), complex(t)
    c_max = policy.cutoff_csum if c_max is None else c_max
    cache = twist_cache(form, policy)
    cs = _csum_multiples(chi, c_max)
    terms = np.array(
        [c ** (-2 * s) * _star_sums_all_n(chi, c, t, cache, np.array([n]))[0] for c in cs]
    )
    K = _convexity_constant(cache, t, cs)
    alpha = 2 * s.real + t.real - 1 - CONVEXITY_EXPONENT
    tail = convexity_tail(K, alpha, chi.modulus, c_max)
    return SeriesValue(complex(np.sum(terms)), tail, len(cs), "csum", {"c_max": c_max, "K": K})


def phi_star(
    n: int,
    s: complex,
    chi: DirichletCharacter,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    form: CuspFormCoefficients | None = None,
) -> EisensteinCoefficient:
    """n-th coefficient (of W_s(nz)) of E*(z, s; chi):
    pi^s / Gamma(s) |n|^{s-1} sum_{N | c} c^{-2s} S*(n, 0; c)."""
    s = complex(s)
    if n == 0:
        raise ValueError("use phi_star_constant for n = 0")
    if s.real <= 2:
        raise ValueError("phi_star needs Re s > 2")
    cs = star_csum(n, s, chi, 1.0, policy, c_max, form)
    pref = math.pi**s * rgamma(s) * abs(n) ** (s - 1)
    return EisensteinCoefficient(
        n, s, complex(pref * cs.value), KLOOSTERMAN_SUM, abs(pref) * cs.err_est, cs.meta["c_max"]
    )


def constant_prefactor(s: complex) -> complex:
    """sqrt(pi) Gamma(s - 1/2) / Gamma(s)."""
    s = complex(s)
    return complex(math.sqrt(math.pi) * gamma(s - 0.5) * rgamma(s))


def phi_star_constant(
    s: complex,
    chi: DirichletCharacter,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    c_max: int | None = None,
    form: CuspFormCoefficients | None = None,
    diagnostics: bool = False,
) -> EisensteinCoefficient:
    """Coefficient of y^{1-s} in E*(z, s; chi):
    sqrt(pi) Gamma(s - 1/2) / Gamma(s) sum_{N | c} c^{-2s} S*(0, 0; c).

    With ``diagnostics`` the meta dict also carries the Euler-ratio route at
    t in {1.5, 1.3, 1.1} (the c-sum deformed to weight t against
    L(f x chi, t) L(f, t + 2s - 1) / L(chi, 2t + 2s - 2)) and a quadratic
    Richardson extrapolation of the latter to t = 1.
    """
    s = complex(s)
    if s.real <= 2:
        raise ValueError("phi_star_constant needs Re s > 2")
    cs = star_csum(0, s, chi, 1.0, policy, c_max, form)
    pref = constant_prefactor(s)
    meta = {"c_max": cs.meta["c_max"]}
    if diagnostics:
        meta.update(_constant_diagnostics(s, chi, policy, cs.meta["c_max"], form))
    return EisensteinCoefficient(0, s, complex(pref * cs.value), KLOOSTERMAN_SUM, abs(pref) * cs.err_est,
                                 cs.meta["c_max"], meta)


def _constant_diagnostics(s, chi, policy, c_max, form):
    a = default_form() if form is None else form
    N = chi.modulus
    W = gauss_sum(chi.conj())
    lbar = dirichlet_l_detailed(chi.conj(), 2 * s, policy).value
    ts = (1.5, 1.3, 1.1)
    rows = []
    for t in ts:
        cs = star_csum(0, s, chi, t, policy, c_max, form).value
        # sum_l a(l) sigma~(l) l^{-t} = N^{2s} L / W * (2 pi)^t / Gamma(t) * (-i) sum c^{-2s} S*_t
        csum_route = N ** (2 * s) * lbar / W * (2 * math.pi) ** t * rgamma(t) * (-1j) * cs
        ratio = _ratio_route(a, chi, s, t, policy)
        rows.append((t, complex(csum_route), complex(ratio)))
    # quadratic through the three ratio-route values, evaluated at t = 1
    tt = np.array(ts)
    vals = np.array([r[2] for r in rows])
    coef_re = np.polyfit(tt, vals.real, 2)
    coef_im = np.polyfit(tt, vals.imag, 2)
    extrap = complex(np.polyval(coef_re, 1.0), np.polyval(coef_im, 1.0))
    phi_extrap = 1j * W * gamma(s - 0.5) / (2 * math.sqrt(math.pi) * N ** (2 * s) * gamma(s) * lbar) * extrap
    return {
        "weight_t_rows": [
            {"t": t, "csum_route": [c.real, c.imag], "euler_ratio_route": [r.real, r.imag]}
            for t, c, r in rows
        ],
        "richardson_phi_star_constant": [phi_extrap.real, phi_extrap.imag],
    }


def _ratio_route(a, chi, s, t, policy, M: int = 1 << 18):
    """L(f x chi, t) L(f, t+2s-1) / L(chi, 2t+2s-2) with the smoothed series
    for the first factor (entire, so the smooth cutoff converges for any t)."""
    from .lfun import _l_series

    a2 = a.upto(4 * M)
    lfchi = _l_series(a2, chi.values, t, 2 * M, "smooth")
    lf = _l_series(a2, None, t + 2 * s - 1, 2 * M, "smooth")
    lchi = dirichlet_l_detailed(chi, 2 * t + 2 * s - 2, policy).value
    return lfchi * lf / lchi


# ---------------------------------------------------------------------------
# coset windows and series evaluation


@dataclass(frozen=True)
class CosetWindow:
    """Bottom rows (c, d) with c > 0 kept for a point z, and the tail estimate
    of the discarded terms of sum Im(gamma z)^sigma (weights excluded)."""

    c: np.ndarray
    d: np.ndarray
    tail: float


def coset_window(z: complex, N: int, c_max: int, sigma: float, term_eps: float) -> CosetWindow:
    """Every (c, d), N | c <= c_max, gcd(c, d) = 1, with Im(gamma z)^sigma >= term_eps
    (roughly: the d-range per c is the interval where that holds, padded by one)."""
    x, y = z.real, z.imag
    if y <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if sigma <= 1:
        raise ValueError("coset sums need Re s > 1")
    r = term_eps ** (-1.0 / sigma)  # keep |cz + d|^2 <= y r
    cs, ds = [], []
    tail = 0.0
    c_eff = 0
    for c in range(N, c_max + 1, N):
        rad2 = y * r - (c * y) ** 2
        if rad2 <= 0:
            break
        c_eff = c
        D = math.sqrt(rad2) + 1.0
        lo = math.ceil(-c * x - D)
        hi = math.floor(-c * x + D)
        d = np.arange(lo, hi + 1, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        cs.append(np.full(d.shape, c, dtype=np.int64))
        ds.append(d)
        # both sides of the window: 2 int_D^inf (y / u^2)^sigma du
        tail += 2 * y**sigma * D ** (1 - 2 * sigma) / (2 * sigma - 1)
    # moduli past the window or past c_max: int_R (y / (u^2 + c^2 y^2))^sigma du summed over c
    B = math.sqrt(math.pi) * math.gamma(sigma - 0.5) / math.gamma(sigma)
    C = c_eff if c_eff else 0
    X = max(C, N) / N
    tail += B * y ** (1 - sigma) * N ** (1 - 2 * sigma) * (
        X ** (2 - 2 * sigma) / (2 * sigma - 2) + (X ** (1 - 2 * sigma) if C == 0 else 0.0)
    )
    c_arr = np.concatenate(cs) if cs else np.zeros(0, dtype=np.int64)
    d_arr = np.concatenate(ds) if ds else np.zeros(0, dtype=np.int64)
    return CosetWindow(c_arr, d_arr, tail)


def _im_gamma(z, c, d):
    w = c * z + d
    return z.imag / (w.real**2 + w.imag**2)


def _gamma_z(z, c, d):
    """gamma z = a/c - 1/(c (c z + d)) with a = d^{-1} mod c; F and the exponentials
    are 1-periodic so the translation part of gamma is irrelevant."""
    a = np.array([inverse_mod(int(dv), int(cv)) for dv, cv in zip(d.tolist(), c.tolist())], dtype=float)
    return a / c - 1.0 / (c * (c * z + d))


def _as_points(z):
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _series(kind, z, s, chi, c_max, policy, term_eps, form=None, extra=None):
    s = complex(s)
    pts = _as_points(z)
    out = np.empty(pts.shape, dtype=complex)
    tails = np.empty(pts.shape)
    N = chi.modulus
    cache = twist_cache(form, policy) if kind in ("Estar", "G") else None
    a = (default_form() if form is None else form) if kind == "G" else None
    for i, zz in enumerate(pts.tolist()):
        sig = extra["sigma"] if kind == "P" else s.real
        win = coset_window(zz, N, c_max, sig, term_eps)
        c, d = win.c, win.d
        im = _im_gamma(zz, c, d)
        cbar = np.conj(chi.values(d))
        if kind == "E":
            vals = cbar * np.exp(s * np.log(im))
            ident = zz.imag**s
            wt = 1.0
        elif kind == "Estar":
            syms = _modular_symbols(cache, c, d)
            vals = cbar * syms * np.exp(s * np.log(im))
            ident = 0.0
            wt = float(np.max(np.abs(syms))) if syms.size else 0.0
        elif kind == "G":
            gz = _gamma_z(zz, c, d)
            Fg = eval_F(a, gz, policy) if gz.size else np.zeros(0, dtype=complex)
            vals = cbar * Fg * np.exp(s * np.log(im))
            ident = eval_F(a, zz, policy) * zz.imag**s
            wt = float(np.max(np.abs(Fg))) if Fg.size else 0.0
        elif kind == "P":
            n, h = extra["n"], extra["h"]
            gz = _gamma_z(zz, c, d)
            ph = np.mod(n * gz.real, 1.0)
            vals = cbar * np.exp(2j * np.pi * ph) * h(2 * np.pi * abs(n) * im)
            ident = np.exp(2j * np.pi * (n * zz.real % 1.0)) * h(2 * np.pi * abs(n) * zz.imag)
            wt = extra["h_scale"]
        else:
            raise AssertionError(kind)
        out[i] = np.sum(vals) + ident
        tails[i] = win.tail * max(wt, 1.0)
    if np.ndim(z) == 0:
        return SeriesValue(complex(out[0]), float(tails[0]), 0, kind)
    return out, tails


def _modular_symbols(cache, c, d):
    """<f, gamma> = (i/c) Lambda(f, 1, -d/c) for arrays of bottom rows."""
    out = np.empty(c.shape, dtype=complex)
    for cv in np.unique(c).tolist():
        sel = c == cv
        out[sel] = 1j / cv * cache.table(1.0, cv)[np.mod(d[sel], cv)]
    return out


def modular_symbols_rows(c, d, policy=DEFAULT_POLICY, form=None):
    return _modular_symbols(twist_cache(form, policy), np.asarray(c), np.asarray(d))


DEFAULT_TERM_EPS = 1e-17
G_TERM_EPS = 1e-12


def eval_E(z, s, chi, c_max: int | None = None, policy: PrecisionPolicy = DEFAULT_POLICY,
           term_eps: float = DEFAULT_TERM_EPS, detailed: bool = False):
    """E(z, s; chi) = sum_{Gamma_infty \\ Gamma_0(N)} conj(chi(gamma)) Im(gamma z)^s, Re s > 1."""
    if complex(s).real <= 1:
        raise ValueError("E needs Re s > 1")
    c_max = policy.cutoff_csum if c_max is None else c_max
    res = _series("E", z, s, chi, c_max, policy, term_eps)
    return _finish(res, detailed)


def eval_E_star(z, s, chi, c_max: int | None = None, policy: PrecisionPolicy = DEFAULT_POLICY,
                term_eps: float = DEFAULT_TERM_EPS, form=None, detailed: bool = False):
    """E*(z, s; chi) = sum conj(chi(gamma)) <f, gamma> Im(gamma z)^s, Re s > 2."""
    if complex(s).real <= 2:
        raise ValueError("E* needs Re s > 2")
    c_max = policy.cutoff_csum if c_max is None else c_max
    return _finish(_series("Estar", z, s, chi, c_max, policy, term_eps, form), detailed)


def eval_G(z, s, chi, c_max: int = 88, policy: PrecisionPolicy = DEFAULT_POLICY,
           term_eps: float = G_TERM_EPS, form=None, detailed: bool = False):
    """G(z, s; chi) = sum conj(chi(gamma)) F(gamma z) Im(gamma z)^s, Re s > 2.

    Each term needs a q-expansion at height Im(gamma z), so the default window
    is coarser than for E and E*.
    """
    if complex(s).real <= 2:
        raise ValueError("G needs Re s > 2")
    return _finish(_series("G", z, s, chi, c_max, policy, term_eps, form), detailed)


def eval_P(n: int, h, z, chi, c_max: int | None = None, policy: PrecisionPolicy = DEFAULT_POLICY,
           term_eps: float = DEFAULT_TERM_EPS, decay: float | None = None, detailed: bool = False):
    """P(z) = sum conj(chi(gamma)) e(n Re(gamma z)) h(2 pi |n| Im(gamma z)).

    ``decay`` is an exponent sigma > 1 with |h(2 pi |n| y)| <~ y^sigma near 0,
    used to size the coset window; for h = h_x it defaults to Re x.
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    if decay is None:
        decay = complex(getattr(h, "x", 2.0)).real
    c_max = policy.cutoff_csum if c_max is None else c_max
    extra = {"n": n, "h": h, "sigma": decay, "h_scale": (2 * math.pi * abs(n)) ** decay}
    return _finish(_series("P", z, 0.0, chi, c_max, policy, term_eps, extra=extra), detailed)


def _finish(res, detailed):
    if isinstance(res, SeriesValue):
        return res if detailed else res.value
    vals, tails = res
    return (vals, tails) if detailed else vals


# ---------------------------------------------------------------------------
# Fourier extraction


# Each coset pair +-gamma contributes to both e(nx) and e(-nx) shapes, so the
# non-constant terms of the expansion are 2 phi(n) W_s(nz) when phi(n) is given
# by the c-sum formulas above; the constant term carries no such factor.
NONCONSTANT_FACTOR = 2.0


def fourier_coefficient(func, n: int, y: float, nodes: int = 64) -> complex:
    """(1/K) sum_j func(x_j + iy) e(-n x_j), x_j = j/K: the n-th Fourier
    coefficient of a 1-periodic function, aliased only by n + K Z."""
    x = np.arange(nodes) / nodes
    vals = np.asarray(func(x + 1j * y))
    return complex(np.mean(vals * np.exp(-2j * np.pi * np.mod(n * x, 1.0))))


def whittaker_w(n: int, s: complex, y: float) -> complex:
    """sqrt(|n| y) K_{s-1/2}(2 pi |n| y) (the factor multiplying e(nx))."""
    return complex(math.sqrt(abs(n) * y) * bessel_k(complex(s) - 0.5, 2 * math.pi * abs(n) * y))


def phi_star_extract(
    n: int,
    s: complex,
    chi: DirichletCharacter,
    y: float = 0.5,
    nodes: int = 64,
    c_max: int | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    term_eps: float = DEFAULT_TERM_EPS,
    form=None,
) -> EisensteinCoefficient:
    """Fourier coefficient of the truncated E*(., s; chi) at height y, divided
    by 2 W_s (n != 0) or by y^{1-s} (n = 0), so that it is directly comparable
    with phi_star / phi_star_constant."""
    x = np.arange(nodes) / nodes
    vals, tails = eval_E_star(x + 1j * y, s, chi, c_max, policy, term_eps, form, detailed=True)
    coef = complex(np.mean(vals * np.exp(-2j * np.pi * np.mod(n * x, 1.0))))
    norm = NONCONSTANT_FACTOR * whittaker_w(n, s, y) if n else complex(y ** (1 - complex(s)))
    return EisensteinCoefficient(
        n, complex(s), coef / norm, QUADRATURE_EXTRACTION, float(np.max(tails)) / abs(norm),
        c_max if c_max is not None else policy.cutoff_csum, {"y": y, "nodes": nodes},
    )


def phi_classical_extract(
    m: int, s: complex, chi: DirichletCharacter, y: float = 1.0, nodes: int = 64,
    c_max: int | None = None, policy: PrecisionPolicy = DEFAULT_POLICY, term_eps: float = DEFAULT_TERM_EPS,
) -> EisensteinCoefficient:
    """m-th coefficient of the truncated E(., s; chi) at height y over 2 W_s."""
    x = np.arange(nodes) / nodes
    vals, tails = eval_E(x + 1j * y, s, chi, c_max, policy, term_eps, detailed=True)
    coef = complex(np.mean(vals * np.exp(-2j * np.pi * np.mod(m * x, 1.0))))
    norm = NONCONSTANT_FACTOR * whittaker_w(m, s, y)
    return EisensteinCoefficient(
        m, complex(s), coef / norm, QUADRATURE_EXTRACTION, float(np.max(tails)) / abs(norm),
        c_max if c_max is not None else policy.cutoff_csum, {"y": y, "nodes": nodes},
    )
