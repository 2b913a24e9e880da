"""Identity checks: each computes one quantity by two independent routes and
records the outcome as a VerificationReport."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import eisenstein as eis
from .chars import DirichletCharacter, gauss_sum, make_character
from .context import default_form
from .convolution import ConvolutionQuery, L_shift, L_weighted, dds_csum, dds_direct, tail_series
from .cuspform import eval_F, hecke_identity_check, ramanujan_bound_holds
from .lfun import TwistParams, euler_ratio_identity, inverse_mod, lambda_twist, modular_symbol
from .policy import DEFAULT_POLICY, PrecisionPolicy
from .specfun import TestFunctionHx, bessel_k, k_transform_hx_closed, k_transform_numeric
from .quadrature import tanh_sinh


@dataclass(frozen=True)
class VerificationReport:
    """Two routes to one quantity. ``tolerance`` is absolute; for relative
    criteria it is the relative tolerance times |route_b|."""

    identity_id: str
    route_a: complex
    route_b: complex
    abs_diff: float
    tolerance: float
    status: str
    runtime_ms: int
    truncation: dict
    note: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def rel_diff(self) -> float:
        b = abs(self.route_b)
        return self.abs_diff / b if b else math.inf if self.abs_diff else 0.0

    def to_json(self) -> dict:
        def cx(v):
            v = complex(v)
            return [v.real, v.imag]

        return {
            "identity_id": self.identity_id,
            "route_a": cx(self.route_a),
            "route_b": cx(self.route_b),
            "abs_diff": self.abs_diff,
            "tolerance": self.tolerance,
            "status": self.status,
            "runtime_ms": self.runtime_ms,
            "truncation": self.truncation,
            "note": self.note,
        }


class _Clock:
    def __init__(self):
        self.t0 = time.perf_counter()

    def ms(self) -> int:
        return int(round(1000 * (time.perf_counter() - self.t0)))


def make_report(identity_id, a, b, tol, clock, policy, relative=False, note="", **trunc) -> VerificationReport:
    a, b = complex(a), complex(b)
    diff = abs(a - b)
    tol_abs = tol * abs(b) if relative else tol
    snap = policy.snapshot()
    snap.update(trunc)
    return VerificationReport(
        identity_id, a, b, float(diff), float(tol_abs), "pass" if diff <= tol_abs else "fail",
        clock.ms(), snap, note,
    )


def _chi(chi):
    return chi if chi is not None else make_character(11, 2)


# ---------------------------------------------------------------------------
# checks


def check_lemma(policy=DEFAULT_POLICY, chi=None, c_max: int = 2000):
    """Kloosterman-sum route vs closed form for the classical coefficients."""
    chi = _chi(chi)
    out = []
    for m in (1, 2, 3):
        for s in (1.5, 2.0, 2.5 + 0.5j):
            clk = _Clock()
            k = eis.phi_classical(m, s, chi, eis.KLOOSTERMAN_SUM, policy, c_max)
            c = eis.phi_classical(m, s, chi, eis.CLOSED_FORM, policy)
            out.append(make_report(f"lemma.m={m}.s={_fmt(s)}", k.value, c.value, 1e-5 + k.err_est + c.err_est,
                                   clk, policy, c_max_index=c_max))
    return out


def check_dds_routes(policy=DEFAULT_POLICY, chi=None, ns=(-2, -1, 1, 2), s=2.5, ts=(1.6, 1.8)):
    chi = _chi(chi)
    out = []
    for n in ns:
        for t in ts:
            clk = _Clock()
            q = ConvolutionQuery(n, s, t)
            d = dds_direct(q, chi=chi, policy=policy, detailed=True)
            c = dds_csum(q, chi=chi, policy=policy, detailed=True)
            out.append(make_report(f"dds.n={n}.s={_fmt(s)}.t={_fmt(t)}", d.value, c.value, 1e-5, clk, policy,
                                   relative=True, direct_M=d.meta["M"], c_max=c.meta["c_max"]))
    return out


def check_functional_equation(policy=DEFAULT_POLICY, count: int = 20, seed: int = 20240611):
    a = default_form()
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        clk = _Clock()
        c = int(rng.choice([11, 22, 33, 44]))
        d = int(rng.integers(1, c))
        while math.gcd(d, c) != 1:
            d = int(rng.integers(1, c))
        t = complex(rng.uniform(0.5, 1.5), rng.uniform(-2.0, 2.0))
        ainv = inverse_mod(d, c)
        lhs = lambda_twist(a, TwistParams(t, d, c), policy)
        rhs = -lambda_twist(a, TwistParams(2 - t, -ainv, c), policy)
        out.append(make_report(f"functional-equation.{k:02d}.c={c}.d={d}", lhs, rhs, 1e-9, clk, policy,
                               note=f"t={t.real:.4f}{t.imag:+.4f}i"))
    return out


MODSYM_POINTS = (0.2 + 0.9j, -0.35 + 0.6j, 0.1 + 1.3j)


def random_gamma0(rng, N: int = 11, c_choices=(11, 22, 33, 44, 55, 66)) -> tuple[int, int, int, int]:
    c = int(rng.choice(c_choices)) * int(rng.choice([1, -1]))
    while True:
        d = int(rng.integers(-60, 61))
        if math.gcd(d, c) == 1:
            break
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
    b = (a * d - 1) // c
    return (a, b, c, d)


def check_modular_symbols(policy=DEFAULT_POLICY, count: int = 10, seed: int = 7):
    a = default_form()
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        g = random_gamma0(rng)
        clk = _Clock()
        ms = modular_symbol(a, g, policy)
        for j, z in enumerate(MODSYM_POINTS):
            gz = (g[0] * z + g[1]) / (g[2] * z + g[3])
            cob = eval_F(a, gz, policy) - eval_F(a, z, policy)
            out.append(make_report(f"modular-symbol.{k:02d}.z{j}", ms, cob, 1e-8, clk, policy,
                                   note=f"gamma={g}"))
    return out


def check_hecke(policy=DEFAULT_POLICY):
    clk = _Clock()
    a = default_form().upto(10_000)
    bad = [(m, n) for m in range(1, 201) for n in range(1, 200 // m + 1) if not hecke_identity_check(a, m, n)]
    r1 = make_report("hecke.identity.mn<=200", len(bad), 0, 0, clk, policy,
                     note="pairs failing a(mn) = sum mu(d) d a(m/d) a(n/d), (d, N) = 1")
    clk = _Clock()
    ok = ramanujan_bound_holds(a, 10_000)
    r2 = make_report("hecke.ramanujan.n<=1e4", 0 if ok else 1, 0, 0, clk, policy)
    return [r1, r2]


def check_euler_ratio(policy=DEFAULT_POLICY, chi=None):
    chi = _chi(chi)
    a = default_form()
    out = []
    for s, t in ((2.5, 1.8), (3.0, 2.0)):
        clk = _Clock()
        lhs, rhs = euler_ratio_identity(a, chi, s, t, policy=policy)
        out.append(make_report(f"euler-ratio.s={_fmt(s)}.t={_fmt(t)}", lhs, rhs, 1e-6, clk, policy, relative=True))
    return out


def check_theorem_chain(policy=DEFAULT_POLICY, chi=None, n=-1, s=3.0, y=0.5, nodes=64, c_max=1100):
    """phi*(n, s) by its c-sum against the Fourier coefficient of the truncated E*."""
    chi = _chi(chi)
    clk = _Clock()
    pc = eis.phi_star(n, s, chi, policy, c_max)
    pe = eis.phi_star_extract(n, s, chi, y, nodes, c_max, policy)
    r_abs = make_report(f"theorem-chain.n={n}.s={_fmt(s)}", pe.value, pc.value, 1e-3, clk, policy,
                        c_max=c_max, nodes=nodes, y=y)
    r_rel = make_report(f"theorem-chain.relative.n={n}.s={_fmt(s)}", pe.value, pc.value, 1e-6, clk, policy,
                        relative=True, c_max=c_max, nodes=nodes, y=y,
                        note="extraction divided by 2 W_s")
    return [r_abs, r_rel]


COMPLETION_POINTS = (0.3 + 1.0j, -0.2 + 0.7j, 0.45 + 0.6j)
AUTOMORPHY_MATRICES = ((1, 0, 11, 1), (6, 1, 11, 2), (4, 1, 11, 3))
AUTOMORPHY_POINTS = (-1 / 11 + 1j / 11, 0.3 + 1.2j)


def check_completion(policy=DEFAULT_POLICY, chi=None, s=3.0, c_max=88, term_eps=eis.G_TERM_EPS):
    """E* = G - F E on a shared coset window (term-exact), and the automorphy
    laws of E, G and E*."""
    chi = _chi(chi)
    a = default_form()
    out = []
    for j, z in enumerate(COMPLETION_POINTS):
        clk = _Clock()
        es = eis.eval_E_star(z, s, chi, c_max, policy, term_eps)
        g = eis.eval_G(z, s, chi, c_max, policy, term_eps)
        e = eis.eval_E(z, s, chi, c_max, policy, term_eps)
        out.append(make_report(f"completion.z{j}", es, g - eval_F(a, z, policy) * e, 1e-10, clk, policy,
                               c_max=c_max, term_eps=term_eps))
    for g_ in AUTOMORPHY_MATRICES:
        rep = eis.CosetRep(*g_)
        ch = chi(g_[3])
        ms = modular_symbol(a, g_, policy)
        for j, z in enumerate(AUTOMORPHY_POINTS):
            gz = rep.act(z)
            clk = _Clock()
            e0 = eis.eval_E(z, s, chi, policy=policy)
            e1 = eis.eval_E(gz, s, chi, policy=policy)
            out.append(make_report(f"automorphy.E.{g_}.z{j}", e1, ch * e0, 1e-6, clk, policy))
            clk = _Clock()
            s0 = eis.eval_E_star(z, s, chi, policy=policy)
            s1 = eis.eval_E_star(gz, s, chi, policy=policy)
            out.append(make_report(f"automorphy.E*.{g_}.z{j}", s1, ch * (s0 - ms * e0), 1e-5, clk, policy))
            clk = _Clock()
            g0 = eis.eval_G(z, s, chi, policy=policy)
            g1 = eis.eval_G(gz, s, chi, policy=policy)
            out.append(make_report(f"automorphy.G.{g_}.z{j}", g1, ch * g0, 1e-5, clk, policy))
    return out


K_GRID_X = (1.5, 2.0, 2.5, 3.0, 4.0)
K_GRID_S = (0.2, 0.45, 0.7j, 0.3 + 0.5j, 0.8)


def check_k_transform(policy=DEFAULT_POLICY, seed: int = 3):
    out = []
    for x in K_GRID_X:
        for s in K_GRID_S:
            clk = _Clock()
            num, err = k_transform_numeric(TestFunctionHx(x), s, policy)
            closed = k_transform_hx_closed(x, s)
            out.append(make_report(f"k-transform.x={_fmt(x)}.s={_fmt(s)}", num, closed, 1e-6, clk, policy,
                                   relative=True))
    rng = np.random.default_rng(seed)
    for k in range(5):
        clk = _Clock()
        n = -int(rng.integers(1, 6))
        l = int(rng.integers(1, 8))
        x = float(rng.uniform(1.5, 4.0))
        s = complex(rng.uniform(0.0, 0.8), rng.uniform(-1.0, 1.0))
        q = abs(n) / abs(n - l)
        htilde = lambda y, x=x, q=q, l=l, n=n: TestFunctionHx(x)(q * y) * np.exp(-l * y / abs(n - l))  # noqa: E731
        lhs, _ = k_transform_numeric(htilde, s, policy)
        rhs, _ = k_transform_numeric(TestFunctionHx(x), s, policy)
        out.append(make_report(f"k-scaling.{k}.n={n}.l={l}", lhs, q**x * rhs, 1e-12, clk, policy, relative=True,
                               note=f"x={x:.4f} s={_fmt(s)}"))
    return out


def check_decomposition(policy=DEFAULT_POLICY, chi=None, n=-1, s=2.5, x1=4.0, x2=6.0):
    """L(x1) - L(x2) = |n|^{x2-s} T(x2) - |n|^{x1-s} T(x1): left side from the
    weighted sums (l-route tails), right side from the divisor-pair tails."""
    chi = _chi(chi)
    clk = _Clock()
    lw1 = L_weighted(n, x1, s, chi=chi, policy=policy)
    lw2 = L_weighted(n, x2, s, chi=chi, policy=policy)
    t1 = tail_series(n, x1, s, chi=chi, policy=policy, route="divisor_pairs")
    t2 = tail_series(n, x2, s, chi=chi, policy=policy, route="divisor_pairs")
    rhs = abs(n) ** (x2 - s) * t2 - abs(n) ** (x1 - s) * t1
    out = [make_report(f"decomposition.cross.n={n}.s={_fmt(s)}", lw1 - lw2, rhs, 1e-5, clk, policy, relative=True)]
    clk = _Clock()
    base = L_shift(n, s, chi=chi, policy=policy)
    gaps = [abs(L_weighted(n, x, s, chi=chi, policy=policy) - base) for x in (4.0, 6.0, 8.0, 10.0)]
    increases = sum(max(0.0, gaps[i + 1] - gaps[i]) for i in range(3))
    out.append(make_report(f"decomposition.monotone.n={n}.s={_fmt(s)}", increases, 0.0, 0.0, clk, policy,
                           note="gaps |L(x) - L| at x=4,6,8,10: " + ", ".join(f"{g:.3e}" for g in gaps)))
    return out


def unfolding_integrals(n: int, s: complex, x: float, chi: DirichletCharacter, policy=DEFAULT_POLICY,
                        y_range=(0.1, 10.0), y_nodes: int = 48, nodes: int = 64, term_eps: float = 1e-11):
    """(int c_n(y) conj(h(2 pi |n| y)) y^{-2} dy, 2 phi(n) int W(y) conj(h(2 pi |n| y)) y^{-2} dy)
    with h = h_x, c_n the e(nx)-coefficient of the truncated E(., s; chi), W(y) =
    sqrt(|n| y) K_{s-1/2}(2 pi |n| y). Left side: Gauss-Legendre in y over
    ``y_range`` (h_x kills the rest); right side: double-exponential quadrature
    on (0, inf)."""
    h = TestFunctionHx(x).conj()
    g, w = np.polynomial.legendre.leggauss(y_nodes)
    y0, y1 = y_range
    ys = 0.5 * (y1 - y0) * g + 0.5 * (y1 + y0)
    ws = 0.5 * (y1 - y0) * w
    xs = np.arange(nodes) / nodes
    lhs = 0j
    for yy, ww in zip(ys.tolist(), ws.tolist()):
        vals = eis.eval_E(xs + 1j * yy, s, chi, policy=policy, term_eps=term_eps)
        cn = np.mean(vals * np.exp(-2j * np.pi * np.mod(n * xs, 1.0)))
        lhs += ww * cn * h(2 * np.pi * abs(n) * yy) / yy**2
    phi = eis.phi_classical(n, s, chi, eis.CLOSED_FORM, policy).value
    whit = lambda y: np.sqrt(abs(n) * y) * bessel_k(complex(s) - 0.5, 2 * np.pi * abs(n) * y)  # noqa: E731
    f = lambda y: whit(y) * h(2 * np.pi * abs(n) * y) / y**2  # noqa: E731
    from .quadrature import integrate_half_line

    integral, _ = integrate_half_line(f, 1.0, policy.quadrature_nodes)
    rhs = eis.NONCONSTANT_FACTOR * phi * integral
    return complex(lhs), complex(rhs)


def check_unfolding(policy=DEFAULT_POLICY, chi=None, n=1, s=2.0, x=12.0):
    chi = _chi(chi)
    clk = _Clock()
    lhs, rhs = unfolding_integrals(n, s, x, chi, policy)
    r1 = make_report(f"unfolding.n={n}.s={_fmt(s)}.x={_fmt(x)}", lhs, rhs, 1e-4, clk, policy, relative=True)
    # the same y-integral of W against h, through the K-transform closed form
    clk = _Clock()
    phi = eis.phi_classical(n, s, chi, eis.CLOSED_FORM, policy).value
    closed = eis.NONCONSTANT_FACTOR * phi * math.sqrt(2 * math.pi) * abs(n) * k_transform_hx_closed(x, complex(s) - 0.5)
    r2 = make_report(f"unfolding.k-closed.n={n}.s={_fmt(s)}.x={_fmt(x)}", rhs, closed, 1e-8, clk, policy, relative=True)
    return [r1, r2]


def check_constant_term(policy=DEFAULT_POLICY, chi=None, s=3.0):
    """Constant term of E*: c-sum vs extraction, and the weight-t deformation of
    the c-sum against the Euler-ratio product for t in {1.5, 1.3, 1.1}."""
    chi = _chi(chi)
    clk = _Clock()
    c = eis.phi_star_constant(s, chi, policy, diagnostics=True)
    e = eis.phi_star_extract(0, s, chi, 0.5, 64, None, policy)
    out = [make_report(f"constant-term.extraction.s={_fmt(s)}", e.value, c.value, 1e-6, clk, policy, relative=True)]
    for row in c.meta["weight_t_rows"]:
        a_ = complex(*row["csum_route"])
        b_ = complex(*row["euler_ratio_route"])
        out.append(make_report(f"constant-term.weight-t={row['t']}", a_, b_, 1e-6, _Clock(), policy, relative=True))
    ri = complex(*c.meta["richardson_phi_star_constant"])
    out.append(make_report(f"constant-term.richardson.s={_fmt(s)}", ri, c.value, 5e-2, clk, policy, relative=True,
                           note="diagnostic: quadratic extrapolation from t = 1.5, 1.3, 1.1"))
    return out


def check_characters(policy=DEFAULT_POLICY):
    out = []
    for idx in range(1, 10):
        chi = make_character(11, idx)
        clk = _Clock()
        W = gauss_sum(chi.conj())
        out.append(make_report(f"gauss-sum.|W|^2.index={idx}", abs(W) ** 2, 11.0, 11e-12, clk, policy))
    return out


def _fmt(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return f"{v.real:g}"
    if v.real == 0:
        return f"{v.imag:g}i"
    return f"{v.real:g}{v.imag:+g}i"


SUITES = {
    "characters": check_characters,
    "lemma": check_lemma,
    "dds": check_dds_routes,
    "functional-equation": check_functional_equation,
    "modular-symbol": check_modular_symbols,
    "hecke": check_hecke,
    "euler-ratio": check_euler_ratio,
    "theorem-chain": check_theorem_chain,
    "completion": check_completion,
    "k-transform": check_k_transform,
    "decomposition": check_decomposition,
    "unfolding": check_unfolding,
    "constant-term": check_constant_term,
}


def run_suite(name: str, policy: PrecisionPolicy = DEFAULT_POLICY) -> list[VerificationReport]:
    if name == "all":
        reports = []
        for key in SUITES:
            reports.extend(SUITES[key](policy))
    elif name in SUITES:
        reports = SUITES[name](policy)
    else:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return sorted(reports, key=lambda r: r.identity_id)
