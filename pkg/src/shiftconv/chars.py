"""Dirichlet characters modulo a cyclic modulus, Gauss sums, Moebius and
character-twisted divisor sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    """Moebius function mu(n) for n >= 1."""
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def is_cyclic_modulus(n: int) -> bool:
    if n in (2, 4):
        return True
    f = factorize(n)
    if len(f) == 1:
        return 2 not in f
    if len(f) == 2 and f.get(2) == 1:
        return True
    return False


def primitive_root(n: int) -> int:
    """Least primitive root modulo a cyclic modulus n."""
    if not is_cyclic_modulus(n):
        raise ValueError(f"(Z/{n}Z)* is not cyclic")
    if n == 2:
        return 1
    phi = totient(n)
    qs = list(factorize(phi))
    for g in range(2, n):
        if math.gcd(g, n) != 1:
            continue
        if all(pow(g, phi // q, n) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class DirichletCharacter:
    """chi(g^k) = exp(2 pi i * index * k / phi(N)) on the least primitive root g.

    Values are stored as exact rotations k/m (Fractions in [0, 1)); the complex
    table is realized lazily. Index 0 is the principal (all-ones on units)
    character, used only in diagnostic mode.
    """

    modulus: int
    index: int

    def __post_init__(self):
        if self.modulus < 3:
            raise ValueError("modulus must be >= 3")
        if not is_cyclic_modulus(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not cyclic; CRT composites unsupported")
        object.__setattr__(self, "index", self.index % totient(self.modulus))

    @cached_property
    def generator(self) -> int:
        return primitive_root(self.modulus)

    @cached_property
    def phi(self) -> int:
        return totient(self.modulus)

    @cached_property
    def discrete_log(self) -> dict[int, int]:
        N, g = self.modulus, self.generator
        out = {}
        x = 1
        for k in range(self.phi):
            out[x] = k
            x = x * g % N
        return out

    @property
    def principal(self) -> bool:
        return self.index == 0

    def rotation(self, a: int) -> Fraction | None:
        """Exact value as a rotation r in [0,1): chi(a) = exp(2 pi i r); None if chi(a)=0."""
        k = self.discrete_log.get(a % self.modulus)
        if k is None:
            return None
        return Fraction(self.index * k % self.phi, self.phi)

    @cached_property
    def table(self) -> np.ndarray:
        """chi(a) for a = 0..N-1 (complex, zero off the unit group)."""
        t = np.zeros(self.modulus, dtype=complex)
        for a in self.discrete_log:
            r = self.rotation(a)
            t[a] = _root_of_unity(r)
        t.flags.writeable = False
        return t

    def __call__(self, a: int) -> complex:
        return complex(self.table[a % self.modulus])

    def values(self, a) -> np.ndarray:
        """Vectorized chi over an integer array."""
        return self.table[np.mod(a, self.modulus)]

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, -self.index)

    @cached_property
    def order(self) -> int:
        return self.phi // math.gcd(self.index, self.phi)

    @cached_property
    def parity(self) -> int:
        r = self.rotation(-1)
        return 1 if r == 0 else -1

    @cached_property
    def is_primitive(self) -> bool:
        """Primitive iff chi is nontrivial on the kernel of reduction to the
        largest proper divisor modulus (cyclic moduli only)."""
        if self.index == 0:
            return False
        f = factorize(self.modulus)
        N = self.modulus
        for p in f:
            sub = N // p
            if sub < 2:
                continue
            # residues = 1 mod sub are the kernel of (Z/N)* -> (Z/sub)*
            kernel = [a for a in range(1, N, sub) if math.gcd(a, N) == 1]
            if all(self.rotation(a) == 0 for a in kernel):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "generator": self.generator,
            "index": self.index,
            "parity": self.parity,
        }

    @classmethod
    def from_json(cls, d: dict) -> "DirichletCharacter":
        chi = cls(int(d["modulus"]), int(d["index"]))
        if "generator" in d and int(d["generator"]) != chi.generator:
            raise ValueError("generator does not match the least primitive root")
        return chi


def _root_of_unity(r: Fraction) -> complex:
    # exact at quarter turns; otherwise one cos/sin of a reduced angle
    if r == 0:
        return 1.0 + 0j
    if r.denominator == 2:
        return -1.0 + 0j
    if r.denominator == 4:
        return 1j if r.numerator == 1 else -1j
    return cmath.exp(2j * math.pi * float(r))


def make_character(N: int, index: int) -> DirichletCharacter:
    """Character mod N (prime power or other cyclic modulus) for the pipeline.

    The trivial character is rejected: the constructions need chi != 1.
    """
    if not is_cyclic_modulus(N):
        raise ValueError(f"modulus {N} is not cyclic; general composite N is not supported")
    chi = DirichletCharacter(N, index)
    if chi.index == 0:
        raise ValueError("trivial character (index = 0 mod phi(N)) is not allowed")
    return chi


def principal_character(N: int) -> DirichletCharacter:
    """All-ones character on residues coprime to N (diagnostic mode only)."""
    return DirichletCharacter(N, 0)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """sum_{a mod N} chi(a) exp(2 pi i a / N).  W(conj chi) is gauss_sum(chi.conj())."""
    if chi.principal:
        raise ValueError("Gauss sum of the trivial character is not used; pass a nontrivial chi")
    N = chi.modulus
    a = np.arange(N)
    return complex(np.sum(chi.table * np.exp(2j * np.pi * a / N)))


def sigma_chi(chi: DirichletCharacter, t: complex, m: int) -> complex:
    """sum_{d | m} chi(d) d^t."""
    if m < 1:
        raise ValueError("sigma_chi needs m >= 1")
    return complex(sum(chi(d) * complex(d) ** t for d in divisors(m)))


def sigma_chi_normalized_table(chi: DirichletCharacter, w: complex, M: int) -> np.ndarray:
    """Array T with T[m] = sigma_w^chi(m) / m^w = sum_{k | m} chi(m/k) k^{-w}, m = 1..M.

    T[0] is unused (set to 0). Divisor pairs (d, m/d) with d <= sqrt(m) are
    accumulated in a fixed order, O(M log M) work.
    """
    out = np.zeros(M + 1, dtype=complex)
    w = complex(w)
    r = math.isqrt(M)
    for d in range(1, r + 1):
        k = np.arange(d, M // d + 1)
        m = d * k
        # divisor d contributes chi(d) * (m/d)^{-w} = chi(d) k^{-w}
        term = chi(d) * np.power(k.astype(float), -w)
        # complementary divisor k (k != d) contributes chi(k) d^{-w}
        comp = chi.values(k) * (float(d) ** (-w))
        comp[0] = 0.0  # k == d counted once
        out[m] += term + comp
    return out
