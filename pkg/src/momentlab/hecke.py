"""Hecke data for the discriminant form Delta: tau(n), mu_f, twisted divisors.

Delta is the sole cusp form here: weight 12, level 1, holomorphic, satisfies
Ramanujan-Petersson unconditionally.  tau(n) comes from the eta product

    Delta = x prod_{n>=1} (1 - x^n)^24 = x (eta3)^8,
    eta3 = prod (1 - x^n)^3 = sum_k (-1)^k (2k+1) x^{k(k+1)/2},

with exact integer coefficients throughout (tau(n) ~ n^{11/2} overflows
int64 near n ~ 2000).  The three dense squarings of eta3 use Kronecker
substitution: coefficients are packed into one big integer with 192-bit
signed slots, multiplied (gmpy2 when available), and unpacked; this keeps
the whole construction exact and fast up to N ~ 1e5.

lambda(n) = tau(n) / n^{11/2} are the analytically normalized eigenvalues;
mu_f is the coefficient sequence of 1/L(Delta, s).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - perf extra only
    mpz = int

from .ffcore import PrimeContext
from . import characters as chars

_SLOT_BITS = 192  # > 2*log2(max |coeff|) + log2(N) for N <= ~1e5
_SLOT = 1 << _SLOT_BITS
_HALF = _SLOT >> 1


_SLOT_BYTES = _SLOT_BITS // 8


def _pack(coeffs: list[int]) -> int:
    """Evaluate the integer polynomial at 2^SLOT_BITS, in O(total bits).

    Signed coefficients are written offset by HALF into unsigned slots and
    the constant offset polynomial HALF * (1 + B + ... + B^{n-1}) is
    subtracted once at integer level.
    """
    n = len(coeffs)
    by = b"".join((c + _HALF).to_bytes(_SLOT_BYTES, "little") for c in coeffs)
    ones = int.from_bytes((b"\x01" + b"\x00" * (_SLOT_BYTES - 1)) * n, "little")
    return int.from_bytes(by, "little") - _HALF * ones


def _mul_series(a: list[int], b: list[int], n_terms: int) -> list[int]:
    """Exact truncated product of integer power series via Kronecker packing.

    Valid while every convolution coefficient stays below 2^{SLOT_BITS-1} in
    magnitude (true for eta-power series far beyond N = 1e5).
    """
    prod = int(mpz(_pack(a)) * mpz(_pack(b)))
    nbits = _SLOT_BITS * n_terms
    low = prod & ((1 << nbits) - 1)  # = prod mod 2^nbits, also for prod < 0
    by = low.to_bytes(nbits // 8, "little")
    out = []
    carry = 0
    for i in range(n_terms):
        r = int.from_bytes(by[i * _SLOT_BYTES : (i + 1) * _SLOT_BYTES], "little") + carry
        if r >= _HALF:  # balanced digit: negative coefficient, borrow upward
            r -= _SLOT
            carry = 1
        else:
            carry = 0
        out.append(r)
    return out


@dataclass
class HeckeTable:
    """tau(n) exactly and lambda(n) = tau(n)/n^{11/2} for n <= N_max."""

    N_max: int
    tau: list[int]        # tau[0] = 0, tau[1] = 1, ...
    lam: np.ndarray       # float, lam[0] = 0
    weight: int = 12


@dataclass
class MuTable:
    """mu_f(n): convolution inverse of lambda, supported on cubefree n."""

    N_max: int
    mu: np.ndarray


@lru_cache(maxsize=4)
def build_tau(N_max: int) -> HeckeTable:
    """Integer-exact tau table via the eta-product power series."""
    if N_max > 10**6:
        raise ValueError("tau table capped at N_max = 1e6")
    N = int(N_max)
    e3 = [0] * N
    k = 0
    while k * (k + 1) // 2 < N:
        e3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    e6 = _mul_series(e3, e3, N)
    e12 = _mul_series(e6, e6, N)
    e24 = _mul_series(e12, e12, N)
    tau = [0] + e24[:N]  # tau(n) = coefficient of x^{n-1} in eta3^8
    lam = np.zeros(N + 1)
    n = np.arange(1, N + 1, dtype=float)
    lam[1:] = np.array([float(t) for t in tau[1:]]) / n ** 5.5
    return HeckeTable(N_max=N, tau=tau, lam=lam)


def tau_direct_oracle(n_terms: int = 16) -> list[int]:
    """Slow independent expansion of x prod_{n <= n_terms} (1-x^n)^24."""
    N = n_terms
    poly = [0] * (N + 1)
    poly[0] = 1
    for m in range(1, N + 1):
        for _ in range(24):
            # multiply by (1 - x^m)
            for i in range(N, m - 1, -1):
                poly[i] -= poly[i - m]
    return [0] + poly[: N]  # tau(n) = coeff of x^{n-1}


def smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def factorize(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def mu_f(table: HeckeTable) -> MuTable:
    """mu_f(p) = -lambda(p), mu_f(p^2) = 1, mu_f(p^j) = 0 for j >= 3;
    multiplicative.  Then (mu_f * lambda)(n) = delta_{n=1}."""
    N = table.N_max
    spf = smallest_prime_factors(N)
    mu = np.zeros(N + 1)
    mu[1] = 1.0
    for n in range(2, N + 1):
        val = 1.0
        for p, e in factorize(n, spf):
            if e == 1:
                val *= -table.lam[p]
            elif e == 2:
                val *= 1.0
            else:
                val = 0.0
                break
        mu[n] = val
    return MuTable(N_max=N, mu=mu)


def divisor_counts(n: int) -> np.ndarray:
    d = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        d[k::k] += 1
    return d


def twisted_divisor(ctx: PrimeContext, omega: int, n: int, t: float) -> complex:
    """lambda_omega(n, it) = sum_{ab = n} omega(a) (a/b)^{it}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    G = chars.character_group(ctx)
    out = 0.0 + 0.0j
    a = 1
    while a * a <= n:
        if n % a == 0:
            b = n // a
            out += G.value(omega, a) * (a / b) ** (1j * t)
            if a != b:
                out += G.value(omega, b) * (b / a) ** (1j * t)
        a += 1
    return complex(out)


def twisted_divisor_table(ctx: PrimeContext, omega: int, t: float, N: int) -> np.ndarray:
    """lambda_omega(n, it) for n = 1..N by one divisor-convolution pass."""
    G = chars.character_group(ctx)
    n = np.arange(N + 1)
    out = np.zeros(N + 1, dtype=complex)
    for a in range(1, N + 1):
        wa = G.value(omega, a)
        if wa == 0:
            continue
        b = np.arange(1, N // a + 1)
        out[a * b] += wa * (a / b) ** (1j * t)
    return out


def twist_sum(coeff: np.ndarray, kernel: np.ndarray, cutoff, X: float,
              sup_bound: float | None = None) -> tuple[complex, float]:
    """S = sum_n coeff[n] K(n mod q) V(n/X) and the ratio |S| / (M q).

    coeff is indexed by n (coeff[0] unused); kernel is the length-q value
    table; cutoff a SmoothCutoff. The ratio normalizes by the trivial bound
    M q of the complete sum.
    """
    q = len(kernel)
    lo = max(1, int(np.floor(cutoff.P * X)))
    hi = int(np.ceil(2 * cutoff.P * X)) + 1
    if hi >= len(coeff):
        raise ValueError(f"coefficient table too short: need n up to {hi}")
    n = np.arange(lo, hi)
    V = cutoff(n / X)
    S = complex(np.sum(coeff[lo:hi] * kernel[n % q] * V))
    M = sup_bound if sup_bound is not None else float(np.abs(kernel).max())
    return S, abs(S) / (M * q)
