"""Twisted hyper-Kloosterman sums and classical twisted Kloosterman sums.

The rank-k twisted sum over F_q is

    Kl_k(a, w_1..w_k; q) = q^{-(k-1)/2} sum_{x_1...x_k = a}
                           w_1(x_1)...w_k(x_k) e((x_1+...+x_k)/q),

with Kl_1(a, w; q) = w(a) e(a/q).  Full tables are built by the Fourier
recursion: with K_{j-1}(x) = Kl_{j-1}(xbar) for x != 0 (and 0 at x = 0),

    Kl_j(a) = w_j(a) * FT(x -> w_j(x) K_{j-1}(x))(a),   a != 0,

one normalized length-q transform per level.

Value at a = 0: the direct sum is undefined there and the sheaf-theoretic
middle-extension trace is out of reach, so the table stores the completed-
Fourier value: FT(...)(0) when w_j is principal (this reproduces the
untwisted Kl_3(0; q) = 1/q of the Kl_2-Fourier representation) and 0 when
w_j is a genuine character (its factor vanishes at 0).  `zero_convention`
= "zero" forces 0 instead; neither choice is asserted as canonical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ffcore import PrimeContext, dft_prime
from . import characters as chars


@dataclass(frozen=True)
class KloostermanSpec:
    """Rank k and the k twist indices (0 = principal) mod q."""

    k: int
    twists: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not (1 <= self.k <= 8):
            raise ValueError(f"rank k = {self.k} outside the practical cap 1..8")
        if len(self.twists) != self.k:
            raise ValueError(f"need {self.k} twist indices, got {len(self.twists)}")

    def label(self) -> str:
        tw = ",".join(str(t) for t in self.twists)
        return f"Kl{self.k}[{tw}]@q={self.q}"


def kloosterman_direct(spec: KloostermanSpec, a: int, ctx: PrimeContext) -> complex:
    """Direct summation over tuples with product a; O(q^{k-1}), k <= 3."""
    q = ctx.q
    a = int(a) % q
    if a == 0:
        raise ValueError("direct Kloosterman sum undefined at a = 0; use the table")
    if spec.k > 3:
        raise ValueError("direct summation limited to k <= 3")
    G = chars.character_group(ctx)
    norm = q ** (-(spec.k - 1) / 2)
    if spec.k == 1:
        return complex(G.value(spec.twists[0], a) * ctx.unity[a])
    inv = ctx.inverses()
    x1 = np.arange(1, q)
    if spec.k == 2:
        x2 = a * inv[x1] % q
        vals = (G.value(spec.twists[0], x1) * G.value(spec.twists[1], x2)
                * ctx.unity[(x1 + x2) % q])
        return complex(norm * vals.sum())
    # k = 3
    x1g, x2g = np.meshgrid(x1, x1, indexing="ij")
    x3 = a * inv[x1g] % q * inv[x2g] % q
    vals = (G.value(spec.twists[0], x1g) * G.value(spec.twists[1], x2g)
            * G.value(spec.twists[2], x3) * ctx.unity[(x1g + x2g + x3) % q])
    return complex(norm * vals.sum())


def kloosterman_table(spec: KloostermanSpec, ctx: PrimeContext,
                      zero_convention: str = "fourier") -> np.ndarray:
    """Values of Kl_k over all of F_q by the Fourier recursion (k-1 FFTs)."""
    if zero_convention not in ("fourier", "zero"):
        raise ValueError(f"unknown zero convention {zero_convention!r}")
    q = ctx.q
    G = chars.character_group(ctx)
    inv = ctx.inverses()
    # level 1: Kl_1(a) = w_1(a) e(a/q), 0 at a = 0
    table = np.zeros(q, dtype=complex)
    x = np.arange(1, q)
    table[x] = G.value(spec.twists[0], x) * ctx.unity[x]
    for j in range(1, spec.k):
        tw = spec.twists[j]
        u = np.zeros(q, dtype=complex)
        u[x] = G.value(tw, x) * table[inv[x]]  # w_j(x) K_{j-1}(x)
        ft = dft_prime(u, ctx) / np.sqrt(q)
        new = np.zeros(q, dtype=complex)
        new[x] = G.value(tw, x) * ft[x]
        if tw % (q - 1) == 0 and zero_convention == "fourier":
            new[0] = ft[0]  # completed value; for untwisted k=3 this is 1/q
        table = new
    return table


def classical_kloosterman(ctx: PrimeContext, omega: int, m: int, n: int, c: int) -> complex:
    """S_omega(m, n; c) = sum_{d (c), (d,c)=1} conj(omega)(d) e((m dbar + n d)/c).

    omega is a character mod q read as a q-periodic function; direct O(c)
    summation, intended for c at the q / 2q scale of the bound checks.
    """
    c = int(c)
    if c == 0:
        raise ValueError("modulus c must be nonzero")
    if c < 0:
        c = -c
    G = chars.character_group(ctx)
    out = 0.0 + 0.0j
    for d in range(1, c + 1):
        if np.gcd(d, c) != 1:
            continue
        dbar = pow(d, -1, c)
        out += np.conj(G.value(omega, d)) * np.exp(2j * np.pi * ((m * dbar + n * d) % c) / c)
    return complex(out)


def weil_scan(spec: KloostermanSpec, ctx: PrimeContext) -> float:
    """max over a in F_q^x of |Kl_k(a, twists; q)|; the sharp bound is k."""
    table = kloosterman_table(spec, ctx)
    return float(np.abs(table[1:]).max())


def weil_bound_classical(ctx: PrimeContext, m: int, n: int, c: int) -> float:
    """tau(c) (m, n, c)^{1/2} c^{1/2}, the classical Weil bound for S_omega."""
    c = abs(int(c))
    tau_c = sum(1 for d in range(1, c + 1) if c % d == 0)
    g = np.gcd(np.gcd(abs(m) if m else c, abs(n) if n else c), c)
    return float(tau_c * np.sqrt(g) * np.sqrt(c))
