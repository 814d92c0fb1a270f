"""The multiplicative character group mod q, Gauss sums and exact averages.

Characters are indexed by their exponent t in Z/(q-1): chi_t(g^m) = e(tm/(q-1))
for the fixed smallest primitive root g.  This makes evaluation O(1) through
the discrete-log table, twisting chi*omega an index addition, and parity the
bit t mod 2 (chi_t(-1) = e(t/2) = (-1)^t).

The normalized Gauss sum is

    eps(chi) = q^{-1/2} sum_{x in F_q^x} chi(x) e(x/q),

computed for the whole group in one length-(q-1) FFT over the dlog ordering
(the exponent index is the frequency variable of that transform; a length-q
transform cannot produce the batch, so this is the O(q log q) realization of
the one-batch design).  For the principal character the same formula gives
the Ramanujan sum value -1/sqrt(q).

The exact averaging identities used by the arithmetic side of the moments
(even/odd orthogonality, the eps-weighted average, and the double Gauss
average that produces twisted Kl_2) live here, each with its closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffcore import PrimeContext, build_context, mod_inverse


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q with exponent index t; chi(g^a) = e(ta/(q-1))."""

    q: int
    t: int
    kappa: int  # parity bit: chi(-1) = (-1)^kappa
    gauss: complex  # cached normalized Gauss sum eps(chi)

    @property
    def is_principal(self) -> bool:
        return self.t == 0

    def conj_index(self) -> int:
        return (-self.t) % (self.q - 1)


class CharacterGroup:
    """Vectorized value tables for all q-1 characters mod q."""

    def __init__(self, ctx: PrimeContext):
        self.ctx = ctx
        q = ctx.q
        L = q - 1
        self.q = q
        self.L = L
        # unity_L[j] = e(j/L)
        self.unity_L = np.exp(2j * np.pi * np.arange(L) / L)
        # eps[t] for all t in one length-L FFT: eps_t = q^{-1/2} sum_m e(g^m/q) e(tm/L)
        h = ctx.unity[ctx.dft_plan.perm]
        self.eps = _group_dft_pos(h) / np.sqrt(q)
        self.kappa = np.arange(L) % 2

    def value(self, t: int, a) -> np.ndarray | complex:
        """chi_t(a); 0 on multiples of q.  Accepts arrays."""
        a_arr = np.asarray(a)
        res = a_arr % self.q
        dl = self.ctx.dlog[res]
        out = np.where(res == 0, 0.0 + 0.0j, self.unity_L[(t * dl) % self.L])
        return out if out.shape else complex(out)

    def table(self, t: int) -> np.ndarray:
        """Full value table of chi_t over F_q (index 0 -> 0)."""
        return self.value(t, np.arange(self.q))

    def character(self, t: int) -> DirichletCharacter:
        t = int(t) % self.L
        return DirichletCharacter(q=self.q, t=t, kappa=t % 2, gauss=complex(self.eps[t]))


def _group_dft_pos(h: np.ndarray) -> np.ndarray:
    """S[t] = sum_m h[m] e(+tm/L) for t = 0..L-1 (positive-sign DFT)."""
    F = np.fft.fft(h)
    L = len(h)
    return F[(-np.arange(L)) % L]


@lru_cache(maxsize=64)
def _cached_group(q: int) -> CharacterGroup:
    return CharacterGroup(build_context(q))


def character_group(ctx: PrimeContext) -> CharacterGroup:
    """Shared per-q group tables (context construction is deterministic in q)."""
    return _cached_group(ctx.q)


def enumerate_characters(ctx: PrimeContext) -> list[DirichletCharacter]:
    """All q-1 characters; index t = 0 is principal."""
    G = character_group(ctx)
    return [G.character(t) for t in range(G.L)]


def gauss_sum(chi: DirichletCharacter) -> complex:
    """eps(chi) = q^{-1/2} sum_{x != 0} chi(x) e(x/q) (cached at enumeration)."""
    return chi.gauss


def gauss_sum_direct(ctx: PrimeContext, t: int) -> complex:
    """Direct O(q) summation; oracle for the FFT batch."""
    G = character_group(ctx)
    x = np.arange(1, ctx.q)
    return complex(np.sum(G.value(t, x) * ctx.unity[x]) / np.sqrt(ctx.q))


# ---------------------------------------------------------------------------
# exact character-average identities
# ---------------------------------------------------------------------------

def even_orthogonality_sum(ctx: PrimeContext, a: int) -> complex:
    """sum over even nontrivial chi of chi(a).

    Closed form: (q-1)/2 * [a = +-1 (q)] - 1, for (a, q) = 1.
    """
    a = int(a) % ctx.q
    if a == 0:
        raise ValueError("a must be coprime to q")
    G = character_group(ctx)
    ts = np.arange(2, G.L, 2)
    return complex(np.sum(_chi_row(G, a)[ts]))


def _chi_row(G: CharacterGroup, a: int) -> np.ndarray:
    """Vector chi_t(a) over all t."""
    dl = int(G.ctx.dlog[a % G.q])
    return G.unity_L[(np.arange(G.L) * dl) % G.L]


def even_orthogonality_closed(ctx: PrimeContext, a: int) -> float:
    a = int(a) % ctx.q
    delta = 1.0 if a == 1 or a == ctx.q - 1 else 0.0
    return (ctx.q - 1) / 2 * delta - 1.0


def gauss_weighted_average(ctx: PrimeContext, kappa: int, m: int) -> complex:
    """sum over nontrivial chi with chi(-1) = (-1)^kappa of chi(m) eps(chi)."""
    m = int(m) % ctx.q
    if m == 0:
        raise ValueError("m must be coprime to q")
    G = character_group(ctx)
    ts = np.arange(G.L)
    sel = (ts % 2 == kappa % 2) & (ts != 0)
    return complex(np.sum(_chi_row(G, m)[sel] * G.eps[sel]))


def gauss_weighted_closed(ctx: PrimeContext, kappa: int, m: int) -> complex:
    """Closed form (q-1)/(2 sqrt q) sum_pm (+-1)^kappa (e(+- mbar/q) + 1/(q-1))."""
    q = ctx.q
    mbar = mod_inverse(m, ctx)
    out = 0.0 + 0.0j
    for sgn in (+1, -1):
        par = 1.0 if sgn == 1 else (-1.0) ** (kappa % 2)
        out += par * (ctx.unity[(sgn * mbar) % q] + 1.0 / (q - 1))
    return (q - 1) / (2 * np.sqrt(q)) * out


def double_gauss_average(ctx: PrimeContext, omega1: int, omega2: int, m: int,
                         parity: int = 0) -> complex:
    """(2/(q-1)) sum over chi of parity `parity`, chi != conj(omega1), of
    chi(m) eps(chi omega1) eps(chi omega2)."""
    m = int(m) % ctx.q
    if m == 0:
        raise ValueError("m must be coprime to q")
    G = character_group(ctx)
    ts = np.arange(G.L)
    w1bar = (-omega1) % G.L
    sel = (ts % 2 == parity % 2) & (ts != w1bar)
    e1 = G.eps[(ts + omega1) % G.L]
    e2 = G.eps[(ts + omega2) % G.L]
    return complex(2.0 / (G.L) * np.sum(_chi_row(G, m)[sel] * e1[sel] * e2[sel]))


def double_gauss_closed(ctx: PrimeContext, omega1: int, omega2: int, m: int,
                        parity: int = 0) -> complex:
    """Closed form: q^{-1/2} [Kl_2(mbar, w1, w2) + (-1)^parity Kl_2(-mbar, w1, w2)]
    + 2 [kappa1 = parity] eps(conj(w1) w2) conj(w1)(m) / (sqrt(q) (q-1))."""
    from .expsums import KloostermanSpec, kloosterman_direct

    q = ctx.q
    G = character_group(ctx)
    mbar = mod_inverse(m, ctx)
    spec = KloostermanSpec(k=2, twists=(omega1 % G.L, omega2 % G.L), q=q)
    sgn = (-1.0) ** (parity % 2)
    out = (kloosterman_direct(spec, mbar, ctx)
           + sgn * kloosterman_direct(spec, (-mbar) % q, ctx)) / np.sqrt(q)
    kappa1 = omega1 % 2
    if kappa1 == parity % 2:
        w1bar = (-omega1) % G.L
        out += 2.0 * G.eps[(w1bar + omega2) % G.L] * G.value(w1bar, m) / (np.sqrt(q) * (q - 1))
    return complex(out)


def triple_gauss_average(ctx: PrimeContext, omega1: int, omega2: int, m: int,
                         parity: int = 0) -> complex:
    """(2/(q-1)) sum over chi of given parity, chi != conj(omega1), of
    chi(m) eps(chi) eps(chi omega1) eps(chi omega2)."""
    m = int(m) % ctx.q
    if m == 0:
        raise ValueError("m must be coprime to q")
    G = character_group(ctx)
    ts = np.arange(G.L)
    w1bar = (-omega1) % G.L
    sel = (ts % 2 == parity % 2) & (ts != w1bar)
    e0 = G.eps[ts]
    e1 = G.eps[(ts + omega1) % G.L]
    e2 = G.eps[(ts + omega2) % G.L]
    return complex(2.0 / G.L * np.sum(_chi_row(G, m)[sel] * e0[sel] * e1[sel] * e2[sel]))


def triple_gauss_residual(ctx: PrimeContext, omega1: int, omega2: int, m: int,
                          parity: int = 0) -> complex:
    """The exact lower-order term the Kl_3 approximation drops:

        2 [kappa1 = parity] eps(conj(w1)) eps(conj(w1) w2) conj(w1)(m)
            / (sqrt(q) (q-1)).

    Its magnitude is <= 2 q^{-1/2}/(q-1), comfortably inside 5 q^{-3/2}.
    """
    G = character_group(ctx)
    q = ctx.q
    kappa1 = omega1 % 2
    if kappa1 != parity % 2:
        return 0.0 + 0.0j
    w1bar = (-omega1) % G.L
    return complex(2.0 * G.eps[w1bar] * G.eps[(w1bar + omega2) % G.L]
                   * G.value(w1bar, m) / (np.sqrt(q) * (q - 1)))


def triple_gauss_closed(ctx: PrimeContext, omega1: int, omega2: int, m: int,
                        parity: int = 0, exact: bool = False) -> complex:
    """q^{-1/2} [Kl_3(mbar, w1, w2, 1) + (-1)^parity Kl_3(-mbar, w1, w2, 1)],
    plus the exact residual term when exact=True."""
    from .expsums import KloostermanSpec, kloosterman_direct

    q = ctx.q
    mbar = mod_inverse(m, ctx)
    spec = KloostermanSpec(k=3, twists=(omega1 % (q - 1), omega2 % (q - 1), 0), q=q)
    sgn = (-1.0) ** (parity % 2)
    out = (kloosterman_direct(spec, mbar, ctx)
           + sgn * kloosterman_direct(spec, (-mbar) % q, ctx)) / np.sqrt(q)
    if exact:
        out += triple_gauss_residual(ctx, omega1, omega2, m, parity)
    return complex(out)
