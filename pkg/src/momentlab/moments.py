"""Twisted cubic moments, mollified moments, the arithmetic-side cross-check
and the non-vanishing census.

The cubic moment over characters mod q with twist indices (t1, t2) and shift
ell coprime to q is

    T3 = 1/(q-1) sum_{chi not in {1, conj w1, conj w2}}
         L(chi,1/2) L(chi w1,1/2) L(chi w2,1/2) chi(ell),

with main term delta_{ell=1}; all L-values come from one batch per modulus
(L(chi w, 1/2) is just another batch entry).

moment_via_arithmetic recomputes the fixed-parity part of T3 without any
L-values: the AFE turns the character average into lattice sums over
N = n0 n1 n2 weighted by the triple-gamma AFE weight, where the first term
collapses via orthogonality to the congruence classes N ell = +-1 (q) and
the dual term collapses through the epsilon-averages into a table of twisted
Kl_3 values.  All finite corrections (the removed characters, the
lower-order term of the triple-Gauss average) are kept exactly, so the two
routes agree to series-truncation accuracy, far inside the 10 ell q^{-1/2}
contract.  The dual-term assembly constant is i^{-(k0+k1+k2)} over the three
factor parities (the i^{+...} variant fails the cross-check whenever exactly
one twist is odd, in the same way the functional-equation sign does).

Mollified moments: M(chi; L) = sum_{l <= L} chi(l) mu(l) l^{-1/2}
(log(L/l)/log L)^2, and path A (definition) versus path B (expansion into
plain cubic moments at shifts l1 l2 l3, carrying the constant factors
w1(l2) w2(l3) that the expansion produces) is an exact finite identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sympy import mobius

from .ffcore import build_context
from . import characters as chars
from .expsums import KloostermanSpec, kloosterman_table
from .lvalues import (cusp_batch, dirichlet_batch, triple_weight, weight_cut,
                      weight_eval_batch, twisted_triple_divisor)


@dataclass
class MomentResult:
    q: int
    ell: int
    omega1: int
    omega2: int
    value: complex
    main_term: float
    defect: float
    characters_used: int
    kind: str = "dirichlet"


@dataclass
class MollifierSpec:
    """x(l) = mu(l) (log(L/l)/log L)^2 for l <= L (Dirichlet flavor), or
    x_f(l) = mu_f(l) (log(L/l)/log L) (cusp flavor)."""

    L: int
    coeffs: np.ndarray

    @staticmethod
    def dirichlet(L: int) -> "MollifierSpec":
        L = int(L)
        x = np.zeros(L + 1)
        x[1] = 1.0
        if L > 1:
            logL = np.log(L)
            for l in range(1, L + 1):
                x[l] = int(mobius(l)) * (np.log(L / l) / logL) ** 2
        if np.abs(x).max() > 1.0 + 1e-12:
            raise AssertionError("|x(l)| <= 1 violated")
        return MollifierSpec(L=L, coeffs=x)

    @staticmethod
    def cusp(L: int, mu_table) -> "MollifierSpec":
        L = int(L)
        x = np.zeros(L + 1)
        x[1] = 1.0
        if L > 1:
            logL = np.log(L)
            for l in range(1, L + 1):
                x[l] = mu_table.mu[l] * (np.log(L / l) / logL)
        return MollifierSpec(L=L, coeffs=x)


@dataclass
class CensusResult:
    q: int
    thresholds: tuple
    count: int
    proportion: float
    omega1: int
    omega2: int
    seed: int | None = None
    kind: str = "dirichlet"


def _excluded(L: int, t1: int, t2: int) -> list[int]:
    return sorted({0, (-t1) % L, (-t2) % L})


def _chi_of_ell(G: chars.CharacterGroup, ts: np.ndarray, ell: int) -> np.ndarray:
    dl = int(G.ctx.dlog[ell % G.q])
    return G.unity_L[(ts * dl) % G.L]


def cubic_moment_dirichlet(q: int, t1: int, t2: int, ell: int,
                           q_choice: str = "g50") -> MomentResult:
    """T3(w1, w2, ell; q) from the per-q L-value batch."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    ell = int(ell)
    if ell % q == 0:
        raise ValueError("ell must be coprime to q")
    B = dirichlet_batch(q, q_choice)
    excl = _excluded(L, t1, t2)
    ts = np.array([t for t in range(L) if t not in excl])
    vals = B.values[ts] * B.values[(ts + t1) % L] * B.values[(ts + t2) % L]
    value = complex(np.sum(vals * _chi_of_ell(G, ts, ell)) / (q - 1))
    main = 1.0 if ell == 1 else 0.0
    return MomentResult(q=q, ell=ell, omega1=t1 % L, omega2=t2 % L, value=value,
                        main_term=main, defect=abs(value - main),
                        characters_used=len(ts))


def cubic_moment_cusp(q: int, ell: int, hecke, q_choice: str = "g50") -> MomentResult:
    """T3(Delta, ell; q) = 1/(q-1) sum_{chi != 1} L(Delta x chi) L(chi) chi(ell)."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    ell = int(ell)
    if ell % q == 0:
        raise ValueError("ell must be coprime to q")
    if ell > q ** (3 / 13):
        warnings.warn(f"ell = {ell} above the admissible range q^(3/13) ~ "
                      f"{q ** (3 / 13):.2f}", stacklevel=2)
    Bd = dirichlet_batch(q, q_choice)
    Bc = cusp_batch(q, hecke, q_choice)
    ts = np.arange(1, L)
    vals = Bc.values[ts] * Bd.values[ts]
    value = complex(np.sum(vals * _chi_of_ell(G, ts, ell)) / (q - 1))
    main = 1.0 if ell == 1 else 0.0
    return MomentResult(q=q, ell=ell, omega1=0, omega2=0, value=value,
                        main_term=main, defect=abs(value - main),
                        characters_used=len(ts), kind="cusp")


# ---------------------------------------------------------------------------
# the arithmetic side (fixed-parity cross-check, no L-values)
# ---------------------------------------------------------------------------

def moment_parity_direct(q: int, t1: int, t2: int, ell: int, parity: int,
                         q_choice: str = "g50") -> complex:
    """(2/(q-1)) sum over chi of the given parity (excluded set removed) of
    the triple product times chi(ell), from the L-value batch."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    B = dirichlet_batch(q, q_choice)
    excl = _excluded(L, t1, t2)
    ts = np.array([t for t in range(L) if t not in excl and t % 2 == parity % 2])
    vals = B.values[ts] * B.values[(ts + t1) % L] * B.values[(ts + t2) % L]
    return complex(2.0 / (q - 1) * np.sum(vals * _chi_of_ell(G, ts, ell)))


def moment_via_arithmetic(q: int, t1: int, t2: int, ell: int, parity: int = 0,
                          q_choice: str = "g50", q_cap: int = 311) -> complex:
    """Fixed-parity cubic moment from congruence sums and twisted Kl_3 tables.

    Exact finite assembly (truncation of the V-tail is the only error):

      S1 = sum_N D[N] c_N { [N ell = 1] + (-1)^p [N ell = -1]
                            - 2/(q-1) sum_{u in E, par u = p} chi_u(N ell) }
      S2 = sum_N conj(D[N]) c_N { q^{-1/2}(Kl3(invN ell) + (-1)^p Kl3(-invN ell))
                            + R_p(ell invN) - 2/(q-1) (removed-chi eps-terms) }
      T3_p = S1 + i^{-(k0+k1+k2)} S2,

    D[N] the twisted triple divisor, c_N = N^{-1/2} V_p(N/q^{3/2}).
    """
    if q > q_cap:
        raise ValueError(f"arithmetic-side moment refused for q = {q} > {q_cap} "
                         f"(triple sums to q^{{3/2}} get slow)")
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    p = parity % 2
    ell = int(ell)
    if ell % q == 0:
        raise ValueError("ell must be coprime to q")
    k1, k2 = t1 % 2, t2 % 2
    parities = (p, (p + k1) % 2, (p + k2) % 2)
    wgt = triple_weight(parities, q_choice)
    root = q ** 1.5
    n_max = weight_cut(wgt, root)
    D = twisted_triple_divisor(ctx, t1, t2, n_max)
    n = np.arange(1, n_max + 1)
    c = n ** (-0.5) * weight_eval_batch(wgt, n / root)

    excl = _excluded(L, t1, t2)
    res = n % q
    coprime = res != 0
    nl = res * ell % q

    # --- S1: orthogonality side ---
    sgn = (-1.0) ** p
    ind = np.where(nl == 1, 1.0, 0.0) + sgn * np.where(nl == q - 1, 1.0, 0.0)
    corr = np.zeros(q, dtype=complex)  # indexed by the residue of N ell
    for u in excl:
        if u % 2 == p:
            corr += (2.0 / (q - 1)) * G.table(u)
    S1 = complex(np.sum(D[1:] * c * coprime * (ind - corr[nl])))

    # --- S2: eps-average side ---
    spec = KloostermanSpec(k=3, twists=(t1 % L, t2 % L, 0), q=q)
    kl3 = kloosterman_table(spec, ctx)
    inv = ctx.inverses()
    m = inv[res] * ell % q  # chi-argument of the dual term, m = ell / N
    minv = inv[m]           # = N / ell
    kl_part = (kl3[minv] + sgn * kl3[(q - minv) % q]) / np.sqrt(q)
    # exact lower-order term of the triple-Gauss average
    w1bar = (-t1) % L
    Rp = np.zeros(q, dtype=complex)
    if k1 == p:
        Rp_val = 2.0 * G.eps[w1bar] * G.eps[(w1bar + t2) % L] / (np.sqrt(q) * (q - 1))
        Rp = Rp_val * G.table(w1bar)
    # characters in E other than conj(w1) are not removed by the triple-Gauss
    # average; subtract their eps-terms explicitly
    extra = np.zeros(q, dtype=complex)
    for u in excl:
        if u != w1bar and u % 2 == p:
            eps3 = G.eps[u] * G.eps[(u + t1) % L] * G.eps[(u + t2) % L]
            extra += (2.0 / (q - 1)) * eps3 * G.table(u)
    B_table = kl_part + Rp[m] - extra[m]
    S2 = complex(np.sum(np.conj(D[1:]) * c * coprime * B_table))

    W = (1j) ** (-(p + (p + k1) % 2 + (p + k2) % 2))
    return complex(S1 + W * S2)


def cusp_parity_direct(q: int, ell: int, hecke, parity: int,
                       q_choice: str = "g50") -> complex:
    """(2/(q-1)) sum over chi != 1 of given parity of L(Delta x chi) L(chi)
    chi(ell), from the batches."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    Bd = dirichlet_batch(q, q_choice)
    Bc = cusp_batch(q, hecke, q_choice)
    ts = np.array([t for t in range(1, L) if t % 2 == parity % 2])
    vals = Bc.values[ts] * Bd.values[ts]
    return complex(2.0 / (q - 1) * np.sum(vals * _chi_of_ell(G, ts, ell)))


def cusp_moment_via_arithmetic(q: int, ell: int, hecke, parity: int = 0,
                               q_choice: str = "g50", q_cap: int = 311) -> complex:
    """Fixed-parity cusp moment from congruence sums and untwisted Kl_3.

    Same assembly as moment_via_arithmetic with both twists principal, the
    coefficient D[N] = sum_{nm=N} lambda(n), the product AFE weight
    (holomorphic x Dirichlet) at argument N/q^{3/2}, and the dual constant
    eps(chi)^3 i^{-kappa} handled by the same parity bookkeeping.
    """
    from .lvalues import AfeWeight, _left_line

    if q > q_cap:
        raise ValueError(f"arithmetic-side cusp moment refused for q = {q} > {q_cap}")
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    p = parity % 2
    ell = int(ell)
    if ell % q == 0:
        raise ValueError("ell must be coprime to q")
    spec_g = (("holomorphic", 12), ("dirichlet", p))
    wgt = AfeWeight(gamma_spec=spec_g, q_choice=q_choice, kappa=p,
                    sigma_left=_left_line(spec_g))
    root = q ** 1.5
    n_max = weight_cut(wgt, root)
    if n_max >= len(hecke.lam):
        raise ValueError(f"Hecke table too short: need lambda up to {n_max}")
    lam = np.zeros(n_max + 1, dtype=complex)
    lam[1:] = hecke.lam[1 : n_max + 1]
    ones = np.zeros(n_max + 1, dtype=complex)
    ones[1:] = 1.0
    from .lvalues import _dirichlet_convolve

    D = _dirichlet_convolve(lam, ones)
    n = np.arange(1, n_max + 1)
    c = n ** (-0.5) * weight_eval_batch(wgt, n / root)
    res = n % q
    coprime = res != 0
    nl = res * ell % q

    sgn = (-1.0) ** p
    ind = np.where(nl == 1, 1.0, 0.0) + sgn * np.where(nl == q - 1, 1.0, 0.0)
    corr = np.zeros(q, dtype=complex)
    if p == 0:  # only chi = 1 is excluded, and it is even
        corr += (2.0 / (q - 1)) * G.table(0)
    S1 = complex(np.sum(D[1:] * c * coprime * (ind - corr[nl])))

    kl3 = kloosterman_table(KloostermanSpec(k=3, twists=(0, 0, 0), q=q), ctx)
    inv = ctx.inverses()
    m = inv[res] * ell % q
    minv = inv[m]
    kl_part = (kl3[minv] + sgn * kl3[(q - minv) % q]) / np.sqrt(q)
    Rp = np.zeros(q, dtype=complex)
    if p == 0:  # triple-Gauss residual with principal omega_1
        Rp_val = 2.0 * G.eps[0] ** 2 / (np.sqrt(q) * (q - 1))
        Rp = Rp_val * G.table(0)
    # the chi = 1 term is already off the triple-Gauss set (conj w1 = 1)
    B_table = kl_part + Rp[m]
    S2 = complex(np.sum(np.conj(D[1:]) * c * coprime * B_table))
    return complex(S1 + (1j) ** (-p) * S2)


# ---------------------------------------------------------------------------
# mollified moments
# ---------------------------------------------------------------------------

def mollifier_linear_form(q: int, spec: MollifierSpec, ts: np.ndarray,
                          shift: int = 0) -> np.ndarray:
    """M(chi_{t+shift}; L) for each t in ts, via the value tables."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    ls = np.arange(1, spec.L + 1)
    base = spec.coeffs[1:] / np.sqrt(ls)
    out = np.zeros(len(ts), dtype=complex)
    for j, t in enumerate(ts):
        out[j] = np.sum(G.value((int(t) + shift) % G.L, ls) * base)
    return out


def mollified_cubic(q: int, t1: int, t2: int, L: int,
                    q_choice: str = "g50") -> tuple[complex, complex]:
    """(path A, path B): definition versus cubic-moment expansion of M^3.

    Requires L^3 < q so no shift product is divisible by q.
    """
    if L ** 3 >= q:
        raise ValueError(f"need L^3 < q (got L = {L}, q = {q})")
    ctx = build_context(q)
    G = chars.character_group(ctx)
    Lg = G.L
    spec = MollifierSpec.dirichlet(L)
    B = dirichlet_batch(q, q_choice)
    excl = _excluded(Lg, t1, t2)
    ts = np.array([t for t in range(Lg) if t not in excl])

    # path A: direct character average of prod_i L(chi w_i) M(chi w_i; L)
    prod = np.ones(len(ts), dtype=complex)
    for shift in (0, t1, t2):
        prod = prod * B.values[(ts + shift) % Lg] \
                    * mollifier_linear_form(q, spec, ts, shift)
    path_a = complex(np.sum(prod) / (q - 1))

    # path B: sum over shift triples of x x x (l1 l2 l3)^{-1/2} w1(l2) w2(l3)
    #         T3(w1, w2, l1 l2 l3; q)
    path_b = 0.0 + 0.0j
    ls = [l for l in range(1, L + 1) if spec.coeffs[l] != 0.0]
    for l1 in ls:
        for l2 in ls:
            for l3 in ls:
                shift_ell = l1 * l2 * l3
                coef = (spec.coeffs[l1] * spec.coeffs[l2] * spec.coeffs[l3]
                        / np.sqrt(shift_ell)
                        * G.value(t1, l2) * G.value(t2, l3))
                m = cubic_moment_dirichlet(q, t1, t2, shift_ell, q_choice)
                path_b += coef * m.value
    return path_a, complex(path_b)


def mollified_fourth(q: int, L: int, q_choice: str = "g50") -> float:
    """M^4(q) = 1/(q-1) sum_{chi != 1} |L(chi,1/2) M(chi; L)|^4."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    spec = MollifierSpec.dirichlet(L)
    B = dirichlet_batch(q, q_choice)
    ts = np.arange(1, G.L)
    m = mollifier_linear_form(q, spec, ts)
    return float(np.sum(np.abs(B.values[ts] * m) ** 4) / (q - 1))


def mollified_fourth_cusp(q: int, L_prime: int, hecke, mu_table,
                          q_choice: str = "g50") -> float:
    """M^4(f; q) = 1/(q-1) sum_{chi != 1} |L(Delta x chi,1/2) M(f x chi; L')|^2,
    compared (as a trend only) against 1/(1 + 1/lambda')."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    spec = MollifierSpec.cusp(L_prime, mu_table)
    Bc = cusp_batch(q, hecke, q_choice)
    ts = np.arange(1, G.L)
    m = mollifier_linear_form(q, spec, ts)
    return float(np.sum(np.abs(Bc.values[ts] * m) ** 2) / (q - 1))


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

def draw_twists(q: int, seed: int) -> tuple[int, int]:
    """Deterministic nonprincipal twist pair from a seed."""
    rng = np.random.default_rng(seed)
    t1, t2 = rng.integers(1, q - 1, size=2)
    return int(t1), int(t2)


def census(q: int, t1: int, t2: int, thresholds: tuple | None = None,
           seed: int | None = None, q_choice: str = "g50") -> CensusResult:
    """Count chi (outside the excluded set) with |L(chi w_i, 1/2)| >= threshold
    for i = 0, 1, 2; default thresholds are all 1/log q."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    L = G.L
    if thresholds is None:
        thresholds = (1 / np.log(q),) * 3
    B = dirichlet_batch(q, q_choice)
    excl = _excluded(L, t1, t2)
    ts = np.array([t for t in range(L) if t not in excl])
    ok = np.ones(len(ts), dtype=bool)
    for shift, thr in zip((0, t1, t2), thresholds):
        ok &= np.abs(B.values[(ts + shift) % L]) >= thr
    count = int(ok.sum())
    return CensusResult(q=q, thresholds=tuple(float(t) for t in thresholds),
                        count=count, proportion=count / (q - 1),
                        omega1=t1 % L, omega2=t2 % L, seed=seed)


def census_cusp(q: int, hecke, thresholds: tuple | None = None,
                q_choice: str = "g50") -> CensusResult:
    """Count chi != 1 with |L(Delta x chi)| >= 1/log^2 q and |L(chi)| >= 1/log q."""
    ctx = build_context(q)
    G = chars.character_group(ctx)
    if thresholds is None:
        thresholds = (1 / np.log(q) ** 2, 1 / np.log(q))
    Bd = dirichlet_batch(q, q_choice)
    Bc = cusp_batch(q, hecke, q_choice)
    ts = np.arange(1, G.L)
    ok = (np.abs(Bc.values[ts]) >= thresholds[0]) & (np.abs(Bd.values[ts]) >= thresholds[1])
    count = int(ok.sum())
    return CensusResult(q=q, thresholds=tuple(float(t) for t in thresholds),
                        count=count, proportion=count / (q - 1),
                        omega1=0, omega2=0, kind="cusp")
