"""Central L-values by approximate functional equation, with a Hurwitz oracle.

Two independent routes to L(chi, 1/2):

* the AFE route: smoothed Dirichlet series of length ~ sqrt(conductor) joined
  by the root number, with the smoothing weight realized as a numerical
  Mellin contour integral;
* the oracle route: L(chi, s) = q^{-s} sum_a chi(a) zeta(s, a/q) with the
  Hurwitz zeta evaluated by Euler-Maclaurin.

They share nothing but the character table, so their agreement (< 1e-8 over
whole character groups) is the module's acceptance gate.

Root numbers.  The completed Dirichlet L-function here is
Lambda(chi, s) = q^{s/2} pi^{-s/2} Gamma((s+kappa)/2) L(chi, s) and satisfies

    Lambda(chi, s) = i^{-kappa} eps(chi) Lambda(conj chi, 1 - s),

which we verified numerically to 30 digits (the i^{+kappa} variant fails for
odd characters by a sign).  The level-1 weight-12 twist L(Delta x chi, s)
uses w = i^12 eps(chi)^2 = eps(chi)^2; this choice is validated by the
damping-function-shift self-consistency test rather than assumed (a wrong
sign makes the two-term AFE drift by ~1e4 between damping choices; the right
one agrees to ~1e-11).

AFE weights.  V(x) = (1/2 pi i) int G(s) x^{-s} Q(s) ds/s over a vertical
line, G the ratio of completed gamma factors at 1/2 + s versus 1/2.  The
damping function must be entire, even, Q(0) = 1, with vertical decay; we use

    Q(s) = (1 - 4 s^2)^3 exp(s^2 / 50)        ("g50", default)
    Q(s) = (1 - 4 s^2)^3 exp(s^2 / 40)        ("g40")

The cubed zeros at +-1/2 cancel the leading gamma poles (every even Dirichlet
factor contributes one there, up to a triple pole), so V(x) - 1 vanishes
beyond x^{1/2} as x -> 0: a plain Gaussian damping leaves an x^{1/2} term of
size ~1e-4 at x = 1e-8, far above the 1e-6 target.  Weights with two or
three odd Dirichlet factors have a higher-order pole at -3/2 whose residue
is amplified by |Q(-3/2)| = 512 to ~1.4e-6 at x = 1e-8; those weights (and
only those: the extra polynomial content costs amplitude, hence absolute
float accuracy) carry one extra zero pair (1 - 4 s^2 / 9).  The small Gaussian width
keeps V below 1e-12 past x ~ 15-35, so series always cut inside the
50 sqrt(conductor) cap.  For x < 1 the contour sits left of 0 (at -1.4, or
-1.28 when an odd factor puts poles at -3/2) and the residue 1 at s = 0 is
added explicitly; for x >= 1 the line is placed near the integrand's
magnitude minimum.  Integration is a trapezoid rule on the half-line t >= 0 using
conjugate symmetry, so weights are exactly real.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import loggamma

from .ffcore import PrimeContext
from . import characters as chars

# ---------------------------------------------------------------------------
# AFE weights
# ---------------------------------------------------------------------------

#: damping choices: name -> Gaussian width A in exp(A s^2)
Q_CHOICES = {"g50": 0.02, "g40": 0.025}
_ZERO_MULT = 3  # (1 - 4 s^2)^m

WEIGHT_TAIL_EPS = 1e-12
CUT_SAFETY = 1.3


@dataclass(frozen=True)
class AfeWeight:
    """Archimedean data + damping + contour parameters for one V-type weight.

    gamma_spec entries: ("dirichlet", kappa) for pi^{-s/2} Gamma((s+1/2+kappa)/2)
    factors, ("holomorphic", k) for the (2 pi)^{-s} Gamma(s + (k-1)/2 + 1/2)
    factor of a weight-k form.  All ratios are taken against the value at the
    central point.
    """

    gamma_spec: tuple[tuple[str, int], ...]
    q_choice: str = "g50"
    kappa: int = 0          # parity bookkeeping for callers
    sigma_right: float = 1.5
    sigma_left: float = -1.4
    height: float = 36.0
    step: float = 0.02
    zero32: int = 0         # order of the optional zero pair at +-3/2

    @property
    def gauss_width(self) -> float:
        return Q_CHOICES[self.q_choice]


def _n_odd(gamma_spec) -> int:
    return sum(1 for kind, par in gamma_spec if kind == "dirichlet" and par % 2 == 1)


def _left_line(gamma_spec) -> float:
    """Left contour for the x < 1 branch: the +-1/2 gamma poles are removable
    (damping zeros), so the binding pole sits at -3/2 when an odd Dirichlet
    factor is present and at -5/2 otherwise."""
    return -1.28 if _n_odd(gamma_spec) else -1.4


def dirichlet_weight(kappa: int, q_choice: str = "g50") -> AfeWeight:
    spec = (("dirichlet", kappa % 2),)
    return AfeWeight(gamma_spec=spec, q_choice=q_choice, kappa=kappa % 2,
                     sigma_left=_left_line(spec))


def triple_weight(parities: tuple[int, int, int], q_choice: str = "g50") -> AfeWeight:
    spec = tuple(("dirichlet", p % 2) for p in parities)
    return AfeWeight(gamma_spec=spec, q_choice=q_choice, kappa=parities[0] % 2,
                     sigma_left=_left_line(spec),
                     zero32=1 if _n_odd(spec) >= 2 else 0)


def cusp_weight(q_choice: str = "g50", k: int = 12) -> AfeWeight:
    return AfeWeight(gamma_spec=(("holomorphic", k),), q_choice=q_choice)


def _log_gamma_ratio(s: np.ndarray, gamma_spec) -> np.ndarray:
    lg = np.zeros_like(np.asarray(s, dtype=complex))
    for kind, par in gamma_spec:
        if kind == "dirichlet":
            lg = lg - s / 2 * np.log(np.pi) + loggamma((s + 0.5 + par) / 2) \
                 - loggamma((0.5 + par) / 2)
        elif kind == "holomorphic":
            a = (par - 1) / 2 + 0.5
            lg = lg - s * np.log(2 * np.pi) + loggamma(s + a) - loggamma(a)
        else:
            raise ValueError(f"unknown gamma factor kind {kind!r}")
    return lg


def _sigma_for(w: AfeWeight, x: float) -> float:
    """Vertical line placement minimizing the t=0 integrand magnitude."""
    if x < 1.0:
        return w.sigma_left
    A = w.gauss_width
    lx = np.log(x)

    def proxy(sig: float) -> float:
        # smooth magnitude proxy: gamma ratio, Gaussian and x^-s parts only
        # (the damping polynomial has real zeros that would fool a minimizer)
        s = complex(sig)
        return (A * sig * sig - sig * lx - np.log(sig)
                + _log_gamma_ratio(s, w.gamma_spec).real)

    r = minimize_scalar(proxy, bounds=(0.75, 90.0), method="bounded")
    return float(r.x)


def _contour_integral(w: AfeWeight, xs: np.ndarray, sigma: float) -> np.ndarray:
    """(1/2 pi i) int over Re s = sigma, vectorized over xs; exactly real."""
    A = w.gauss_width
    lnx = np.log(xs)
    h = min(w.step, 0.28 / max(6.0, float(np.max(np.abs(lnx)))))
    t = np.arange(0.0, w.height + h / 2, h)
    s = sigma + 1j * t
    base = (_log_gamma_ratio(s, w.gamma_spec) + A * s * s
            + _ZERO_MULT * np.log((1 - 4 * s * s).astype(complex)) - np.log(s))
    if w.zero32:
        base = base + w.zero32 * np.log((1 - 4 * s * s / 9).astype(complex))
    out = np.empty(len(xs))
    blk = max(1, int(4_000_000 // max(len(t), 1)))
    wts = np.full(len(t), 2.0)
    wts[0] = 1.0
    wts[-1] = 1.0
    for i in range(0, len(xs), blk):
        logint = base[None, :] - np.outer(lnx[i : i + blk], s)
        mx = logint.real.max(axis=1, keepdims=True)
        vals = np.exp(logint - mx).real @ wts
        out[i : i + blk] = np.exp(mx[:, 0]) * vals * h / (2 * np.pi)
    return out


def weight_eval_batch(w: AfeWeight, xs) -> np.ndarray:
    """V(x) on an array of positive reals; grouped by octave for the contour."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("weight argument must be positive")
    out = np.empty(len(xs))
    small = xs < 1.0
    if small.any():
        out[small] = 1.0 + _contour_integral(w, xs[small], w.sigma_left)
    big = ~small
    if big.any():
        xb = xs[big]
        octave = np.floor(np.log2(xb)).astype(int)
        res = np.empty(len(xb))
        for o in np.unique(octave):
            m = octave == o
            sigma = _sigma_for(w, float(np.exp(np.mean(np.log(xb[m])))))
            res[m] = _contour_integral(w, xb[m], sigma)
        out[big] = res
    return out


def weight_eval(w: AfeWeight, x: float) -> float:
    """V(x) at a single positive x (real by conjugate symmetry)."""
    return float(weight_eval_batch(w, [float(x)])[0])


def weight_cut(w: AfeWeight, root: float, cap_factor: float = 50.0) -> int:
    """Smallest series length N with the V-tail below 1e-12, capped at
    cap_factor * root (root = sqrt of the analytic conductor)."""
    cap = int(np.ceil(cap_factor * root))
    xs = np.geomspace(1e-3, cap_factor * 1.05, 480)
    V = np.abs(weight_eval_batch(w, xs))
    alive = xs[V >= WEIGHT_TAIL_EPS / CUT_SAFETY]
    x_last = float(alive.max()) if len(alive) else 1.0
    return max(8, min(cap, int(np.ceil(CUT_SAFETY * x_last * root)) + 1))


def decay_constant(w: AfeWeight, power: float, x_max: float = 60.0) -> float:
    """Measured C with |V(x)| <= C x^{-power} on [1, x_max]."""
    xs = np.geomspace(1.0, x_max, 240)
    V = np.abs(weight_eval_batch(w, xs))
    return float(np.max(V * xs**power))


# ---------------------------------------------------------------------------
# Hurwitz-zeta oracle (Euler-Maclaurin)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _bernoulli_even(jmax: int = 16) -> np.ndarray:
    """B_2, B_4, ..., B_{2 jmax} exactly via Akiyama-Tanigawa, as floats."""
    n = 2 * jmax
    a = []
    B = []
    for m in range(n + 1):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        B.append(a[0])
    return np.array([float(B[2 * j]) for j in range(1, jmax + 1)])


def hurwitz_zeta(s: complex, a: float, terms: int = 40, corrections: int = 12) -> complex:
    """zeta(s, a) = sum_{k>=0} (k+a)^{-s} by Euler-Maclaurin.

    `corrections` >= 10 Bernoulli terms; absolute error far below 1e-10 for
    0.4 <= Re s <= 2, |Im s| <= 5, 0 < a <= 1.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise ValueError("zeta(s, a) has a pole at s = 1")
    B = _bernoulli_even()
    if corrections > len(B):
        raise ValueError(f"at most {len(B)} correction terms available")
    k = np.arange(terms)
    out = np.sum((k + a) ** (-s))
    aN = a + terms
    out += aN ** (1 - s) / (s - 1) + 0.5 * aN ** (-s)
    poch = s
    fact = 1.0
    for j in range(1, corrections + 1):
        fact *= (2 * j - 1) * (2 * j)
        out += B[j - 1] / fact * poch * aN ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return complex(out)


def hurwitz_oracle(ctx: PrimeContext, t: int, s: complex) -> complex:
    """L(chi_t, s) = q^{-s} sum_{a=1}^{q-1} chi_t(a) zeta(s, a/q)."""
    s = complex(s)
    if t % (ctx.q - 1) == 0 and abs(s - 1.0) < 1e-9:
        raise ValueError("principal character: L has a pole at s = 1")
    G = chars.character_group(ctx)
    q = ctx.q
    vals = np.array([hurwitz_zeta(s, a / q) for a in range(1, q)])
    return complex(q ** (-s) * np.sum(G.value(t, np.arange(1, q)) * vals))


def completed_lambda(ctx: PrimeContext, t: int, s: complex) -> complex:
    """Lambda(chi, s) = q^{s/2} pi^{-s/2} Gamma((s+kappa)/2) L(chi, s), oracle L."""
    s = complex(s)
    kappa = t % 2
    L = hurwitz_oracle(ctx, t, s)
    return complex(ctx.q ** (s / 2) * np.pi ** (-s / 2)
                   * np.exp(loggamma((s + kappa) / 2)) * L)


def functional_equation_defect(ctx: PrimeContext, t: int, s: complex) -> float:
    """|Lambda(chi, s) - i^{-kappa} eps(chi) Lambda(conj chi, 1-s)|."""
    G = chars.character_group(ctx)
    kappa = t % 2
    lhs = completed_lambda(ctx, t, s)
    rhs = (1j) ** (-kappa) * G.eps[t % G.L] * completed_lambda(ctx, (-t) % G.L, 1 - s)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# central values
# ---------------------------------------------------------------------------

@dataclass
class LValue:
    t: int
    which: str            # "dirichlet" | "delta-twist" | "triple-product"
    value: complex
    method: str           # "afe" | "oracle"
    terms_used: int


@dataclass
class DirichletBatch:
    """All q-1 central values L(chi_t, 1/2) (entry t=0 is NaN) plus shared data."""

    q: int
    values: np.ndarray
    eps: np.ndarray
    root: np.ndarray      # W(chi_t) = i^{-kappa} eps(chi_t)
    n_cut: int
    q_choice: str


def _grouped_char_sums(ctx: PrimeContext, coeff: np.ndarray) -> np.ndarray:
    """S[t] = sum_{n <= N} coeff[n] chi_t(n) for all t, one length-(q-1) FFT.

    coeff is indexed 1..N (coeff[0] ignored); multiples of q drop out.
    """
    q = ctx.q
    N = len(coeff) - 1
    F = np.zeros(q, dtype=complex)
    np.add.at(F, np.arange(1, N + 1) % q, coeff[1:])
    h = F[ctx.dft_plan.perm]  # dlog ordering; F[0] (multiples of q) dropped
    return chars._group_dft_pos(h)


@lru_cache(maxsize=32)
def dirichlet_batch(q: int, q_choice: str = "g50") -> DirichletBatch:
    """One AFE batch per modulus: every nontrivial central value at once."""
    from .ffcore import build_context

    ctx = build_context(q)
    G = chars.character_group(ctx)
    root_q = np.sqrt(q)
    w_even = dirichlet_weight(0, q_choice)
    w_odd = dirichlet_weight(1, q_choice)
    n_cut = max(weight_cut(w_even, root_q), weight_cut(w_odd, root_q))
    n = np.arange(1, n_cut + 1)
    base = n ** (-0.5)
    S = {}
    for p, wgt in ((0, w_even), (1, w_odd)):
        co = np.zeros(n_cut + 1, dtype=complex)
        co[1:] = base * weight_eval_batch(wgt, n / root_q)
        S[p] = _grouped_char_sums(ctx, co)
    L = q - 1
    ts = np.arange(L)
    kap = ts % 2
    W = (-1j) ** kap * G.eps
    vals = np.empty(L, dtype=complex)
    for p in (0, 1):
        m = kap == p
        vals[m] = S[p][ts[m]] + W[m] * S[p][(-ts[m]) % L]
    vals[0] = np.nan  # principal: pole handling out of scope
    return DirichletBatch(q=q, values=vals, eps=G.eps.copy(), root=W,
                          n_cut=n_cut, q_choice=q_choice)


def dirichlet_central(ctx: PrimeContext, t: int, q_choice: str = "g50") -> LValue:
    """L(chi_t, 1/2) by the single-character AFE (batch-free reference path)."""
    q = ctx.q
    t = int(t) % (q - 1)
    if t == 0:
        raise ValueError("principal character excluded (pole at s=1)")
    G = chars.character_group(ctx)
    kappa = t % 2
    wgt = dirichlet_weight(kappa, q_choice)
    root_q = np.sqrt(q)
    n_cut = weight_cut(wgt, root_q)
    n = np.arange(1, n_cut + 1)
    co = n ** (-0.5) * weight_eval_batch(wgt, n / root_q)
    cv = G.value(t, n)
    W = (-1j) ** kappa * G.eps[t]
    val = np.sum(cv * co) + W * np.sum(np.conj(cv) * co)
    return LValue(t=t, which="dirichlet", value=complex(val), method="afe",
                  terms_used=n_cut)


@dataclass
class CuspBatch:
    """All q-1 twisted central values L(Delta x chi_t, 1/2) (t=0 NaN)."""

    q: int
    values: np.ndarray
    n_cut: int
    q_choice: str


def cusp_batch(q: int, hecke, q_choice: str = "g50") -> CuspBatch:
    """Balanced AFE of conductor q^2 for all twists at once (w = eps(chi)^2)."""
    from .ffcore import build_context

    ctx = build_context(q)
    G = chars.character_group(ctx)
    wgt = cusp_weight(q_choice)
    n_cut = weight_cut(wgt, float(q))
    lam = hecke.lam
    if n_cut >= len(lam):
        raise ValueError(f"Hecke table too short: need lambda up to {n_cut}")
    n = np.arange(1, n_cut + 1)
    co = np.zeros(n_cut + 1, dtype=complex)
    co[1:] = lam[1 : n_cut + 1] * n ** (-0.5) * weight_eval_batch(wgt, n / q)
    S = _grouped_char_sums(ctx, co)
    L = q - 1
    ts = np.arange(L)
    vals = S[ts] + G.eps[ts] ** 2 * S[(-ts) % L]
    vals[0] = np.nan
    return CuspBatch(q=q, values=vals, n_cut=n_cut, q_choice=q_choice)


def cusp_twist_central(ctx: PrimeContext, t: int, hecke,
                       q_choice: str = "g50", root_number: complex | None = None) -> LValue:
    """L(Delta x chi_t, 1/2); root_number overrides w = eps^2 (for the
    self-consistency discriminator only)."""
    q = ctx.q
    t = int(t) % (q - 1)
    if t == 0:
        raise ValueError("principal character excluded")
    G = chars.character_group(ctx)
    wgt = cusp_weight(q_choice)
    n_cut = weight_cut(wgt, float(q))
    lam = hecke.lam
    if n_cut >= len(lam):
        raise ValueError(f"Hecke table too short: need lambda up to {n_cut}")
    n = np.arange(1, n_cut + 1)
    co = lam[1 : n_cut + 1] * n ** (-0.5) * weight_eval_batch(wgt, n / q)
    cv = G.value(t, n)
    w = root_number if root_number is not None else G.eps[t] ** 2
    val = np.sum(cv * co) + w * np.sum(np.conj(cv) * co)
    return LValue(t=t, which="delta-twist", value=complex(val), method="afe",
                  terms_used=n_cut)


def triple_root_number(ctx: PrimeContext, t: int, t1: int, t2: int) -> complex:
    """W(chi) W(chi w1) W(chi w2) for the product of three Dirichlet L's."""
    G = chars.character_group(ctx)
    L = G.L
    ks = [t % 2, (t + t1) % 2, (t + t2) % 2]
    e = G.eps[t % L] * G.eps[(t + t1) % L] * G.eps[(t + t2) % L]
    return complex((1j) ** (-sum(ks)) * e)


def twisted_triple_divisor(ctx: PrimeContext, t1: int, t2: int, n_max: int) -> np.ndarray:
    """d[N] = sum_{n0 n1 n2 = N} w1(n1) w2(n2), N <= n_max (index 0 unused)."""
    G = chars.character_group(ctx)
    n = np.arange(n_max + 1)
    e1 = np.zeros(n_max + 1, dtype=complex)
    e1[1:] = G.value(t1, n[1:])
    e2 = np.zeros(n_max + 1, dtype=complex)
    e2[1:] = G.value(t2, n[1:])
    f = _dirichlet_convolve(e1, e2)
    ones = np.zeros(n_max + 1, dtype=complex)
    ones[1:] = 1.0
    return _dirichlet_convolve(f, ones)


def _dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)[n] = sum_{d | n} a[d] b[n/d]; O(N log N)."""
    N = len(a) - 1
    out = np.zeros(N + 1, dtype=complex)
    for d in range(1, N + 1):
        if a[d] != 0:
            mult = np.arange(d, N + 1, d)
            out[mult] += a[d] * b[mult // d]
    return out


def triple_product_afe(ctx: PrimeContext, t: int, t1: int, t2: int,
                       q_choice: str = "g50") -> LValue:
    """L(chi,1/2) L(chi w1,1/2) L(chi w2,1/2) by the two-term triple expansion
    with the triple-gamma weight; contract: equals the product of the three
    single AFE values."""
    q = ctx.q
    L = q - 1
    t, t1, t2 = t % L, t1 % L, t2 % L
    if t == 0 or t == (-t1) % L or t == (-t2) % L:
        raise ValueError("chi in {1, conj(w1), conj(w2)} excluded")
    G = chars.character_group(ctx)
    parities = (t % 2, (t + t1) % 2, (t + t2) % 2)
    wgt = triple_weight(parities, q_choice)
    root = q ** 1.5  # analytic conductor q^3
    n_cut = weight_cut(wgt, root)
    d3 = twisted_triple_divisor(ctx, t1, t2, n_cut)
    n = np.arange(1, n_cut + 1)
    V = weight_eval_batch(wgt, n / root)
    co = d3[1:] * n ** (-0.5) * V
    cv = G.value(t, n)
    W3 = triple_root_number(ctx, t, t1, t2)
    val = np.sum(cv * co) + W3 * np.sum(np.conj(cv) * np.conj(d3[1:]) * n ** (-0.5) * V)
    return LValue(t=t, which="triple-product", value=complex(val), method="afe",
                  terms_used=n_cut)
