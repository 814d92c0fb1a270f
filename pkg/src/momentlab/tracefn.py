"""Trace functions as value tables, twisted correlation sums, PGL2 structure.

A TraceFunction is any bounded table K : F_q -> C with a declared sup bound M
and a kernel descriptor.  The twisted correlation sum against gamma = (a b; c d)
in PGL2(F_q) and a character omega is

    C(K, omega; gamma) = sum_{z != -d/c} conj(omega)(cz+d) Khat(gamma z)
                         conj(Khat(z)),

with Khat the normalized Fourier transform; |C| <= M^2 q always (Parseval),
and square-root cancellation |C| <= M sqrt(q) off a structured matrix set is
what the goodness scans probe.  PGL2 representatives are normalized so the
first nonzero entry in the order (a, c, b, d) is 1, which also fixes the
omega(-1) sign ambiguity of C; contracts only consume |C|.

classify() gives each class a single primary tag by fixed-point structure
(parabolic if the discriminant vanishes on a non-scalar; trace zero means an
involution, i.e. a normalizer-minus-torus element for every pair it swaps;
otherwise a split or nonsplit torus element by the quadratic-residue status
of the discriminant), and reports Bruhat-cell membership separately (in_B:
fixes infinity; in_Bw: sends 0 to infinity; in_wB: sends infinity to 0).
Scalars sit in B.  The goodness summary consumes the parabolic tag, the
Bruhat flags and the fixed-point pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .ffcore import PrimeContext, dft_prime, mod_inverse
from . import characters as chars
from .expsums import KloostermanSpec, kloosterman_table


# ---------------------------------------------------------------------------
# trace functions
# ---------------------------------------------------------------------------

@dataclass
class TraceFunction:
    q: int
    values: np.ndarray
    sup_bound: float
    kernel: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if len(self.values) != self.q:
            raise ValueError(f"table length {len(self.values)} != q = {self.q}")
        mx = float(np.abs(self.values).max())
        if self.sup_bound < mx - 1e-9:
            raise ValueError(f"sup bound {self.sup_bound} below observed max {mx}")

    def norm2_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))


def from_table(ctx: PrimeContext, values, kernel: str = "user table") -> TraceFunction:
    values = np.asarray(values, dtype=complex)
    return TraceFunction(q=ctx.q, values=values,
                         sup_bound=float(np.abs(values).max()), kernel=kernel)


def from_kloosterman(ctx: PrimeContext, spec: KloostermanSpec,
                     zero_convention: str = "fourier") -> TraceFunction:
    tab = kloosterman_table(spec, ctx, zero_convention)
    return TraceFunction(q=ctx.q, values=tab, sup_bound=float(np.abs(tab).max()),
                         kernel=spec.label())


def from_multiplicative(ctx: PrimeContext, omega: int, poly: list[int]) -> TraceFunction:
    """K(x) = omega(f(x)) for a polynomial f given by coefficients [c0, c1, ...]."""
    G = chars.character_group(ctx)
    x = np.arange(ctx.q, dtype=np.int64)
    fx = np.zeros(ctx.q, dtype=np.int64)
    for c in reversed(poly):
        fx = (fx * x + c) % ctx.q
    vals = G.value(omega, fx)
    name = f"omega_{omega}(f), f coeffs {poly}"
    return TraceFunction(q=ctx.q, values=vals, sup_bound=1.0, kernel=name)


def from_additive(ctx: PrimeContext, poly: list[int]) -> TraceFunction:
    """K(x) = e(f(x)/q) for a polynomial f given by coefficients [c0, c1, ...]."""
    x = np.arange(ctx.q, dtype=np.int64)
    fx = np.zeros(ctx.q, dtype=np.int64)
    for c in reversed(poly):
        fx = (fx * x + c) % ctx.q
    vals = ctx.unity[fx]
    return TraceFunction(q=ctx.q, values=vals, sup_bound=1.0,
                         kernel=f"psi(f), f coeffs {poly}")


def fourier(K: TraceFunction, ctx: PrimeContext) -> TraceFunction:
    """Khat(y) = q^{-1/2} sum_x K(x) e(xy/q); sup bound set to observed max."""
    vals = dft_prime(K.values, ctx) / np.sqrt(ctx.q)
    return TraceFunction(q=K.q, values=vals, sup_bound=float(np.abs(vals).max()),
                         kernel=f"FT[{K.kernel}]")


# ---------------------------------------------------------------------------
# PGL2 classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjMatrix:
    """PGL2(F_q) class representative, normalized: first nonzero of (a, c, b, d) is 1."""

    a: int
    b: int
    c: int
    d: int
    q: int

    @staticmethod
    def of(a: int, b: int, c: int, d: int, ctx: PrimeContext) -> "ProjMatrix":
        q = ctx.q
        a, b, c, d = a % q, b % q, c % q, d % q
        if (a * d - b * c) % q == 0:
            raise ValueError(f"singular matrix ({a} {b}; {c} {d}) mod {q}")
        for lead in (a, c, b, d):
            if lead:
                s = mod_inverse(lead, ctx)
                return ProjMatrix(a * s % q, b * s % q, c * s % q, d * s % q, q)
        raise AssertionError("zero matrix cannot be nonsingular")

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.q

    def trace(self) -> int:
        return (self.a + self.d) % self.q

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def apply(self, z: int | None, ctx: PrimeContext) -> int | None:
        """Moebius action on P^1(F_q) with None = the point at infinity."""
        q = self.q
        if z is None:
            return None if self.c == 0 else self.a * mod_inverse(self.c, ctx) % q
        num = (self.a * z + self.b) % q
        den = (self.c * z + self.d) % q
        if den == 0:
            return None
        return num * mod_inverse(den, ctx) % q


@dataclass(frozen=True)
class MatrixClass:
    tag: str  # parabolic | torus_split | torus_nonsplit | normalizer_minus_torus | upper_triangular_B
    fixed_points: tuple  # elements of P^1: ints, None (= infinity), or "r+s*sqrt(v)" strings
    in_B: bool
    in_Bw: bool
    in_wB: bool
    swapped_pair: tuple | None = None  # for involutions: a canonical 2-cycle


def _sqrtmod(n: int, q: int) -> int | None:
    """Square root mod prime q via Tonelli-Shanks, or None if n is a non-residue."""
    n %= q
    if n == 0:
        return 0
    if pow(n, (q - 1) // 2, q) != 1:
        return None
    if q % 4 == 3:
        return pow(n, (q + 1) // 4, q)
    # Tonelli-Shanks
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    x = pow(n, (s + 1) // 2, q)
    b = pow(n, s, q)
    g = pow(z, s, q)
    r = e
    while True:
        t, m = b, 0
        while t != 1:
            t = t * t % q
            m += 1
        if m == 0:
            return x
        gs = pow(g, 1 << (r - m - 1), q)
        g = gs * gs % q
        x = x * gs % q
        b = b * g % q
        r = m


def classify(gamma: ProjMatrix, ctx: PrimeContext) -> MatrixClass:
    q = ctx.q
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    det = gamma.det()
    tr = gamma.trace()
    disc = (tr * tr - 4 * det) % q
    in_B = c == 0
    in_Bw = d == 0 and c != 0
    in_wB = a == 0 and c != 0

    def fixed_points() -> tuple:
        # fixed z solve c z^2 + (d - a) z - b = 0; infinity fixed iff c = 0
        if c == 0:
            if (a - d) % q == 0:
                return (None,)  # scalar handled by caller; parabolic in B
            z = b * mod_inverse((d - a) % q, ctx) % q
            return (None, z)
        r = _sqrtmod(disc, q)
        inv2c = mod_inverse(2 * c % q, ctx)
        if r is None:
            v = _nonresidue(q)
            w = _sqrtmod(disc * mod_inverse(v, ctx) % q, q)  # disc = v w^2
            re = (a - d) % q * inv2c % q
            im = w * inv2c % q
            return (f"{re}+{im}*sqrt({v})", f"{re}-{im}*sqrt({v})")
        z1 = ((a - d) % q + r) * inv2c % q
        z2 = ((a - d) % q - r) * inv2c % q
        return (z1,) if z1 == z2 else (z1, z2)

    if gamma.is_scalar():
        return MatrixClass(tag="upper_triangular_B", fixed_points=(),
                           in_B=True, in_Bw=False, in_wB=False)
    if disc == 0:
        fps = fixed_points()
        return MatrixClass(tag="parabolic", fixed_points=(fps[0],) if fps else (),
                           in_B=in_B, in_Bw=in_Bw, in_wB=in_wB)
    if tr == 0:
        # involution: swaps {P, gamma P} for any non-fixed P; canonical pair from
        # the first of (infinity, 0, 1) it moves
        fps = fixed_points()
        pair = None
        for P in (None, 0, 1):
            img = gamma.apply(P, ctx)
            if img != P:
                pair = (P, img)
                break
        return MatrixClass(tag="normalizer_minus_torus", fixed_points=fps,
                           in_B=in_B, in_Bw=in_Bw, in_wB=in_wB, swapped_pair=pair)
    split = c == 0 or pow(disc, (q - 1) // 2, q) == 1
    fps = fixed_points()
    tag = "torus_split" if split else "torus_nonsplit"
    return MatrixClass(tag=tag, fixed_points=fps, in_B=in_B, in_Bw=in_Bw, in_wB=in_wB)


def _nonresidue(q: int) -> int:
    for v in range(2, q):
        if pow(v, (q - 1) // 2, q) == q - 1:
            return v
    raise AssertionError


def enumerate_pgl2(ctx: PrimeContext) -> list[ProjMatrix]:
    """All q^3 - q canonical representatives (a=1 free; a=0, c=1, b != 0)."""
    q = ctx.q
    out = []
    for bb in range(q):
        for cc in range(q):
            for dd in range(q):
                if (dd - bb * cc) % q != 0:  # det of (1 bb; cc dd)
                    out.append(ProjMatrix(1, bb, cc, dd, q))
    for bb in range(1, q):  # a = 0, c = 1: det = -bb != 0
        for dd in range(q):
            out.append(ProjMatrix(0, bb, 1, dd, q))
    return out


# ---------------------------------------------------------------------------
# correlation sums
# ---------------------------------------------------------------------------

def correlation(K: TraceFunction, omega: int, gamma: ProjMatrix, ctx: PrimeContext,
                khat: np.ndarray | None = None) -> complex:
    """C(K, omega; gamma); the z with gamma z = infinity is excluded."""
    q = ctx.q
    if (gamma.a * gamma.d - gamma.b * gamma.c) % q == 0:
        raise ValueError("gamma is singular")
    if khat is None:
        khat = fourier(K, ctx).values
    G = chars.character_group(ctx)
    z = np.arange(q, dtype=np.int64)
    cz_d = (gamma.c * z + gamma.d) % q
    keep = cz_d != 0
    zk = z[keep]
    den = cz_d[keep]
    inv = ctx.inverses()
    gz = (gamma.a * zk + gamma.b) % q * inv[den] % q
    tw = np.conj(G.value(omega, den))
    return complex(np.sum(tw * khat[gz] * np.conj(khat[zk])))


@dataclass
class CorrelationRecord:
    gamma: ProjMatrix
    value: complex
    exceeds: bool
    cls: MatrixClass


@dataclass
class ScanSummary:
    q: int
    kernel: str
    omega: int
    threshold_M: float
    n_scanned: int
    n_exceed: int
    parabolic_exceeders: int
    bruhat_exceeders: int
    torus_pairs: int           # distinct fixed/swapped pairs outside Bruhat cells
    histogram: dict            # primary tag -> count among exceeders
    goodness_ok: bool          # no parabolic exceeders and <= M distinct pairs
    records: list = field(repr=False, default_factory=list)


def correlation_scan(K: TraceFunction, omega: int, M: float, ctx: PrimeContext,
                     mode: str = "exhaustive", n_sample: int = 0, seed: int = 0,
                     keep_all: bool = False) -> ScanSummary:
    """Scan gamma classes for |C| > M sqrt(q) and classify the exceeders.

    exhaustive mode is refused for q > 17 (q^3 - q classes, each O(q)); use
    mode="sample" with n_sample and a seed there.
    """
    q = ctx.q
    if mode == "exhaustive":
        if q > 17:
            raise ValueError(
                f"exhaustive scan needs q <= 17 (got q = {q}); use mode='sample' "
                f"with n_sample/seed")
        gammas = enumerate_pgl2(ctx)
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        gammas = []
        while len(gammas) < n_sample:
            a, b, c, d = rng.integers(0, q, 4)
            if (a * d - b * c) % q != 0:
                gammas.append(ProjMatrix.of(int(a), int(b), int(c), int(d), ctx))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    khat = fourier(K, ctx).values
    cutoff = M * np.sqrt(q)
    ceiling = K.sup_bound**2 * q + 1e-6
    records = []
    histogram: dict[str, int] = {}
    n_exceed = parab = bruhat = 0
    pairs = set()
    for g in gammas:
        val = correlation(K, omega, g, ctx, khat=khat)
        if abs(val) > ceiling:
            raise AssertionError(f"Parseval ceiling violated at {g}: |C| = {abs(val)}")
        exceeds = abs(val) > cutoff
        cls = classify(g, ctx)
        if exceeds:
            n_exceed += 1
            histogram[cls.tag] = histogram.get(cls.tag, 0) + 1
            if cls.tag == "parabolic":
                parab += 1
            elif cls.in_B or cls.in_Bw or cls.in_wB:
                bruhat += 1
            else:
                key = cls.swapped_pair if cls.tag == "normalizer_minus_torus" else cls.fixed_points
                pairs.add(tuple(sorted(str(p) for p in key)))
        if keep_all or exceeds:
            records.append(CorrelationRecord(gamma=g, value=val, exceeds=exceeds, cls=cls))
    return ScanSummary(q=q, kernel=K.kernel, omega=omega, threshold_M=M,
                       n_scanned=len(gammas), n_exceed=n_exceed,
                       parabolic_exceeders=parab, bruhat_exceeders=bruhat,
                       torus_pairs=len(pairs), histogram=dict(sorted(histogram.items())),
                       goodness_ok=(parab == 0 and len(pairs) <= M),
                       records=records)


# ---------------------------------------------------------------------------
# smooth cutoffs
# ---------------------------------------------------------------------------

_SHAPE_CACHE: dict[str, tuple] = {}


def _bump_callables(shape: str):
    """Value and first four derivatives of the unit profile on (0, 1)."""
    if shape in _SHAPE_CACHE:
        return _SHAPE_CACHE[shape]
    u = sp.symbols("u")
    if shape == "bump":
        # normalized C^infty bump on (0,1), peak 1 at u = 1/2
        expr = sp.exp(1 - 1 / (4 * u * (1 - u)))
    elif shape == "cos2":
        expr = sp.sin(sp.pi * u) ** 4
    else:
        raise ValueError(f"unknown cutoff shape {shape!r}")
    fns = []
    for nu in range(5):
        fns.append(sp.lambdify(u, sp.diff(expr, u, nu), "numpy"))
    _SHAPE_CACHE[shape] = tuple(fns)
    return _SHAPE_CACHE[shape]


@dataclass
class SmoothCutoff:
    """Compactly supported profile on [P, 2P] with derivative scale Q.

    Satisfies |x^nu f^(nu)(x)| <= C_nu Q^nu with the C_nu measured at
    construction (sampled check, nu <= 4).
    """

    P: float = 1.0
    Q: float = 1.0
    shape: str = "bump"
    C: tuple = ()

    def __post_init__(self):
        if not self.C:
            xs = np.linspace(self.P * 1.0001, 2 * self.P * 0.9999, 801)
            cs = []
            for nu in range(5):
                vals = np.abs(xs**nu * self.deriv(xs, nu))
                cs.append(float(vals.max()) / self.Q**nu)
            self.C = tuple(cs)

    def __call__(self, x) -> np.ndarray:
        return self.deriv(x, 0)

    def deriv(self, x, nu: int) -> np.ndarray:
        """nu-th derivative, zero outside the open support."""
        fns = _bump_callables(self.shape)
        x = np.asarray(x, dtype=float)
        u = (x - self.P) / self.P  # support (P, 2P) -> (0, 1)
        inside = (u > 0) & (u < 1)
        out = np.zeros_like(u)
        if inside.any():
            out[inside] = fns[nu](u[inside]) / self.P**nu
        return out

    def fourier_transform(self, y, n_nodes: int | None = None) -> np.ndarray:
        """fhat(y) = int f(x) e^{-2 pi i x y} dx, uniform trapezoid on [P, 2P].

        All derivatives of the profile vanish at the endpoints, so the
        trapezoid rule is spectrally accurate once the grid resolves the
        oscillation (~8 nodes per cycle, i.e. n_nodes >= 8 |y| P).
        """
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if n_nodes is None:
            n_nodes = int(max(1024, 8 * np.ceil(np.abs(y).max() * self.P) + 64))
        x = np.linspace(self.P, 2 * self.P, n_nodes)
        w = np.full(n_nodes, x[1] - x[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        fx = self(x)
        out = np.empty(len(y), dtype=complex)
        blk = max(1, 4_000_000 // n_nodes)
        wf = w * fx
        for i in range(0, len(y), blk):
            phase = np.exp(-2j * np.pi * np.outer(y[i : i + blk], x))
            out[i : i + blk] = phase @ wf
        return out

    def fourier_tail_bound(self, y: float) -> float:
        """|fhat(y)| <= ||f''''||_1 / (2 pi y)^4 by four integrations by parts."""
        if not hasattr(self, "_l1_d4"):
            xs = np.linspace(self.P, 2 * self.P, 4001)
            self._l1_d4 = float(np.trapezoid(np.abs(self.deriv(xs, 4)), xs))
        return self._l1_d4 / (2 * np.pi * abs(y)) ** 4 if y else float("inf")


# ---------------------------------------------------------------------------
# Polya-Vinogradov completion and bilinear cancellation
# ---------------------------------------------------------------------------

def polya_check(K: TraceFunction, f: SmoothCutoff, N: float,
                ctx: PrimeContext) -> tuple[complex, complex]:
    """(direct, completed) for sum_n K(n mod q) f(n/N).

    direct: over the support n in [NP, 2NP].  completed: (N/sqrt q)
    sum_n Khat(n mod q) fhat(nN/q) with a fixed frequency cut chosen so the
    dropped fhat tail sits far below the 1e-6 N M agreement tolerance.
    """
    q = ctx.q
    if N > q * q:
        raise ValueError("N <= q^2 required")
    lo = int(np.floor(N * f.P))
    hi = int(np.ceil(2 * N * f.P)) + 1
    n = np.arange(lo, hi + 1)
    direct = complex(np.sum(K.values[n % q] * f(n / N)))

    khat = fourier(K, ctx).values
    scale = N / np.sqrt(q)
    # frequency cut from the integration-by-parts bound: drop |fhat(y)| once
    # the remaining tail is far below the 1e-6 N M agreement tolerance
    khat_max = float(np.abs(khat).max())
    tol_abs = 1e-10 * max(1.0, N) * max(K.sup_bound, 1.0)
    per_term = tol_abs / (scale * max(khat_max, 1e-30) * 200.0)
    y_cut = (max(f.fourier_tail_bound(1.0), 1e-30) / per_term) ** 0.25
    n_max = int(np.ceil(y_cut * q / N)) + 2 * q + 8
    idx = np.arange(1, n_max + 1)
    fh0 = f.fourier_transform(np.array([0.0]))[0]
    fh_pos = f.fourier_transform(idx * N / q)
    fh_neg = f.fourier_transform(-idx * N / q)
    out = scale * (khat[0] * fh0
                   + np.sum(khat[idx % q] * fh_pos)
                   + np.sum(khat[(-idx) % q] * fh_neg))
    return direct, complex(out)


def bilinear_experiment(K: TraceFunction, M_len: int, N_len: int, coeff_seed: int,
                        ctx: PrimeContext, type1: bool = False) -> dict:
    """sum_m sum_n alpha_m beta_n K(mn mod q) with random unit coefficients.

    Returns the cancellation ratio |S| / (||alpha||_2 ||beta||_2 sqrt(M N))
    and the reference factors of the two bilinear bounds; purely reported.
    """
    q = ctx.q
    if not (1 <= M_len < q and 1 <= N_len < q):
        raise ValueError("ranges must sit inside [1, q)")
    rng = np.random.default_rng(coeff_seed)
    alpha = np.exp(2j * np.pi * rng.random(M_len))
    beta = np.ones(N_len, dtype=complex) if type1 else np.exp(2j * np.pi * rng.random(N_len))
    m = np.arange(1, M_len + 1)
    n = np.arange(1, N_len + 1)
    prods = np.outer(m, n) % q
    S = complex(alpha @ K.values[prods] @ beta)
    na = np.sqrt(M_len)
    nb = np.sqrt(N_len)
    ratio = abs(S) / (na * nb * np.sqrt(M_len * N_len))
    # reference factors (not asserted): the Polya-Vinogradov-type bound factor
    # and the (M^2 N^5 / q^3)^{-1/12} type-I factor
    pv = q ** -0.25 + M_len ** -0.5 + q ** 0.25 * np.log(q) ** 0.5 / np.sqrt(N_len)
    sawin = (M_len ** 2 * N_len ** 5 / q ** 3) ** (-1 / 12) if type1 else float("nan")
    return {"S": S, "ratio": float(ratio), "pv_factor": float(pv),
            "type1_factor": float(sawin), "M_len": M_len, "N_len": N_len,
            "seed": coeff_seed, "type1": type1}
