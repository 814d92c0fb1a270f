"""Prime-field arithmetic and fast length-q discrete Fourier transforms.

Everything downstream works over F_q for an odd prime q.  A PrimeContext
bundles the tables every module needs: the smallest primitive root g, the
discrete-log table a -> log_g(a), the root-of-unity table e(j/q), and a
Rader plan for length-q transforms.

The transform convention is the positive-sign character sum

    dft(v)[y] = sum_x v[x] e(xy/q),         e(t) = exp(2 pi i t),

i.e. *unnormalized*; callers apply 1/sqrt(q) where they want the normalized
Fourier transform.  The inverse is idft(v)[x] = (1/q) sum_y v[y] e(-xy/q),
so idft(dft(v)) == v exactly.

Rader's reduction maps the y != 0 outputs to a length-(q-1) cyclic
convolution in the primitive-root ordering, which we evaluate with a
zero-padded power-of-two FFT.  Cost O(q log q), no dependence on the
factorization of q-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_TWO_PI = 2.0 * np.pi

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes, inclusive."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(q: int) -> int:
    """Smallest positive generator of (Z/qZ)^x; deterministic across runs."""
    fac = _prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in fac):
            return g
    raise ArithmeticError(f"no primitive root found mod {q}")  # unreachable for prime q


@dataclass
class RaderPlan:
    """Precomputation for length-q transforms: pow2 size and the FFT of the
    primitive-root-ordered twiddle sequence (extended for cyclic wrap)."""

    pad: int
    cfft: np.ndarray  # FFT of c_ext, c_ext[k] = e(g^{(k-L+1) mod L}/q)
    perm: np.ndarray  # perm[m] = g^m mod q, m = 0..q-2


@dataclass
class PrimeContext:
    """Immutable tables for F_q; safe to share across threads."""

    q: int
    g: int
    dlog: np.ndarray  # dlog[a] = log_g(a) for a in 1..q-1; dlog[0] = -1 sentinel
    unity: np.ndarray  # unity[j] = e(j/q), j = 0..q-1
    dft_plan: RaderPlan = field(repr=False, default=None)

    def exp(self, j) -> np.ndarray:
        """e(j/q) for integer j (array ok), reduced mod q."""
        return self.unity[np.asarray(j) % self.q]

    def inverses(self) -> np.ndarray:
        """Table inv[a] with a*inv[a] = 1 (q), inv[0] = 0."""
        inv = np.zeros(self.q, dtype=np.int64)
        # g^m -> g^{L-m}; cheap closed form via dlog
        a = np.arange(1, self.q)
        L = self.q - 1
        pow_g = np.ones(L, dtype=np.int64)
        for m in range(1, L):
            pow_g[m] = pow_g[m - 1] * self.g % self.q
        inv[a] = pow_g[(L - self.dlog[a]) % L]
        return inv


def build_context(q: int) -> PrimeContext:
    """Create the shared F_q tables.  Rejects composite or even q."""
    if not isinstance(q, (int, np.integer)):
        raise TypeError(f"modulus must be an integer, got {type(q).__name__}")
    q = int(q)
    if q <= 2 or not is_prime(q):
        raise ValueError(f"q = {q} is not an odd prime (not prime or <= 2)")
    if q >= 2**31:
        raise ValueError(f"q = {q} too large (need q < 2^31)")
    g = smallest_primitive_root(q)
    dlog = np.full(q, -1, dtype=np.int64)
    x = 1
    for m in range(q - 1):
        dlog[x] = m
        x = x * g % q
    unity = np.exp(2j * np.pi * np.arange(q) / q)

    L = q - 1
    perm = np.empty(L, dtype=np.int64)
    x = 1
    for m in range(L):
        perm[m] = x
        x = x * g % q
    # c_ext[k] = c[(k - (L-1)) mod L], c[j] = e(g^j / q); linear conv with the
    # reversed input read off at offset L-1 gives the cyclic correlation.
    c = unity[perm]
    k = np.arange(2 * L - 1)
    c_ext = c[(k - (L - 1)) % L]
    pad = 1 << int(np.ceil(np.log2(3 * L - 2))) if L > 1 else 2
    cfft = np.fft.fft(c_ext, pad)
    plan = RaderPlan(pad=pad, cfft=cfft, perm=perm)
    return PrimeContext(q=q, g=g, dlog=dlog, unity=unity, dft_plan=plan)


def mod_inverse(x: int, ctx: PrimeContext) -> int:
    """Inverse of x mod q; rejects x = 0 mod q."""
    x = int(x) % ctx.q
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {ctx.q}")
    return pow(x, ctx.q - 2, ctx.q)


def dft_prime(v: np.ndarray, ctx: PrimeContext) -> np.ndarray:
    """out[y] = sum_x v[x] e(xy/q) via Rader's prime-length reduction."""
    v = np.asarray(v, dtype=complex)
    q = ctx.q
    if v.shape != (q,):
        raise ValueError(f"vector length {v.shape} != modulus {q}")
    plan = ctx.dft_plan
    L = q - 1
    total = v.sum()
    # a[m] = v[g^m]; cyclic correlation b[n] = sum_m a[m] c[(m+n) mod L]
    a = v[plan.perm]
    a_rev = a[(-np.arange(L)) % L]
    y = np.fft.ifft(np.fft.fft(a_rev, plan.pad) * plan.cfft)
    b = y[L - 1 : 2 * L - 1]
    out = np.empty(q, dtype=complex)
    out[0] = total
    # out[g^j] = v[0] + b[j]
    out[plan.perm] = v[0] + b
    return out


def idft_prime(v: np.ndarray, ctx: PrimeContext) -> np.ndarray:
    """Inverse of dft_prime: out[x] = (1/q) sum_y v[y] e(-xy/q)."""
    v = np.asarray(v, dtype=complex)
    return np.conj(dft_prime(np.conj(v), ctx)) / ctx.q


def dft_naive(v: np.ndarray, ctx: PrimeContext) -> np.ndarray:
    """O(q^2) double-loop transform; the oracle the Rader path is tested against."""
    v = np.asarray(v, dtype=complex)
    q = ctx.q
    if v.shape != (q,):
        raise ValueError(f"vector length {v.shape} != modulus {q}")
    xy = np.outer(np.arange(q), np.arange(q)) % q
    return ctx.unity[xy] @ v
