import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentlab.ffcore import (build_context, dft_naive, dft_prime, idft_prime,
                              is_prime, mod_inverse, primes_up_to,
                              smallest_primitive_root)


def test_build_context_examples():
    ctx = build_context(5)
    assert ctx.g == 2
    assert ctx.dlog[4] == 2  # 2^2 = 4
    ctx7 = build_context(7)
    assert ctx7.g == 3
    # 3 has order 6 mod 7 by direct exponentiation
    powers = {pow(3, k, 7) for k in range(1, 7)}
    assert len(powers) == 6


def test_build_context_rejects_composite():
    with pytest.raises(ValueError, match="not.*prime"):
        build_context(4)
    with pytest.raises(ValueError):
        build_context(2)
    with pytest.raises(ValueError):
        build_context(1)


def test_dlog_bijection():
    for q in (5, 7, 13, 101):
        ctx = build_context(q)
        assert sorted(ctx.dlog[1:]) == list(range(q - 1))


def test_unity_conjugate_pairs():
    ctx = build_context(101)
    j = np.arange(1, 101)
    assert np.abs(ctx.unity[j] * ctx.unity[101 - j] - 1).max() < 1e-12


def test_mod_inverse_examples():
    assert mod_inverse(2, build_context(5)) == 3
    assert mod_inverse(1, build_context(17)) == 1
    assert mod_inverse(4, build_context(13)) == 10
    with pytest.raises(ZeroDivisionError):
        mod_inverse(0, build_context(5))
    with pytest.raises(ZeroDivisionError):
        mod_inverse(26, build_context(13))


@given(st.sampled_from(primes_up_to(300)[2:]), st.integers(min_value=1, max_value=10**6))
@settings(max_examples=60, deadline=None)
def test_mod_inverse_property(q, x):
    if x % q == 0:
        x += 1
    ctx = build_context(q)
    assert x * mod_inverse(x, ctx) % q == 1


def test_dft_delta_and_constant():
    ctx = build_context(5)
    delta = np.zeros(5, dtype=complex)
    delta[0] = 1
    assert np.abs(dft_prime(delta, ctx) - 1).max() < 1e-12
    ones = np.ones(5, dtype=complex)
    out = dft_prime(ones, ctx)
    expect = np.zeros(5, dtype=complex)
    expect[0] = 5
    assert np.abs(out - expect).max() < 1e-12


def test_dft_matches_naive_q97():
    ctx = build_context(97)
    rng = np.random.default_rng(0)
    v = rng.normal(size=97) + 1j * rng.normal(size=97)
    assert np.abs(dft_prime(v, ctx) - dft_naive(v, ctx)).max() < 1e-10


def test_round_trip_and_parseval():
    rng = np.random.default_rng(1)
    for q in (5, 7, 31, 127, 499):
        ctx = build_context(q)
        v = rng.normal(size=q) + 1j * rng.normal(size=q)
        d = dft_prime(v, ctx)
        assert np.abs(idft_prime(d, ctx) - v).max() < 1e-10
        lhs = np.sum(np.abs(d) ** 2)
        rhs = q * np.sum(np.abs(v) ** 2)
        assert abs(lhs - rhs) < 1e-10 * rhs


def test_length_mismatch_rejected():
    ctx = build_context(7)
    with pytest.raises(ValueError, match="length"):
        dft_prime(np.ones(6), ctx)


def test_is_prime_and_primitive_roots():
    assert [p for p in primes_up_to(30)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(561)  # Carmichael
    assert is_prime(2**31 - 1)
    assert smallest_primitive_root(13) == 2
    assert smallest_primitive_root(41) == 6
