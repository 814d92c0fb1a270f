import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentlab.ffcore import build_context
from momentlab import characters as chars
from momentlab.lvalues import functional_equation_defect


def test_enumeration_counts():
    ctx = build_context(5)
    cs = chars.enumerate_characters(ctx)
    assert len(cs) == 4
    assert sum(1 for c in cs if c.kappa == 0) == 2
    assert cs[0].is_principal
    ctx13 = build_context(13)
    cs13 = chars.enumerate_characters(ctx13)
    assert sum(1 for c in cs13 if c.kappa == 0) == 6


def test_principal_gauss_sum():
    ctx = build_context(7)
    cs = chars.enumerate_characters(ctx)
    assert abs(cs[0].gauss - (-1 / np.sqrt(7))) < 1e-12


def test_quadratic_gauss_sum_mod5():
    ctx = build_context(5)
    G = chars.character_group(ctx)
    # direct 4-term summation oracle
    direct = sum(G.value(2, x) * np.exp(2j * np.pi * x / 5) for x in range(1, 5)) / np.sqrt(5)
    assert abs(direct - 1) < 1e-12
    assert abs(G.eps[2] - direct) < 1e-12


def test_gauss_batch_vs_direct():
    for q in (5, 7, 13, 101):
        ctx = build_context(q)
        G = chars.character_group(ctx)
        worst = max(abs(G.eps[t] - chars.gauss_sum_direct(ctx, t)) for t in range(q - 1))
        assert worst < 1e-12


def test_gauss_unimodularity_q101():
    G = chars.character_group(build_context(101))
    assert np.abs(np.abs(G.eps[1:]) - 1).max() < 1e-10


def test_character_sum_vanishes():
    G = chars.character_group(build_context(13))
    x = np.arange(1, 13)
    for t in range(1, 12):
        assert abs(np.sum(G.value(t, x))) < 1e-12
    assert abs(np.sum(G.value(0, x)) - 12) < 1e-12


def test_multiplicativity_full_table():
    ctx = build_context(11)
    G = chars.character_group(ctx)
    a = np.arange(1, 11)
    for t in range(10):
        va = G.value(t, a)
        table = np.outer(va, va)
        prod = G.value(t, np.outer(a, a) % 11)
        assert np.abs(table - prod).max() < 1e-12


def test_parity_bit_matches_value_at_minus_one():
    for q in (5, 7, 13, 101):
        G = chars.character_group(build_context(q))
        for t in range(q - 1):
            assert abs(G.value(t, q - 1) - (-1.0) ** (t % 2)) < 1e-12


def test_even_orthogonality_examples():
    ctx = build_context(7)
    assert abs(chars.even_orthogonality_sum(ctx, 1) - 2) < 1e-12
    assert abs(chars.even_orthogonality_sum(ctx, 6) - 2) < 1e-12
    assert abs(chars.even_orthogonality_sum(ctx, 2) - (-1)) < 1e-12
    with pytest.raises(ValueError):
        chars.even_orthogonality_sum(ctx, 0)


def test_even_orthogonality_sweep():
    from momentlab.ffcore import primes_up_to

    for q in primes_up_to(101)[1:]:  # every odd prime through 101, every a
        ctx = build_context(q)
        worst = max(abs(chars.even_orthogonality_sum(ctx, a)
                        - chars.even_orthogonality_closed(ctx, a)) for a in range(1, q))
        assert worst < 1e-9


def test_gauss_weighted_average_identities():
    for q, kappa, m in ((7, 0, 1), (11, 1, 3), (5, 0, 1)):
        ctx = build_context(q)
        lhs = chars.gauss_weighted_average(ctx, kappa, m)
        rhs = chars.gauss_weighted_closed(ctx, kappa, m)
        assert abs(lhs - rhs) < 1e-10


def test_double_gauss_identity():
    rng = np.random.default_rng(2)
    ctx7 = build_context(7)
    assert abs(chars.double_gauss_average(ctx7, 0, 0, 1)
               - chars.double_gauss_closed(ctx7, 0, 0, 1)) < 1e-9
    ctx11 = build_context(11)
    w1, w2 = rng.integers(0, 10, 2)
    worst = max(abs(chars.double_gauss_average(ctx11, int(w1), int(w2), m, p)
                    - chars.double_gauss_closed(ctx11, int(w1), int(w2), m, p))
                for m in range(1, 11) for p in (0, 1))
    assert worst < 1e-9
    ctx13 = build_context(13)
    assert abs(chars.double_gauss_average(ctx13, 6, 0, 5)
               - chars.double_gauss_closed(ctx13, 6, 0, 5)) < 1e-9


def test_triple_gauss_exact_and_residual():
    rng = np.random.default_rng(4)
    for q in (7, 11, 13):
        ctx = build_context(q)
        for _ in range(3):
            w1, w2 = (int(x) for x in rng.integers(0, q - 1, 2))
            for m in (1, 2, q - 1):
                for p in (0, 1):
                    lhs = chars.triple_gauss_average(ctx, w1, w2, m, p)
                    approx = chars.triple_gauss_closed(ctx, w1, w2, m, p)
                    exact = chars.triple_gauss_closed(ctx, w1, w2, m, p, exact=True)
                    assert abs(lhs - approx) <= 5 * q ** -1.5
                    assert abs(lhs - exact) < 1e-12


@given(st.sampled_from([5, 7, 11, 13]), st.data())
@settings(max_examples=40, deadline=None)
def test_twisting_is_index_addition(q, data):
    G = chars.character_group(build_context(q))
    t1 = data.draw(st.integers(0, q - 2))
    t2 = data.draw(st.integers(0, q - 2))
    a = data.draw(st.integers(1, q - 1))
    assert abs(G.value(t1, a) * G.value(t2, a) - G.value((t1 + t2) % (q - 1), a)) < 1e-12


def test_numeric_functional_equation_mod101():
    s = 0.6 + 0.3j
    for t in (1, 2, 5, 50, 99):
        assert functional_equation_defect(build_context(101), t, s) < 1e-8
