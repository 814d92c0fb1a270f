import numpy as np
import pytest

from momentlab.ffcore import build_context
from momentlab import characters as chars
from momentlab.lvalues import (cusp_batch, cusp_twist_central,
                               decay_constant, dirichlet_batch, dirichlet_central,
                               dirichlet_weight, cusp_weight, functional_equation_defect,
                               hurwitz_oracle, hurwitz_zeta, triple_product_afe,
                               triple_weight, weight_cut, weight_eval,
                               weight_eval_batch)


# ---------------------------------------------------------------- weights

def test_weight_small_x_limit():
    for wgt in (dirichlet_weight(0), dirichlet_weight(1),
                triple_weight((0, 0, 0)), triple_weight((1, 1, 1)), cusp_weight()):
        assert abs(weight_eval(wgt, 1e-8) - 1) < 1e-6


def test_weight_small_x_rate():
    # |V(x) - 1| <= c x^{1/4} on x <= 1; c is a measured constant (the damping
    # polynomial buys the fast x -> 0 limit at the price of amplitude near 1)
    wgt = dirichlet_weight(0)
    xs = np.geomspace(1e-6, 0.5, 40)
    V = weight_eval_batch(wgt, xs)
    c = np.max(np.abs(V - 1) / xs**0.25)
    assert np.isfinite(c) and c < 5e3


def test_weight_decay_targets():
    assert abs(weight_eval(dirichlet_weight(0), 10.0)) < 1e-4
    assert abs(weight_eval(triple_weight((0, 0, 0)), 20.0)) < 1e-6
    assert abs(weight_eval(dirichlet_weight(0), 50.0)) < 1e-12


def test_weight_measured_decay_constants():
    for power in (2.0, 5.0):
        c = decay_constant(dirichlet_weight(0), power)
        assert np.isfinite(c) and c > 0


def test_weight_rejects_nonpositive():
    with pytest.raises(ValueError):
        weight_eval(dirichlet_weight(0), 0.0)
    with pytest.raises(ValueError):
        weight_eval(dirichlet_weight(0), -1.0)


def test_weight_contour_side_consistency():
    # left (x < 1) and right contours must agree where both are usable
    import dataclasses

    wgt = triple_weight((1, 0, 1))
    for x in (0.3, 0.7, 0.99):
        left = weight_eval(wgt, x)
        right_w = dataclasses.replace(wgt, step=0.008, height=44.0)
        from momentlab.lvalues import _contour_integral

        right = _contour_integral(right_w, np.array([x]), 1.7)[0]
        assert abs(left - right) < 1e-9


def test_weight_quadrature_refinement():
    import dataclasses

    for wgt in (dirichlet_weight(1), triple_weight((1, 1, 1)), cusp_weight()):
        fine = dataclasses.replace(wgt, step=0.005, height=48.0)
        for x in (0.03, 0.7, 3.0, 9.0):
            scale = max(1.0, abs(weight_eval(wgt, x)))
            assert abs(weight_eval(wgt, x) - weight_eval(fine, x)) < 1e-9 * scale


# ---------------------------------------------------------------- hurwitz oracle

def test_hurwitz_zeta_bernoulli_requirement():
    with pytest.raises(ValueError):
        hurwitz_zeta(0.5, 0.3, corrections=99)
    # >= 10 correction terms by default
    assert abs(hurwitz_zeta(2.0, 1.0) - np.pi**2 / 6) < 1e-12


def test_hurwitz_oracle_vs_direct_series():
    # chi quadratic mod 5 at s = 2 against the direct series to 1e7
    ctx = build_context(5)
    G = chars.character_group(ctx)
    n = np.arange(1, 10**7 + 1)
    cv = np.array([complex(G.value(2, r)).real for r in range(5)])
    direct = float(np.sum(cv[n % 5] / n.astype(float) ** 2))
    # alternating-type tail below 1e-13 at this cutoff
    assert abs(hurwitz_oracle(ctx, 2, 2.0) - direct) < 1e-10


def test_hurwitz_oracle_vs_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    ctx = build_context(11)
    G = chars.character_group(ctx)
    for t in (1, 3):
        for s in (0.5, 0.7 + 0.4j, 2.0 - 1.0j):
            ref = complex(sum(complex(G.value(t, a)) * complex(mp.zeta(s, mp.mpf(a) / 11))
                              for a in range(1, 11)) * mp.mpf(11) ** mp.mpc(-s))
            assert abs(hurwitz_oracle(ctx, t, s) - ref) < 1e-10


def test_hurwitz_principal_pole_rejected():
    ctx = build_context(7)
    with pytest.raises(ValueError):
        hurwitz_oracle(ctx, 0, 1.0)


# ---------------------------------------------------------------- dirichlet AFE

def test_afe_oracle_equivalence_q11(derived_fixtures):
    ctx = build_context(11)
    B = dirichlet_batch(11)
    for t in range(1, 10):
        assert abs(B.values[t] - hurwitz_oracle(ctx, t, 0.5)) < 1e-8


def test_single_vs_batch():
    ctx = build_context(11)
    B = dirichlet_batch(11)
    for t in (1, 4, 9):
        assert abs(dirichlet_central(ctx, t).value - B.values[t]) < 1e-9


def test_afe_quadratic_mod5_fixture(derived_fixtures):
    ctx = build_context(5)
    fx = derived_fixtures["hurwitz.L_quad_mod5_half"]
    ref = fx[0] + 1j * fx[1]
    assert abs(dirichlet_central(ctx, 2).value - ref) < 1e-10


def test_afe_conjugation_symmetry():
    ctx = build_context(101)
    B = dirichlet_batch(101)
    for t in (1, 7, 40):
        assert abs(B.values[(-t) % 100] - np.conj(B.values[t])) < 1e-10


def test_q_independence_dirichlet():
    B1 = dirichlet_batch(101, "g50")
    B2 = dirichlet_batch(101, "g40")
    assert np.nanmax(np.abs(B1.values - B2.values)) < 1e-8


def test_principal_rejected():
    ctx = build_context(11)
    with pytest.raises(ValueError):
        dirichlet_central(ctx, 0)


def test_functional_equation_defect_q101():
    for t in range(1, 21):
        assert functional_equation_defect(build_context(101), t, 0.6 + 0.3j) < 1e-8


# ---------------------------------------------------------------- triple product

def test_triple_product_afe():
    ctx = build_context(11)
    v = triple_product_afe(ctx, 1, 0, 0)
    prod = (dirichlet_central(ctx, 1).value ** 3)
    assert abs(v.value - prod) < 1e-6
    ctx13 = build_context(13)
    v2 = triple_product_afe(ctx13, 5, 3, 8)
    prod2 = (dirichlet_central(ctx13, 5).value * dirichlet_central(ctx13, 8).value
             * dirichlet_central(ctx13, 1).value)
    assert abs(v2.value - prod2) < 1e-6


def test_triple_product_excluded_chi():
    ctx = build_context(11)
    with pytest.raises(ValueError):
        triple_product_afe(ctx, 0, 1, 2)
    with pytest.raises(ValueError):
        triple_product_afe(ctx, 3, 7, 0)  # chi = conj(omega1)


def test_triple_conjugation_invariance():
    ctx = build_context(13)
    v = triple_product_afe(ctx, 5, 3, 8).value
    vc = triple_product_afe(ctx, 7, 9, 4).value  # all indices negated mod 12
    assert abs(abs(v) - abs(vc)) < 1e-8
    assert abs(np.conj(v) - vc) < 1e-8


# ---------------------------------------------------------------- cusp twist

def test_cusp_q_shift_self_consistency(hecke_large):
    ctx = build_context(101)
    for t in (1, 2, 7):
        v1 = cusp_twist_central(ctx, t, hecke_large, q_choice="g50")
        v2 = cusp_twist_central(ctx, t, hecke_large, q_choice="g40")
        assert abs(v1.value - v2.value) < 1e-7


def test_cusp_wrong_root_number_drifts(hecke_large):
    ctx = build_context(101)
    G = chars.character_group(ctx)
    t = 2
    wrong = -G.eps[t] ** 2
    v1 = cusp_twist_central(ctx, t, hecke_large, q_choice="g50", root_number=wrong)
    v2 = cusp_twist_central(ctx, t, hecke_large, q_choice="g40", root_number=wrong)
    assert abs(v1.value - v2.value) > 1e-3


def test_cusp_root_number_discriminator(hecke_large):
    # among unimodular candidates, only w = eps(chi)^2 makes the two-term
    # representation damping-independent; checked for an even and an odd chi
    ctx = build_context(101)
    G = chars.character_group(ctx)
    for t in (1, 2):  # odd, even
        e2 = G.eps[t] ** 2
        candidates = [e2, -e2, 1j * e2, -1j * e2, np.conj(e2), 1.0 + 0j]
        drifts = []
        for w in candidates:
            v1 = cusp_twist_central(ctx, t, hecke_large, "g50", root_number=w)
            v2 = cusp_twist_central(ctx, t, hecke_large, "g40", root_number=w)
            drifts.append(abs(v1.value - v2.value))
        assert drifts[0] < 1e-7, drifts
        assert all(d > 1e-3 for d in drifts[1:]), drifts


def test_cusp_conjugation_symmetry(hecke_large):
    B = cusp_batch(101, hecke_large)
    for t in (1, 5, 33):
        assert abs(B.values[(-t) % 100] - np.conj(B.values[t])) < 1e-8


def test_cusp_batch_vs_single(hecke_large):
    ctx = build_context(101)
    B = cusp_batch(101, hecke_large)
    for t in (1, 2, 7):
        assert abs(B.values[t] - cusp_twist_central(ctx, t, hecke_large).value) < 1e-9


def test_cusp_inputs_satisfy_rp(hecke_small):
    from momentlab.hecke import divisor_counts

    d = divisor_counts(hecke_small.N_max)
    lam = np.abs(hecke_small.lam)
    assert np.all(lam[1:] <= d[1:] + 1e-9)


def test_cusp_principal_rejected(hecke_large):
    with pytest.raises(ValueError):
        cusp_twist_central(build_context(101), 0, hecke_large)


def test_weight_cut_cap():
    # the cut always respects the 50 sqrt(conductor) cap
    n = weight_cut(dirichlet_weight(0), np.sqrt(101))
    assert n <= int(np.ceil(50 * np.sqrt(101)))
    assert n >= 8
