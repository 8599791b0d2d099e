import numpy as np
import pytest

from ebff.errors import SpecMissing, UnregisteredPair
from ebff.freefield import (BosonSpec, LaurentSeries, VertexOpSymbol,
                            V_ALPHA, U_ALPHA, V_OMEGA, W_ALPHA,
                            ZeroModeState, betas, contraction_kappa,
                            contraction_series, delta_commutator_check,
                            delta_u, nilpotency_check, ope_case, ope_check,
                            ope_residuals, registry)
from ebff.params import EllipticParams
from ebff.qseries import PRIME, SQUARE, bracket, x_number


PARAMS2 = EllipticParams(2, 3.3, 0.32)
PARAMS3 = EllipticParams(3, 2.9, 0.3)


# ---------------------------------------------------------------------------
# series plumbing

def test_laurent_mul_matches_convolution():
    a = LaurentSeries([1.0, 2.0, 0.5, 0.0, -1.0])
    b = LaurentSeries([1.0, -1.0, 0.25, 3.0, 0.0])
    c = (a * b).coeffs
    for k in range(5):
        want = sum(a.coeffs[i] * b.coeffs[k - i] for i in range(k + 1))
        assert abs(c[k] - want) < 1e-14


def test_laurent_exp_log_roundtrip():
    rng = np.random.default_rng(2)
    coeffs = np.concatenate([[0.0], rng.standard_normal(11) * 0.3])
    s = LaurentSeries(coeffs)
    back = s.exp().log()
    assert np.max(np.abs(np.asarray(back.coeffs) - coeffs)) < 1e-13


# ---------------------------------------------------------------------------
# the commutator table

def test_boson_spec_roundtrip():
    spec = BosonSpec.load(2)
    again = BosonSpec.from_text(spec.to_text(), 2)
    for j in (1, 2):
        for k in (1, 2):
            for m in (1, 3):
                assert spec.commutator(j, k, m, PARAMS2) == \
                    again.commutator(j, k, m, PARAMS2)


def test_commutator_antisymmetry_in_m():
    spec = BosonSpec.load(3)
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            for m in (1, 2, 4):
                plus = spec.commutator(j, k, m, PARAMS3)
                minus = spec.commutator(k, j, -m, PARAMS3)
                assert abs(plus + minus) < 1e-14 * max(1.0, abs(plus))


def test_commutator_zero_mode_and_missing():
    spec = BosonSpec.load(2)
    assert spec.commutator(1, 1, 0, PARAMS2) == 0
    with pytest.raises(SpecMissing):
        spec.commutator(5, 1, 1, PARAMS2)


def test_gram_matches_commutator_entries():
    spec = BosonSpec.load(2)
    g = spec.gram(2, PARAMS2)
    for j in (1, 2):
        for k in (1, 2):
            assert g[j - 1, k - 1] == spec.commutator(j, k, 2, PARAMS2)


# ---------------------------------------------------------------------------
# contraction kernels vs the registered product formulae

def test_registry_covers_both_ranks():
    assert len(registry(2, PARAMS2.r)) == 12
    # rank 3 adds the j+-1 pairs and the second index value
    assert len(registry(3, PARAMS3.r)) == 33


def test_all_registered_identities_rank2():
    spec = BosonSpec.load(2)
    res = ope_residuals(12, spec, PARAMS2)
    assert len(res) == 12
    worst = max(res.values())
    assert worst < 1e-10, res


def test_all_registered_identities_rank3():
    spec = BosonSpec.load(3)
    res = ope_residuals(10, spec, PARAMS3)
    worst = max(res.values())
    assert worst < 1e-10, res


def test_identity_slot_contracts_trivially():
    spec = BosonSpec.load(2)
    ident = VertexOpSymbol("id")
    k, _ = contraction_series(ident, VertexOpSymbol(V_ALPHA, 1), 8,
                              spec, PARAMS2)
    coeffs = np.asarray(k.coeffs)
    assert abs(coeffs[0] - 1.0) < 1e-14
    assert np.max(np.abs(coeffs[1:])) < 1e-14


def test_order_stability():
    spec = BosonSpec.load(2)
    A = VertexOpSymbol(V_ALPHA, 1)
    B = VertexOpSymbol(U_ALPHA, 1)
    k8 = contraction_kappa(A, B, 8, spec, PARAMS2)
    k16 = contraction_kappa(A, B, 16, spec, PARAMS2)
    assert np.max(np.abs(k8 - k16[:len(k8)])) < 1e-14


def test_unregistered_pair_raises():
    with pytest.raises(UnregisteredPair):
        ope_case(VertexOpSymbol(W_ALPHA, 1), VertexOpSymbol(W_ALPHA, 1),
                 PARAMS2)


def test_delta_commutator_coefficients():
    spec = BosonSpec.load(2)
    # w^k coefficient of the one-sided kernel is [k+1]_x
    res = delta_commutator_check(1, 12, spec, PARAMS2)
    assert res < 1e-12
    x = PARAMS2.x
    assert abs(x_number(1, x) - 1.0) < 1e-15


def test_nilpotency_kernels():
    for params in (PARAMS2, EllipticParams(2, 4.7, 0.55)):
        out = nilpotency_check(params)
        assert out["left_zero"] < 1e-12
        assert out["right_zero"] < 1e-12
        assert out["mirror_nonzero"] > 1e-3
        assert out["generic_nonzero"] > 1e-3


# ---------------------------------------------------------------------------
# zero modes

def test_betas_quadratic_roots():
    for r in (1.7, 3.3, 9.0):
        params = EllipticParams(2, r, 0.4)
        b1, b2, b0 = betas(params)
        assert abs(b1 * b2 + 1.0) < 1e-14
        assert abs(b1 + b2 - 1.0 / np.sqrt(r * (r - 1.0))) < 1e-14
        assert abs(b0 - (b1 + b2)) < 1e-15
        assert b1 < 0.0 < b2


def test_delta_u_constant():
    assert delta_u(2) == -0.5
    assert delta_u(3) == -1.0


def test_zero_mode_state_scalars():
    zm = ZeroModeState(kbar=(1.5, -0.5, -1.0), lbar=(2.0, 0.0, -2.0))
    r = PARAMS3.r
    for mu in range(3):
        for nu in range(3):
            assert zm.pi(mu, nu, r) == -zm.pi(nu, mu, r)
    assert zm.K(0, 1) == 2.0
    assert zm.L(0, 2) == 4.0
    want = 1.0 + 0j
    for mu in range(3):
        for nu in range(mu + 1, 3):
            want *= bracket(zm.K(mu, nu), PARAMS3, SQUARE)
    assert abs(zm.G_K(PARAMS3) - want) < 1e-13 * abs(want)
    wantp = 1.0 + 0j
    for mu in range(3):
        for nu in range(mu + 1, 3):
            wantp *= bracket(zm.L(mu, nu), PARAMS3, SQUARE, PRIME)
    assert abs(zm.G_L_prime(PARAMS3) - wantp) < 1e-13 * abs(wantp)
