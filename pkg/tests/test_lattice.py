import math

import numpy as np
import pytest

from ebff.errors import SingularHeight, TailMismatch
from ebff.heights import HeightState, ground_path
from ebff.lattice import (L_block, RTensor, build_R, build_S_and_Wprime,
                          dual_intertwiner, dual_intertwiner_matrix,
                          dual_inversion_residual, dual_vertex_face_residual,
                          face_weight, face_ybe_max, intertwiner,
                          intertwiner_matrix, intertwiner_prime,
                          primed_params, tail_truncated, vertex_face_residual,
                          vertex_ybe_residual, _default_base)
from ebff.params import EllipticParams
from ebff.qseries import jacobi_theta

P2 = EllipticParams(2, 3.3, 0.32)
P3 = EllipticParams(3, 3.9, 0.41)
REL_TOL = 1e-9


def _base(params):
    return _default_base(params.n)


# ---------------------------------------------------------------------------
# face weights

def test_face_weight_nonadmissible_zero():
    a = _base(P3)
    b = a.step_up(0)
    c = b.step_up(1)
    d = a.step_up(2)
    # (d, c) not admissible: c - d = (1, 1, -1) is not an eps-bar step
    bad_c = d.step_up(2).step_down(0).step_up(1)
    assert face_weight(bad_c, d, b, a, 0.3, P3) == 0
    # two equal heights in a diagonal position
    assert face_weight(a, d, b, a, 0.3, P3) == 0


def test_face_weight_identity_point():
    for p in (P2, P3):
        a = _base(p)
        d = a.step_up(0)
        c = d.step_up(1)
        par = face_weight(c, d, a.step_up(0), a, 0.0, p)
        cross = face_weight(c, d, a.step_up(1), a, 0.0, p)
        assert par == 1
        assert abs(cross) == 0


def test_face_weight_parallel_same_step_is_one():
    a = _base(P3)
    d = a.step_up(1)
    c = d.step_up(1)
    assert face_weight(c, d, a.step_up(1), a, 0.41, P3) == 1


def test_face_ybe():
    rng = np.random.default_rng(7)
    for p in (P2, P3):
        a = _base(p)
        for _ in range(10):
            v1, v2, v3 = rng.uniform(0.05, 0.95, size=3)
            assert face_ybe_max(a, v1, v2, v3, p) < REL_TOL


# ---------------------------------------------------------------------------
# intertwining vectors

def test_intertwiner_component_matches_theta():
    a = _base(P2).step_up(0)
    v = 0.37
    t = intertwiner(v, a, 1, P2)
    n, r = 2, P2.r
    abar = a.abar(1) - (a.abar(0) + a.abar(1)) / n
    arg = (v - n * abar) / (n * r)
    tau = 1j * math.pi / (n * P2.eps * r)
    for j in range(n):
        assert t[j] == jacobi_theta(0.0, j / n, arg, tau)


def test_intertwiner_common_shift_invariance():
    a = _base(P3)
    shifted = a.shift((1, 1, 1))
    for mu in range(3):
        np.testing.assert_allclose(intertwiner(0.23, a, mu, P3),
                                   intertwiner(0.23, shifted, mu, P3),
                                   rtol=1e-13)


def test_dual_inversion_both_identities():
    rng = np.random.default_rng(11)
    for p in (P2, P3):
        for _ in range(5):
            v = rng.uniform(0.05, 0.95)
            a = _base(p).step_up(rng.integers(p.n))
            assert dual_inversion_residual(v, a, p) < 1e-10
            assert dual_inversion_residual(v, a, p, primed=True) < 1e-10


def test_dual_intertwiner_row_contracts():
    a = _base(P2)
    v = 0.44
    ts = dual_intertwiner(v, a, 0, P2)
    t0 = intertwiner(v, a, 0, P2)
    t1 = intertwiner(v, a, 1, P2)
    assert abs(ts @ t0 - 1) < 1e-12
    assert abs(ts @ t1) < 1e-12


def test_intertwiner_prime_scaling():
    a = _base(P2)
    tp = intertwiner_prime(0.52, a, 1, P2)
    tr = intertwiner(0.52, a, 1, primed_params(P2))
    ratio = tp / tr
    assert np.max(np.abs(ratio - ratio[0])) < 1e-12 * abs(ratio[0])


def test_singular_height_guard():
    # coincident traceless heights make the t-matrix rank deficient
    degenerate = HeightState((0, 1))
    with pytest.raises(SingularHeight):
        dual_intertwiner_matrix(0.3, degenerate, P2)


# ---------------------------------------------------------------------------
# the solved R-matrix

def test_R_charge_and_shift():
    for p, v in ((P2, 0.32), (P3, 0.37)):
        rt = build_R(v, p)
        scale = float(np.max(np.abs(rt.entries)))
        assert rt.charge_violation() < 1e-12 * scale
        assert rt.shift_violation() < 1e-12 * scale


def test_R_eight_vertex_structure():
    rt = build_R(0.32, P2)
    scale = float(np.max(np.abs(rt.entries)))
    nonzero = int(np.sum(np.abs(rt.entries) > 1e-10 * scale))
    assert nonzero == 8


def test_R_base_and_v2_independence():
    for p, v in ((P2, 0.32), (P3, 0.37)):
        rt = build_R(v, p)
        scale = float(np.max(np.abs(rt.entries)))
        alt = _base(p).step_up(0).step_up(p.n - 1)
        rt_b = build_R(v, p, base=alt)
        assert np.max(np.abs(rt_b.entries - rt.entries)) < REL_TOL * scale
        rt_v = build_R(v, p, v2=0.41)
        assert np.max(np.abs(rt_v.entries - rt.entries)) < REL_TOL * scale


def test_exchange_relation_away_from_construction_height():
    rng = np.random.default_rng(3)
    for p in (P2, P3):
        for _ in range(5):
            v1, v2 = rng.uniform(0.05, 0.95, size=2)
            rt = build_R(v1 - v2, p)
            scale = float(np.max(np.abs(rt.entries)))
            h = _base(p).step_up(rng.integers(p.n)).step_up(rng.integers(p.n))
            assert vertex_face_residual(v1, v2, h, p, rt=rt) < REL_TOL * scale


def test_dual_exchange_relation():
    for p in (P2, P3):
        a = _base(p)
        assert dual_vertex_face_residual(0.55, 0.23, a, p) < REL_TOL
        assert dual_vertex_face_residual(0.55, 0.23, a, p, primed=True) \
            < REL_TOL


def test_vertex_ybe():
    rng = np.random.default_rng(5)
    for p in (P2, P3):
        for _ in range(5):
            v1, v2 = rng.uniform(0.05, 0.95, size=2)
            assert vertex_ybe_residual(v1, v2, p) < REL_TOL


def test_S_is_minus_R_at_lower_level():
    for p in (P2, P3):
        st, w_prime = build_S_and_Wprime(0.29, p)
        rp = build_R(0.29, primed_params(p))
        np.testing.assert_allclose(st.entries, -rp.entries, atol=1e-13)
        a = _base(p)
        d = a.step_up(0)
        c = d.step_up(1)
        b = a.step_up(1)
        wp_val = w_prime(c, d, b, a, 0.29)
        direct = -face_weight(c, d, b, a, 0.29, primed_params(p))
        assert abs(wp_val - direct) < 1e-13


def test_rtensor_helpers():
    ent = np.zeros((2, 2, 2, 2), dtype=complex)
    ent[0, 1, 1, 0] = 1.0
    rt = RTensor(ent)
    assert rt.n == 2
    assert rt.charge_violation() == 0
    assert rt.shift_violation() == 1.0


# ---------------------------------------------------------------------------
# tail blocks

def test_L_block_nonadmissible_zero():
    a = _base(P2)
    far = a.shift((2, 0))
    assert L_block(0.1, a, a.step_down(0), a, far, P2) == 0


def test_L_block_diagonal_is_delta():
    a = _base(P2)
    a1 = a.step_down(0)
    assert abs(L_block(0.35, a, a1, a, a1, P2) - 1) < 1e-12
    # same in-height, different steps: exact zero of the inverse pair
    a1_other = a.step_down(1)
    assert abs(L_block(0.35, a, a1_other, a, a1, P2)) < 1e-12


def test_L_block_matches_mu_sum():
    a = _base(P2)
    ap = a.step_up(1)
    a1 = a.step_down(0)
    ap1 = ap.step_down(1)
    u = 0.27
    direct = sum(dual_intertwiner(-u, a, nu, P2)[j]
                 * intertwiner(-u, ap, mup, P2)[j]
                 for j in range(2)
                 for nu in [a.step_from(a1)]
                 for mup in [ap.step_from(ap1)])
    assert abs(L_block(u, ap, ap1, a, a1, P2) - direct) < 1e-12


def test_tail_diagonal_truncation():
    xi = HeightState((2, 1))
    path = ground_path(xi, 0, 20)
    val = tail_truncated(0.1, path, path, 12, P2)
    assert abs(val - 1) < 1e-6
    val16 = tail_truncated(0.1, path, path, 16, P2)
    assert abs(val16 - val) < P2.x ** 24 * 10


def test_tail_mismatch_guard():
    xi = HeightState((2, 1))
    path = ground_path(xi, 0, 20)
    other = ground_path(HeightState((2, 0)), 1, 20)
    with pytest.raises(TailMismatch):
        tail_truncated(0.1, other, path, 12, P2)
    with pytest.raises(TailMismatch):
        tail_truncated(0.1, path, path, 25, P2)


def test_tail_offdiagonal_vanishes():
    # equal starting height, different boundary labels: the first block
    # where the paths part is an exact zero of the dual pairing
    pi_in = ground_path(HeightState((2, 1)), 0, 14)
    pi_out = ground_path(HeightState((2, 0)), 1, 14)
    assert pi_in[0] == pi_out[0]
    cache = {}
    prod = 1.0 + 0j
    for j in range(12):
        prod *= L_block(0.1, pi_out[j], pi_out[j + 1],
                        pi_in[j], pi_in[j + 1], P2, _cache=cache)
    assert abs(prod) < 1e-12
