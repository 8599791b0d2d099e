import cmath
import math

import numpy as np
import pytest

from ebff.errors import AnnulusEmpty, NegativeInput, PoleHit
from ebff.formfactor import (ContourSpec, F2_sigma_x, F2_sigma_z, F_face_2m,
                             FF2Params, FFValue, X_m, Z_m, consistency_rhs,
                             contour_monodromy, gathered_phase,
                             selection_rule_scan, theta_weight,
                             vertex_face_consistency, zero_mode_sum_check)
from ebff.params import EllipticParams
from ebff.qseries import (BRACE, DBL_BRACE, DBL_SQUARE, ONE, PRIME, SQUARE,
                          bracket, jacobi_theta)

PARAMS = EllipticParams(2, 3.3, 0.32)
POINT = dict(u0=0.1, u=0.55, l=0.3, i=1)
PAIR = (0.2, 0.62)
QUAD = (0.13, 0.41, 0.52, 0.78)


def _p(m=1, **over):
    kw = dict(POINT)
    kw.update(over)
    return FF2Params(PARAMS, kw["u0"], kw["u"], kw["l"], kw["i"],
                     kw.get("u_list", PAIR if m == 1 else QUAD))


def test_ff2params_validation():
    with pytest.raises(NegativeInput):
        FF2Params(EllipticParams(3, 3.3, 0.32), 0.1, 0.5, u_list=PAIR)
    with pytest.raises(NegativeInput):
        FF2Params(PARAMS, 0.1, 0.5, u_list=(0.2, 0.3, 0.4))
    with pytest.raises(NegativeInput):
        FF2Params(PARAMS, 0.1, 0.5, i=2, u_list=PAIR)
    with pytest.raises(NegativeInput):
        FFValue(1.0 + 0j, quad_error=-1e-3)
    # annulus degenerate when the rapidity spread reaches 1
    with pytest.raises(AnnulusEmpty):
        FF2Params(PARAMS, 0.1, 0.5, u_list=(0.0, 0.2, 0.4, 1.1))


def test_zm_structure():
    args = (0.3, 0.55, 0.1, PAIR, ())
    t0 = Z_m(0, *args, PARAMS)
    t1 = Z_m(1, *args, PARAMS)
    # only the brace term flips with i
    A = 0.3 - 0.1 + 0.5 * sum(PAIR)
    B = 0.55 - 0.5 * sum(PAIR)
    sq = (bracket(A, PARAMS, SQUARE, PRIME) * bracket(B, PARAMS, SQUARE, ONE))
    br = (bracket(A, PARAMS, BRACE, PRIME) * bracket(B, PARAMS, BRACE, ONE))
    assert abs(t0 - (sq - br)) < 1e-12 * abs(t0)
    assert abs(t1 - (sq + br)) < 1e-12 * abs(t1)


def test_zm_label_shift_swaps_sector():
    # [A + (r-1)]' = -[A]' while {A + (r-1)}' = {A}', so shifting l by r-1
    # maps the i-sector combination to minus the flipped-sector one
    r = PARAMS.r
    for i in (0, 1):
        a = Z_m(i, 0.3 + (r - 1.0), 0.55, 0.1, PAIR, (), PARAMS)
        b = Z_m(1 - i, 0.3, 0.55, 0.1, PAIR, (), PARAMS)
        assert abs(a + b) < 1e-12 * abs(a)


def test_xm_family_pairing():
    args = (0.3, 0.55, 0.1, PAIR, ())
    A = 0.3 - 0.1 + 0.5 * sum(PAIR)
    B = 0.55 - 0.5 * sum(PAIR)
    dsq = (bracket(A, PARAMS, DBL_SQUARE, PRIME)
           * bracket(B, PARAMS, DBL_BRACE, ONE))
    dbr = (bracket(A, PARAMS, DBL_BRACE, PRIME)
           * bracket(B, PARAMS, DBL_SQUARE, ONE))
    assert abs(X_m(0, *args, PARAMS) - (dsq - dbr)) < 1e-12 * abs(dsq)
    assert abs(X_m(1, *args, PARAMS) - (dsq + dbr)) < 1e-12 * abs(dsq)


def test_zero_mode_sum_residual():
    pr = EllipticParams(2, 3.0, 0.4)
    for i in (0, 1):
        res = zero_mode_sum_check(i, 0.3, 0.55, 0.1, PAIR, (), 12, pr)
        assert res < 1e-10
    # m = 2 with one integration variable held at a fixed point
    res = zero_mode_sum_check(0, 0.7, 0.55, 0.1, QUAD, (0.5,), 12, pr)
    assert res < 1e-10


def test_zero_mode_sum_random_draws():
    pr = EllipticParams(2, 3.0, 0.4)
    rng = np.random.default_rng(11)
    for _ in range(20):
        i = int(rng.integers(0, 2))
        l = float(rng.uniform(-1, 1))
        u = float(rng.uniform(0.2, 0.8))
        u0 = float(rng.uniform(-0.3, 0.3))
        m = int(rng.integers(1, 3))
        ul = tuple(rng.uniform(0.1, 0.9, size=2 * m))
        vl = tuple(rng.uniform(0.2, 0.8, size=m - 1))
        assert zero_mode_sum_check(i, l, u, u0, ul, vl, 12, pr) < 1e-10


def test_f2_structural_zeros():
    p = _p()
    assert F2_sigma_z(*PAIR, +1, +1, 0, p).value == 0.0
    assert F2_sigma_z(*PAIR, -1, -1, 1, p).value == 0.0
    assert F2_sigma_x(*PAIR, +1, -1, 0, p).value == 0.0
    assert F2_sigma_x(*PAIR, -1, +1, 1, p).value == 0.0


def test_f2_nu_parity_cancellation():
    # the nu1-odd square-bracket term cancels in F_{+-} + F_{-+}
    p = _p()
    s = (F2_sigma_z(*PAIR, +1, -1, 0, p).value
         + F2_sigma_z(*PAIR, -1, +1, 0, p).value)
    d = (F2_sigma_z(*PAIR, +1, -1, 0, p).value
         - F2_sigma_z(*PAIR, -1, +1, 0, p).value)
    pr = p.params
    half = 0.5 * sum(PAIR)
    darg = 0.5 * (PAIR[1] - PAIR[0] - 1.0)
    ratio_brace = (bracket(p.u - half, pr, BRACE, ONE)
                   / bracket(darg, pr, BRACE, PRIME))
    ratio_sq = (bracket(p.u - half, pr, SQUARE, ONE)
                / bracket(darg, pr, SQUARE, PRIME))
    assert abs(s / d - (-1.0) * ratio_brace / ratio_sq) < 1e-10 * abs(s / d)


def test_f2_sector_flip():
    p0, p1 = _p(i=0), _p(i=1)
    a0 = F2_sigma_x(*PAIR, +1, +1, 0, p0).value
    a1 = F2_sigma_x(*PAIR, +1, +1, 1, p1).value
    # i enters only through (-1)^{1-i}; sum isolates the nu1-term
    p = _p()
    pr = p.params
    half = 0.5 * sum(PAIR)
    darg = 0.5 * (PAIR[1] - PAIR[0] - 1.0)
    t_nu = (bracket(p.u - half, pr, DBL_BRACE, ONE)
            / bracket(darg, pr, DBL_SQUARE, PRIME))
    t_i = (bracket(p.u - half, pr, DBL_SQUARE, ONE)
           / bracket(darg, pr, DBL_BRACE, PRIME))
    assert abs((a0 + a1) / (a1 - a0) - t_nu / t_i) < 1e-10 * abs(t_nu / t_i)


def test_f2_pole_on_primed_bracket_zero():
    p = _p()
    with pytest.raises(PoleHit):
        F2_sigma_z(0.2, 1.2, +1, -1, 0, p)  # (u2-u1-1)/2 = 0


def test_f2_homogeneity_shift():
    # a common shift of u0, u and the rapidities changes the value only
    # through the displayed explicit powers of z and x^{-1}z
    p = _p()
    c = 0.17
    r = PARAMS.r
    shifted = FF2Params(PARAMS, p.u0 + c, p.u + c, p.l, p.i,
                        tuple(uj + c for uj in PAIR))
    a = F2_sigma_z(*PAIR, +1, -1, 1, p).value
    b = F2_sigma_z(PAIR[0] + c, PAIR[1] + c, +1, -1, 1, shifted).value
    expo = 2.0 * c * (r / (2.0 * (r - 1.0)) - 2.0 / (r - 1.0)
                      - 2.0 + 2.0 / r)
    assert abs(b / a - PARAMS.xp(expo)) < 1e-10


def test_theta_weight_routing():
    p = _p()
    r = PARAMS.r
    tau = 1j * math.pi / (2.0 * PARAMS.eps * (r - 1.0))
    arg = (PAIR[1] - p.u0 + 0.5 + p.l - 2.0 + 1.0) / (2.0 * (r - 1.0))
    assert abs(theta_weight(+1, 2, p.l, p)
               - jacobi_theta(0.0, 0.0, arg, tau)) < 1e-14
    assert abs(theta_weight(-1, 2, p.l, p)
               - jacobi_theta(0.0, 0.5, arg, tau)) < 1e-14


def test_m1_face_value_matches_theta_side_shape():
    # m = 1: no integral; face and theta dressings differ per j by the
    # f' factor, the x-exponent and branch phases only
    p = _p()
    face = F_face_2m(p).value
    theta_side = consistency_rhs(p.l, p)
    assert abs(face) > 0 and abs(theta_side) > 0
    for l in (0.15, 0.7):
        q = _p(l=l)
        r1 = F_face_2m(q).value / consistency_rhs(l, q)
        r0 = face / theta_side
        assert abs(r1 - r0) < 1e-10 * abs(r0)


def test_vertex_face_consistency_m1():
    p = _p()
    rep = vertex_face_consistency(1, p, [0.15, 0.55, 0.95, 1.35])
    assert rep["spread"] < 1e-6
    assert rep["extraction_residual"] < 1e-6
    assert abs(rep["phase_modulus"] - 1.0) < 1e-8
    assert rep["phase_error"] < 1e-8
    rep = vertex_face_consistency(1, p, [0.15, 0.55, 0.95, 1.35], op="sx")
    assert rep["spread"] < 1e-6
    assert rep["extraction_residual"] < 1e-6
    assert abs(rep["phase_modulus"] - 1.0) < 1e-8
    assert rep["phase_error"] < 1e-8


def test_fitted_scalar_constant_over_rapidity_grid():
    # the closed-vs-theta scalar absorbs beta_1 and C^{(z)} and must not
    # move across rapidities
    lams = []
    for u1 in np.linspace(0.15, 0.45, 3):
        for u2 in np.linspace(0.5, 0.8, 3):
            p = _p(u_list=(float(u1), float(u2)))
            rep = vertex_face_consistency(1, p, [0.15, 0.95])
            lams.append(rep["lambda"])
    lams = np.array(lams)
    assert np.max(np.abs(lams / lams[0] - 1.0)) < 1e-6


def test_selection_rules_m1():
    p = _p()
    rep = selection_rule_scan("sz", 1, p)
    assert rep["max_forbidden_ratio"] == 0.0
    assert set(rep["forbidden"]) == {(+1, +1), (-1, -1)}
    rep = selection_rule_scan("sx", 1, p)
    assert rep["max_forbidden_ratio"] == 0.0
    assert set(rep["forbidden"]) == {(+1, -1), (-1, +1)}


def test_contour_monodromy_matches_twist():
    p = _p(m=2, u_list=QUAD)
    got = contour_monodromy(p, ContourSpec(N=64))
    want = cmath.exp(-2j * math.pi * (p.m - 1) / (PARAMS.r - 1.0))
    assert abs(got - want) < 1e-10
    assert abs(gathered_phase(1, PARAMS.r)
               - cmath.exp(-3j * math.pi * PARAMS.r
                           / (2.0 * (PARAMS.r - 1.0)))) < 1e-15


def test_m2_radius_independence():
    p = _p(m=2, u_list=QUAD)
    base = F_face_2m(p, ContourSpec(N=128))
    from ebff.formfactor import _annulus_bounds
    inner, outer = _annulus_bounds(p)
    for frac in (0.3, 0.7):
        R = inner * (outer / inner) ** frac
        v = F_face_2m(p, ContourSpec(N=128, radius=R))
        assert abs(v.value - base.value) < 1e-8 * abs(base.value)


def test_m2_quadrature_convergence():
    p = _p(m=2, u_list=QUAD)
    a = F_face_2m(p, ContourSpec(N=128))
    b = F_face_2m(p, ContourSpec(N=256))
    assert abs(a.value - b.value) < 1e-8 * abs(b.value)
    assert a.quad_error >= 0.0


def test_m2_radius_outside_annulus_rejected():
    p = _p(m=2, u_list=QUAD)
    with pytest.raises(AnnulusEmpty):
        F_face_2m(p, ContourSpec(N=64, radius=0.5))


def test_selection_rules_m2():
    p = _p(m=2, u_list=QUAD)
    for opname, forb in (("sz", 1), ("sx", 0)):
        rep = selection_rule_scan(opname, 2, p, c=ContourSpec(N=128))
        assert rep["max_forbidden_ratio"] < 1e-8
        for nu in rep["forbidden"]:
            assert (sum(nu) // 2) % 2 != (0 if opname == "sz" else 1)
