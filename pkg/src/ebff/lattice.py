"""Face weights, intertwining vectors, and the vertex R-matrix.

The face model lives on the height lattice of heights.py; its Boltzmann
weights W[c d; b a | v] are bracket ratios in [v] at level r.  Intertwining
vectors t(v)^a_{a - eps-bar_mu} (theta functions with characteristics
(0, j/n) at the n-fold tau) convert face weights into a vertex R-matrix
through the exchange relation

    R(v1-v2) t(v1)^d_a (x) t(v2)^c_d
        = sum_b t(v1)^c_b (x) t(v2)^b_a W[c d; b a | v1-v2],

and dual covectors t* are built by inverting the n x n matrix of primal
vectors.  Entries of W and t are gauge; the module pins one definite gauge
(the sign/characteristic constants below) chosen so that the face and
vertex Yang-Baxter equations, both dual-inversion identities, and the
exchange relation at independent heights all hold numerically.  The level
r-1 copies S(v) = -R(v)|_{r -> r-1}, W' = -W|_{r -> r-1} and the scaled
intertwiners t'(v) = f'(v) t(v; r-1) reuse the same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularHeight, TailMismatch
from .heights import HeightState
from .kernels import _checked_ratio, f_prime
from .params import DEFAULT_POLICY, EllipticParams, TruncationPolicy
from .qseries import PLAIN, SQUARE, bracket, jacobi_theta

# Gauge constants pinned by the relation suite (any choice passing all
# residual checks is equivalent; this one does at every n, not just n=2:
# the crossing-weight shift must be [a-1], and the face-YBE couples the
# parallel-weight sign to the denominator sign).
W_SIGN_B = -1.0      # [a_mn + s v] in the parallel (b = d) weight
W_SIGN_C = 1.0       # overall sign of the crossing (b != d) weight
W_SHIFT_C = -1.0     # [a_mn + s] in the crossing weight numerator
W_SIGN_DEN = 1.0     # [1 + s v] in the common denominator
T_HEIGHT_SIGN = -1.0 # sign of n abar_mu inside the theta argument
T_TAU_SCALE = 1      # tau = scale * i pi / (n eps r)

_COND_LIMIT = 1e12


def primed_params(params: EllipticParams) -> EllipticParams:
    """Same (n, x) at restriction level r-1."""
    return EllipticParams(params.n, params.r - 1.0, params.x)


def _br(v, params, policy):
    return bracket(v, params, SQUARE, PLAIN, policy)


def face_weight(c: HeightState, d: HeightState, b: HeightState,
                a: HeightState, v, params: EllipticParams,
                policy: TruncationPolicy = DEFAULT_POLICY,
                signs=None) -> complex:
    """W[c d; b a | v]; zero unless (a,b), (a,d), (b,c), (d,c) admissible."""
    mu_b = b.step_from(a)
    mu_d = d.step_from(a)
    nu_cb = c.step_from(b)
    nu_cd = c.step_from(d)
    if None in (mu_b, mu_d, nu_cb, nu_cd):
        return 0.0 + 0j
    s_b, s_c, s_cs, s_den = signs if signs is not None else (
        W_SIGN_B, W_SIGN_C, W_SHIFT_C, W_SIGN_DEN)
    if mu_b == mu_d:
        if nu_cb == mu_b:
            return 1.0 + 0j
        amn = a.a(mu_b, nu_cb)
        num = [("[a+sv]", _br(amn + s_b * v, params, policy)),
               ("[1]", _br(1.0, params, policy))]
        den = [("[a]", _br(amn, params, policy)),
               ("[1+sv]", _br(1.0 + s_den * v, params, policy))]
        return _checked_ratio(num, den)
    if nu_cb != mu_d or nu_cd != mu_b:
        return 0.0 + 0j
    amn = a.a(mu_b, mu_d)
    num = [("[v]", s_c * _br(v, params, policy)),
           ("[a+s]", _br(amn + s_cs, params, policy))]
    den = [("[1+sv]", _br(1.0 + s_den * v, params, policy)),
           ("[a]", _br(amn, params, policy))]
    return _checked_ratio(num, den)


def face_ybe_residual(a, d, h, e, i, f, v1, v2, v3,
                      params: EllipticParams,
                      policy: TruncationPolicy = DEFAULT_POLICY,
                      signs=None) -> float:
    """|star-triangle defect| for one external hexagon a; d,h; e,i; f."""
    n = params.n
    lhs = 0.0 + 0j
    for kap in range(n):
        g = d.step_up(kap)
        lhs += (face_weight(f, e, g, d, v2 - v3, params, policy, signs)
                * face_weight(g, d, h, a, v1 - v3, params, policy, signs)
                * face_weight(f, g, i, h, v1 - v2, params, policy, signs))
    rhs = 0.0 + 0j
    for kap in range(n):
        b = a.step_up(kap)
        rhs += (face_weight(e, d, b, a, v1 - v2, params, policy, signs)
                * face_weight(f, e, i, b, v1 - v3, params, policy, signs)
                * face_weight(i, b, h, a, v2 - v3, params, policy, signs))
    return abs(lhs - rhs)


def face_ybe_max(a: HeightState, v1, v2, v3, params: EllipticParams,
                 policy: TruncationPolicy = DEFAULT_POLICY,
                 signs=None) -> float:
    """Max star-triangle defect over every external hexagon based at a."""
    n = params.n
    worst = 0.0
    for mu in range(n):
        d = a.step_up(mu)
        for kap in range(n):
            h = a.step_up(kap)
            for nu in range(n):
                e = d.step_up(nu)
                for lam in range(n):
                    i_h = h.step_up(lam)
                    for rho_ in range(n):
                        f = e.step_up(rho_)
                        worst = max(worst, face_ybe_residual(
                            a, d, h, e, i_h, f, v1, v2, v3,
                            params, policy, signs))
    return worst


def intertwiner(v, a: HeightState, mu: int, params: EllipticParams,
                policy: TruncationPolicy = DEFAULT_POLICY,
                sign=None, tau_scale=None) -> np.ndarray:
    """Components t_j(v)^a_{a - eps-bar_mu}, j = 0..n-1.

    The height enters through the traceless part of abar, so the result
    is independent of the common offset shift, matching the height-gauge
    convention of heights.py.
    """
    n, r = params.n, params.r
    s = T_HEIGHT_SIGN if sign is None else sign
    scale = T_TAU_SCALE if tau_scale is None else tau_scale
    tau = scale * 1j * math.pi / (n * params.eps * r)
    abar = a.abar(mu) - sum(a.abar(k) for k in range(n)) / n
    arg = (v + s * n * abar) / (n * r)
    return np.array([jacobi_theta(0.0, j / n, arg, tau, policy)
                     for j in range(n)])


def intertwiner_matrix(v, a: HeightState, params: EllipticParams,
                       policy: TruncationPolicy = DEFAULT_POLICY,
                       sign=None, tau_scale=None) -> np.ndarray:
    """Columns mu of t(v)^a_{a - eps-bar_mu}."""
    cols = [intertwiner(v, a, mu, params, policy, sign, tau_scale)
            for mu in range(params.n)]
    return np.array(cols).T


def dual_intertwiner_matrix(v, a: HeightState, params: EllipticParams,
                            policy: TruncationPolicy = DEFAULT_POLICY,
                            sign=None, tau_scale=None) -> np.ndarray:
    """Rows nu of t*_j(v)^{a - eps-bar_nu}_a, i.e. the inverse matrix."""
    t = intertwiner_matrix(v, a, params, policy, sign, tau_scale)
    cond = np.linalg.cond(t)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularHeight(
            f"intertwiner matrix at height {a.offsets} has condition "
            f"{cond:.3e}")
    return np.linalg.inv(t)


def dual_intertwiner(v, a: HeightState, nu: int, params: EllipticParams,
                     policy: TruncationPolicy = DEFAULT_POLICY,
                     sign=None, tau_scale=None) -> np.ndarray:
    return dual_intertwiner_matrix(v, a, params, policy, sign, tau_scale)[nu]


def intertwiner_prime(v, a: HeightState, mu: int, params: EllipticParams,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """t'(v) = f'(v) t(v; r-1)."""
    return f_prime(v, params, policy) * intertwiner(
        v, a, mu, primed_params(params), policy)


def dual_intertwiner_prime(v, a: HeightState, nu: int,
                           params: EllipticParams,
                           policy: TruncationPolicy = DEFAULT_POLICY
                           ) -> np.ndarray:
    """Row nu of the inverse of the t' matrix, = t*(v; r-1)/f'(v)."""
    return dual_intertwiner(v, a, nu, primed_params(params),
                            policy) / f_prime(v, params, policy)


@dataclass(frozen=True)
class RTensor:
    """Vertex weights R^{ik}_{jl} stored as entries[i, k, j, l]."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def matrix(self) -> np.ndarray:
        n = self.n
        return self.entries.reshape(n * n, n * n)

    def charge_violation(self) -> float:
        """Largest entry with i + k != j + l mod n."""
        n = self.n
        worst = 0.0
        for i in range(n):
            for k in range(n):
                for j in range(n):
                    for l in range(n):
                        if (i + k - j - l) % n != 0:
                            worst = max(worst, abs(self.entries[i, k, j, l]))
        return worst

    def shift_violation(self) -> float:
        """Max |R^{i+p,k+p}_{j+p,l+p} - R^{ik}_{jl}| over entries and p."""
        n = self.n
        worst = 0.0
        for p in range(1, n):
            rolled = self.entries
            for axis in range(4):
                rolled = np.roll(rolled, p, axis=axis)
            worst = max(worst, float(np.max(np.abs(rolled - self.entries))))
        return worst


_DEFAULT_BASE_OFFSETS = {2: (3, 0), 3: (5, 2, 0)}


def _default_base(n: int) -> HeightState:
    off = _DEFAULT_BASE_OFFSETS.get(n)
    if off is None:
        off = tuple((n - mu) * (n - mu + 1) // 2 for mu in range(n))
    return HeightState(off)


def build_R(v, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY,
            base: HeightState = None, v2=0.23,
            sign=None, tau_scale=None, signs=None) -> RTensor:
    """Solve the exchange relation for R(v) at one (generic) base height.

    The result is independent of base and v2; charge conservation and
    shift symmetry are properties, not inputs.
    """
    n = params.n
    a = _default_base(n) if base is None else a_check(base, n)
    v1 = v + v2
    cols = np.empty((n * n, n * n), dtype=complex)
    rhs = np.empty((n * n, n * n), dtype=complex)
    for mu in range(n):
        d = a.step_up(mu)
        t1_da = intertwiner(v1, d, mu, params, policy, sign, tau_scale)
        for nu in range(n):
            c = d.step_up(nu)
            t2_cd = intertwiner(v2, c, nu, params, policy, sign, tau_scale)
            idx = mu * n + nu
            cols[:, idx] = np.kron(t1_da, t2_cd)
            acc = np.zeros(n * n, dtype=complex)
            for kap in range(n):
                b = a.step_up(kap)
                lam = c.step_from(b)
                if lam is None:
                    continue
                w = face_weight(c, d, b, a, v, params, policy, signs)
                if w == 0:
                    continue
                t1_cb = intertwiner(v1, c, lam, params, policy, sign,
                                    tau_scale)
                t2_ba = intertwiner(v2, b, kap, params, policy, sign,
                                    tau_scale)
                acc += w * np.kron(t1_cb, t2_ba)
            rhs[:, idx] = acc
    cond = np.linalg.cond(cols)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularHeight(
            f"exchange-relation columns at height {a.offsets} have "
            f"condition {cond:.3e}")
    rmat = rhs @ np.linalg.inv(cols)
    return RTensor(rmat.reshape(n, n, n, n))


def a_check(base: HeightState, n: int) -> HeightState:
    if base.n != n:
        raise ValueError(f"height has rank {base.n}, params have n={n}")
    return base


def build_S_and_Wprime(v, params: EllipticParams,
                       policy: TruncationPolicy = DEFAULT_POLICY):
    """S(v) = -R(v)|_{r->r-1} and the matching face weight W' = -W|_{r->r-1}."""
    pp = primed_params(params)
    r_prime = build_R(v, pp, policy)
    s_tensor = RTensor(-r_prime.entries)

    def w_prime(c, d, b, a, vv, policy=policy, signs=None):
        return -face_weight(c, d, b, a, vv, pp, policy, signs)

    return s_tensor, w_prime


def vertex_face_residual(v1, v2, a: HeightState, params: EllipticParams,
                         policy: TruncationPolicy = DEFAULT_POLICY,
                         rt: RTensor = None) -> float:
    """Defect of the exchange relation at height a (primal form)."""
    n = params.n
    if rt is None:
        rt = build_R(v1 - v2, params, policy)
    rmat = rt.matrix()
    worst = 0.0
    for mu in range(n):
        d = a.step_up(mu)
        t1_da = intertwiner(v1, d, mu, params, policy)
        for nu in range(n):
            c = d.step_up(nu)
            t2_cd = intertwiner(v2, c, nu, params, policy)
            lhs = rmat @ np.kron(t1_da, t2_cd)
            acc = np.zeros(n * n, dtype=complex)
            for kap in range(n):
                b = a.step_up(kap)
                lam = c.step_from(b)
                if lam is None:
                    continue
                w = face_weight(c, d, b, a, v1 - v2, params, policy)
                if w == 0:
                    continue
                acc += w * np.kron(intertwiner(v1, c, lam, params, policy),
                                   intertwiner(v2, b, kap, params, policy))
            worst = max(worst, float(np.max(np.abs(lhs - acc))))
    return worst


def dual_vertex_face_residual(v1, v2, a: HeightState,
                              params: EllipticParams,
                              policy: TruncationPolicy = DEFAULT_POLICY,
                              primed: bool = False) -> float:
    """Defect of the covector exchange relation

        t*(v1)^b_c (x) t*(v2)^a_b R(v1-v2)
            = sum_d W[c d; b a | v1-v2] t*(v1)^a_d (x) t*(v2)^d_c,

    with (R, W, t*) -> (S, W', t'*) when primed.
    """
    n = params.n
    wp = params
    if primed:
        rt, wfun = build_S_and_Wprime(v1 - v2, params, policy)

        def tstar(v, h, nu):
            return dual_intertwiner_prime(v, h, nu, params, policy)
    else:
        rt = build_R(v1 - v2, params, policy)
        wfun = None

        def tstar(v, h, nu):
            return dual_intertwiner(v, h, nu, params, policy)
    rmat = rt.matrix()
    worst = 0.0
    for kap in range(n):
        b = a.step_up(kap)
        ts2_ab = tstar(v2, b, kap)
        for lam in range(n):
            c = b.step_up(lam)
            ts1_bc = tstar(v1, c, lam)
            lhs = np.kron(ts1_bc, ts2_ab) @ rmat
            acc = np.zeros(n * n, dtype=complex)
            for mu in range(n):
                d = a.step_up(mu)
                nu = c.step_from(d)
                if nu is None:
                    continue
                if primed:
                    w = wfun(c, d, b, a, v1 - v2)
                else:
                    w = face_weight(c, d, b, a, v1 - v2, params, policy)
                if w == 0:
                    continue
                acc += w * np.kron(tstar(v1, d, mu), tstar(v2, c, nu))
            worst = max(worst, float(np.max(np.abs(lhs - acc))))
    return worst


def _one_site_embeddings(rt: RTensor):
    n = rt.n
    m = rt.entries
    eye = np.eye(n)
    r12 = np.einsum("ikjl,ab->ikajlb", m, eye).reshape(n ** 3, n ** 3)
    r13 = np.einsum("ikjl,ab->iakjbl", m, eye).reshape(n ** 3, n ** 3)
    r23 = np.einsum("ikjl,ab->aikbjl", m, eye).reshape(n ** 3, n ** 3)
    return r12, r13, r23


def vertex_ybe_residual(v1, v2, params: EllipticParams,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Max-norm defect of R12(v1-v2) R13(v1) R23(v2) = reversed order."""
    r12 = _one_site_embeddings(build_R(v1 - v2, params, policy))[0]
    r13 = _one_site_embeddings(build_R(v1, params, policy))[1]
    r23 = _one_site_embeddings(build_R(v2, params, policy))[2]
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return float(np.max(np.abs(lhs - rhs)))


def dual_inversion_residual(v, a: HeightState, params: EllipticParams,
                            policy: TruncationPolicy = DEFAULT_POLICY,
                            primed: bool = False) -> float:
    """Defect of both biorthogonality identities at (v, a)."""
    if primed:
        t = np.array([intertwiner_prime(v, a, mu, params, policy)
                      for mu in range(params.n)]).T
        ts = np.array([dual_intertwiner_prime(v, a, nu, params, policy)
                       for nu in range(params.n)])
    else:
        t = intertwiner_matrix(v, a, params, policy)
        ts = dual_intertwiner_matrix(v, a, params, policy)
    eye = np.eye(params.n)
    return max(float(np.max(np.abs(ts @ t - eye))),
               float(np.max(np.abs(t @ ts - eye))))


def L_block(u, a0p: HeightState, a1p: HeightState,
            a0: HeightState, a1: HeightState, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY,
            primed: bool = False, _cache=None) -> complex:
    """L[a'0 a'1; a0 a1 | u] = sum_j t*_j(-u)^{a1}_{a0} t_j(-u)^{a'0}_{a'1}.

    The primed variant evaluates at level r-1; the f' normalization of t'
    cancels between the dual and primal factors.
    """
    p = primed_params(params) if primed else params
    nu = a0.step_from(a1)
    nup = a0p.step_from(a1p)
    if nu is None or nup is None:
        return 0.0 + 0j
    if _cache is None:
        _cache = {}
    key = ("inv", a0.offsets)
    tinv = _cache.get(key)
    if tinv is None:
        tinv = dual_intertwiner_matrix(-u, a0, p, policy)
        _cache[key] = tinv
    key = ("t", a0p.offsets)
    t = _cache.get(key)
    if t is None:
        t = intertwiner_matrix(-u, a0p, p, policy)
        _cache[key] = t
    return complex(tinv[nu] @ t[:, nup])


def tail_truncated(u, path_out, path_in, J: int, params: EllipticParams,
                   policy: TruncationPolicy = DEFAULT_POLICY,
                   primed: bool = False) -> complex:
    """Pi_{j<J} L_block along two height paths (out = row, in = column).

    Paths are sequences of HeightState covering depths 0..J at least; they
    must agree from depth J on (shared ground-state tail).
    """
    depth = min(len(path_out), len(path_in))
    if depth < J + 1:
        raise TailMismatch(f"paths of depth {depth - 1} cannot be cut at "
                           f"J={J}")
    for j in range(J, depth):
        if path_out[j] != path_in[j]:
            raise TailMismatch(f"paths differ at depth {j} >= J={J}")
    cache = {}
    prod = 1.0 + 0j
    for j in range(J):
        prod *= L_block(u, path_out[j], path_out[j + 1],
                        path_in[j], path_in[j + 1], params, policy,
                        primed, cache)
    return prod
