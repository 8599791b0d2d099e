"""Scalar kernel functions entering commutation relations and form factors.

Double-nome products

    {z}  = (z; x^{2r},   x^{2n})_oo
    {z}' = (z; x^{2r-2}, x^{2n})_oo

build the symmetric-kernel ratios g_j, g*_j; rho_j uses nomes (x^2, x^{2n}).
The associated unitary factors r_j, r*_j, chi_j obey r(v) r(-v) = 1.
"""

from __future__ import annotations

import cmath
import math

from .errors import PoleHit
from .params import DEFAULT_POLICY, EllipticParams, TruncationPolicy
from .qseries import (BRACE, DBL_SQUARE, ONE, PLAIN, PRIME, SQUARE, bracket,
                      bracket_factorial, poch)

_POLE_EPS = 1e-13


def _checked_ratio(num_factors, den_factors):
    """Multiply num/den factor lists; raise PoleHit on a vanishing denominator."""
    num = 1.0 + 0j
    for _, val in num_factors:
        num *= val
    scale = abs(num) + 1.0
    den = 1.0 + 0j
    for name, val in den_factors:
        if abs(val) < _POLE_EPS * scale:
            raise PoleHit(name, val)
        den *= val
    return num / den


def dpoch(z, params: EllipticParams, prime: bool = False,
          policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """{z} or {z}': double-nome product over (x^{2r} or x^{2r-2}, x^{2n})."""
    x = params.x
    q1 = x ** (2.0 * params.r - 2.0) if prime else x ** (2.0 * params.r)
    return poch(z, (q1, x ** (2 * params.n)), policy)


def g_j(j: int, z, params: EllipticParams,
        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    x, n, r = params.x, params.n, params.r
    num = [("{x^(2n+2r-j-1)z}", dpoch(x ** (2 * n + 2 * r - j - 1) * z, params, False, policy)),
           ("{x^(j+1)z}", dpoch(x ** (j + 1) * z, params, False, policy))]
    den = [("{x^(2n-j+1)z}", dpoch(x ** (2 * n - j + 1) * z, params, False, policy)),
           ("{x^(2r+j-1)z}", dpoch(x ** (2 * r + j - 1) * z, params, False, policy))]
    return _checked_ratio(num, den)


def r_j(j: int, v, params: EllipticParams,
        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """r_j(v) = z^{((r-1)/r)((n-j)/n)} g_j(1/z) / g_j(z)."""
    n, r = params.n, params.r
    z = params.z_of(v)
    pref = params.zpow(v, ((r - 1.0) / r) * ((n - j) / n))
    return pref * g_j(j, 1.0 / z, params, policy) / g_j(j, z, params, policy)


def gstar_j(j: int, z, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    x, n, r = params.x, params.n, params.r
    num = [("{x^(2n+2r-j-1)z}'", dpoch(x ** (2 * n + 2 * r - j - 1) * z, params, True, policy)),
           ("{x^(j-1)z}'", dpoch(x ** (j - 1) * z, params, True, policy))]
    den = [("{x^(2n-j-1)z}'", dpoch(x ** (2 * n - j - 1) * z, params, True, policy)),
           ("{x^(2r+j-1)z}'", dpoch(x ** (2 * r + j - 1) * z, params, True, policy))]
    return _checked_ratio(num, den)


def rstar_j(j: int, v, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """r*_j(v) = z^{(r/(r-1))((n-j)/n)} g*_j(1/z) / g*_j(z)."""
    n, r = params.n, params.r
    z = params.z_of(v)
    pref = params.zpow(v, (r / (r - 1.0)) * ((n - j) / n))
    return pref * gstar_j(j, 1.0 / z, params, policy) / gstar_j(j, z, params, policy)


def rho_j(j: int, z, params: EllipticParams,
          policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    x, n = params.x, params.n
    nm = (x ** 2, x ** (2 * n))
    num = [("(x^(2j+1)z;..)", poch(x ** (2 * j + 1) * z, nm, policy)),
           ("(x^(2n-2j+1)z;..)", poch(x ** (2 * n - 2 * j + 1) * z, nm, policy))]
    den = [("(xz;..)", poch(x * z, nm, policy)),
           ("(x^(2n+1)z;..)", poch(x ** (2 * n + 1) * z, nm, policy))]
    return _checked_ratio(num, den)


def chi_j(j: int, v, params: EllipticParams,
          policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """chi_j(v) = (-z)^{-j(n-j)/n} rho_j(1/z) / rho_j(z); chi = chi_1.

    The constant phase of the (-z)^alpha prefactor is normalized away
    (plain z^alpha branch) so that chi_j(v) chi_j(-v) = 1 holds exactly;
    only this unitary convention is consumed downstream.
    """
    n = params.n
    z = params.z_of(v)
    pref = params.zpow(v, -j * (n - j) / n)
    return pref * rho_j(j, 1.0 / z, params, policy) / rho_j(j, z, params, policy)


# ---------------------------------------------------------------------------
# bracket-ratio commutation factors

def f_weight(v, w, params: EllipticParams,
             policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """f(v, w) = [v + 1/2 - w] / [v - 1/2]."""
    den = bracket(v - 0.5, params, SQUARE, PLAIN, policy)
    num = bracket(v + 0.5 - w, params, SQUARE, PLAIN, policy)
    return _checked_ratio([("[v+1/2-w]", num)], [("[v-1/2]", den)])


def h_weight(v, params: EllipticParams,
             policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """h(v) = [v - 1] / [v + 1]."""
    num = bracket(v - 1.0, params, SQUARE, PLAIN, policy)
    den = bracket(v + 1.0, params, SQUARE, PLAIN, policy)
    return _checked_ratio([("[v-1]", num)], [("[v+1]", den)])


def fstar_weight(v, w, params: EllipticParams,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """f*(v, w) = [v - 1/2 + w]' / [v + 1/2]'."""
    num = bracket(v - 0.5 + w, params, SQUARE, PRIME, policy)
    den = bracket(v + 0.5, params, SQUARE, PRIME, policy)
    return _checked_ratio([("[v-1/2+w]'", num)], [("[v+1/2]'", den)])


def hstar_weight(v, params: EllipticParams,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """h*(v) = [v + 1]' / [v - 1]'."""
    num = bracket(v + 1.0, params, SQUARE, PRIME, policy)
    den = bracket(v - 1.0, params, SQUARE, PRIME, policy)
    return _checked_ratio([("[v+1]'", num)], [("[v-1]'", den)])


# ---------------------------------------------------------------------------
# level-(r-1) dressing scalar and the two-particle kernel

def f_prime(v, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Scalar relating the two intertwiner normalizations at level r-1.

    The n-th root of -(x^{2r-2}; x^{2r-2})_oo takes the fixed branch
    (-A)^{1/n} = exp((ln A + i pi)/n) for A > 0.
    """
    x, n, r = params.x, params.n, params.r
    z = params.z_of(v)
    nm = (x ** (2 * n), x ** (2 * r - 2))
    expo = (-(complex(v) ** 2) / (n * (r - 1.0))
            - (r + n - 2.0) * complex(v) / (n * (r - 1.0))
            - (n - 1.0) * (3.0 * r + n - 5.0) / (6.0 * n * (r - 1.0)))
    a = poch(x ** (2 * r - 2), (x ** (2 * r - 2),), policy).real
    root = cmath.exp((math.log(a) + 1j * math.pi) / n)
    num = [("(x^2/z;..)", poch(x ** 2 / z, nm, policy)),
           ("(x^(2r+2n-2)z;..)", poch(x ** (2 * r + 2 * n - 2) * z, nm, policy))]
    den = [("(1/z;..)", poch(1.0 / z, nm, policy)),
           ("(x^(2r+2n-4)z;..)", poch(x ** (2 * r + 2 * n - 4) * z, nm, policy))]
    return params.xp(expo) / root * _checked_ratio(num, den)


def F_psipsi(z, params: EllipticParams,
             policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Two-particle kernel, symmetric under z -> x^4/z; triple nome (x^4, x^4, x^{2r-2})."""
    x, r = params.x, params.r
    nm = (x ** 4, x ** 4, x ** (2 * r - 2))
    num = [("(z;..)", poch(z, nm, policy)),
           ("(x^4/z;..)", poch(x ** 4 / z, nm, policy)),
           ("(x^(2r+2)z;..)", poch(x ** (2 * r + 2) * z, nm, policy)),
           ("(x^(2r+6)/z;..)", poch(x ** (2 * r + 6) / z, nm, policy))]
    den = [("(x^2 z;..)", poch(x ** 2 * z, nm, policy)),
           ("(x^6/z;..)", poch(x ** 6 / z, nm, policy)),
           ("(x^(2r)z;..)", poch(x ** (2 * r) * z, nm, policy)),
           ("(x^(2r+4)/z;..)", poch(x ** (2 * r + 4) / z, nm, policy))]
    return _checked_ratio(num, den)


def beta_m(m: int, u, params: EllipticParams, op: str = "sz",
           policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """2m-point normalization constant (n = 2 only).

    op = "sz" uses {0}; op = "sx" replaces it by [[0]].  u is the reference
    rapidity entering through (x^{-2} z)^{(r-1)/(2r)} with z = x^{2u}.
    """
    if params.n != 2:
        raise ValueError("beta_m is defined for n = 2")
    if m < 1:
        raise ValueError("need m >= 1")
    x, r = params.x, params.r
    nm3 = (x ** 4, x ** 4, x ** (2 * r - 2))
    c0 = bracket(0.0, params, DBL_SQUARE if op == "sx" else BRACE, PLAIN, policy)
    pref = (params.xp(-(r - 1.0) / (4.0 * r)) * c0
            * bracket_factorial(m - 1, params, policy)
            * params.xp((2.0 * complex(u) - 2.0) * (r - 1.0) / (2.0 * r)))
    num = (poch(x ** 2, (x ** 4,), policy) ** 2
           * poch(x ** 2, (x ** (2 * r),), policy)
           * poch(x ** (2 * r + 1), (x ** (2 * r - 2),), policy)
           * poch(x ** 2, (x ** 2,), policy) ** (m - 1)
           * poch(x ** (2 * r), (x ** (2 * r - 2),), policy) ** (m - 1)
           * poch(x ** 4, nm3, policy) ** m
           * poch(x ** (2 * r + 6), nm3, policy) ** m)
    den = (math.factorial(m - 1)
           * bracket(1.0, params, SQUARE, PRIME, policy) ** m
           * (1.0 / x - x)
           * g_j(1, x ** 2, params, policy)
           * poch(x ** (2 * r), (x ** (2 * r),), policy) ** 2
           * poch(x ** (2 * r + 1), (x ** (2 * r),), policy)
           * poch(x ** 6, nm3, policy) ** m
           * poch(x ** (2 * r + 4), nm3, policy) ** m)
    return pref * num / den
