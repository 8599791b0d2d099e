"""Multi-nome Pochhammer products, theta functions and elliptic brackets.

Conventions:

    (z; q_1,...,q_m)_oo = prod_{i_1,...,i_m >= 0} (1 - z q_1^{i_1} ... q_m^{i_m})
    Theta_q(z) = (z; q)_oo (q z^{-1}; q)_oo (q; q)_oo
               = sum_m q^{m(m-1)/2} (-z)^m
    theta[a;b](v; tau) = sum_m exp{pi i (m+a)[(m+a) tau + 2(v+b)]},  Im tau > 0

Bracket families, all built on Theta with nome x^{2 rho} where rho is the
level (r, r-1 or 1):

    [v]   = x^{v^2/rho - v} Theta(x^{2v})        odd, [v + rho] = -[v]
    {v}   = x^{v^2/rho - v} Theta(-x^{2v})       even, {v + rho} = {v}
    [[v]] = x^{v^2/rho} Theta(x^{2v + rho})      even
    {{v}} = x^{v^2/rho} Theta(-x^{2v + rho})     even
"""

from __future__ import annotations

import cmath
import math

from .errors import BadModulus, NomeOutOfRange, Overflow, ZeroArgument
from .params import DEFAULT_POLICY, EllipticParams, TruncationPolicy

SQUARE = "square"
BRACE = "brace"
DBL_SQUARE = "dbl_square"
DBL_BRACE = "dbl_brace"

PLAIN = "plain"
PRIME = "prime"
ONE = "one"


def poch(z, nomes, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Multi-nome infinite Pochhammer product (z; q_1,...,q_m)_oo.

    Enumerates arguments z q_1^{i_1} ... q_m^{i_m} down to |.| < tail_tol;
    every dropped factor then deviates from 1 by less than tail_tol.
    """
    if isinstance(nomes, (int, float, complex)):
        nomes = (nomes,)
    for q in nomes:
        if abs(q) >= 1.0:
            raise NomeOutOfRange(f"|q| = {abs(q):.6g} >= 1")
    cutoff = policy.tail_tol
    args = [complex(z)]
    if abs(args[0]) < cutoff:
        return 1.0 + 0j
    for q in nomes:
        new = []
        for a in args:
            t = a
            while abs(t) >= cutoff:
                new.append(t)
                t *= q
                if len(new) > policy.max_terms:
                    raise Overflow(f"poch exceeded {policy.max_terms} factors")
        args = new
    out = 1.0 + 0j
    for a in args:
        out *= (1.0 - a)
    return out


def theta_big(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Theta_q(z) via the triple product (z;q)(q/z;q)(q;q)."""
    z = complex(z)
    if z == 0:
        raise ZeroArgument("Theta_q needs z != 0")
    return (poch(z, (q,), policy)
            * poch(q / z, (q,), policy)
            * poch(q, (q,), policy))


def theta_big_series(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Theta_q(z) via the bilateral sum; independent route used as oracle."""
    z = complex(z)
    if z == 0:
        raise ZeroArgument("Theta_q needs z != 0")
    if abs(q) >= 1.0:
        raise NomeOutOfRange(f"|q| = {abs(q):.6g} >= 1")
    total = 1.0 + 0j  # m = 0 term
    for sign in (+1, -1):
        m = sign
        stall = 0
        while True:
            term = complex(q) ** (m * (m - 1) / 2.0) * (-z) ** m
            total += term
            if abs(term) < policy.tail_tol * max(1.0, abs(total)):
                stall += 1
                if stall >= 2:
                    break
            else:
                stall = 0
            m += sign
            if abs(m) > policy.max_terms:
                raise Overflow("theta_big_series did not converge")
    return total


def jacobi_theta(a, b, v, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """theta[a;b](v; tau) with rational characteristics a, b."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise BadModulus(f"Im tau = {tau.imag:.6g} <= 0")
    v = complex(v)
    total = 0.0 + 0j
    for sign in (+1, -1):
        m = 0 if sign > 0 else -1
        stall = 0
        while True:
            ma = m + a
            term = cmath.exp(1j * math.pi * ma * (ma * tau + 2.0 * (v + b)))
            total += term
            if abs(term) < policy.tail_tol * max(1.0, abs(total)):
                stall += 1
                if stall >= 2:
                    break
            else:
                stall = 0
            m += sign
            if abs(m) > policy.max_terms:
                raise Overflow("jacobi_theta did not converge")
    return total


def _level_value(params: EllipticParams, level: str) -> float:
    if level == PLAIN:
        return params.r
    if level == PRIME:
        return params.r - 1.0
    if level == ONE:
        return 1.0
    raise ValueError(f"unknown level {level!r}")


def bracket(v, params: EllipticParams, family: str = SQUARE, level: str = PLAIN,
            policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Elliptic bracket of one of the four families at the given level."""
    rho = _level_value(params, level)
    v = complex(v)
    q = params.x ** (2.0 * rho)
    z = params.z_of(v)
    if family == SQUARE:
        return params.xp(v * v / rho - v) * theta_big(z, q, policy)
    if family == BRACE:
        return params.xp(v * v / rho - v) * theta_big(-z, q, policy)
    if family == DBL_SQUARE:
        return params.xp(v * v / rho) * theta_big(z * params.xp(rho), q, policy)
    if family == DBL_BRACE:
        return params.xp(v * v / rho) * theta_big(-z * params.xp(rho), q, policy)
    raise ValueError(f"unknown family {family!r}")


def x_number(a, x) -> complex:
    """q-integer [a]_x = (x^a - x^{-a}) / (x - x^{-1})."""
    if a == 0:
        return 0.0 + 0j
    xa = cmath.exp(complex(a) * math.log(x))
    return (xa - 1.0 / xa) / (x - 1.0 / x)


def bracket_factorial(m: int, params: EllipticParams,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """[m]'! = prod_{p=1}^{m} [p]' (primed square brackets at integers)."""
    if m < 0:
        raise ValueError("bracket_factorial needs m >= 0")
    out = 1.0 + 0j
    for p in range(1, m + 1):
        out *= bracket(p, params, SQUARE, PRIME, policy)
    return out
