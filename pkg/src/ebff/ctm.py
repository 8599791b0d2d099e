"""Corner-transfer-matrix Hamiltonians in path and Fock presentations.

Path side: states are half-infinite index sequences frozen to the
descending ground pattern mu_j = i+1-j (mod n) beyond a finite window.
The corner Hamiltonian weights a local defect at slot j linearly in j,
so only finitely many paths carry weight above any tolerance and the
partition sum is a rapidly convergent q-series.

Fock side: the boson Hamiltonian is quadratic mode by mode, so the
graded trace is a product of per-mode determinants of the quadratic
form against the commutator Gram matrix.  The table carries n symbols
for n - 1 independent oscillator families; each mode matrix has exactly
one null direction, which is dropped from the determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (BadCommutators, CombinatorialBlowup, NotAdmissible,
                     RangeError, TailMismatch)
from .freefield import BosonSpec, betas
from .heights import HeightState, eps_inner, ground_tail_height
from .params import EllipticParams
from .qseries import PLAIN, PRIME, SQUARE, bracket, poch


# ---------------------------------------------------------------------------
# local energy functions

def H_v(mu: int, nu: int, n: int) -> int:
    """Energy of the adjacent index pair (mu, nu); zero on descending pairs."""
    if not (0 <= mu < n and 0 <= nu < n):
        raise RangeError(f"indices must lie in 0..{n - 1}, got ({mu}, {nu})")
    if nu < mu:
        return mu - nu - 1
    return n - 1 + mu - nu


def H_f(a_pp: HeightState, a_p: HeightState, a: HeightState) -> int:
    """Face energy of the height triple (a'', a', a), reduced to H_v.

    a' must be a + eps-bar_mu and a'' must be a' + eps-bar_nu for some
    directions mu, nu; the value is H_v(nu, mu).
    """
    mu = a_p.step_from(a)
    nu = a_pp.step_from(a_p)
    if mu is None or nu is None:
        raise NotAdmissible(f"triple {a_pp.offsets} {a_p.offsets} {a.offsets}")
    return H_v(nu, mu, a.n)


# ---------------------------------------------------------------------------
# path states

@dataclass(frozen=True)
class VertexPath:
    """Indices mu_1..mu_J stored explicitly, mu_j = i+1-j (mod n) beyond."""

    n: int
    sector: int
    entries: tuple = ()

    def tail(self, j: int) -> int:
        return (self.sector + 1 - j) % self.n

    def mu(self, j: int) -> int:
        if j < 1:
            raise RangeError("path slots are numbered from 1")
        if j <= len(self.entries):
            return self.entries[j - 1]
        return self.tail(j)


def H_ctm_vertex(path: VertexPath, J: int) -> Fraction:
    """(1/n) sum_{j<=J} j H_v(mu_j, mu_{j+1}); the tail adds nothing."""
    for j in range(J + 1, len(path.entries) + 1):
        if path.entries[j - 1] != path.tail(j):
            raise TailMismatch(f"slot {j} still differs from the tail")
    total = 0
    for j in range(1, J + 1):
        total += j * H_v(path.mu(j), path.mu(j + 1), path.n)
    return Fraction(total, path.n)


@dataclass(frozen=True)
class FacePath:
    """Heights a_0..a_J stored explicitly, a_j = xi + omega_{i+1-j} beyond."""

    xi: HeightState
    sector: int
    heights: tuple = ()

    def __post_init__(self):
        for lower, upper in zip(self.heights[1:], self.heights):
            if upper.step_from(lower) is None:
                raise NotAdmissible(
                    f"consecutive heights {upper.offsets} / {lower.offsets}")

    def tail(self, j: int) -> HeightState:
        return ground_tail_height(self.xi, self.sector, j)

    def height(self, j: int) -> HeightState:
        if j < 0:
            raise RangeError("path heights are numbered from 0")
        if j < len(self.heights):
            return self.heights[j]
        return self.tail(j)


def H_ctm_face(path: FacePath, J: int) -> Fraction:
    """(1/n) sum_{j<=J} j H_f(a_{j-1}, a_j, a_{j+1})."""
    for j in range(J + 1, len(path.heights)):
        if path.heights[j].offsets != path.tail(j).offsets:
            raise TailMismatch(f"height {j} still differs from the tail")
    n = path.xi.n
    total = 0
    for j in range(1, J + 1):
        total += j * H_f(path.height(j - 1), path.height(j), path.height(j + 1))
    return Fraction(total, n)


# ---------------------------------------------------------------------------
# partition function / character by pruned path enumeration

def chi_partition(i: int, J: int, params: EllipticParams, *,
                  tol: float = 1e-12, budget: int = 2_000_000) -> float:
    """Sum of x^{2n H_CTM} over sector-i paths free in the first J slots.

    Enumerates from the frozen tail inward; the running energy
    sum_j j H_v is integer-valued and non-decreasing as defects are
    added, so branches above the energy ceiling -log(tol)/(2 eps) are
    pruned.  Raises CombinatorialBlowup when the node budget is spent.
    """
    n = params.n
    e_max = -math.log(tol) / (2.0 * params.eps)
    x2 = params.x ** 2
    visited = 0

    def descend(j: int, mu_next: int, energy: int) -> float:
        nonlocal visited
        if j == 0:
            return x2 ** energy
        total = 0.0
        for mu in range(n):
            visited += 1
            if visited > budget:
                raise CombinatorialBlowup(
                    f"more than {budget} path nodes at tol={tol}")
            e = energy + j * H_v(mu, mu_next, n)
            if e <= e_max:
                total += descend(j - 1, mu, e)
        return total

    tail_after = (i - J) % n     # mu_{J+1}
    return descend(J, tail_after, 0)


# ---------------------------------------------------------------------------
# Fock-space side

def G_a(a: HeightState, params: EllipticParams) -> float:
    """prod_{mu<nu} [a_{mu nu}] at level r."""
    out = 1.0
    for mu in range(a.n):
        for nu in range(mu + 1, a.n):
            out *= bracket(a.a(mu, nu), params, SQUARE, PLAIN).real
    return out


def G_prime_xi(xi: HeightState, params: EllipticParams) -> float:
    """prod_{mu<nu} [xi_{mu nu}]' at level r-1."""
    out = 1.0
    for mu in range(xi.n):
        for nu in range(mu + 1, xi.n):
            out *= bracket(xi.a(mu, nu), params, SQUARE, PRIME).real
    return out


def mode_matrix(m: int, spec: BosonSpec, params: EllipticParams) -> np.ndarray:
    """Quadratic-form matrix of the mode-m corner Hamiltonian term.

    The coefficient of B^k_{-m} B^j_m, including the A-family rescale
    [rm]/[(r-1)m]; column index j runs to n because the j = n-1 group
    ends with -B^n_m.
    """
    n, x = params.n, params.x
    g = spec.a_scale(m, params)
    A = np.zeros((n, n), dtype=complex)
    for j in range(1, n):
        for k in range(1, j + 1):
            w = g * x ** ((2 * k - 2 * j - 1) * m)
            A[k - 1, j - 1] += w
            A[k - 1, j] -= w
    return A


def mode_eigenvalues(m: int, spec: BosonSpec, params: EllipticParams,
                     *, null_tol: float = 1e-8) -> np.ndarray:
    """Nonzero eigenvalues of the mode-m matrix against the Gram matrix.

    Exactly one null direction per mode is expected (the symbol overcount);
    anything else means the loaded commutator table cannot represent the
    corner Hamiltonian and raises BadCommutators.
    """
    lam = np.linalg.eigvals(mode_matrix(m, spec, params)
                            @ spec.gram(m, params))
    order = np.argsort(np.abs(lam))
    null, rest = lam[order[:1]], lam[order[1:]]
    if abs(null[0]) > null_tol * max(1.0, np.abs(lam).max()):
        raise BadCommutators(f"mode {m}: no null direction, eigs {lam}")
    if np.any(rest.real <= 0.0) or np.any(np.abs(rest.imag) >
                                          null_tol * np.abs(rest.real)):
        raise BadCommutators(f"mode {m}: non-positive spectrum {lam}")
    return rest.real


def zero_mode_norm(l: HeightState, k: HeightState,
                   params: EllipticParams) -> float:
    """|beta_1 k + beta_2 l|^2 in the projected weight inner product."""
    b1, b2, _ = betas(params)
    lam = [b1 * k.abar(mu) + b2 * l.abar(mu) for mu in range(params.n)]
    return eps_inner(lam, lam)


def fock_trace(l: HeightState, k: HeightState, spec: BosonSpec,
               params: EllipticParams, M: Optional[int] = None, *,
               tol: float = 1e-14) -> float:
    """Graded trace of x^{2n H_F} over the weight-(l, k) Fock space.

    Oscillator part: product over modes m <= M of
    det'(1 - x^{2n Lambda_m})^{-1} restricted to the non-null spectrum;
    zero-mode part x^{n |beta_1 k + beta_2 l|^2}.  The overall scalar
    G_a is not included (the trace is linear in it).
    """
    n, x = params.n, params.x
    if M is None:
        M = max(1, math.ceil(-math.log(tol) / (2 * n * params.eps)))
    osc = 1.0
    for m in range(1, M + 1):
        for lam in mode_eigenvalues(m, spec, params):
            factor = 1.0 - x ** (2 * n * lam)
            if factor <= 0.0:
                raise BadCommutators(f"mode {m}: eigenvalue {lam} gives a "
                                     "nonpositive determinant factor")
            osc /= factor
    return x ** (n * zero_mode_norm(l, k, params)) * osc


def fock_trace_closed_form(l: HeightState, k: HeightState,
                           params: EllipticParams) -> float:
    """x^{n |beta_1 k + beta_2 l|^2} / (x^{2n}; x^{2n})_infty^{n-1}."""
    n, x = params.n, params.x
    q = x ** (2 * n)
    return (x ** (n * zero_mode_norm(l, k, params))
            / poch(q, (q,)).real ** (n - 1))
