"""Formal-series engine for vertex-operator contractions.

Basic operators are indexed by a root/weight label and carry three pieces:
a zero-mode pair (iQ_lambda, P_lambda log base) with base in {z, -z, (-1)^r z},
an oscillator exponent sum_{m != 0} c_k(m) B^k_m z^{-m}, and an overall power
prefactor.  Products A(v)B(v') are then controlled by

    A(v)B(v') = base_A^{s_A s_B <lam_A, lam_B>} exp(sum_m kappa_m w^m) :A B:,

with w = z'/z and kappa_m assembled from the mode coefficients and the boson
commutator table [B^j_m, B^k_{-m}].  The table is configuration data
(BosonSpec); it is certified by reproducing every registered product kernel
and the Fock-trace closed forms, not trusted a priori.
"""

from __future__ import annotations

import ast
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import SpecMissing, UnregisteredPair
from .params import DEFAULT_POLICY, EllipticParams, TruncationPolicy
from .qseries import PLAIN, PRIME, SQUARE, bracket, poch, x_number


class LaurentSeries:
    """Power series in w with complex coefficients, truncated at order N."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "LaurentSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = 1.0
        return cls(c)

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return LaurentSeries(self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0] += other
        return LaurentSeries(c)

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return LaurentSeries(self.coeffs - other.coeffs)
        c = self.coeffs.copy()
        c[0] -= other
        return LaurentSeries(c)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            full = np.convolve(self.coeffs, other.coeffs)
            return LaurentSeries(full[:len(self.coeffs)])
        return LaurentSeries(self.coeffs * other)

    __rmul__ = __mul__

    def exp(self) -> "LaurentSeries":
        a = self.coeffs
        n = len(a)
        b = np.zeros(n, dtype=complex)
        b[0] = cmath.exp(a[0])
        for k in range(1, n):
            b[k] = sum(j * a[j] * b[k - j] for j in range(1, k + 1)) / k
        return LaurentSeries(b)

    def log(self) -> "LaurentSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ValueError("log needs a nonzero constant term")
        n = len(a)
        b = np.zeros(n, dtype=complex)
        b[0] = cmath.log(a[0])
        for k in range(1, n):
            s = sum(j * b[j] * a[k - j] for j in range(1, k))
            b[k] = (k * a[k] - s) / (k * a[0])
        return LaurentSeries(b)

    def eval_at(self, w) -> complex:
        return complex(np.polyval(self.coeffs[::-1], w))


def poch_ratio_log(num: Sequence[complex], den: Sequence[complex],
                   nomes: Sequence[float], order: int) -> np.ndarray:
    """Log-series of prod (a w; nomes)_oo over num / same over den.

    log (a w; q_1..q_s)_oo = -sum_m a^m w^m / (m prod_s (1 - q_s^m));
    an empty nome tuple covers plain linear factors (1 - a w).
    """
    kap = np.zeros(order + 1, dtype=complex)
    for m in range(1, order + 1):
        d = 1.0
        for q in nomes:
            d *= 1.0 - q ** m
        s = sum(a ** m for a in den) - sum(a ** m for a in num)
        kap[m] = s / (m * d)
    return kap


def poch_ratio_series(num: Sequence[complex], den: Sequence[complex],
                      nomes: Sequence[float], order: int) -> LaurentSeries:
    return LaurentSeries(poch_ratio_log(num, den, nomes, order)).exp()


def one_minus_w(order: int) -> LaurentSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    if order >= 1:
        c[1] = -1.0
    return LaurentSeries(c)


# ---------------------------------------------------------------------------
# boson commutator table

_DIAG = ("m * x_number((r-1)*m) / x_number(r*m)"
         " * (x^m - x^((2*n-1)*m)) / (1 - x^(2*n*m))")
_UPPER = ("m * x_number((r-1)*m) / x_number(r*m)"
          " * (x^m - x^(-m)) / (1 - x^(2*n*m))")
_LOWER = ("m * x_number((r-1)*m) / x_number(r*m)"
          " * x^(2*n*m) * (x^m - x^(-m)) / (1 - x^(2*n*m))")

_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant,
                  ast.Name, ast.Call, ast.Add, ast.Sub, ast.Mult, ast.Div,
                  ast.Pow, ast.USub, ast.UAdd, ast.Load)


@lru_cache(maxsize=256)
def _compile_formula(expr: str):
    tree = ast.parse(expr.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError(f"disallowed syntax in formula: {ast.dump(node)}")
        if isinstance(node, ast.Name) and node.id not in ("m", "x", "r", "n", "x_number"):
            raise ValueError(f"unknown symbol {node.id!r} in formula")
        if isinstance(node, ast.Call) and (
                not isinstance(node.func, ast.Name) or node.func.id != "x_number"):
            raise ValueError("only x_number(...) calls are allowed")
    return compile(tree, "<boson-spec>", "eval")


def eval_formula(expr: str, m: int, x: float, r: float, n: int) -> complex:
    """Evaluate a commutator formula in the variables m, x, r, n."""
    code = _compile_formula(expr)
    env = {"m": m, "x": x, "r": r, "n": n,
           "x_number": lambda a: x_number(a, x), "__builtins__": {}}
    return complex(eval(code, env))


@dataclass(frozen=True)
class BosonSpec:
    """Commutator table [B^j_m, B^k_{-m}] for m > 0, j,k = 1..n, as formulas."""

    n: int
    rows: tuple

    @classmethod
    def default(cls, n: int) -> "BosonSpec":
        rows = []
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                f = _DIAG if j == k else (_UPPER if j < k else _LOWER)
                rows.append((j, k, f))
        return cls(n=n, rows=tuple(rows))

    def to_text(self) -> str:
        lines = ["# commutator table [B^j_m, B^k_{-m}] for m > 0",
                 f"# n = {self.n}; columns: j k formula(m, x, r, n)"]
        for j, k, f in self.rows:
            lines.append(f"{j} {k} {f}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> "BosonSpec":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            j_s, k_s, f = line.split(None, 2)
            _compile_formula(f)
            rows.append((int(j_s), int(k_s), f))
        if {(j, k) for j, k, _ in rows} != {(j, k) for j in range(1, n + 1)
                                            for k in range(1, n + 1)}:
            raise SpecMissing(f"table does not cover all pairs for n={n}")
        return cls(n=n, rows=tuple(rows))

    @classmethod
    def load(cls, n: int, path: Optional[str] = None) -> "BosonSpec":
        if path is None:
            ref = resources.files("ebff").joinpath(f"data/bosons_n{n}.txt")
            try:
                text = ref.read_text()
            except FileNotFoundError:
                raise SpecMissing(f"no shipped table for n={n}; pass a path")
        else:
            with open(path) as fh:
                text = fh.read()
        return cls.from_text(text, n)

    def commutator(self, j: int, k: int, m: int, params: EllipticParams) -> complex:
        if m == 0:
            return 0.0 + 0j
        if m < 0:
            return -self.commutator(k, j, -m, params)
        for jj, kk, f in self.rows:
            if jj == j and kk == k:
                return eval_formula(f, m, params.x, params.r, self.n)
        raise SpecMissing(f"no table entry for pair ({j}, {k})")

    def gram(self, m: int, params: EllipticParams) -> np.ndarray:
        n = self.n
        g = np.zeros((n, n), dtype=complex)
        for j, k, f in self.rows:
            g[j - 1, k - 1] = eval_formula(f, m, params.x, params.r, self.n)
        return g

    # rescaling maps for the two derived boson families
    def a_scale(self, m: int, params: EllipticParams) -> complex:
        """A^j_m = ([rm]_x/[(r-1)m]_x) B^j_m."""
        x, r = params.x, params.r
        return x_number(r * m, x) / x_number((r - 1.0) * m, x)

    def o_scale(self, m: int, params: EllipticParams) -> complex:
        """O^j_m = ([m]_x/[(r-1)m]_x) B^j_m."""
        x, r = params.x, params.r
        return x_number(m, x) / x_number((r - 1.0) * m, x)


# ---------------------------------------------------------------------------
# operator symbols and their mode/zero-mode content

U_ALPHA = "U-alpha"
U_OMEGA = "U-omega"
V_ALPHA = "V-alpha"
V_OMEGA = "V-omega"
W_ALPHA = "W-alpha"
IDENTITY = "id"

BASE_Z = "z"
BASE_NEG_Z = "-z"
BASE_SIGNR_Z = "(-1)^r z"


@dataclass(frozen=True)
class VertexOpSymbol:
    kind: str
    j: int = 0

    def __post_init__(self):
        if self.kind != IDENTITY and self.j < 1:
            raise ValueError("index j must be >= 1")


def betas(params: EllipticParams):
    r = params.r
    b1 = -math.sqrt((r - 1.0) / r)
    b2 = math.sqrt(r / (r - 1.0))
    return b1, b2, b1 + b2


def _zero_mode(sym: VertexOpSymbol, params: EllipticParams):
    """(weight type, index, coupling s, power base) of the zero-mode pair."""
    b1, b2, b0 = betas(params)
    table = {
        U_ALPHA: ("alpha", -b1, BASE_Z),
        U_OMEGA: ("omega", b1, BASE_Z),
        V_ALPHA: ("alpha", -b2, BASE_NEG_Z),
        V_OMEGA: ("omega", b2, BASE_NEG_Z),
        W_ALPHA: ("alpha", -b0, BASE_SIGNR_Z),
    }
    if sym.kind == IDENTITY:
        return ("none", 0.0, BASE_Z)
    kind, s, base = table[sym.kind]
    return (kind, s, base)


def weight_inner(t1: str, j1: int, t2: str, j2: int, n: int) -> float:
    """Inner products among simple roots alpha_j and fundamental weights omega_j."""
    if "none" in (t1, t2):
        return 0.0
    if t1 == "alpha" and t2 == "alpha":
        if j1 == j2:
            return 2.0
        return -1.0 if abs(j1 - j2) == 1 else 0.0
    if t1 == "omega" and t2 == "omega":
        a, b = min(j1, j2), max(j1, j2)
        return a * (n - b) / n
    ja = j1 if t1 == "alpha" else j2
    jw = j2 if t1 == "alpha" else j1
    return 1.0 if ja == jw else 0.0


def mode_coeff_vec(sym: VertexOpSymbol, m: int, params: EllipticParams) -> np.ndarray:
    """Coefficients of B^k_m (k = 1..n) in the exponent of sym, m != 0."""
    n, x = params.n, params.x
    out = np.zeros(n, dtype=complex)
    if sym.kind == IDENTITY:
        return out
    j = sym.j
    if sym.kind in (U_ALPHA, V_ALPHA, W_ALPHA):
        if j > n - 1:
            raise ValueError("index j must be <= n-1")
        scale = {U_ALPHA: 1.0,
                 V_ALPHA: -x_number(params.r * m, x) / x_number((params.r - 1.0) * m, x),
                 W_ALPHA: -x_number(m, x) / x_number((params.r - 1.0) * m, x)}[sym.kind]
        out[j - 1] = scale * x ** (-j * m) / m
        out[j] = -scale * x ** (-j * m) / m
        return out
    sgn = 1.0 if sym.kind == V_OMEGA else -1.0
    scale = (x_number(params.r * m, x) / x_number((params.r - 1.0) * m, x)
             if sym.kind == V_OMEGA else 1.0)
    for k in range(1, j + 1):
        out[k - 1] = sgn * scale * x ** ((j - 2 * k + 1) * m) / m
    return out


@dataclass(frozen=True)
class Prefactor:
    """Symbolic (branch base, exponent) pair for the zero-mode power factor."""
    base: str
    exponent: float

    def value(self, v, params: EllipticParams) -> complex:
        e = self.exponent
        if self.base == BASE_Z:
            return params.zpow(v, e)
        if self.base == BASE_NEG_Z:
            return params.neg_zpow(v, e)
        if self.base == BASE_SIGNR_Z:
            return cmath.exp(e * (2.0 * complex(v) * math.log(params.x)
                                  + 1j * math.pi * params.r))
        raise ValueError(f"unknown base {self.base!r}")


def contraction_kappa(A: VertexOpSymbol, B: VertexOpSymbol, order: int,
                      spec: BosonSpec, params: EllipticParams) -> np.ndarray:
    """Log-level contraction coefficients kappa_m of A(v)B(v'), m = 0..order."""
    if spec is None:
        raise SpecMissing("no boson commutator table loaded")
    if spec.n != params.n:
        raise SpecMissing(f"table is for n={spec.n}, params have n={params.n}")
    kap = np.zeros(order + 1, dtype=complex)
    for m in range(1, order + 1):
        va = mode_coeff_vec(A, m, params)
        vb = mode_coeff_vec(B, -m, params)
        kap[m] = va @ spec.gram(m, params) @ vb
    return kap


def contraction_series(A: VertexOpSymbol, B: VertexOpSymbol, order: int,
                       spec: BosonSpec, params: EllipticParams):
    """Contraction kernel of A(v)B(v') as (series in w = z'/z, Prefactor)."""
    kap = contraction_kappa(A, B, order, spec, params)
    tA, sA, baseA = _zero_mode(A, params)
    tB, sB, _ = _zero_mode(B, params)
    expo = sA * sB * weight_inner(tA, A.j, tB, B.j, params.n)
    return LaurentSeries(kap).exp(), Prefactor(baseA, expo)


# ---------------------------------------------------------------------------
# registered product formulae

@dataclass(frozen=True)
class OpeCase:
    name: str
    first: VertexOpSymbol
    second: VertexOpSymbol
    kernel_log: Callable[[int, EllipticParams], np.ndarray]
    pref_base: str
    pref_exponent: float
    pref_sign: complex = 1.0

    def kernel(self, order: int, params: EllipticParams) -> LaurentSeries:
        return LaurentSeries(self.kernel_log(order, params)).exp()


def _gstar_kernel(j):
    def k(order, params):
        x, n, r = params.x, params.n, params.r
        return poch_ratio_log(
            [x ** (2 * n + 2 * r - j - 1), x ** (j - 1)],
            [x ** (2 * n - j - 1), x ** (2 * r + j - 1)],
            (x ** (2 * r - 2), x ** (2 * n)), order)
    return k


def _rho_kernel(j):
    def k(order, params):
        x, n = params.x, params.n
        return poch_ratio_log(
            [x ** (2 * j + 1), x ** (2 * n - 2 * j + 1)],
            [x, x ** (2 * n + 1)],
            (x ** 2, x ** (2 * n)), order)
    return k


def _va_mixed_kernel(order, params):
    x, r = params.x, params.r
    return poch_ratio_log([x ** (2 * r - 1)], [x ** (-1.0)],
                          (x ** (2 * r - 2),), order)


def _va_same_kernel(order, params):
    x, r = params.x, params.r
    return (poch_ratio_log([x ** (-2.0)], [x ** (2 * r)], (x ** (2 * r - 2),), order)
            + poch_ratio_log([1.0], [], (), order))


def _one_minus_w_kernel(order, params):
    return poch_ratio_log([1.0], [], (), order)


def _vu_same_kernel(order, params):
    x = params.x
    return poch_ratio_log([], [x, 1.0 / x], (), order)


def _wv_kernel(order, params):
    x, r = params.x, params.r
    return poch_ratio_log([x ** r], [x ** (r - 2.0)],
                          (x ** (2 * r - 2),), order)


def registry(n: int, r: float) -> list:
    """All registered operator-product kernels valid at rank n."""
    rr = r / (r - 1.0)
    cases = []
    for j in range(1, n):
        cases.append(
            OpeCase(f"Vw1.Vw{j}", VertexOpSymbol(V_OMEGA, 1), VertexOpSymbol(V_OMEGA, j),
                    _gstar_kernel(j), BASE_NEG_Z, rr * (n - j) / n))
        if j != 1:
            cases.append(
                OpeCase(f"Vw{j}.Vw1", VertexOpSymbol(V_OMEGA, j), VertexOpSymbol(V_OMEGA, 1),
                        _gstar_kernel(j), BASE_NEG_Z, rr * (n - j) / n))
        cases += [
            OpeCase(f"Vw{j}.Va{j}", VertexOpSymbol(V_OMEGA, j), VertexOpSymbol(V_ALPHA, j),
                    _va_mixed_kernel, BASE_NEG_Z, -rr),
            OpeCase(f"Va{j}.Vw{j}", VertexOpSymbol(V_ALPHA, j), VertexOpSymbol(V_OMEGA, j),
                    _va_mixed_kernel, BASE_NEG_Z, -rr),
            OpeCase(f"Va{j}.Va{j}", VertexOpSymbol(V_ALPHA, j), VertexOpSymbol(V_ALPHA, j),
                    _va_same_kernel, BASE_NEG_Z, 2.0 * rr),
            OpeCase(f"Vw{j}.Uw{j}", VertexOpSymbol(V_OMEGA, j), VertexOpSymbol(U_OMEGA, j),
                    _rho_kernel(j), BASE_NEG_Z, -j * (n - j) / n),
            OpeCase(f"Uw{j}.Vw{j}", VertexOpSymbol(U_OMEGA, j), VertexOpSymbol(V_OMEGA, j),
                    _rho_kernel(j), BASE_Z, -j * (n - j) / n),
            OpeCase(f"Vw{j}.Ua{j}", VertexOpSymbol(V_OMEGA, j), VertexOpSymbol(U_ALPHA, j),
                    _one_minus_w_kernel, BASE_NEG_Z, 1.0),
            OpeCase(f"Uw{j}.Va{j}", VertexOpSymbol(U_OMEGA, j), VertexOpSymbol(V_ALPHA, j),
                    _one_minus_w_kernel, BASE_Z, 1.0),
            OpeCase(f"Va{j}.Ua{j}", VertexOpSymbol(V_ALPHA, j), VertexOpSymbol(U_ALPHA, j),
                    _vu_same_kernel, BASE_NEG_Z, -2.0),
            OpeCase(f"Ua{j}.Va{j}", VertexOpSymbol(U_ALPHA, j), VertexOpSymbol(V_ALPHA, j),
                    _vu_same_kernel, BASE_Z, -2.0),
            OpeCase(f"Vw{j}.Wa{j}", VertexOpSymbol(V_OMEGA, j), VertexOpSymbol(W_ALPHA, j),
                    _wv_kernel, BASE_NEG_Z, -1.0 / (r - 1.0)),
            OpeCase(f"Wa{j}.Vw{j}", VertexOpSymbol(W_ALPHA, j), VertexOpSymbol(V_OMEGA, j),
                    _wv_kernel, BASE_NEG_Z, -1.0 / (r - 1.0), pref_sign=-1.0),
        ]
        for jp in (j - 1, j + 1):
            if 1 <= jp <= n - 1:
                cases += [
                    OpeCase(f"Va{j}.Va{jp}", VertexOpSymbol(V_ALPHA, j),
                            VertexOpSymbol(V_ALPHA, jp),
                            _va_mixed_kernel, BASE_NEG_Z, -rr),
                    OpeCase(f"Va{j}.Ua{jp}", VertexOpSymbol(V_ALPHA, j),
                            VertexOpSymbol(U_ALPHA, jp),
                            _one_minus_w_kernel, BASE_NEG_Z, 1.0),
                    OpeCase(f"Wa{j}.Va{jp}", VertexOpSymbol(W_ALPHA, j),
                            VertexOpSymbol(V_ALPHA, jp),
                            _wv_kernel, BASE_NEG_Z, -1.0 / (r - 1.0), pref_sign=-1.0),
                    OpeCase(f"Va{j}.Wa{jp}", VertexOpSymbol(V_ALPHA, j),
                            VertexOpSymbol(W_ALPHA, jp),
                            _wv_kernel, BASE_NEG_Z, -1.0 / (r - 1.0)),
                ]
    return cases


def ope_case(A: VertexOpSymbol, B: VertexOpSymbol, params: EllipticParams) -> OpeCase:
    for case in registry(params.n, params.r):
        if case.first == A and case.second == B:
            return case
    raise UnregisteredPair(f"no registered kernel for {A} {B}")


_PREF_TEST_VS = (0.37, 0.11 + 0.05j)


def ope_check(case: OpeCase, order: int, spec: BosonSpec,
              params: EllipticParams) -> float:
    """Max deviation between contraction and the registered product formula.

    Compared at the log level: kappa_m vs the kernel's exact log-series.
    The exponentiated forms are equal iff the logs are, and the log
    coefficients are free of the catastrophic cancellation that makes the
    exponentiated coefficients (which can pass through ~x^{-2m} intermediate
    scales) unrepresentable at the target tolerance.  Residuals are relative
    to max(1, |target|).
    """
    kap = contraction_kappa(case.first, case.second, order, spec, params)
    _, pref = contraction_series(case.first, case.second, 0, spec, params)
    kt = case.kernel_log(order, params)
    scale = np.maximum(1.0, np.abs(kt))
    res = float(np.max(np.abs(kap - kt) / scale))
    stated = Prefactor(case.pref_base, case.pref_exponent)
    for v in _PREF_TEST_VS:
        got = pref.value(v, params)
        want = case.pref_sign * stated.value(v, params)
        res = max(res, abs(got - want))
    return res


def ope_residuals(order: int, spec: BosonSpec, params: EllipticParams) -> dict:
    return {case.name: ope_check(case, order, spec, params)
            for case in registry(params.n, params.r)}


def delta_commutator_check(j: int, order: int, spec: BosonSpec,
                           params: EllipticParams) -> float:
    """Formal-distribution commutator of the conjugate root-type pair.

    The two orderings expand the same rational kernel in w and in 1/w; their
    difference, weighted by the z^{-2} prefactors written as w^{+-1}/(z z'),
    must telescope to sum_{s>=1} [s]_x (w^s - w^{-s}), the two delta terms.
    """
    x = params.x
    A = VertexOpSymbol(V_ALPHA, j)
    B = VertexOpSymbol(U_ALPHA, j)
    k_vu, pref_vu = contraction_series(A, B, order, spec, params)
    k_uv, pref_uv = contraction_series(B, A, order, spec, params)
    res = 0.0
    # both orderings expand the same kernel: coefficient of w^k is [k+1]_x;
    # the difference then telescopes to [s]_x (w^s - w^{-s}) after weighting
    # z^{-2} and z'^{-2} as w^{+1}/(zz') and w^{-1}/(zz').  Deviations are
    # normalized by the target size ([k]_x grows like x^{-k}).
    for k in range(order + 1):
        t = x_number(k + 1, x)
        sc = max(1.0, abs(t))
        res = max(res, abs(k_vu.coeffs[k] - t) / sc, abs(k_uv.coeffs[k] - t) / sc)
    for v in _PREF_TEST_VS:
        res = max(res, abs(pref_vu.value(v, params) - params.zpow(v, -2.0)))
        res = max(res, abs(pref_uv.value(v, params) - params.zpow(v, -2.0)))
    return res


def nilpotency_check(params: EllipticParams,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> dict:
    """Vanishing of the W-V product kernel at the shifted coincident points."""
    x, r = params.x, params.r

    def kernel_at(w):
        q = x ** (2 * r - 2)
        return poch(x ** r * w, (q,), policy) / poch(x ** (r - 2.0) * w, (q,), policy)

    # W(v + r/2) V(v): w = z'/z = x^{-r}; V(v) W(v - r/2): same w
    w_left = x ** (2 * 0.0) / x ** (2 * (0.0 + r / 2.0))
    w_right = x ** (2 * (0.0 - r / 2.0)) / x ** (2 * 0.0)
    return {
        "left_zero": abs(kernel_at(w_left)),
        "right_zero": abs(kernel_at(w_right)),
        "mirror_nonzero": abs(kernel_at(x ** r)),
        "generic_nonzero": abs(kernel_at(0.37)),
    }


# ---------------------------------------------------------------------------
# zero-mode scalars

def delta_u(n: int) -> float:
    """Spectral shift between the two tail intertwining relations."""
    return -(n - 1) / 2.0


@dataclass(frozen=True)
class ZeroModeState:
    """Weight-lattice scalars on a fixed Fock component.

    kbar/lbar hold the epsilon-components of the two weight labels; all
    consumers only use differences, so the gauge (overall shift) is free.
    """

    kbar: tuple
    lbar: tuple

    def K(self, mu: int, nu: int) -> float:
        return self.kbar[mu] - self.kbar[nu]

    def L(self, mu: int, nu: int) -> float:
        return self.lbar[mu] - self.lbar[nu]

    def pi(self, mu: int, nu: int, r: float) -> float:
        return r * self.L(mu, nu) - (r - 1.0) * self.K(mu, nu)

    def G_K(self, params: EllipticParams,
            policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
        out = 1.0 + 0j
        for mu in range(params.n):
            for nu in range(mu + 1, params.n):
                out *= bracket(self.K(mu, nu), params, SQUARE, PLAIN, policy)
        return out

    def G_L_prime(self, params: EllipticParams,
                  policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
        out = 1.0 + 0j
        for mu in range(params.n):
            for nu in range(mu + 1, params.n):
                out *= bracket(self.L(mu, nu), params, SQUARE, PRIME, policy)
        return out
