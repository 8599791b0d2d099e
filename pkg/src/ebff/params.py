"""Global model parameters and truncation policy.

Everywhere in the package x is the elliptic nome base, 0 < x < 1, with
eps = -ln x, r > 1 the restriction level and n >= 2 the rank.  Additive
spectral variables v are mapped to multiplicative ones by z = x^{2v};
complex powers of z and -z are always taken in the v-parametrized form

    z^alpha     := exp(2 alpha v ln x)
    (-z)^alpha  := exp(alpha (2 v ln x + i pi))
    (-1)^r      := exp(i pi r)

which are entire in v (no cut in the z-plane is ever crossed implicitly).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NegativeInput


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for infinite products and bilateral sums.

    tail_tol: a factor 1 - A is dropped once |A| < tail_tol; a sum stops
    when the next term is below tail_tol relative to the running partial.
    max_terms: hard budget on enumerated factors/terms before Overflow.
    """

    tail_tol: float = 1e-16
    max_terms: int = 4096


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class EllipticParams:
    """Bundle (n, r, x) with derived quantities."""

    n: int
    r: float
    x: float

    def __post_init__(self):
        if self.n < 2:
            raise NegativeInput(f"need n >= 2, got {self.n}")
        if not (self.r > 1.0):
            raise NegativeInput(f"need r > 1, got {self.r}")
        if not (0.0 < self.x < 1.0):
            raise NegativeInput(f"need 0 < x < 1, got {self.x}")

    @property
    def eps(self) -> float:
        return -math.log(self.x)

    def xp(self, e) -> complex:
        """x^e for complex exponent e, as an entire function of e."""
        return cmath.exp(complex(e) * math.log(self.x))

    def z_of(self, v) -> complex:
        """z = x^{2v}."""
        return self.xp(2.0 * complex(v))

    def zpow(self, v, alpha) -> complex:
        """z^alpha = x^{2 alpha v} in the fixed entire branch."""
        return self.xp(2.0 * complex(alpha) * complex(v))

    def neg_zpow(self, v, alpha) -> complex:
        """(-z)^alpha = e^{i pi alpha} x^{2 alpha v}."""
        a = complex(alpha)
        return cmath.exp(1j * math.pi * a) * self.xp(2.0 * a * complex(v))
