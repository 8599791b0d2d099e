"""Height-lattice bookkeeping for the face model.

A height a is stored through integer coordinates m_mu in the epsilon-bar
basis; the shifted values abar_mu = <a + rho, eps_mu> = m_mu + rhobar_mu
with rhobar_mu = (n - 1 - mu) - (n - 1)/2 are what enter the weights, and
only differences a_{mu nu} = abar_mu - abar_nu are ever consumed, so the
common-shift gauge is immaterial.
"""

from __future__ import annotations

from dataclasses import dataclass


def rhobar(mu: int, n: int) -> float:
    """<rho, eps_mu> for rho = sum of the fundamental weights."""
    return (n - 1 - mu) - (n - 1) / 2.0


def omega_offsets(mu: int, n: int) -> tuple:
    """Integer epsilon-bar coordinates of the fundamental weight omega_mu."""
    return tuple(1 if nu < mu else 0 for nu in range(n))


@dataclass(frozen=True)
class HeightState:
    offsets: tuple

    @property
    def n(self) -> int:
        return len(self.offsets)

    def abar(self, mu: int) -> float:
        return self.offsets[mu] + rhobar(mu, self.n)

    def a(self, mu: int, nu: int) -> float:
        """a_{mu nu} = abar_mu - abar_nu; integer for integer offsets."""
        return self.abar(mu) - self.abar(nu)

    def step_up(self, mu: int) -> "HeightState":
        """a + epsilon-bar_mu."""
        off = list(self.offsets)
        off[mu] += 1
        return HeightState(tuple(off))

    def step_down(self, mu: int) -> "HeightState":
        """a - epsilon-bar_mu."""
        off = list(self.offsets)
        off[mu] -= 1
        return HeightState(tuple(off))

    def shift(self, other_offsets) -> "HeightState":
        return HeightState(tuple(a + b for a, b in
                                 zip(self.offsets, other_offsets)))

    def step_from(self, lower: "HeightState"):
        """The mu with self = lower + eps-bar_mu, or None."""
        diff = [a - b for a, b in zip(self.offsets, lower.offsets)]
        if sorted(diff) != [0] * (self.n - 1) + [1]:
            return None
        return diff.index(1)


def eps_inner(xbar, ybar) -> float:
    """Projected inner product sum x_mu y_mu - (sum x)(sum y)/n."""
    n = len(xbar)
    sx = sum(xbar)
    sy = sum(ybar)
    return sum(a * b for a, b in zip(xbar, ybar)) - sx * sy / n


def ground_tail_height(xi: HeightState, i: int, j: int) -> HeightState:
    """a_j = xi + omega_{(i+1-j) mod n}, lifted to the offset lattice.

    The weight index only makes sense modulo n up to the all-ones vector
    (omega_n = omega_0 + (1,..,1) in offsets); the floor-division lift
    keeps consecutive heights one epsilon-bar step apart across wraps.
    """
    n = xi.n
    m = i + 1 - j
    lift = m // n
    base = omega_offsets(m % n, n)
    return xi.shift(tuple(b + lift for b in base))


def ground_path(xi: HeightState, i: int, length: int) -> list:
    """Heights a_j of the frozen configuration, j = 0..length."""
    return [ground_tail_height(xi, i, j) for j in range(length + 1)]
