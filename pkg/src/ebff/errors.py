"""Exception types shared across the package."""


class EbffError(Exception):
    """Base class for all package errors."""


class NomeOutOfRange(EbffError):
    """A nome has modulus >= 1 (infinite product would diverge)."""


class Overflow(EbffError):
    """Truncated enumeration exceeded the term budget."""


class ZeroArgument(EbffError):
    """Argument is zero where a Laurent/fractional power is required."""


class BadModulus(EbffError):
    """Jacobi theta modulus tau has Im(tau) <= 0."""


class NegativeInput(EbffError):
    """Parameter outside its admissible real range."""


class PoleHit(EbffError):
    """A denominator factor vanished at the requested point.

    Carries the name of the vanishing factor so callers can report which
    bracket or product pinched instead of propagating an IEEE inf.
    """

    def __init__(self, factor: str, value=None):
        self.factor = factor
        self.value = value
        super().__init__(f"denominator factor {factor} vanished"
                         + (f" (|{abs(value):.3e}|)" if value is not None else ""))


class SingularHeight(EbffError):
    """Intertwiner matrix is numerically singular at this (v, height)."""


class RangeError(EbffError):
    """Discrete index outside 0..n-1."""


class NotAdmissible(EbffError):
    """Height triple or path step is not a single epsilon-bar increment."""


class TailMismatch(EbffError):
    """Face paths still differ from their ground-state tails beyond the cutoff."""


class BadCommutators(EbffError):
    """Mode matrix spectrum inconsistent with a convergent graded trace."""


class CombinatorialBlowup(EbffError):
    """Path enumeration exceeded its budget even after energy pruning."""


class AnnulusEmpty(EbffError):
    """The contour annulus x^3|z_j| < |w| < x|z_j| has no interior."""


class ContourOnPole(EbffError):
    """Quadrature nodes keep hitting kernel poles after a radius retry."""


class SpecMissing(EbffError):
    """No boson commutator table has been loaded."""


class UnregisteredPair(EbffError):
    """Requested operator product has no registered kernel formula."""
