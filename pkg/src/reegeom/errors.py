"""Exception and warning types shared across the package."""


class ReegeomError(Exception):
    """Base class for all package-specific errors."""


class InvalidState(ReegeomError):
    """A matrix fails the density-matrix invariants (Hermiticity, trace, PSD).

    Carries the name of the first violated invariant and its magnitude.
    """

    def __init__(self, invariant, magnitude):
        self.invariant = invariant
        self.magnitude = magnitude
        super().__init__(f"invalid density matrix: {invariant} violated by {magnitude:.3e}")


class OutsideTetrahedron(ReegeomError):
    """A correlation vector lies outside the Bell-diagonal tetrahedron."""


class NoCrossing(ReegeomError):
    """A ray misses the separable-boundary surface."""


class NotEdgeState(ReegeomError):
    """The partial transpose does not have exactly one (near-)zero eigenvalue."""


class RankDeficient(ReegeomError):
    """An operation requiring a full-rank state received a rank-deficient one."""


class DegenerateZ(ReegeomError):
    """The X-shaped family parameters make the closed-form derivatives singular."""


class ParallelLines(ReegeomError):
    """Two one-parameter families never share a correlation vector."""


class LeftPhysicalRange(ReegeomError):
    """The one-parameter family left the PSD cone at the requested parameter.

    `max_x` is the largest admissible parameter found by bisection.
    """

    def __init__(self, x, max_x):
        self.x = x
        self.max_x = max_x
        super().__init__(f"family not PSD at x={x:.6g}; max admissible x ~ {max_x:.6g}")


class NotSolvableFamily(ReegeomError):
    """The state belongs to no family with a geometric closest-separable-state construction."""


class NotConverged(ReegeomError):
    """Numerical minimizer restarts disagree beyond tolerance."""


class DegenerateFrame(UserWarning):
    """Singular values of the correlation tensor coincide; the diagonal frame is not unique."""
