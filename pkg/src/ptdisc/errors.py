"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates an operation's contract.

    Raised for out-of-range angles, non-finite values, zero vectors,
    coincident states, malformed documents and similar caller mistakes.
    """


class InfeasibleError(ValueError):
    """The orthogonalizing-evolution equation has no solution here.

    The evolution time is defined through sin^2(omega*tau) = RHS; when the
    requested parameters push RHS outside [0, 1] there is no evolution time,
    which signals a bad alpha choice rather than a bug.  ``rhs`` carries the
    offending value (None when a whole range is empty).
    """

    def __init__(self, message, rhs=None):
        super().__init__(message)
        self.rhs = rhs
