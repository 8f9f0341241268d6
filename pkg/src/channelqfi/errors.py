"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class InvalidStateError(DomainError):
    """A covariance matrix violates symmetry or the uncertainty principle."""


class SingularParameterError(DomainError):
    """The quantity is singular at the requested parameters.

    ``limit`` names the offending limit, e.g. ``"z=0: identity channel"``.
    """

    def __init__(self, limit, detail=""):
        self.limit = limit
        msg = limit if not detail else f"{limit} ({detail})"
        super().__init__(msg)


class SingularDError(SingularParameterError):
    """The output state is (numerically) pure and the SLD equation is singular."""
