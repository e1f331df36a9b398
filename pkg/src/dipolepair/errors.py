"""Exception types shared across the package."""


class DipolePairError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DipolePairError, ValueError):
    """A parameter lies outside the physically supported domain."""


class DegenerateChannel(DomainError):
    """The antisymmetric channel is closed (gamma - gamma12 ~ 0).

    At vanishing separation the antisymmetric collective mode decouples from
    the field, so no finite-duration pulse can address it.
    """


class NumericalError(DipolePairError, RuntimeError):
    """A quadrature or ODE integration failed to reach its tolerance."""
